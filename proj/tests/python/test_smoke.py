import pytest

import xbar


def test_config_keys_round_trip():
    c = xbar.Config()
    c["array.n"] = 12
    c["write.pattern"] = "01"
    assert c["array.n"] == "12"
    back = xbar.Config.from_text(c.dump())
    assert back.dump() == c.dump()
    assert "diode.area_cm2" in xbar.Config.keys()
    with pytest.raises(xbar.ConfigError):
        c["array.size"] = 3


def test_read_margin_matches_lumped():
    c = xbar.Config()
    c["array.n"] = 8
    full = xbar.sense_margin(c)
    lump = xbar.sense_margin(c, lumped=True)
    assert full["margin"] > 0
    assert abs(full["margin"] / lump["margin"] - 1) < 1e-3
    assert full["max_kcl"] < 1e-10


def test_diode_is_odd_sign():
    c = xbar.Config()
    assert xbar.diode_current(c, 2.0) > 0
    assert xbar.diode_current(c, -2.0) < 0
    pos, neg = xbar.threshold_voltage(c)
    assert pos > 0 > neg


def test_write_and_energy():
    c = xbar.Config()
    c["array.n"] = 4
    c["write.pattern"] = "11"
    r = xbar.simulate_write(c)
    assert r["success"]
    assert not any(h["disturbed"] for h in r["half"])
    assert xbar.write_energy(c)["energy_per_bit"] > 0


def test_figure_table_and_render():
    assert "fig8" in xbar.figure_ids()
    t = xbar.figure("fig7")
    assert t["columns"] == ["r_s_ohm", "margin_V"]
    rows = xbar.records(t)
    assert len(rows) > 3
    text = xbar.render_figure("fig7")
    assert text.startswith("# xbar ")
    assert text == xbar.render_figure("fig7", jobs=2)


def test_sweep_spec():
    t = xbar.run_spec("experiment = read-margin\naxis.array.n = 4:8:4\n")
    assert len(t["rows"]) == 2
    assert t["columns"][-1] == "error"
    with pytest.raises(xbar.ConfigError):
        xbar.run_spec("experiment = read-margin\naxis.array.n = 8:4:4\n")
