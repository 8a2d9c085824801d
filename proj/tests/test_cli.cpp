#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <sstream>

#include "xbar/experiment.hpp"

using namespace xbar;

namespace {

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("config round trip") {
    Config c;
    apply_config_text(c, "# comment\narray.n = 12\nmtj.r_p_ohm = 5000 # inline\nwrite.pattern = 01\n");
    CHECK(c.array.n == 12);
    CHECK(c.mtj.r_p == 5000);
    CHECK(c.pattern.pattern == Pattern::P01);
    CHECK(get_config_value(c, "array.n") == "12");
    CHECK(get_config_number(c, "mtj.r_p_ohm") == 5000);

    Config back;
    apply_config_text(back, dump_config(c));
    CHECK(dump_config(back) == dump_config(c));

    std::set<std::string> keys;
    for (const auto& k : config_keys()) {
        CHECK(keys.insert(k.key).second);
        CHECK(k.key.find('.') != std::string::npos);
    }
    CHECK(is_config_key("diode.area_cm2"));
    CHECK(!is_config_key("diode.area"));
}

TEST_CASE("config errors") {
    Config c;
    CHECK_THROWS_AS(apply_config_text(c, "array.size = 3\n"), ConfigError);
    CHECK_THROWS_AS(apply_config_text(c, "array.n = many\n"), ConfigError);
    CHECK_THROWS_AS(apply_config_text(c, "array.n 12\n"), ConfigError);
    CHECK_THROWS_AS(apply_config_text(c, "write.pattern = 21\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/xbar.cfg"), ConfigError);
    Config bad;
    bad.array.n = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("spec parsing") {
    ExperimentSpec s = parse_experiment_spec(
        "experiment = read-margin\naxis.array.n = 4:16:4\naxis.read.delta_v = 0:0.2:0.1\nset.read.v_read_v = 2.2\n"
        "out = margins.csv\n");
    CHECK(s.kind == ExperimentKind::ReadMargin);
    REQUIRE(s.axes.size() == 2);
    CHECK(s.axes[0].values() == std::vector<double>{4, 8, 12, 16});
    CHECK(s.axes[1].values().size() == 3);
    CHECK(s.overrides.size() == 1);
    CHECK(s.out == "margins.csv");

    CHECK_THROWS_AS(parse_experiment_spec("experiment = read-margin\naxis.array.n = 8:4:1\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_spec("experiment = read-margin\naxis.array.n = 4:8:0\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_spec("experiment = read-margin\naxis.array.size = 4:8:1\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_spec("experiment = read-margin\naxis.write.pattern = 1:2:1\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_spec("experiment = teleport\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_spec("axis.array.n = 4:8:4\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_spec("experiment = figure\nfigure = fig99\n"), ConfigError);
}

TEST_CASE("sweeps: record count, order, error cells, determinism") {
    ExperimentSpec s = parse_experiment_spec(
        "experiment = read-margin\naxis.array.n = 2:8:2\naxis.read.delta_v = 0:0.3:0.3\nread.n_bits = 4\n");
    Config c;
    Table a = run_experiment(s, c, 1);
    Table b = run_experiment(s, c, 3);
    CHECK(a.rows.size() == 8);
    CHECK(render_csv(a) == render_csv(b));
    CHECK(render(a, c, "t") == render(b, c, "t"));
    CHECK(a.columns.front() == "array.n");
    CHECK(a.columns.back() == "error");
    CHECK(a.rows[0][0] == "2");
    CHECK(a.rows[1][0] == "2");
    CHECK(a.rows[2][0] == "4");
    CHECK(a.rows[1][1] == "0.3");
    // N = 2 cannot host four read bits
    CHECK(!a.rows[0].back().empty());
    CHECK(a.rows[4].back().empty());
    for (const auto& r : a.rows) CHECK(r.size() == a.columns.size());
}

TEST_CASE("figures carry their schema and a provenance header") {
    Config c;
    for (const auto& id : figure_ids()) CHECK(!figure_columns(id).empty());
    CHECK(figure_columns("fig8") == "n,v_read_V,margin_V");
    CHECK(figure_columns("table1") == "pattern,energy_pJ_per_bit");
    CHECK_THROWS_AS(figure_columns("fig14"), ConfigError);

    Table t = figure_table("fig8", c);
    std::string text = render(t, c, "figure fig8");
    auto lines = csv_lines(text);
    REQUIRE(!lines.empty());
    CHECK(lines[0] == "n,v_read_V,margin_V");
    bool has50 = false, has100 = false, has300 = false;
    for (const auto& r : t.rows) {
        has50 = has50 || (r[0] == "50" && r[1] == "2.1");
        has100 = has100 || (r[0] == "100" && r[1] == "2.2");
        has300 = has300 || (r[0] == "300" && r[1] == "2.3");
    }
    CHECK(has50);
    CHECK(has100);
    CHECK(has300);
    CHECK(text.rfind("# xbar ", 0) == 0);
    CHECK(text.find("# config diode.area_cm2 = ") != std::string::npos);
    CHECK(text.find("# calibration: ") != std::string::npos);
    CHECK(render(figure_table("fig8", c, 2), c, "figure fig8") == text);
}

TEST_CASE("calibration with no anchors is the identity") {
    Config c;
    c.anchors.use_retention = c.anchors.use_dc_flip = c.anchors.use_pulse_01 = c.anchors.use_pulse_10 = false;
    Calibration cal = calibrate(c);
    CHECK(cal.ok);
    CHECK(cal.residuals.empty());
    CHECK(cal.area == c.stack.area);
    CHECK(cal.v_critical == c.mtj.v_critical);
    CHECK(cal.dynamic_time_const == c.mtj.dynamic_time_const);
    Config back;
    apply_config_text(back, cal.to_text());
    CHECK(back.stack.area == doctest::Approx(c.stack.area).epsilon(1e-11));
}

TEST_CASE("calibration reports violated anchors") {
    Config c;
    c.anchors.use_retention = c.anchors.use_pulse_01 = c.anchors.use_pulse_10 = false;
    c.anchors.use_dc_flip = true;
    c.anchors.dc_flip = 1e-14;  // out of reach of the time-constant search
    CHECK_THROWS_WITH_AS(calibrate(c), doctest::Contains("dc_flip_s"), CalibrationError);
}
