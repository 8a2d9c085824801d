#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "xbar/experiment.hpp"

namespace py = pybind11;
using namespace xbar;

namespace {

py::dict read_dict(const ReadReport& r) {
    py::dict d;
    d["n"] = r.n;
    d["lumped"] = r.lumped;
    d["sense_voltage_p"] = r.sense_voltage_p;
    d["sense_voltage_ap"] = r.sense_voltage_ap;
    d["margin"] = r.margin;
    d["v_mtj_selected"] = r.v_mtj_selected;
    d["retention_selected"] = r.retention_selected;
    d["retention_half_row"] = r.retention_half_row;
    d["retention_half_col"] = r.retention_half_col;
    d["retention_unselected"] = r.retention_unselected;
    d["i_h"] = r.i_h;
    d["i_rs"] = r.i_rs;
    d["i_rh"] = r.i_rh;
    d["max_kcl"] = r.max_kcl;
    return d;
}

py::dict write_dict(const WriteReport& r) {
    py::dict d;
    d["pattern"] = pattern_name(r.pattern);
    d["flip_time"] = py::make_tuple(r.flip_time[0], r.flip_time[1]);
    d["targets_flipped"] = r.targets_flipped;
    py::list half;
    for (const auto& h : r.half) {
        py::dict k;
        k["name"] = h.name;
        k["count"] = h.count;
        k["min_abs_mx"] = h.min_abs_mx;
        k["disturbed"] = h.disturbed;
        k["flip_time"] = h.flip_time;
        k["energy"] = h.energy;
        half.append(k);
    }
    d["half"] = half;
    d["half_selected_flip_time"] = r.half_selected_flip_time;
    d["min_reaccess_gap"] = r.min_reaccess_gap;
    d["energy_total"] = r.energy_total;
    d["energy_per_bit"] = r.energy_per_bit;
    d["disturb_unsafe"] = r.disturb_unsafe;
    d["success"] = r.success;
    return d;
}

py::dict energy_dict(const EnergyReport& e) {
    py::dict d;
    d["energy_per_bit"] = e.energy_per_bit;
    d["total"] = e.total;
    d["targets"] = e.targets;
    d["half_selected"] = e.half_selected;
    d["half_word_line"] = e.half_word_line;
    d["unselected"] = e.unselected;
    d["half_selected_avg"] = e.half_selected_avg;
    return d;
}

py::dict table_dict(const Table& t) {
    py::dict d;
    d["columns"] = t.columns;
    d["rows"] = t.rows;
    d["notes"] = t.notes;
    return d;
}

}  // namespace

PYBIND11_MODULE(_xbar, m) {
    m.doc() = "Crossbar read/write simulator";
    m.attr("__version__") = tool_version;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
    py::register_exception<CalibrationError>(m, "CalibrationError", PyExc_RuntimeError);

    py::class_<Config>(m, "Config")
        .def(py::init<>())
        .def_static("load", &load_config, py::arg("path"))
        .def_static("from_text", [](const std::string& text) {
            Config c;
            apply_config_text(c, text);
            return c;
        })
        .def("__getitem__", [](const Config& c, const std::string& k) { return get_config_value(c, k); })
        .def("__setitem__", [](Config& c, const std::string& k, const std::string& v) { set_config_value(c, k, v); })
        .def("__setitem__", [](Config& c, const std::string& k, double v) { set_config_value(c, k, v); })
        .def("number", [](const Config& c, const std::string& k) { return get_config_number(c, k); })
        .def("apply", [](Config& c, const std::string& text) { apply_config_text(c, text); })
        .def("dump", &dump_config)
        .def("validate", &Config::validate)
        .def("copy", [](const Config& c) { return Config(c); })
        .def_static("keys", [] {
            std::vector<std::string> out;
            for (const auto& k : config_keys()) out.push_back(k.key);
            return out;
        });

    m.def("diode_current", [](const Config& c, double v) { return diode_current(c.diode(), v); });
    m.def("threshold_voltage", [](const Config& c) {
        Thresholds t = threshold_voltage(c.stack);
        return py::make_tuple(t.pos, t.neg);
    });
    m.def("sense_margin", [](const Config& c, bool lumped) { return read_dict(sense_margin(c.read_config(), lumped)); },
          py::arg("config"), py::arg("lumped") = false);
    m.def("read_retention", [](const Config& c) { return read_dict(read_retention_report(c.read_config())); });
    m.def("max_supported_array", [](const Config& c, double target, double delta) {
        ArraySizing s = max_supported_array(target, delta, c.read_config(), c.n_cap);
        py::dict d;
        d["achievable"] = s.achievable;
        d["capped"] = s.capped;
        d["n_max"] = s.n_max;
        d["table"] = s.table;
        d["bits_check"] = s.bits_check;
        return d;
    });
    m.def("simulate_write", [](const Config& c) { return write_dict(simulate_write(c.pattern, c.write, c.write_env())); });
    m.def("write_energy", [](const Config& c) { return energy_dict(write_energy(c.pattern, c.write, c.write_env())); });
    m.def("calibrate", [](const Config& c) {
        Calibration cal = calibrate(c);
        Config out = c;
        cal.apply(out);
        return out;
    });
    m.def("figure_ids", &figure_ids);
    m.def("figure", [](const std::string& id, const Config& c, int jobs) { return table_dict(figure_table(id, c, jobs)); },
          py::arg("id"), py::arg("config") = Config{}, py::arg("jobs") = 1);
    m.def("run_spec", [](const std::string& text, const Config& c, int jobs) {
        return table_dict(run_experiment(parse_experiment_spec(text), c, jobs));
    }, py::arg("spec"), py::arg("config") = Config{}, py::arg("jobs") = 1);
    m.def("render_figure", [](const std::string& id, const Config& c, int jobs) {
        return render(figure_table(id, c, jobs), c, "figure " + id);
    }, py::arg("id"), py::arg("config") = Config{}, py::arg("jobs") = 1);
}
