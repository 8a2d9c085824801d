#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "xbar/experiment.hpp"

namespace {

using namespace xbar;

struct Common {
    std::string config_path;
    std::string out;
    std::vector<std::string> sets;
    int jobs = 1;
    bool seedless = false;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config_path, "key = value configuration file");
    app->add_option("--out", c.out, "output path (default: stdout)");
    app->add_option("--set", c.sets, "override, key=value (repeatable)");
    app->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
    app->add_flag("--seedless", c.seedless, "accepted for compatibility; runs are deterministic");
}

Config resolve(const Common& o) {
    Config c = o.config_path.empty() ? Config{} : load_config(o.config_path);
    for (const auto& s : o.sets) apply_config_text(c, s, "--set");
    c.validate();
    return c;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << text;
}

int run_calibrate(const Common& o) {
    Config c = resolve(o);
    Calibration cal = calibrate(c);
    cal.apply(c);
    Table t;
    t.columns = {"anchor", "target", "achieved", "rel_error", "tolerance", "ok"};
    for (const auto& r : cal.residuals)
        t.rows.push_back({r.name, cell(r.target), cell(r.achieved), cell(r.rel_error), cell(r.tolerance), cell(r.ok)});
    if (!o.out.empty()) {
        emit(o.out, provenance_header(c, "calibration", {}) + cal.to_text());
        t.notes.push_back("constants written to " + o.out);
    }
    std::cout << render(t, c, "calibrate");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crossbar MTJ/selector-diode array simulator"};
    app.set_version_flag("--version", std::string(tool_version));
    app.require_subcommand(1);

    Common o;
    std::string spec_path, figure_id;

    auto* cal = app.add_subcommand("calibrate", "fit device constants to the anchors");
    add_common(cal, o);
    auto* run = app.add_subcommand("run", "run an experiment spec file");
    run->add_option("spec", spec_path, "spec file")->required();
    add_common(run, o);
    auto* fig = app.add_subcommand("figure", "emit the data behind one figure or table");
    fig->add_option("id", figure_id, "fig6..fig13, fig16..fig19, table1")->required();
    add_common(fig, o);

    const std::vector<std::pair<std::string, ExperimentKind>> singles = {
        {"read-margin", ExperimentKind::ReadMargin},     {"read-retention", ExperimentKind::ReadRetention},
        {"max-array", ExperimentKind::MaxArray},         {"write-sim", ExperimentKind::WriteSim},
        {"write-energy", ExperimentKind::WriteEnergy},   {"optimize-delta", ExperimentKind::OptimizeDelta},
        {"vt-search", ExperimentKind::VtSearch},
    };
    std::vector<CLI::App*> single_apps;
    for (const auto& [name, kind] : singles) {
        auto* s = app.add_subcommand(name, std::string("single evaluation: ") + experiment_kind_name(kind));
        add_common(s, o);
        single_apps.push_back(s);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (cal->parsed()) return run_calibrate(o);
        if (run->parsed()) {
            Config c = resolve(o);
            ExperimentSpec spec = parse_experiment_spec(read_file(spec_path), spec_path);
            Table t = run_experiment(spec, c, o.jobs);
            for (const auto& [k, v] : spec.overrides) set_config_value(c, k, v);
            std::string title = std::string("run ") + experiment_kind_name(spec.kind) +
                                (spec.figure.empty() ? "" : " " + spec.figure);
            emit(o.out.empty() ? spec.out : o.out, render(t, c, title));
            return 0;
        }
        if (fig->parsed()) {
            Config c = resolve(o);
            Table t = figure_table(figure_id, c, o.jobs);
            emit(o.out, render(t, c, "figure " + figure_id));
            return 0;
        }
        for (size_t i = 0; i < singles.size(); ++i) {
            if (!single_apps[i]->parsed()) continue;
            Config c = resolve(o);
            Table t = single_point(singles[i].second, c, o.jobs);
            emit(o.out, render(t, c, singles[i].first));
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
