#include "xbar/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "xbar/parallel.hpp"

namespace xbar {

std::string cell(double v) {
    if (!std::isfinite(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string cell(int v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "1" : "0"; }

namespace {

std::string time_cell(double t) { return t < 0 ? std::string() : cell(t); }

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

}  // namespace

std::string provenance_header(const Config& c, const std::string& title, const std::vector<std::string>& notes) {
    std::string h = "# xbar " + std::string(tool_version) + "\n";
    h += "# " + title + "\n";
    for (const auto& n : notes) h += "# note: " + n + "\n";
    h += "# calibration: diode.area_cm2=" + format_number(c.stack.area) +
         " mtj.v_critical_v=" + format_number(c.mtj.v_critical) +
         " mtj.dynamic_time_s=" + format_number(c.mtj.dynamic_time_const) +
         " mtj.relax_p=" + format_number(c.mtj.relax_p) + " mtj.relax_ap=" + format_number(c.mtj.relax_ap) + "\n";
    for (const auto& line : split_lines(dump_config(c))) h += "# config " + line + "\n";
    return h;
}

std::string render_csv(const Table& t) {
    std::string s;
    for (size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
    s += "\n";
    for (const auto& r : t.rows) {
        for (size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
        s += "\n";
    }
    return s;
}

std::string render(const Table& t, const Config& c, const std::string& title) {
    return provenance_header(c, title, t.notes) + render_csv(t);
}

// ---------------------------------------------------------------- figures

namespace {

using Row = std::vector<std::string>;

const std::map<std::string, std::vector<std::string>>& schemas() {
    static const std::map<std::string, std::vector<std::string>> s = {
        {"fig6", {"r_p_ohm", "margin_V", "v_write_V"}},
        {"fig7", {"r_s_ohm", "margin_V"}},
        {"fig8", {"n", "v_read_V", "margin_V"}},
        {"fig9", {"v_read_V", "retention_selected_y", "retention_half_row_y", "retention_half_col_y",
                  "retention_unselected_y", "margin_V"}},
        {"fig10", {"n", "delta_V", "i_h_A", "i_rs_A", "i_rh_A", "sense_full_V", "sense_lumped_V"}},
        {"fig11", {"delta_V", "retention_selected_y", "retention_half_row_y", "retention_half_col_y",
                   "retention_unselected_y"}},
        {"fig12", {"n", "delta_V", "margin_V"}},
        {"fig13", {"n", "delta_V", "n_bits", "margin_V"}},
        {"fig16", {"v_write_V", "flip_time_s", "latency_model_s"}},
        {"fig17", {"delta_V", "half_energy_J", "flip_time_s", "feasible"}},
        {"fig18", {"t_s", "mx_target_a", "mx_target_b", "mx_half_bit_line_a", "mx_half_bit_line_b",
                   "mx_half_word_line"}},
        {"fig19", {"n", "energy_pJ_per_bit", "half_selected_pJ"}},
        {"table1", {"pattern", "energy_pJ_per_bit"}},
    };
    return s;
}

std::vector<double> range(double a, double b, double step) {
    std::vector<double> v;
    int n = static_cast<int>(std::floor((b - a) / step + 1e-9)) + 1;
    for (int i = 0; i < n; ++i) v.push_back(std::round((a + i * step) * 1e12) / 1e12);
    return v;
}

ReadReport margin_at(Config c, int n, double v_read, double delta, int bits = -1) {
    c.array.n = n;
    c.v_read = v_read;
    c.read_delta = delta;
    c.n_bits = std::min(bits > 0 ? bits : c.n_bits, n);
    return sense_margin(c.read_config());
}

double years(double s) { return s / seconds_per_year; }

// cell voltage at which a P cell carries current i
double voltage_for_current(const DiodeModel& d, double r, double i) {
    double lo = 0, hi = 10;
    if (cell_iv(d, r, hi).current < i) return NAN;
    for (int k = 0; k < 80; ++k) {
        double mid = 0.5 * (lo + hi);
        (cell_iv(d, r, mid).current < i ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Table fig6(const Config& c, int jobs) {
    Table t;
    auto rps = range(2e3, 10e3, 1e3);
    double i_c = c.mtj.v_critical / c.mtj.r_p;
    double tmr = c.mtj.r_ap / c.mtj.r_p;
    DiodeModel d = c.diode();
    t.rows = parallel_map<Row>(rps.size(), jobs, [&](size_t i) {
        Config k = c;
        k.mtj.r_p = rps[i];
        k.mtj.r_ap = rps[i] * tmr;
        double m = margin_at(k, 50, k.v_read, 0.0).margin;
        return Row{cell(rps[i]), cell(m), cell(voltage_for_current(d, rps[i], i_c))};
    });
    t.notes.push_back("N = 50, delta = 0; v_write_V drives the reference critical current through a P cell");
    return t;
}

Table fig7(const Config& c, int jobs) {
    Table t;
    auto rs = range(4e3, 24e3, 1e3);
    t.rows = parallel_map<Row>(rs.size(), jobs, [&](size_t i) {
        Config k = c;
        k.array.r_s = rs[i];
        return Row{cell(rs[i]), cell(margin_at(k, 50, k.v_read, 0.0).margin)};
    });
    t.notes.push_back("N = 50, delta = 0");
    return t;
}

Table fig8(const Config& c, int jobs) {
    Table t;
    const std::vector<int> ns = {4, 8, 16, 32, 50, 64, 100, 128, 200, 256, 300};
    const std::vector<double> vs = {2.1, 2.2, 2.3};
    t.rows = parallel_map<Row>(ns.size() * vs.size(), jobs, [&](size_t i) {
        int n = ns[i % ns.size()];
        double v = vs[i / ns.size()];
        return Row{cell(n), cell(v), cell(margin_at(c, n, v, 0.0).margin)};
    });
    t.notes.push_back("delta = 0; lumped model above N = " + std::to_string(c.full_limit));
    return t;
}

Row retention_row(const ReadReport& r) {
    return {cell(years(r.retention_selected)), cell(years(r.retention_half_row)), cell(years(r.retention_half_col)),
            cell(years(r.retention_unselected))};
}

Table fig9(const Config& c, int jobs) {
    Table t;
    auto vs = range(1.9, 2.4, 0.05);
    t.rows = parallel_map<Row>(vs.size(), jobs, [&](size_t i) {
        ReadReport r = margin_at(c, 50, vs[i], 0.0);
        Row row{cell(vs[i])};
        for (auto& s : retention_row(r)) row.push_back(s);
        row.push_back(cell(r.margin));
        return row;
    });
    t.notes.push_back("N = 50, delta = 0, selected cell in P");
    return t;
}

Table fig10(const Config& c, int jobs) {
    Table t;
    const std::vector<int> ns = {4, 8, 16, 50};
    const std::vector<double> ds = {0.0, 0.35, 0.7};
    t.rows = parallel_map<Row>(ns.size() * ds.size(), jobs, [&](size_t i) {
        int n = ns[i / ds.size()];
        double d = ds[i % ds.size()];
        Config k = c;
        k.array.n = n;
        k.read_delta = d;
        k.n_bits = std::min(k.n_bits, n);
        ReadConfig rc = k.read_config();
        ReadReport full = sense_margin(rc, false);
        ReadReport lump = sense_margin(rc, true);
        return Row{cell(n), cell(d), cell(full.i_h), cell(full.i_rs), cell(full.i_rh), cell(full.sense_voltage_p),
                   cell(lump.sense_voltage_p)};
    });
    t.notes.push_back("currents at the sensed bit line with the selected cell in P; full nodal vs lumped");
    return t;
}

Table fig11(const Config& c, int jobs) {
    Table t;
    auto ds = range(0.0, 0.7, 0.05);
    t.rows = parallel_map<Row>(ds.size(), jobs, [&](size_t i) {
        Row row{cell(ds[i])};
        for (auto& s : retention_row(margin_at(c, 50, c.v_read, ds[i]))) row.push_back(s);
        return row;
    });
    t.notes.push_back("N = 50");
    return t;
}

Table fig12(const Config& c, int jobs) {
    Table t;
    const std::vector<int> ns = {4, 50, 100, 300, 512};
    auto ds = range(0.0, 0.7, 0.05);
    t.rows = parallel_map<Row>(ns.size() * ds.size(), jobs, [&](size_t i) {
        int n = ns[i / ds.size()];
        double d = ds[i % ds.size()];
        return Row{cell(n), cell(d), cell(margin_at(c, n, c.v_read, d).margin)};
    });
    return t;
}

Table fig13(const Config& c, int jobs) {
    Table t;
    const std::vector<double> ds = {0.0, 0.3, 0.7};
    const std::vector<int> bits = {2, 4, 8, 16, 32};
    t.rows = parallel_map<Row>(ds.size() * bits.size(), jobs, [&](size_t i) {
        double d = ds[i / bits.size()];
        int b = bits[i % bits.size()];
        return Row{cell(32), cell(d), cell(b), cell(margin_at(c, 32, c.v_read, d, b).margin)};
    });
    return t;
}

Table fig16(const Config& c, int jobs) {
    Table t;
    auto vs = range(1.9, 2.5, 0.025);
    DiodeModel d = c.diode();
    t.rows = parallel_map<Row>(vs.size(), jobs, [&](size_t i) {
        double v = vs[i];
        double flip = single_cell_flip(c.mtj, d, [v](double) { return v; }, MagState::p(), 5e-9, c.write.dt);
        double vm = cell_iv(d, c.mtj, MagState::p(), v).v_mtj;
        return Row{cell(v), time_cell(flip), cell(write_latency(c.mtj, vm))};
    });
    t.notes.push_back("single cell from P under DC bias; blank flip time means no flip within 5 ns");
    return t;
}

Table fig17(const Config& c, int jobs) {
    Table t;
    WriteEnv env = c.write_env();
    env.array.n = 8;
    DeltaSearch s = optimize_delta(c.write, default_delta_range(), env, jobs);
    for (const auto& p : s.curve)
        t.rows.push_back({cell(p.delta), cell(p.half_energy), time_cell(p.flip_time), cell(p.feasible)});
    t.notes.push_back("N = 8, P10; half_energy_J is the window energy per half-selected cell");
    t.notes.push_back(s.found ? "best delta " + format_number(s.best_delta) + " V, energy ratio to delta = 0.05 V: " +
                                    format_number(s.best_energy / s.baseline_energy)
                              : "no feasible delta");
    return t;
}

Table fig18(const Config& c) {
    Table t;
    WriteEnv env = c.write_env();
    WritePattern wp = c.pattern;
    wp.pattern = Pattern::P10;
    CellGrid grid = write_grid(wp, env.array.n);
    BiasPlan plan = bias_plan_for_pattern(wp, c.write, env.array);
    plan.off_time = c.write.window;
    Network net = build_network(env.array, grid, plan, env.diode, env.mtj);
    auto find = [&](auto pred) {
        for (size_t b = 0; b < net.cells.size(); ++b)
            if (pred(net.cells[b])) return static_cast<int>(b);
        return -1;
    };
    std::vector<int> branch = {
        find([&](const CellBranch& b) { return b.row == wp.row && b.col == wp.col_a; }),
        find([&](const CellBranch& b) { return b.row == wp.row && b.col == wp.col_b; }),
        find([&](const CellBranch& b) { return b.cls == CellClass::HalfBitLine && b.col == wp.col_a; }),
        find([&](const CellBranch& b) { return b.cls == CellClass::HalfBitLine && b.col == wp.col_b; }),
        find([&](const CellBranch& b) { return b.cls == CellClass::HalfWordLine; }),
    };
    TransientOptions opt;
    for (int b : branch)
        if (b >= 0) opt.watch.push_back(b);
    opt.record_every = std::max(1, static_cast<int>(std::lround(10e-12 / c.write.dt)));
    TransientResult tr = solve_transient(net, c.write.window + c.write.tail, c.write.dt, opt);
    std::map<int, size_t> where;
    for (size_t w = 0; w < tr.watch.size(); ++w) where[tr.watch[w]] = w;
    for (size_t s = 0; s < tr.t.size(); ++s) {
        Row row{cell(tr.t[s])};
        for (int b : branch) row.push_back(b >= 0 ? cell(tr.mx[where[b]][s]) : std::string());
        t.rows.push_back(row);
    }
    t.notes.push_back("P10 at N = " + std::to_string(env.array.n) + "; bias removed at " +
                      format_number(c.write.window) + " s");
    return t;
}

Table fig19(const Config& c, int jobs) {
    Table t;
    const std::vector<int> ns = {4, 8, 16, 32, 64};
    t.rows = parallel_map<Row>(ns.size(), jobs, [&](size_t i) {
        WriteEnv env = c.write_env();
        env.array.n = ns[i];
        WritePattern wp = c.pattern;
        wp.pattern = Pattern::P10;
        EnergyReport e = write_energy(wp, c.write, env);
        return Row{cell(ns[i]), cell(e.energy_per_bit * 1e12), cell(e.half_selected * 1e12)};
    });
    return t;
}

Table table1(const Config& c, int jobs) {
    Table t;
    const std::vector<Pattern> ps = {Pattern::P00, Pattern::P11, Pattern::P10, Pattern::P01};
    t.rows = parallel_map<Row>(ps.size(), jobs, [&](size_t i) {
        WriteEnv env = c.write_env();
        env.array.n = 64;
        WritePattern wp = c.pattern;
        wp.pattern = ps[i];
        return Row{pattern_name(ps[i]), cell(write_energy(wp, c.write, env).energy_per_bit * 1e12)};
    });
    t.notes.push_back("N = 64");
    return t;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = {"fig6",  "fig7",  "fig8",  "fig9",  "fig10", "fig11", "fig12",
                                                 "fig13", "fig16", "fig17", "fig18", "fig19", "table1"};
    return ids;
}

std::string figure_columns(const std::string& id) {
    auto it = schemas().find(id);
    if (it == schemas().end()) throw ConfigError("unknown figure '" + id + "'");
    std::string s;
    for (size_t i = 0; i < it->second.size(); ++i) s += (i ? "," : "") + it->second[i];
    return s;
}

Table figure_table(const std::string& id, const Config& c, int jobs) {
    figure_columns(id);
    c.validate();
    Table t;
    if (id == "fig6") t = fig6(c, jobs);
    else if (id == "fig7") t = fig7(c, jobs);
    else if (id == "fig8") t = fig8(c, jobs);
    else if (id == "fig9") t = fig9(c, jobs);
    else if (id == "fig10") t = fig10(c, jobs);
    else if (id == "fig11") t = fig11(c, jobs);
    else if (id == "fig12") t = fig12(c, jobs);
    else if (id == "fig13") t = fig13(c, jobs);
    else if (id == "fig16") t = fig16(c, jobs);
    else if (id == "fig17") t = fig17(c, jobs);
    else if (id == "fig18") t = fig18(c);
    else if (id == "fig19") t = fig19(c, jobs);
    else t = table1(c, jobs);
    t.columns = schemas().at(id);
    return t;
}

// ---------------------------------------------------------------- experiments

namespace {

const std::vector<std::pair<ExperimentKind, const char*>> kind_names = {
    {ExperimentKind::ReadMargin, "read-margin"},       {ExperimentKind::ReadRetention, "read-retention"},
    {ExperimentKind::MaxArray, "max-array"},           {ExperimentKind::WriteSim, "write-sim"},
    {ExperimentKind::WriteEnergy, "write-energy"},     {ExperimentKind::OptimizeDelta, "optimize-delta"},
    {ExperimentKind::VtSearch, "vt-search"},           {ExperimentKind::Figure, "figure"},
};

std::vector<std::string> metric_columns(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::ReadMargin:
            return {"n", "n_bits", "v_read_V", "delta_V", "r_s_ohm", "margin_V", "sense_p_V", "sense_ap_V",
                    "lumped", "max_kcl_A"};
        case ExperimentKind::ReadRetention:
            return {"v_read_V", "delta_V", "retention_selected_y", "retention_half_row_y", "retention_half_col_y",
                    "retention_unselected_y"};
        case ExperimentKind::MaxArray:
            return {"target_margin_V", "delta_V", "n_max", "achievable", "capped"};
        case ExperimentKind::WriteSim:
            return {"pattern", "n", "success", "flip_a_s", "flip_b_s", "half_flip_s", "min_reaccess_gap",
                    "energy_pJ_per_bit", "half_retention_s"};
        case ExperimentKind::WriteEnergy:
            return {"pattern", "n", "energy_pJ_per_bit", "targets_J", "half_selected_J", "half_word_line_J",
                    "unselected_J", "half_selected_avg_J"};
        case ExperimentKind::OptimizeDelta:
            return {"found", "best_delta_V", "best_half_energy_J", "baseline_half_energy_J", "energy_ratio"};
        case ExperimentKind::VtSearch:
            return {"found", "ox2_scale", "v_on_V", "saving", "energy_pJ_per_bit", "baseline_pJ_per_bit"};
        case ExperimentKind::Figure:
            break;
    }
    return {};
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& s) {
    for (const auto& [k, name] : kind_names)
        if (s == name) return k;
    throw ConfigError("unknown experiment kind '" + s + "'");
}

const char* experiment_kind_name(ExperimentKind k) {
    for (const auto& [kk, name] : kind_names)
        if (kk == k) return name;
    return "?";
}

std::vector<double> SweepAxis::values() const {
    if (!(step > 0) || !(stop >= start)) return {};
    return range(start, stop, step);
}

std::vector<double> default_delta_range() { return range(0.0, 0.5, 0.025); }
std::vector<double> default_ox2_scales() { return range(0.8, 1.3, 0.02); }

ExperimentSpec parse_experiment_spec(const std::string& text, const std::string& origin) {
    ExperimentSpec spec;
    bool have_kind = false;
    for (const auto& [key, value] : parse_key_values(text, origin)) {
        if (key == "experiment") {
            spec.kind = parse_experiment_kind(value);
            have_kind = true;
        } else if (key == "figure") {
            spec.figure = value;
        } else if (key == "out") {
            spec.out = value;
        } else if (key.rfind("axis.", 0) == 0) {
            SweepAxis ax;
            ax.key = key.substr(5);
            if (!is_config_key(ax.key)) throw ConfigError(origin + ": unknown axis key '" + ax.key + "'");
            char c1 = 0, c2 = 0;
            std::istringstream in(value);
            if (!(in >> ax.start >> c1 >> ax.stop >> c2 >> ax.step) || c1 != ':' || c2 != ':')
                throw ConfigError(origin + ": axis '" + ax.key + "' must be start:stop:step");
            if (!(ax.step > 0)) throw ConfigError(origin + ": axis '" + ax.key + "' needs step > 0");
            if (ax.values().empty()) throw ConfigError(origin + ": axis '" + ax.key + "' is empty");
            Config probe;
            set_config_value(probe, ax.key, ax.start);
            spec.axes.push_back(ax);
        } else {
            std::string k = key.rfind("set.", 0) == 0 ? key.substr(4) : key;
            if (!is_config_key(k)) throw ConfigError(origin + ": unknown key '" + key + "'");
            spec.overrides.emplace_back(k, value);
        }
    }
    if (!have_kind) throw ConfigError(origin + ": missing 'experiment ='");
    if (spec.kind == ExperimentKind::Figure) {
        figure_columns(spec.figure);
        if (!spec.axes.empty()) throw ConfigError(origin + ": figure experiments take no sweep axes");
    }
    return spec;
}

Table single_point(ExperimentKind kind, const Config& c, int jobs) {
    c.validate();
    Table t;
    t.columns = metric_columns(kind);
    switch (kind) {
        case ExperimentKind::ReadMargin: {
            ReadReport r = sense_margin(c.read_config());
            t.rows.push_back({cell(r.n), cell(std::min(c.n_bits, r.n)), cell(c.v_read), cell(c.read_delta),
                              cell(c.array.r_s), cell(r.margin), cell(r.sense_voltage_p), cell(r.sense_voltage_ap),
                              cell(r.lumped), cell(r.max_kcl)});
            break;
        }
        case ExperimentKind::ReadRetention: {
            ReadReport r = read_retention_report(c.read_config());
            Row row{cell(c.v_read), cell(c.read_delta)};
            for (auto& s : retention_row(r)) row.push_back(s);
            t.rows.push_back(row);
            break;
        }
        case ExperimentKind::MaxArray: {
            ArraySizing s = max_supported_array(c.target_margin, c.read_delta, c.read_config(), c.n_cap);
            t.rows.push_back({cell(c.target_margin), cell(c.read_delta), cell(s.n_max), cell(s.achievable),
                              cell(s.capped)});
            break;
        }
        case ExperimentKind::WriteSim: {
            WriteReport r = simulate_write(c.pattern, c.write, c.write_env());
            t.rows.push_back({pattern_name(r.pattern), cell(c.array.n), cell(r.success), time_cell(r.flip_time[0]),
                              time_cell(r.flip_time[1]), time_cell(r.half_selected_flip_time),
                              cell(r.min_reaccess_gap), cell(r.energy_per_bit * 1e12),
                              cell(r.half_selected_retention)});
            break;
        }
        case ExperimentKind::WriteEnergy: {
            EnergyReport e = write_energy(c.pattern, c.write, c.write_env());
            t.rows.push_back({pattern_name(c.pattern.pattern), cell(c.array.n), cell(e.energy_per_bit * 1e12),
                              cell(e.targets), cell(e.half_selected), cell(e.half_word_line), cell(e.unselected),
                              cell(e.half_selected_avg)});
            break;
        }
        case ExperimentKind::OptimizeDelta: {
            DeltaSearch s = optimize_delta(c.write, default_delta_range(), c.write_env(), jobs);
            t.rows.push_back({cell(s.found), s.found ? cell(s.best_delta) : "", s.found ? cell(s.best_energy) : "",
                              cell(s.baseline_energy),
                              s.found ? cell(s.best_energy / s.baseline_energy) : ""});
            break;
        }
        case ExperimentKind::VtSearch: {
            VtSearch s = vt_modulation_search(c.stack, c.diode_opt, c.write, c.write_env(), default_ox2_scales(), jobs);
            bool any = s.best.writes;
            t.rows.push_back({cell(s.found), any ? cell(s.best.ox2_scale) : "", any ? cell(s.best.v_on) : "",
                              any ? cell(s.saving) : "", any ? cell(s.best.energy_per_bit * 1e12) : "",
                              cell(s.baseline_energy * 1e12)});
            break;
        }
        case ExperimentKind::Figure:
            throw ConfigError("single_point: figures are not single-point experiments");
    }
    return t;
}

Table run_experiment(const ExperimentSpec& spec, const Config& base, int jobs) {
    Config c = base;
    for (const auto& [k, v] : spec.overrides) set_config_value(c, k, v);
    if (spec.kind == ExperimentKind::Figure) {
        if (!spec.axes.empty()) throw ConfigError("figure experiments take no sweep axes");
        return figure_table(spec.figure, c, jobs);
    }
    std::vector<std::vector<double>> axis_values;
    size_t total = 1;
    for (const auto& ax : spec.axes) {
        axis_values.push_back(ax.values());
        if (axis_values.back().empty()) throw ConfigError("sweep axis '" + ax.key + "' is empty");
        total *= axis_values.back().size();
    }
    Table t;
    for (const auto& ax : spec.axes) t.columns.push_back(ax.key);
    auto metrics = metric_columns(spec.kind);
    t.columns.insert(t.columns.end(), metrics.begin(), metrics.end());
    t.columns.push_back("error");

    // outer parallelism over points; inner searches stay serial
    t.rows = parallel_map<Row>(total, jobs, [&](size_t idx) {
        Config k = c;
        Row row(spec.axes.size());
        size_t rem = idx;
        for (size_t a = spec.axes.size(); a-- > 0;) {
            size_t m = axis_values[a].size();
            double v = axis_values[a][rem % m];
            rem /= m;
            row[a] = format_number(v);
        }
        try {
            for (size_t a = 0; a < spec.axes.size(); ++a)
                set_config_value(k, spec.axes[a].key, std::stod(row[a]));
            Table p = single_point(spec.kind, k, 1);
            row.insert(row.end(), p.rows.at(0).begin(), p.rows.at(0).end());
            row.push_back("");
        } catch (const std::exception& e) {
            row.resize(spec.axes.size() + metrics.size());
            std::string msg = e.what();
            for (char& ch : msg)
                if (ch == ',' || ch == '\n') ch = ';';
            row.push_back(msg);
        }
        return row;
    });
    t.notes.push_back(std::string("experiment ") + experiment_kind_name(spec.kind) + ", " + std::to_string(total) +
                      " points");
    return t;
}

}  // namespace xbar
