#include "xbar/write.hpp"

#include <algorithm>
#include <cmath>

#include "xbar/parallel.hpp"

namespace xbar {

const char* pattern_name(Pattern p) {
    switch (p) {
        case Pattern::P00: return "00";
        case Pattern::P11: return "11";
        case Pattern::P10: return "10";
        case Pattern::P01: return "01";
    }
    return "?";
}

Pattern parse_pattern(const std::string& s) {
    std::string t = s;
    if (!t.empty() && (t[0] == 'P' || t[0] == 'p')) t = t.substr(1);
    if (t == "00") return Pattern::P00;
    if (t == "11") return Pattern::P11;
    if (t == "10") return Pattern::P10;
    if (t == "01") return Pattern::P01;
    throw ModelError("unknown write pattern '" + s + "'");
}

void WriteConfig::validate() const {
    if (!(v_write > 0)) throw ModelError("write: v_write must be positive");
    if (!(delta >= 0 && delta < v_write)) throw ModelError("write: need 0 <= delta < v_write");
    if (!(pulse_period > 0)) throw ModelError("write: pulse_period must be positive");
    if (!(duty > 0 && duty < 1)) throw ModelError("write: duty must be in (0, 1)");
    if (!(window > 0)) throw ModelError("write: window must be positive");
    if (!(clock > 0)) throw ModelError("write: clock must be positive");
    if (!(dt > 0 && dt <= 1e-12 * (1 + 1e-9))) throw ModelError("write: dt must be in (0, 1 ps]");
    if (!(tail >= 0)) throw ModelError("write: tail must be non-negative");
    if (!(horizon >= window)) throw ModelError("write: horizon must cover the window");
}

namespace {

bool complementary(Pattern p) { return p == Pattern::P10 || p == Pattern::P01; }

// desired logical value of the two targets; '1' is AP
Logical target_value(Pattern p, int k) {
    const char* s = pattern_name(p);
    return s[k] == '1' ? Logical::AP : Logical::P;
}

MagState opposite(Logical l) { return l == Logical::AP ? MagState::p() : MagState::ap(); }

void check_positions(const WritePattern& wp, int n) {
    if (wp.row < 0 || wp.row >= n || wp.col_a < 0 || wp.col_a >= n || wp.col_b < 0 || wp.col_b >= n)
        throw ModelError("write: target position outside the array");
    if (wp.col_a == wp.col_b) throw ModelError("write: the two targets must sit on distinct bit lines");
}

}  // namespace

BiasPlan bias_plan_for_pattern(const WritePattern& wp, const WriteConfig& wc, const CrossbarConfig& cfg) {
    wc.validate();
    cfg.validate();
    check_positions(wp, cfg.n);
    int n = cfg.n;
    double v = wc.v_write;
    BiasPlan plan;
    switch (wp.pattern) {
        case Pattern::P11:
        case Pattern::P00: {
            bool ones = wp.pattern == Pattern::P11;
            plan.rows.assign(n, LineBias::dc(v / 2));
            plan.cols.assign(n, LineBias::dc(v / 2));
            plan.rows[wp.row] = LineBias::dc(ones ? 0.0 : v, true);
            plan.cols[wp.col_a] = LineBias::dc(ones ? v : 0.0, true);
            plan.cols[wp.col_b] = LineBias::dc(ones ? v : 0.0, true);
            break;
        }
        case Pattern::P10:
        case Pattern::P01: {
            LineBias p = LineBias::pulse(v + wc.delta, v - wc.delta, wc.pulse_period, wc.duty, wc.pulse_phase);
            plan.rows.assign(n, p);
            plan.cols.assign(n, p);
            plan.rows[wp.row] = LineBias::floating(true);
            int hi = wp.pattern == Pattern::P10 ? wp.col_a : wp.col_b;
            int lo = wp.pattern == Pattern::P10 ? wp.col_b : wp.col_a;
            plan.cols[hi] = LineBias::dc(2 * v, true);
            plan.cols[lo] = LineBias::dc(0.0, true);
            break;
        }
    }
    return plan;
}

CellGrid write_grid(const WritePattern& wp, int n) {
    check_positions(wp, n);
    CellGrid g(n, MagState::p());
    // a half-selected cell starts at the pole its own bias pushes away from
    auto fill_col = [&](int col, MagState s) {
        for (int i = 0; i < n; ++i) g.at(i, col) = s;
    };
    switch (wp.pattern) {
        case Pattern::P11:
            break;
        case Pattern::P00:
            fill_col(wp.col_a, MagState::ap());
            fill_col(wp.col_b, MagState::ap());
            for (int j = 0; j < n; ++j) g.at(wp.row, j) = MagState::ap();
            break;
        case Pattern::P10:
            fill_col(wp.col_b, MagState::ap());
            break;
        case Pattern::P01:
            fill_col(wp.col_a, MagState::ap());
            break;
    }
    g.at(wp.row, wp.col_a) = opposite(target_value(wp.pattern, 0));
    g.at(wp.row, wp.col_b) = opposite(target_value(wp.pattern, 1));
    return g;
}

namespace {

struct ClassKey {
    std::string name;
    std::vector<int> branches;
};

std::vector<ClassKey> half_classes(const Network& net, const WritePattern& wp) {
    std::vector<ClassKey> out;
    if (complementary(wp.pattern)) {
        out.push_back({"bit_line_a", {}});
        out.push_back({"bit_line_b", {}});
    } else {
        out.push_back({"bit_line", {}});
    }
    out.push_back({"word_line", {}});
    for (size_t b = 0; b < net.cells.size(); ++b) {
        const auto& c = net.cells[b];
        if (c.cls == CellClass::HalfBitLine) {
            size_t k = complementary(wp.pattern) && c.col == wp.col_b ? 1 : 0;
            out[k].branches.push_back(static_cast<int>(b));
        } else if (c.cls == CellClass::HalfWordLine) {
            out.back().branches.push_back(static_cast<int>(b));
        }
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const ClassKey& k) { return k.branches.empty(); }),
              out.end());
    return out;
}

int target_branch(const Network& net, int row, int col) {
    for (size_t b = 0; b < net.cells.size(); ++b)
        if (net.cells[b].row == row && net.cells[b].col == col) return static_cast<int>(b);
    throw ModelError("write: target cell missing from network");
}

int gap_cycles(double flip_time, double clock) {
    if (!(flip_time > 0)) return 1;
    return std::max(1, static_cast<int>(std::ceil(flip_time * clock - 1e-9)));
}

}  // namespace

WriteReport simulate_write(const WritePattern& wp, const WriteConfig& wc, const WriteEnv& env,
                           const CellGrid& grid) {
    BiasPlan plan = bias_plan_for_pattern(wp, wc, env.array);
    plan.off_time = wc.window;
    Network net = build_network(env.array, grid, plan, env.diode, env.mtj);

    WriteReport rep;
    rep.pattern = wp.pattern;
    rep.disturb_unsafe = complementary(wp.pattern) && wc.delta == 0;

    TransientResult tr = solve_transient(net, wc.window + wc.tail, wc.dt);
    std::vector<int> where(net.cells.size(), -1);
    for (size_t w = 0; w < tr.watch.size(); ++w) where[tr.watch[w]] = static_cast<int>(w);

    int tb[2] = {target_branch(net, wp.row, wp.col_a), target_branch(net, wp.row, wp.col_b)};
    rep.targets_flipped = true;
    for (int k = 0; k < 2; ++k) {
        double tc = tr.cross_time[tb[k]];
        rep.flip_time[k] = tc;
        bool ok = tc >= 0 && tc <= wc.window &&
                  tr.final_state[tb[k]].logical() == target_value(wp.pattern, k);
        rep.targets_flipped = rep.targets_flipped && ok;
        rep.energy_targets += tr.energy[tb[k]];
    }

    auto classes = half_classes(net, wp);
    size_t n_window = 0;
    while (n_window < tr.t.size() && tr.t[n_window] <= wc.window + 1e-18) ++n_window;
    bool any_disturbed = false;
    double worst_vmtj = 0;
    for (const auto& k : classes) {
        HalfClassReport h;
        h.name = k.name;
        for (int b : k.branches) {
            const auto& c = net.cells[b];
            h.count += static_cast<int>(std::lround(c.multiplicity));
            h.energy += tr.energy[b];
            int w = where[b];
            if (w >= 0) {
                for (size_t s = 0; s < n_window; ++s) h.min_abs_mx = std::min(h.min_abs_mx, std::abs(tr.mx[w][s]));
                if (!tr.current[w].empty())
                    worst_vmtj = std::max(worst_vmtj, std::abs(tr.current[w][0]) * mtj_resistance(env.mtj, c.state));
            }
            if (tr.cross_time[b] >= 0 || tr.final_state[b].logical() != c.state.logical()) h.disturbed = true;
        }
        any_disturbed = any_disturbed || h.disturbed;
        rep.energy_half += h.energy;
        rep.half.push_back(h);
    }
    rep.half_selected_retention = retention_time(env.mtj, worst_vmtj);

    for (double e : tr.energy) rep.energy_total += e;
    rep.energy_total += tr.resistor_energy;
    rep.source_energy = tr.source_energy;
    rep.energy_per_bit = rep.energy_total / 2;

    // keep the half-selected bias on past the window to time their flip
    BiasPlan cont = bias_plan_for_pattern(wp, wc, env.array);
    Network net2 = build_network(env.array, grid, cont, env.diode, env.mtj);
    TransientOptions opt;
    for (const auto& k : classes) opt.watch.insert(opt.watch.end(), k.branches.begin(), k.branches.end());
    opt.record_every = 1000000;
    TransientResult tr2 = solve_transient(net2, wc.horizon, wc.dt, opt);
    double earliest = -1;
    for (size_t ci = 0; ci < classes.size(); ++ci) {
        double first = -1;
        for (int b : classes[ci].branches) {
            double tc = tr2.cross_time[b];
            if (tc >= 0 && (first < 0 || tc < first)) first = tc;
        }
        rep.half[ci].flip_time = first;
        if (first >= 0 && (earliest < 0 || first < earliest)) earliest = first;
    }
    rep.half_selected_flip_time = earliest;
    rep.min_reaccess_gap = gap_cycles(earliest, wc.clock);
    rep.success = rep.targets_flipped && !any_disturbed;
    return rep;
}

WriteReport simulate_write(const WritePattern& wp, const WriteConfig& wc, const WriteEnv& env) {
    return simulate_write(wp, wc, env, write_grid(wp, env.array.n));
}

namespace {

void add_class_energy(EnergyReport& er, CellClass c, double e) {
    switch (c) {
        case CellClass::Selected: er.targets += e; break;
        case CellClass::HalfBitLine: er.half_selected += e; break;
        case CellClass::HalfWordLine: er.half_word_line += e; break;
        case CellClass::Unselected: er.unselected += e; break;
    }
}

}  // namespace

EnergyReport write_energy(const WritePattern& wp, const WriteConfig& wc, const WriteEnv& env,
                          const CellGrid& grid) {
    EnergyReport er;
    BiasPlan plan = bias_plan_for_pattern(wp, wc, env.array);
    if (complementary(wp.pattern)) {
        plan.off_time = wc.window;
        Network net = build_network(env.array, grid, plan, env.diode, env.mtj);
        TransientOptions opt;
        opt.watch = {0};
        opt.record_every = 1000000;
        TransientResult tr = solve_transient(net, wc.window, wc.dt, opt);
        for (size_t b = 0; b < net.cells.size(); ++b) add_class_energy(er, net.cells[b].cls, tr.energy[b]);
        er.total = er.targets + er.half_selected + er.half_word_line + er.unselected + tr.resistor_energy;
    } else {
        // static states: one DC solve with the targets before and one after the flip, averaged
        for (int pass = 0; pass < 2; ++pass) {
            CellGrid g = grid;
            if (pass == 1)
                for (int k = 0; k < 2; ++k) {
                    int col = k == 0 ? wp.col_a : wp.col_b;
                    g.at(wp.row, col) = target_value(wp.pattern, k) == Logical::AP ? MagState::ap() : MagState::p();
                }
            Network net = build_network(env.array, g, plan, env.diode, env.mtj);
            DcSolution s = solve_dc(net);
            for (size_t b = 0; b < net.cells.size(); ++b) {
                const auto& c = net.cells[b];
                double dv = s.v[c.col_node] - s.v[c.row_node];
                add_class_energy(er, c.cls, 0.5 * c.multiplicity * dv * s.cell_current[b] * wc.window);
            }
        }
        er.total = er.targets + er.half_selected + er.half_word_line + er.unselected;
    }
    er.energy_per_bit = er.total / 2;
    int half_count = 2 * (env.array.n - 1);
    er.half_selected_avg = er.half_selected / half_count;
    return er;
}

EnergyReport write_energy(const WritePattern& wp, const WriteConfig& wc, const WriteEnv& env) {
    return write_energy(wp, wc, env, write_grid(wp, env.array.n));
}

namespace {

// earliest half-selected flip with the pulsed bias held indefinitely
double pulsed_half_flip(const WritePattern& wp, const WriteConfig& wc, const WriteEnv& env) {
    CellGrid grid = write_grid(wp, env.array.n);
    BiasPlan plan = bias_plan_for_pattern(wp, wc, env.array);
    Network net = build_network(env.array, grid, plan, env.diode, env.mtj);
    TransientOptions opt;
    for (size_t b = 0; b < net.cells.size(); ++b)
        if (net.cells[b].cls == CellClass::HalfBitLine || net.cells[b].cls == CellClass::HalfWordLine)
            opt.watch.push_back(static_cast<int>(b));
    opt.record_every = 1000000;
    TransientResult tr = solve_transient(net, wc.horizon, wc.dt, opt);
    double first = -1;
    for (int b : opt.watch) {
        double tc = tr.cross_time[b];
        if (tc >= 0 && (first < 0 || tc < first)) first = tc;
    }
    return first;
}

}  // namespace

DeltaSearch optimize_delta(const WriteConfig& tmpl, const std::vector<double>& deltas,
                           const WriteEnv& env, int jobs) {
    if (deltas.empty()) throw ModelError("optimize_delta: empty delta range");
    for (double d : deltas)
        if (!(d >= 0 && d < tmpl.v_write)) throw ModelError("optimize_delta: delta outside [0, v_write)");
    WritePattern wp;
    wp.pattern = Pattern::P10;

    std::vector<double> all = deltas;
    all.push_back(0.05);
    auto pts = parallel_map<DeltaPoint>(all.size(), jobs, [&](size_t i) {
        WriteConfig wc = tmpl;
        wc.delta = all[i];
        DeltaPoint p;
        p.delta = all[i];
        p.half_energy = write_energy(wp, wc, env).half_selected_avg;
        p.flip_time = pulsed_half_flip(wp, wc, env);
        p.feasible = p.delta > 0 && (p.flip_time < 0 || p.flip_time > wc.window);
        return p;
    });

    DeltaSearch out;
    out.baseline_energy = pts.back().half_energy;
    pts.pop_back();
    out.curve = pts;
    for (const auto& p : pts) {
        if (!p.feasible) continue;
        bool better = !out.found || p.half_energy < out.best_energy ||
                      (p.half_energy == out.best_energy && p.delta < out.best_delta);
        if (better) {
            out.found = true;
            out.best_delta = p.delta;
            out.best_energy = p.half_energy;
        }
    }
    return out;
}

VtSearch vt_modulation_search(const DiodeStack& stack, const DiodeOptions& opt, const WriteConfig& wc,
                              const WriteEnv& env, const std::vector<double>& ox2_scales, int jobs) {
    wc.validate();
    stack.validate();
    if (ox2_scales.empty()) throw ModelError("vt_modulation_search: no candidate scales");
    WritePattern wp;
    wp.pattern = Pattern::P10;
    double base_vt = threshold_voltage(stack).pos;
    double v = wc.v_write, d = wc.delta;
    double i_ref = cell_iv(env.diode, env.mtj.r_p, v).current;

    VtSearch out;
    out.baseline_energy = write_energy(wp, wc, env).energy_per_bit;

    auto cands = parallel_map<VtCandidate>(ox2_scales.size(), jobs, [&](size_t i) {
        DiodeStack s = stack;
        s.thickness_ox2 = stack.thickness_ox2 * ox2_scales[i];
        s.validate();
        DiodeOptions o = opt;
        if (o.v_on > 0 && base_vt != 0) o.v_on = opt.v_on * threshold_voltage(s).pos / base_vt;
        WriteEnv e = env;
        e.diode = build_diode_model(s, o);
        VtCandidate c{};
        c.ox2_scale = ox2_scales[i];
        c.v_on = e.diode.v_t_pos;
        c.i_low = cell_iv(e.diode, env.mtj.r_p, v - d).current;
        c.i_write = cell_iv(e.diode, env.mtj.r_p, v).current;
        c.i_high = cell_iv(e.diode, env.mtj.r_p, v + d).current;
        c.writes = c.i_write * env.mtj.r_p >= env.mtj.v_critical;
        c.off_low = c.i_low < 0.1 * c.i_write;
        c.bounded_high = c.i_high <= 2 * i_ref;
        c.energy_per_bit = c.writes ? write_energy(wp, wc, e).energy_per_bit : 0;
        return c;
    });
    out.candidates = cands;

    // best: largest saving among candidates passing all checks; ties toward the smaller V_T shift
    bool have_fallback = false;
    VtCandidate fallback{};
    for (const auto& c : cands) {
        if (!c.writes) continue;
        double saving = 1 - c.energy_per_bit / out.baseline_energy;
        bool ok = c.off_low && c.bounded_high && c.energy_per_bit <= out.baseline_energy;
        auto improves = [&](const VtCandidate& cur) {
            double cs = 1 - cur.energy_per_bit / out.baseline_energy;
            return saving > cs || (saving == cs && std::abs(c.v_on - env.diode.v_t_pos) <
                                                       std::abs(cur.v_on - env.diode.v_t_pos));
        };
        if (ok && (!out.found || improves(out.best))) {
            out.found = true;
            out.best = c;
        }
        if (!have_fallback || improves(fallback)) {
            have_fallback = true;
            fallback = c;
        }
    }
    if (out.found) {
        out.saving = 1 - out.best.energy_per_bit / out.baseline_energy;
    } else if (have_fallback) {
        // reported for diagnosis only
        out.best = fallback;
        out.saving = 1 - fallback.energy_per_bit / out.baseline_energy;
    }
    return out;
}

}  // namespace xbar
