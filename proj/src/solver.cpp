#include "xbar/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

namespace xbar {

void CrossbarConfig::validate() const {
    if (n < 2) throw ModelError("crossbar: n must be at least 2");
    if (!(r_s > 0)) throw ModelError("crossbar: r_s must be positive");
}

double LineBias::level_at(double t) const {
    switch (kind) {
        case LineKind::Pulse: {
            double s = (t - phase) / period;
            double frac = s - std::floor(s + 1e-9);
            return frac < duty - 1e-9 ? level : level_lo;
        }
        case LineKind::Floating:
            return 0;
        default:
            return level;
    }
}

void BiasPlan::validate(int n) const {
    if (static_cast<int>(rows.size()) != n || static_cast<int>(cols.size()) != n)
        throw ModelError("bias plan: dimension mismatch");
    bool driven = false;
    for (const auto* side : {&rows, &cols})
        for (const auto& b : *side) {
            if (b.kind == LineKind::Pulse && !(b.period > 0 && b.duty > 0 && b.duty < 1))
                throw ModelError("bias plan: pulse needs period > 0 and duty in (0,1)");
            if (b.kind == LineKind::Sense && !(b.r_s > 0))
                throw ModelError("bias plan: sense resistor must be positive");
            if (b.kind != LineKind::Floating) driven = true;
        }
    if (!driven) throw ModelError("bias plan: every line is floating");
}

double Network::source_level(int node, double t) const {
    if (t >= off_time) return 0;
    return nodes[node].bias.level_at(t);
}

size_t Network::count(CellClass c) const {
    double s = 0;
    for (const auto& b : cells)
        if (b.cls == c) s += b.multiplicity;
    return static_cast<size_t>(std::llround(s));
}

namespace {

CellClass classify(bool row_sel, bool col_sel) {
    if (row_sel && col_sel) return CellClass::Selected;
    if (col_sel) return CellClass::HalfBitLine;
    if (row_sel) return CellClass::HalfWordLine;
    return CellClass::Unselected;
}

int add_line(Network& net, const LineBias& b, int line) {
    NodeInfo node;
    node.line = line;
    node.bias = b;
    node.unknown = b.kind == LineKind::Floating || b.kind == LineKind::Sense;
    int id = static_cast<int>(net.nodes.size());
    net.nodes.push_back(node);
    if (b.kind == LineKind::Sense) {
        NodeInfo src;
        src.bias = LineBias::dc(b.level);
        net.nodes.push_back(src);
        net.resistors.push_back({id + 1, id, b.r_s});
        if (net.sense_node < 0) net.sense_node = id;
    }
    return id;
}

}  // namespace

Network build_network(const CrossbarConfig& cfg, const CellGrid& grid, const BiasPlan& plan,
                      const DiodeModel& diode, const MtjParams& mtj) {
    cfg.validate();
    plan.validate(cfg.n);
    if (grid.n != cfg.n) throw ModelError("build_network: grid does not match array size");
    Network net;
    net.diode = diode;
    net.mtj = mtj;
    net.off_time = plan.off_time;
    int n = cfg.n;
    for (int i = 0; i < n; ++i) net.row_node.push_back(add_line(net, plan.rows[i], i));
    for (int j = 0; j < n; ++j) net.col_node.push_back(add_line(net, plan.cols[j], n + j));
    net.cells.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            net.cells.push_back({net.col_node[j], net.row_node[i], i, j, 1.0, grid.at(i, j),
                                 classify(plan.rows[i].selected, plan.cols[j].selected)});
    return net;
}

Network lumped_read_equivalent(const CrossbarConfig& cfg, int n_selected, const CellGrid& grid,
                               const BiasPlan& plan, const DiodeModel& diode,
                               const MtjParams& mtj) {
    cfg.validate();
    plan.validate(cfg.n);
    int n = cfg.n;
    std::vector<int> sel_rows, sel_cols, other_rows, other_cols;
    for (int i = 0; i < n; ++i) (plan.rows[i].selected ? sel_rows : other_rows).push_back(i);
    for (int j = 0; j < n; ++j) (plan.cols[j].selected ? sel_cols : other_cols).push_back(j);
    if (static_cast<int>(sel_cols.size()) != n_selected || sel_rows.size() != 1)
        throw ModelError("lumped: plan must select one word line and n_selected bit lines");
    if (n_selected < 1 || n_selected > n) throw ModelError("lumped: bad n_selected");

    auto same = [](const LineBias& a, const LineBias& b) {
        return a.kind == b.kind && a.level == b.level && a.level_lo == b.level_lo &&
               a.period == b.period && a.duty == b.duty && a.phase == b.phase && a.r_s == b.r_s;
    };
    for (int j : sel_cols)
        if (!same(plan.cols[j], plan.cols[sel_cols[0]]))
            throw ModelError("lumped: selected bit lines are not identically biased");
    for (int i : other_rows)
        if (!same(plan.rows[i], plan.rows[other_rows[0]]))
            throw ModelError("lumped: unselected word lines are not identically biased");
    for (int j : other_cols)
        if (!same(plan.cols[j], plan.cols[other_cols[0]]))
            throw ModelError("lumped: unselected bit lines are not identically biased");

    // class states must be uniform for the collapse to be exact
    MagState cls_state[4];
    bool seen[4] = {false, false, false, false};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int c = static_cast<int>(classify(plan.rows[i].selected, plan.cols[j].selected));
            if (!seen[c]) {
                seen[c] = true;
                cls_state[c] = grid.at(i, j);
            } else if (cls_state[c].mx != grid.at(i, j).mx) {
                throw ModelError("lumped: cell states within a class are not uniform");
            }
        }

    Network net;
    net.diode = diode;
    net.mtj = mtj;
    net.off_time = plan.off_time;
    int r0 = sel_rows[0], c0 = sel_cols[0];
    int sense = add_line(net, plan.cols[c0], n + c0);
    int wl = add_line(net, plan.rows[r0], r0);
    int orow = other_rows.empty() ? -1 : add_line(net, plan.rows[other_rows[0]], other_rows[0]);
    int ocol = other_cols.empty() ? -1 : add_line(net, plan.cols[other_cols[0]], n + other_cols[0]);
    net.row_node.assign(n, -1);
    net.col_node.assign(n, -1);
    net.row_node[r0] = wl;
    net.col_node[c0] = sense;
    double N = n, m = n_selected;
    net.cells.push_back({sense, wl, r0, c0, 1.0, cls_state[0], CellClass::Selected});
    if (orow >= 0)
        net.cells.push_back({sense, orow, other_rows[0], c0, N - 1, cls_state[1],
                             CellClass::HalfBitLine});
    if (ocol >= 0)
        net.cells.push_back({ocol, wl, r0, other_cols[0], N - m, cls_state[2],
                             CellClass::HalfWordLine});
    if (orow >= 0 && ocol >= 0)
        net.cells.push_back({ocol, orow, other_rows[0], other_cols[0], (N - 1) * (N - m),
                             cls_state[3], CellClass::Unselected});
    return net;
}

namespace {

struct Kcl {
    const Network& net;
    std::vector<int> unk;     // node -> unknown index or -1
    std::vector<int> active;  // cell branches touching an unknown node
    std::vector<double> r;    // MTJ resistance per branch

    Kcl(const Network& n, const std::vector<MagState>* states = nullptr) : net(n) {
        unk.assign(net.nodes.size(), -1);
        int k = 0;
        for (size_t i = 0; i < net.nodes.size(); ++i)
            if (net.nodes[i].unknown) unk[i] = k++;
        r.resize(net.cells.size());
        for (size_t b = 0; b < net.cells.size(); ++b) {
            const auto& c = net.cells[b];
            r[b] = mtj_resistance(net.mtj, states ? (*states)[b] : c.state);
            if (unk[c.col_node] >= 0 || unk[c.row_node] >= 0) active.push_back(static_cast<int>(b));
        }
    }
    int size() const {
        int k = 0;
        for (int u : unk) k += u >= 0;
        return k;
    }

    // outflow residual per unknown node; optional Jacobian
    void eval(const std::vector<double>& v, Eigen::VectorXd& f,
              std::vector<Eigen::Triplet<double>>* jac) const {
        f.setZero(size());
        auto stamp = [&](int a, int b, double i, double g) {
            int ua = unk[a], ub = unk[b];
            if (ua >= 0) f[ua] += i;
            if (ub >= 0) f[ub] -= i;
            if (!jac) return;
            if (ua >= 0) jac->emplace_back(ua, ua, g);
            if (ub >= 0) jac->emplace_back(ub, ub, g);
            if (ua >= 0 && ub >= 0) {
                jac->emplace_back(ua, ub, -g);
                jac->emplace_back(ub, ua, -g);
            }
        };
        for (int b : active) {
            const auto& c = net.cells[b];
            CellPoint p = cell_iv(net.diode, r[b], v[c.col_node] - v[c.row_node]);
            stamp(c.col_node, c.row_node, c.multiplicity * p.current, c.multiplicity * p.conductance);
        }
        for (const auto& res : net.resistors) {
            if (unk[res.a] < 0 && unk[res.b] < 0) continue;
            stamp(res.a, res.b, (v[res.a] - v[res.b]) / res.r, 1 / res.r);
        }
    }
};

double inf_norm(const Eigen::VectorXd& f) { return f.size() ? f.cwiseAbs().maxCoeff() : 0.0; }

constexpr double kKclTol = 1e-10;
constexpr int kMaxIter = 200;

// Newton on the unknown node voltages; v holds fixed levels on entry.
void newton(const Kcl& kcl, std::vector<double>& v, DcSolution& sol) {
    const Network& net = kcl.net;
    int m = kcl.size();
    Eigen::VectorXd f;
    std::vector<Eigen::Triplet<double>> trip;
    kcl.eval(v, f, &trip);
    double norm = inf_norm(f);
    sol.residual_history.push_back(norm);
    int it = 0;
    while (norm >= kKclTol) {
        if (it >= kMaxIter)
            throw SolverError("solve_dc: no convergence after 200 iterations", norm);
        Eigen::SparseMatrix<double> jac(m, m);
        jac.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(jac);
        if (lu.info() != Eigen::Success) throw SolverError("solve_dc: singular Jacobian", norm);
        Eigen::VectorXd dx = lu.solve(-f);
        std::vector<double> trial = v;
        double alpha = 1;
        Eigen::VectorXd ft;
        double tn = norm;
        for (int h = 0; h < 40; ++h) {
            for (size_t i = 0; i < net.nodes.size(); ++i)
                if (kcl.unk[i] >= 0) trial[i] = v[i] + alpha * dx[kcl.unk[i]];
            kcl.eval(trial, ft, nullptr);
            tn = inf_norm(ft);
            if (tn < norm) break;
            alpha *= 0.5;
        }
        v = trial;
        trip.clear();
        kcl.eval(v, f, &trip);
        norm = inf_norm(f);
        sol.residual_history.push_back(norm);
        ++it;
    }
    sol.iterations = it;
    sol.max_kcl = norm;
}

std::vector<double> initial_voltages(const Network& net, double t,
                                     const std::vector<double>* guess) {
    std::vector<double> v(net.nodes.size(), 0.0);
    double sum = 0;
    int cnt = 0;
    for (size_t i = 0; i < net.nodes.size(); ++i)
        if (!net.nodes[i].unknown) {
            v[i] = net.source_level(static_cast<int>(i), t);
            sum += v[i];
            ++cnt;
        }
    double mean = cnt ? sum / cnt : 0;
    for (size_t i = 0; i < net.nodes.size(); ++i)
        if (net.nodes[i].unknown) v[i] = guess ? (*guess)[i] : mean;
    return v;
}

}  // namespace

DcSolution solve_dc(const Network& net, double t, const std::vector<double>* guess) {
    DcSolution sol;
    Kcl kcl(net);
    sol.v = initial_voltages(net, t, guess);
    newton(kcl, sol.v, sol);

    sol.cell_current.resize(net.cells.size());
    for (size_t b = 0; b < net.cells.size(); ++b) {
        const auto& c = net.cells[b];
        double dv = sol.v[c.col_node] - sol.v[c.row_node];
        sol.cell_current[b] = dv == 0 ? 0.0 : cell_iv(net.diode, kcl.r[b], dv).current;
    }
    for (const auto& r : net.resistors)
        sol.resistor_current.push_back((sol.v[r.a] - sol.v[r.b]) / r.r);

    if (net.sense_node >= 0) {
        int s = net.sense_node;
        for (size_t k = 0; k < net.resistors.size(); ++k)
            if (net.resistors[k].b == s) sol.i_rs += sol.resistor_current[k];
        for (size_t b = 0; b < net.cells.size(); ++b) {
            const auto& c = net.cells[b];
            if (c.col_node != s) continue;
            double i = c.multiplicity * sol.cell_current[b];
            if (c.cls == CellClass::Selected)
                sol.i_rh += i;
            else
                sol.i_h -= i;
        }
    }
    return sol;
}

TransientResult solve_transient(const Network& net, double duration, double dt,
                                const TransientOptions& opt) {
    if (!(dt > 0) || dt > 1e-12 * (1 + 1e-9)) throw ModelError("solve_transient: dt must be in (0, 1 ps]");
    TransientResult out;
    size_t nb = net.cells.size();
    std::vector<double> theta(nb);
    for (size_t b = 0; b < nb; ++b) theta[b] = theta_of(net.cells[b].state);
    out.cross_time.assign(nb, -1);
    out.energy.assign(nb, 0);
    out.watch = opt.watch;
    if (out.watch.empty())
        for (size_t b = 0; b < nb; ++b)
            if (net.cells[b].cls != CellClass::Unselected) out.watch.push_back(static_cast<int>(b));
    out.mx.resize(out.watch.size());
    out.current.resize(out.watch.size());

    std::vector<double> v;
    std::vector<double> cur(nb, 0.0);
    std::vector<MagState> states(nb);
    long steps = std::lround(duration / dt);
    int rec = std::max(1, opt.record_every);
    for (long n = 0; n <= steps; ++n) {
        double t = n * dt;
        for (size_t b = 0; b < nb; ++b) states[b] = {std::cos(theta[b])};
        Kcl kcl(net, &states);
        DcSolution sol;
        std::vector<double> prev = v;
        v = initial_voltages(net, t, prev.empty() ? nullptr : &prev);
        try {
            newton(kcl, v, sol);
        } catch (const SolverError& e) {
            throw SolverError("solve_transient: DC failure at t = " + std::to_string(t) + " s: " +
                                  e.what(),
                              e.last_residual);
        }
        for (size_t b = 0; b < nb; ++b) {
            const auto& c = net.cells[b];
            double dv = v[c.col_node] - v[c.row_node];
            cur[b] = dv == 0 ? 0.0 : cell_iv(net.diode, kcl.r[b], dv).current;
        }
        if (n % rec == 0) {
            out.t.push_back(t);
            for (size_t w = 0; w < out.watch.size(); ++w) {
                out.mx[w].push_back(std::cos(theta[out.watch[w]]));
                out.current[w].push_back(cur[out.watch[w]]);
            }
        }
        if (n == steps) break;

        // energy over [t, t + dt] with the step-start operating point
        for (size_t b = 0; b < nb; ++b) {
            const auto& c = net.cells[b];
            double dv = v[c.col_node] - v[c.row_node];
            double p = c.multiplicity * dv * cur[b] * dt;
            out.energy[b] += p;
            if (!net.nodes[c.col_node].unknown) out.source_energy += v[c.col_node] * c.multiplicity * cur[b] * dt;
            if (!net.nodes[c.row_node].unknown) out.source_energy -= v[c.row_node] * c.multiplicity * cur[b] * dt;
        }
        for (const auto& r : net.resistors) {
            double i = (v[r.a] - v[r.b]) / r.r;
            out.resistor_energy += (v[r.a] - v[r.b]) * i * dt;
            if (!net.nodes[r.a].unknown) out.source_energy += v[r.a] * i * dt;
            if (!net.nodes[r.b].unknown) out.source_energy -= v[r.b] * i * dt;
        }

        for (size_t b = 0; b < nb; ++b) {
            const auto& c = net.cells[b];
            double dv = v[c.col_node] - v[c.row_node];
            double th = theta[b];
            if (dv == 0 && (th == 0 || th == M_PI)) continue;
            double i0 = cur[b];
            double r0 = kcl.r[b];
            auto vm = [&](double, double x) {
                double r = mtj_resistance(net.mtj, {std::cos(x)});
                if (x == th) return i0 * r0;
                return dv == 0 ? 0.0 : cell_iv(net.diode, r, dv).current * r;
            };
            double next = advance_theta(net.mtj, th, dt, vm, t);
            double a = std::cos(th), z = std::cos(next);
            if (out.cross_time[b] < 0 && (a > 0) != (z > 0) && a != z)
                out.cross_time[b] = t + dt * a / (a - z);
            theta[b] = next;
        }
    }
    out.final_state.resize(nb);
    for (size_t b = 0; b < nb; ++b) out.final_state[b] = {std::cos(theta[b])};
    return out;
}

}  // namespace xbar
