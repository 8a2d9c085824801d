#include "xbar/read.hpp"

#include <algorithm>
#include <cmath>

namespace xbar {

void ReadConfig::validate() const {
    array.validate();
    if (!(n_bits > 0 && n_bits <= array.n)) throw ModelError("read: need 0 < n_bits <= N");
    if (!(v_read > 0)) throw ModelError("read: v_read must be positive");
    if (!(delta >= 0)) throw ModelError("read: delta must be non-negative");
    if (!(v_read / 2 + delta < v_read)) throw ModelError("read: v_read/2 + delta must stay below v_read");
}

BiasPlan read_plan(const ReadConfig& rc) {
    rc.validate();
    int n = rc.array.n;
    double half = rc.v_read / 2 + rc.delta;
    BiasPlan plan;
    plan.rows.assign(n, LineBias::dc(half));
    plan.cols.assign(n, LineBias::dc(half));
    plan.rows[0] = LineBias::dc(0.0, true);
    for (int j = 0; j < rc.n_bits; ++j) plan.cols[j] = LineBias::sense(rc.v_read, rc.array.r_s);
    return plan;
}

namespace {

struct ReadPoint {
    double sense;   // bit-line voltage of the worst column
    int column;
    DcSolution sol;
};

Network read_network(const ReadConfig& rc, const BiasPlan& plan, MagState selected, bool lumped) {
    CellGrid grid = CellGrid::worst_case(rc.array.n);
    for (int j = 0; j < rc.n_bits; ++j) grid.at(0, j) = selected;
    if (lumped) return lumped_read_equivalent(rc.array, rc.n_bits, grid, plan, rc.diode, rc.mtj);
    return build_network(rc.array, grid, plan, rc.diode, rc.mtj);
}

double class_worst_vmtj(const Network& net, const DcSolution& sol, CellClass c) {
    double worst = 0;
    bool any = false;
    for (size_t b = 0; b < net.cells.size(); ++b) {
        if (net.cells[b].cls != c) continue;
        any = true;
        double v = std::abs(sol.cell_current[b]) * mtj_resistance(net.mtj, net.cells[b].state);
        worst = std::max(worst, v);
    }
    return any ? worst : -1;
}

}  // namespace

ReadReport sense_margin(const ReadConfig& rc, bool lumped) {
    BiasPlan plan = read_plan(rc);
    ReadReport rep;
    rep.n = rc.array.n;
    rep.lumped = lumped;

    Network net_p = read_network(rc, plan, MagState::p(), lumped);
    Network net_ap = read_network(rc, plan, MagState::ap(), lumped);
    DcSolution sp = solve_dc(net_p);
    DcSolution sa = solve_dc(net_ap);

    // margin per selected column, minimum taken
    double best = 0;
    bool first = true;
    for (int j = 0; j < rc.n_bits; ++j) {
        int node = net_p.col_node[j];
        if (node < 0) continue;
        double m = sa.v[node] - sp.v[node];
        if (first || m < best) {
            best = m;
            rep.sense_voltage_p = sp.v[node];
            rep.sense_voltage_ap = sa.v[node];
            first = false;
        }
    }
    rep.margin = rep.sense_voltage_ap - rep.sense_voltage_p;
    rep.i_h = sp.i_h;
    rep.i_rs = sp.i_rs;
    rep.i_rh = sp.i_rh;
    rep.max_kcl = std::max(sp.max_kcl, sa.max_kcl);

    const MtjParams& mp = rc.mtj;
    double vs = class_worst_vmtj(net_p, sp, CellClass::Selected);
    rep.v_mtj_selected = vs;
    rep.retention_selected = retention_time(mp, vs);
    double vr = class_worst_vmtj(net_p, sp, CellClass::HalfBitLine);
    double vc = class_worst_vmtj(net_p, sp, CellClass::HalfWordLine);
    double vu = class_worst_vmtj(net_p, sp, CellClass::Unselected);
    rep.retention_half_row = vr < 0 ? 0 : retention_time(mp, vr);
    rep.retention_half_col = vc < 0 ? 0 : retention_time(mp, vc);
    rep.retention_unselected = vu < 0 ? 0 : retention_time(mp, vu);
    return rep;
}

ReadReport sense_margin(const ReadConfig& rc) {
    return sense_margin(rc, rc.array.n > rc.full_limit);
}

ReadReport read_retention_report(const ReadConfig& rc) { return sense_margin(rc); }

ArraySizing max_supported_array(double target, double delta, const ReadConfig& tmpl, int n_cap) {
    if (!(target > 0)) throw ModelError("max_supported_array: target must be positive");
    ArraySizing out;
    auto margin_at = [&](int n, int bits) {
        ReadConfig rc = tmpl;
        rc.delta = delta;
        rc.array.n = n;
        rc.n_bits = std::min(bits, n);
        double m = sense_margin(rc, true).margin;
        out.table.emplace_back(n, m);
        return m;
    };
    int lo = 4;
    if (margin_at(lo, tmpl.n_bits) < target) return out;
    out.achievable = true;
    int hi = n_cap;
    if (margin_at(hi, tmpl.n_bits) >= target) {
        lo = hi;
        out.capped = true;
    } else {
        while (hi - lo > 1) {
            int mid = lo + (hi - lo) / 2;
            (margin_at(mid, tmpl.n_bits) >= target ? lo : hi) = mid;
        }
    }
    out.n_max = lo;
    for (int bits : {2, std::max(2, lo / 2), lo}) {
        ReadConfig rc = tmpl;
        rc.delta = delta;
        rc.array.n = lo;
        rc.n_bits = bits;
        out.bits_check.emplace_back(bits, sense_margin(rc, true).margin);
    }
    std::sort(out.table.begin(), out.table.end());
    out.table.erase(std::unique(out.table.begin(), out.table.end()), out.table.end());
    return out;
}

}  // namespace xbar
