#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "xbar/read.hpp"
#include "xbar/write.hpp"

using namespace xbar;

namespace {

ReadConfig read_cfg(int n, int bits, double delta) {
    ReadConfig rc;
    rc.array.n = n;
    rc.n_bits = bits;
    rc.delta = delta;
    rc.diode = build_diode_model(DiodeStack{}, DiodeOptions{});
    return rc;
}

Network read_net(const ReadConfig& rc, bool lumped, MagState sel = MagState::p()) {
    CellGrid g = CellGrid::worst_case(rc.array.n);
    for (int j = 0; j < rc.n_bits; ++j) g.at(0, j) = sel;
    BiasPlan plan = read_plan(rc);
    if (lumped) return lumped_read_equivalent(rc.array, rc.n_bits, g, plan, rc.diode, rc.mtj);
    return build_network(rc.array, g, plan, rc.diode, rc.mtj);
}

}  // namespace

TEST_CASE("pulse levels") {
    LineBias p = LineBias::pulse(2.15, 2.05, 0.4e-9, 0.5);
    CHECK(p.level_at(0) == 2.15);
    CHECK(p.level_at(0.1e-9) == 2.15);
    CHECK(p.level_at(0.25e-9) == 2.05);
    CHECK(p.level_at(0.4e-9) == 2.15);
    LineBias c = LineBias::pulse(2.15, 2.05, 0.4e-9, 0.5, -0.1e-9);
    CHECK(c.level_at(-0.05e-9) == 2.15);
    CHECK(c.level_at(0.05e-9) == 2.15);
    CHECK(c.level_at(0.15e-9) == 2.05);
    CHECK(c.level_at(0.35e-9) == 2.15);
    CHECK(LineBias::dc(1.05).level_at(3e-9) == 1.05);
}

TEST_CASE("network construction and classification") {
    ReadConfig rc = read_cfg(2, 1, 0);
    Network net = read_net(rc, false);
    CHECK(net.cells.size() == 4);
    CHECK(net.resistors.size() == 1);
    CHECK(net.nodes.size() == 5);

    for (int n : {4, 7, 12}) {
        ReadConfig r2 = read_cfg(n, 2, 0.1);
        Network full = read_net(r2, false);
        CHECK(full.count(CellClass::HalfBitLine) + full.count(CellClass::HalfWordLine) ==
              static_cast<size_t>(2 * (n - 1) + (n - 2)));
        CHECK(full.count(CellClass::Unselected) == static_cast<size_t>(n * n - 3 * n + 2));
        Network lump = read_net(r2, true);
        // the lumped form keeps one sensed column; the others are its mirror images
        CHECK(2 * lump.count(CellClass::HalfBitLine) == full.count(CellClass::HalfBitLine));
        CHECK(lump.count(CellClass::HalfWordLine) == full.count(CellClass::HalfWordLine));
        CHECK(lump.count(CellClass::Unselected) == full.count(CellClass::Unselected));
    }
    ReadConfig all = read_cfg(5, 5, 0.1);
    CHECK(read_net(all, true).count(CellClass::HalfWordLine) == 0);

    WriteConfig wc;
    CrossbarConfig cfg;
    cfg.n = 4;
    WritePattern wp;
    BiasPlan plan = bias_plan_for_pattern(wp, wc, cfg);
    CHECK(plan.rows[0].kind == LineKind::Floating);
    CHECK(plan.rows[2].kind == LineKind::Pulse);
    CHECK(plan.rows[2].level == doctest::Approx(2.15));
    CHECK(plan.rows[2].level_lo == doctest::Approx(2.05));

    CellGrid small(3, MagState::p());
    CHECK_THROWS_AS(build_network(cfg, small, plan, build_diode_model(DiodeStack{}), MtjParams{}), ModelError);
}

TEST_CASE("branch currents match the single-cell solution when every line is driven") {
    DiodeModel d = build_diode_model(DiodeStack{});
    MtjParams m;
    CrossbarConfig cfg;
    cfg.n = 3;
    CellGrid g(3, MagState::p());
    g.at(1, 2) = MagState::ap();
    g.at(2, 0) = MagState{0.3};
    BiasPlan plan;
    plan.rows = {LineBias::dc(0.0, true), LineBias::dc(0.9), LineBias::dc(-0.4)};
    plan.cols = {LineBias::dc(2.1, true), LineBias::dc(1.2), LineBias::dc(2.4)};
    Network net = build_network(cfg, g, plan, d, m);
    DcSolution s = solve_dc(net);
    for (size_t b = 0; b < net.cells.size(); ++b) {
        const auto& c = net.cells[b];
        double v = plan.cols[c.col].level - plan.rows[c.row].level;
        CHECK(std::abs(s.cell_current[b] - cell_iv(d, m, c.state, v).current) < 1e-12);
    }
}

TEST_CASE("symmetric two-bit read in a 2x2 array") {
    ReadConfig rc = read_cfg(2, 2, 0);
    Network net = read_net(rc, false);
    DcSolution s = solve_dc(net);
    CHECK(s.v[net.col_node[0]] == doctest::Approx(s.v[net.col_node[1]]).epsilon(1e-12));
}

TEST_CASE("full vs lumped read network") {
    for (int n : {4, 8, 16}) {
        for (double delta : {0.0, 0.35, 0.7}) {
            for (MagState sel : {MagState::p(), MagState::ap()}) {
                ReadConfig rc = read_cfg(n, 2, delta);
                Network full = read_net(rc, false, sel);
                Network lump = read_net(rc, true, sel);
                DcSolution a = solve_dc(full), b = solve_dc(lump);
                CAPTURE(n);
                CAPTURE(delta);
                CHECK(a.max_kcl < 1e-10);
                CHECK(b.max_kcl < 1e-10);
                double va = a.v[full.col_node[0]], vb = b.v[lump.col_node[0]];
                CHECK(std::abs(va - vb) / std::abs(va) < 1e-3);
                CHECK(a.i_rh == doctest::Approx(a.i_rs + a.i_h).epsilon(1e-9));
                CHECK(b.i_rh == doctest::Approx(b.i_rs + b.i_h).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("lumping rejects non-uniform classes") {
    ReadConfig rc = read_cfg(4, 2, 0);
    CellGrid g = CellGrid::worst_case(4);
    g.at(2, 3) = MagState::ap();
    CHECK_THROWS_AS(lumped_read_equivalent(rc.array, 2, g, read_plan(rc), rc.diode, rc.mtj), ModelError);
}

TEST_CASE("dc solve is deterministic and converged with a floating line") {
    WriteEnv env{CrossbarConfig{}, MtjParams{}, build_diode_model(DiodeStack{})};
    env.array.n = 6;
    WritePattern wp;
    WriteConfig wc;
    Network net = build_network(env.array, write_grid(wp, 6), bias_plan_for_pattern(wp, wc, env.array), env.diode,
                                env.mtj);
    DcSolution a = solve_dc(net), b = solve_dc(net);
    CHECK(a.max_kcl < 1e-10);
    CHECK(a.v == b.v);
    CHECK(a.cell_current == b.cell_current);
}

TEST_CASE("transient basics") {
    WriteEnv env{CrossbarConfig{}, MtjParams{}, build_diode_model(DiodeStack{})};
    env.array.n = 4;
    WritePattern wp;
    WriteConfig wc;
    CellGrid grid = write_grid(wp, 4);

    BiasPlan zero = bias_plan_for_pattern(wp, wc, env.array);
    zero.off_time = 0;
    TransientResult tz = solve_transient(build_network(env.array, grid, zero, env.diode, env.mtj), 0.3e-9, 1e-12);
    for (double e : tz.energy) CHECK(e == 0);
    for (size_t b = 0; b < tz.final_state.size(); ++b) CHECK(std::abs(tz.final_state[b].mx) == 1.0);

    BiasPlan plan = bias_plan_for_pattern(wp, wc, env.array);
    plan.off_time = wc.window;
    Network net = build_network(env.array, grid, plan, env.diode, env.mtj);
    TransientResult t1 = solve_transient(net, 1.2e-9, 1e-12);
    TransientResult t2 = solve_transient(net, 1.2e-9, 0.5e-12);
    for (double e : t1.energy) CHECK(e >= 0);
    double sum = t1.resistor_energy;
    for (double e : t1.energy) sum += e;
    CHECK(sum == doctest::Approx(t1.source_energy).epsilon(0.01));
    for (size_t b = 0; b < t1.cross_time.size(); ++b) {
        CHECK((t1.cross_time[b] < 0) == (t2.cross_time[b] < 0));
        if (t1.cross_time[b] > 0) CHECK(std::abs(t2.cross_time[b] / t1.cross_time[b] - 1) < 0.02);
    }
}
