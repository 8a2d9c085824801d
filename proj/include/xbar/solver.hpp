#pragma once

#include <limits>
#include <vector>

#include "xbar/device.hpp"

namespace xbar {

struct CrossbarConfig {
    int n = 50;
    double r_s = 16e3;
    void validate() const;
};

// Rows are word lines, columns are bit lines. Cell voltage is V_col - V_row.
struct CellGrid {
    int n = 0;
    std::vector<MagState> state;

    CellGrid() = default;
    CellGrid(int n_, MagState s) : n(n_), state(static_cast<size_t>(n_) * n_, s) {}
    MagState& at(int row, int col) { return state[static_cast<size_t>(row) * n + col]; }
    const MagState& at(int row, int col) const { return state[static_cast<size_t>(row) * n + col]; }
    // every sneak-path cell in the low-resistance state
    static CellGrid worst_case(int n) { return CellGrid(n, MagState::p()); }
};

enum class LineKind { DC, Floating, Pulse, Sense };

struct LineBias {
    LineKind kind = LineKind::DC;
    double level = 0;     // DC level, pulse high level, or sense source level
    double level_lo = 0;  // pulse low level
    double period = 0;
    double duty = 0.5;
    double phase = 0;
    double r_s = 0;       // sense resistor between the source and the line
    bool selected = false;

    static LineBias dc(double v, bool sel = false) { return {LineKind::DC, v, 0, 0, 0.5, 0, 0, sel}; }
    static LineBias floating(bool sel = false) { return {LineKind::Floating, 0, 0, 0, 0.5, 0, 0, sel}; }
    static LineBias pulse(double hi, double lo, double period, double duty, double phase = 0) {
        return {LineKind::Pulse, hi, lo, period, duty, phase, 0, false};
    }
    static LineBias sense(double v, double r) { return {LineKind::Sense, v, 0, 0, 0.5, 0, r, true}; }

    double level_at(double t) const;
};

struct BiasPlan {
    std::vector<LineBias> rows;
    std::vector<LineBias> cols;
    // every source drops to 0 V from this instant on
    double off_time = std::numeric_limits<double>::infinity();
    void validate(int n) const;
};

enum class CellClass { Selected, HalfBitLine, HalfWordLine, Unselected };

struct CellBranch {
    int col_node;
    int row_node;
    int row;
    int col;
    double multiplicity;
    MagState state;
    CellClass cls;
};

struct ResistorBranch {
    int a;
    int b;
    double r;
};

struct NodeInfo {
    bool unknown = false;
    int line = -1;  // index into plan rows (0..n-1) or cols (n..2n-1); -1 for source-only nodes
    LineBias bias;  // for fixed nodes: the level program
};

struct Network {
    std::vector<NodeInfo> nodes;
    std::vector<CellBranch> cells;
    std::vector<ResistorBranch> resistors;
    std::vector<int> row_node;
    std::vector<int> col_node;
    int sense_node = -1;  // first sensed line, for the grouped currents
    double off_time = std::numeric_limits<double>::infinity();
    DiodeModel diode;
    MtjParams mtj;

    double source_level(int node, double t) const;
    size_t count(CellClass c) const;
};

struct DcSolution {
    std::vector<double> v;              // node voltages
    std::vector<double> cell_current;   // per branch, single cell, col -> row
    std::vector<double> resistor_current;  // a -> b
    double i_h = 0;   // into the sense node from the half-selected cells on it
    double i_rs = 0;  // into the sense node through R_s
    double i_rh = 0;  // out of the sense node through the selected cell(s)
    int iterations = 0;
    double max_kcl = 0;
    std::vector<double> residual_history;
};

Network build_network(const CrossbarConfig& cfg, const CellGrid& grid, const BiasPlan& plan,
                      const DiodeModel& diode, const MtjParams& mtj);

Network lumped_read_equivalent(const CrossbarConfig& cfg, int n_selected, const CellGrid& grid,
                               const BiasPlan& plan, const DiodeModel& diode, const MtjParams& mtj);

DcSolution solve_dc(const Network& net, double t = 0, const std::vector<double>* guess = nullptr);

struct TransientOptions {
    std::vector<int> watch;     // cell branch indices to trace; empty = all non-unselected cells
    int record_every = 1;
};

struct TransientResult {
    std::vector<double> t;
    std::vector<int> watch;
    std::vector<std::vector<double>> mx;       // [watch][sample]
    std::vector<std::vector<double>> current;  // [watch][sample]
    std::vector<double> cross_time;            // per branch, first mx = 0 crossing, -1 if none
    std::vector<double> energy;                // per branch, all cells of the branch, J
    std::vector<MagState> final_state;         // per branch
    double source_energy = 0;
    double resistor_energy = 0;
};

TransientResult solve_transient(const Network& net, double duration, double dt,
                                const TransientOptions& opt = {});

}  // namespace xbar
