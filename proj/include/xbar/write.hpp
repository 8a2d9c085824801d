#pragma once

#include <string>
#include <vector>

#include "xbar/solver.hpp"

namespace xbar {

enum class Pattern { P00, P11, P10, P01 };

const char* pattern_name(Pattern p);
Pattern parse_pattern(const std::string& s);

// Both targets sit on one word line: (row, col_a) and (row, col_b).
// The first digit of the pattern is written into (row, col_a).
struct WritePattern {
    Pattern pattern = Pattern::P10;
    int row = 0;
    int col_a = 0;
    int col_b = 1;
};

struct WriteConfig {
    double v_write = 2.1;
    double delta = 0.05;
    double pulse_period = 0.4e-9;
    double duty = 0.5;
    // the high half-period is centred on write onset
    double pulse_phase = -0.1e-9;
    double window = 0.8e-9;
    double clock = 1.25e9;
    double dt = 1e-12;
    double tail = 1.2e-9;     // relaxation time simulated after the window
    double horizon = 3.2e-9;  // how long the pulse is continued to time a half-selected flip
    void validate() const;
};

struct WriteEnv {
    CrossbarConfig array;
    MtjParams mtj;
    DiodeModel diode;
};

struct HalfClassReport {
    std::string name;
    int count = 0;
    double min_abs_mx = 1;     // deepest excursion toward the equator inside the window
    bool disturbed = false;    // crossed or ended away from its initial pole
    double flip_time = -1;     // with the pulse continued, -1 if none within the horizon
    double energy = 0;         // J, whole class, inside the window
};

struct WriteReport {
    Pattern pattern = Pattern::P10;
    double flip_time[2] = {-1, -1};
    bool targets_flipped = false;
    std::vector<HalfClassReport> half;
    double half_selected_flip_time = -1;  // earliest half-selected flip, -1 if none
    int min_reaccess_gap = 1;             // clock cycles
    double half_selected_retention = 0;   // retention at the half-selected operating bias
    double energy_total = 0;
    double energy_targets = 0;
    double energy_half = 0;
    double energy_per_bit = 0;
    double source_energy = 0;
    bool disturb_unsafe = false;  // plan degenerates to DC on the half-selected lines
    bool success = false;
};

struct EnergyReport {
    double energy_per_bit = 0;
    double total = 0;
    double targets = 0;
    double half_selected = 0;      // 2(N-1) cells on the target bit lines
    double half_word_line = 0;     // cells on the shared word line
    double unselected = 0;
    double half_selected_avg = 0;  // per half-selected cell
};

BiasPlan bias_plan_for_pattern(const WritePattern& wp, const WriteConfig& wc, const CrossbarConfig& cfg);
// initial states that make each half-selected cell vulnerable to its own bias
CellGrid write_grid(const WritePattern& wp, int n);

WriteReport simulate_write(const WritePattern& wp, const WriteConfig& wc, const WriteEnv& env,
                           const CellGrid& grid);
WriteReport simulate_write(const WritePattern& wp, const WriteConfig& wc, const WriteEnv& env);

EnergyReport write_energy(const WritePattern& wp, const WriteConfig& wc, const WriteEnv& env,
                          const CellGrid& grid);
EnergyReport write_energy(const WritePattern& wp, const WriteConfig& wc, const WriteEnv& env);

struct DeltaPoint {
    double delta;
    double half_energy;  // average per half-selected cell, J
    double flip_time;    // earliest pulsed half-selected flip, -1 if none
    bool feasible;
};

struct DeltaSearch {
    bool found = false;
    double best_delta = 0;
    double best_energy = 0;
    double baseline_energy = 0;  // at delta = 0.05 V
    std::vector<DeltaPoint> curve;
};

DeltaSearch optimize_delta(const WriteConfig& tmpl, const std::vector<double>& deltas,
                           const WriteEnv& env, int jobs = 1);

struct VtCandidate {
    double ox2_scale;     // oxide-2 thickness multiplier
    double v_on;          // resulting effective threshold
    double i_low, i_write, i_high;  // P-cell currents at V-delta, V, V+delta
    bool writes;          // MTJ bias reaches the critical value at V_write
    bool off_low;         // current at V-delta below 10% of the current at V
    bool bounded_high;    // current at V+delta within 2x the unmodulated write current
    double energy_per_bit;
};

struct VtSearch {
    bool found = false;
    VtCandidate best{};
    double baseline_energy = 0;
    double saving = 0;  // 1 - modulated / unmodulated P10 energy
    std::vector<VtCandidate> candidates;
};

VtSearch vt_modulation_search(const DiodeStack& stack, const DiodeOptions& opt,
                              const WriteConfig& wc, const WriteEnv& env,
                              const std::vector<double>& ox2_scales, int jobs = 1);

}  // namespace xbar
