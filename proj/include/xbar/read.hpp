#pragma once

#include <vector>

#include "xbar/solver.hpp"

namespace xbar {

struct ReadConfig {
    double v_read = 2.1;
    double delta = 0.0;
    int n_bits = 2;
    CrossbarConfig array;
    MtjParams mtj;
    DiodeModel diode;
    // full nodal solve up to this size, lumped above
    int full_limit = 64;
    void validate() const;
};

// Retention classes: half_row is the (N-1) class sharing a bit line with a
// selected cell, half_col the (N-2) class sharing the grounded word line.
struct ReadReport {
    int n = 0;
    bool lumped = false;
    double sense_voltage_p = 0;
    double sense_voltage_ap = 0;
    double margin = 0;
    double v_mtj_selected = 0;
    double retention_selected = 0;
    double retention_half_row = 0;
    double retention_half_col = 0;
    double retention_unselected = 0;
    double i_h = 0, i_rs = 0, i_rh = 0;
    double max_kcl = 0;
};

BiasPlan read_plan(const ReadConfig& rc);
ReadReport sense_margin(const ReadConfig& rc);
ReadReport sense_margin(const ReadConfig& rc, bool lumped);
ReadReport read_retention_report(const ReadConfig& rc);

struct ArraySizing {
    bool achievable = false;
    bool capped = false;  // search hit the size cap while still meeting the target
    int n_max = 0;
    std::vector<std::pair<int, double>> table;        // (N, margin)
    std::vector<std::pair<int, double>> bits_check;   // (n bits, margin) at n_max
};

ArraySizing max_supported_array(double target_margin, double delta, const ReadConfig& tmpl,
                                int n_cap = 1024);

}  // namespace xbar
