#pragma once

#include <string>
#include <vector>

#include "xbar/config.hpp"

namespace xbar {

class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AnchorResidual {
    std::string name;
    double target;
    double achieved;
    double rel_error;
    double tolerance;
    bool ok;
};

struct Calibration {
    double area = 0;
    double v_critical = 0;
    double dynamic_time_const = 0;
    double relax_p = 0;
    double relax_ap = 0;
    std::vector<AnchorResidual> residuals;
    bool ok = true;

    void apply(Config& c) const;
    // key = value text, loadable with --config
    std::string to_text() const;
};

// Flip time of a lone cell (selector in series) under a drive waveform; -1 if none.
double single_cell_flip(const MtjParams& mtj, const DiodeModel& diode,
                        const std::function<double(double)>& v, const MagState& start,
                        double horizon, double dt = 1e-12);
// The waveforms seen by the two half-selected sets of a complementary write.
double pulsed_flip_01(const Config& c, double dt = 1e-12);
double pulsed_flip_10(const Config& c, double dt = 1e-12);
double dc_flip(const Config& c, double dt = 1e-12);

// Selected-cell retention in years at (read_n, read_v, delta).
double selected_retention_years(const Config& c, double delta);

Calibration evaluate_anchors(const Config& c);
// Fits the enabled anchors. Throws CalibrationError when a residual exceeds its tolerance.
Calibration calibrate(const Config& c);

constexpr double seconds_per_year = 3.15576e7;

}  // namespace xbar
