#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace xbar {

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual)
        : std::runtime_error(what), last_residual(residual) {}
    double last_residual;
};

// Metal/oxide/oxide/metal selector stack. Energies in eV, thicknesses in nm.
struct DiodeStack {
    double work_function_te = 4.0;
    double work_function_be = 4.0;
    double affinity_ox1 = 3.5;   // TaOx
    double affinity_ox2 = 2.3;   // MgO
    double dielectric_ox1 = 22.0;
    double dielectric_ox2 = 10.0;
    double thickness_ox1 = 1.5;
    double thickness_ox2 = 0.1;
    double mass_ratio = 0.26;
    double area = 7.8744852662e-17; // cm^2

    double barrier_te_ox1() const { return work_function_te - affinity_ox1; }
    double barrier_te_ox2() const { return work_function_te - affinity_ox2; }
    double barrier_be_ox1() const { return work_function_be - affinity_ox1; }
    double barrier_be_ox2() const { return work_function_be - affinity_ox2; }
    // share of the applied bias dropped across oxide-1 (series capacitors)
    double ox1_fraction() const;
    void validate() const;
};

struct Thresholds {
    double pos;
    double neg;
};

Thresholds threshold_voltage(const DiodeStack& stack);

double fn_constant_a(double barrier, double mass_ratio);
double fn_constant_b(double barrier, double mass_ratio);
double fn_current_density(double e_field, double barrier, double mass_ratio);
double dt_current_density(double v_ox, double e_field, double barrier, double mass_ratio);

// Knobs that are not fixed by the stack alone.
struct DiodeOptions {
    double v_on = 1.7292173;       // effective turn-on bias, V; <= 0 uses threshold_voltage()
    double on_barrier = 5.6077851; // effective barrier of the steep regions II/IV, eV
    double reverse_transmission = -1.0; // < 0: WKB estimate through oxide-2
};

struct DiodeRegion {
    double a = 0;       // A/V^2
    double b = 0;       // V/cm
    double barrier = 0; // eV
    double scale = 1;
};

// Regions: 0 = I (0 < v < v_t_pos), 1 = II (v >= v_t_pos),
//          2 = III (v_t_neg < v < 0), 3 = IV (v <= v_t_neg).
struct DiodeModel {
    DiodeRegion region[4];
    double v_t_pos = 0;
    double v_t_neg = 0;
    double area = 0;
    double field_per_volt = 0; // V/cm of oxide-1 field per volt of bias
    double ox1_fraction = 0;
    double mass_ratio = 0;

    double current(double v) const;
    // returns current, writes dI/dV
    double current(double v, double& g) const;
};

DiodeModel build_diode_model(const DiodeStack& stack, const DiodeOptions& opt = {});
double diode_current(const DiodeModel& model, double v);

struct MtjParams {
    double r_p = 6e3;
    double r_ap = 12e3;
    double thermal_stability = 60.0;
    double volume = 2e-18;
    double v_critical = 0.161976892591;
    double attempt_time = 1e-9;
    double dynamic_time_const = 1.21467378643e-10;
    // relaxation strength below threshold, for cells sitting near P and near AP
    double relax_p = 1.51815174058;
    double relax_ap = 3.36716060793;
    // critical bias for AP->P relative to v_critical
    double critical_ratio_ap_p = 1.05;
    double theta0 = 0.05; // rad, floor of the torque lever arm

    void validate() const;
};

enum class Logical { P, AP };

struct MagState {
    double mx = 1.0;
    Logical logical() const { return mx >= 0 ? Logical::P : Logical::AP; }
    static MagState p() { return {1.0}; }
    static MagState ap() { return {-1.0}; }
};

double mtj_resistance(const MtjParams& params, const MagState& state);

struct CellPoint {
    double current = 0;
    double v_mtj = 0;
    double v_diode = 0;
    double conductance = 0; // dI/dV_cell
};

CellPoint cell_iv(const DiodeModel& model, double r_mtj, double v_cell);
CellPoint cell_iv(const DiodeModel& model, const MtjParams& params, const MagState& state,
                  double v_cell);

double write_latency(const MtjParams& params, double v_mtj);
double retention_time(const MtjParams& params, double v_mtj);

// Macrospin law in polar form, mx = cos(theta). v_mtj is signed:
// positive pushes toward AP (theta -> pi).
double theta_rate(const MtjParams& params, double theta, double v_mtj);
double advance_theta(const MtjParams& params, double theta, double dt,
                     const std::function<double(double t, double theta)>& v_mtj, double t);
double theta_of(const MagState& s);

struct MagSample {
    double t;
    double mx;
    double current;
};

struct MagnetizationDrive {
    std::function<double(double)> voltage;
    // null: voltage is applied across the MTJ alone
    const DiodeModel* diode = nullptr;
};

struct MagTrace {
    std::vector<MagSample> samples;
    double cross_time = -1; // first mx = 0 crossing, < 0 if none
};

MagTrace simulate_magnetization(const MtjParams& params, const MagnetizationDrive& drive,
                                double duration, double dt, const MagState& initial);

}  // namespace xbar
