#include "xbar/device.hpp"

#include <algorithm>
#include <cmath>

namespace xbar {

namespace {

constexpr double kNmToCm = 1e-7;
constexpr double kElectronMass = 9.1093837e-31;
constexpr double kCharge = 1.602176634e-19;
constexpr double kHbar = 1.054571817e-34;

// FN + DT density and its derivative with respect to the bias magnitude x
double region_density(const DiodeRegion& r, double k, double f, double x, double* dj_dx) {
    if (x <= 0) {
        if (dj_dx) *dj_dx = 0;
        return 0;
    }
    double e = k * x;
    double t1 = r.a * e * e * std::exp(-r.b / e);
    double ratio = f * x / r.barrier;
    double g, dg = 0;
    if (ratio < 1) {
        double p = std::pow(ratio, 1.5);
        g = -r.b * (1 - p) / e;
        dg = r.b * (1 - p) / (k * x * x) + (r.b / e) * 1.5 * std::sqrt(ratio) * (f / r.barrier);
    } else {
        g = 0;
    }
    double t2 = r.a * e * e * std::exp(g);
    if (dj_dx) {
        double d1 = k * r.a * std::exp(-r.b / e) * (2 * e + r.b);
        double d2 = t2 * (2 / x + dg);
        *dj_dx = r.scale * (d1 + d2);
    }
    return r.scale * (t1 + t2);
}

DiodeRegion make_region(double barrier, double mass_ratio) {
    DiodeRegion r;
    r.barrier = barrier;
    r.a = fn_constant_a(barrier, mass_ratio);
    r.b = fn_constant_b(barrier, mass_ratio);
    return r;
}

}  // namespace

double DiodeStack::ox1_fraction() const {
    double c1 = thickness_ox1 / dielectric_ox1;
    double c2 = thickness_ox2 / dielectric_ox2;
    return c1 / (c1 + c2);
}

void DiodeStack::validate() const {
    if (!(thickness_ox1 > 0 && thickness_ox2 > 0 && dielectric_ox1 > 0 && dielectric_ox2 > 0 &&
          area > 0))
        throw ModelError("diode stack: thicknesses, permittivities and area must be positive");
    if (!(mass_ratio > 0 && mass_ratio <= 1))
        throw ModelError("diode stack: mass ratio must lie in (0, 1]");
    if (barrier_te_ox1() <= 0 || barrier_te_ox2() <= 0 || barrier_be_ox1() <= 0 ||
        barrier_be_ox2() <= 0)
        throw ModelError("diode stack: non-positive barrier height");
}

Thresholds threshold_voltage(const DiodeStack& s) {
    s.validate();
    double bracket = (s.dielectric_ox2 * s.thickness_ox1) / (s.dielectric_ox1 * s.thickness_ox2) + 1;
    double pos = (s.barrier_te_ox2() - s.barrier_be_ox1()) * bracket;
    double neg = -(s.barrier_be_ox2() - s.barrier_te_ox1()) * bracket;
    return {pos, neg};
}

double fn_constant_a(double barrier, double mass_ratio) {
    return 1.54e-6 / (mass_ratio * barrier);
}

double fn_constant_b(double barrier, double mass_ratio) {
    return 6.8327e7 * std::sqrt(mass_ratio) * std::pow(barrier, 1.5);
}

double fn_current_density(double e_field, double barrier, double mass_ratio) {
    if (barrier <= 0) throw ModelError("fn_current_density: barrier must be positive");
    if (e_field < 0) throw ModelError("fn_current_density: pass the field magnitude");
    if (e_field == 0) return 0;
    double a = fn_constant_a(barrier, mass_ratio);
    double b = fn_constant_b(barrier, mass_ratio);
    return a * e_field * e_field * std::exp(-b / e_field);
}

double dt_current_density(double v_ox, double e_field, double barrier, double mass_ratio) {
    if (barrier <= 0) throw ModelError("dt_current_density: barrier must be positive");
    if (e_field < 0 || v_ox < 0) throw ModelError("dt_current_density: negative argument");
    if (v_ox > barrier) throw ModelError("dt_current_density: v_ox above barrier, use FN branch");
    if (e_field == 0) return 0;
    double a = fn_constant_a(barrier, mass_ratio);
    double b = fn_constant_b(barrier, mass_ratio);
    double p = std::pow(v_ox / barrier, 1.5);
    return a * e_field * e_field * std::exp(-b * (1 - p) / e_field);
}

DiodeModel build_diode_model(const DiodeStack& stack, const DiodeOptions& opt) {
    stack.validate();
    if (opt.on_barrier <= 0) throw ModelError("diode: on-state barrier must be positive");
    DiodeModel m;
    m.area = stack.area;
    m.mass_ratio = stack.mass_ratio;
    m.ox1_fraction = stack.ox1_fraction();
    m.field_per_volt = m.ox1_fraction / (stack.thickness_ox1 * kNmToCm);
    m.v_t_pos = opt.v_on > 0 ? opt.v_on : threshold_voltage(stack).pos;
    if (m.v_t_pos <= 0) throw ModelError("diode: threshold must be positive");

    double k = m.field_per_volt, f = m.ox1_fraction;
    m.region[0] = make_region(stack.barrier_be_ox1(), stack.mass_ratio);
    m.region[1] = make_region(opt.on_barrier, stack.mass_ratio);
    m.region[2] = make_region(stack.barrier_te_ox1(), stack.mass_ratio);
    m.region[3] = m.region[1];

    double lo = region_density(m.region[0], k, f, m.v_t_pos, nullptr);
    double hi = region_density(m.region[1], k, f, m.v_t_pos, nullptr);
    m.region[1].scale = lo / hi;
    m.region[3].scale = m.region[1].scale;

    // reverse injection has to cross oxide-2 first
    double trans = opt.reverse_transmission;
    if (trans < 0) {
        double kappa = std::sqrt(2 * stack.mass_ratio * kElectronMass * kCharge *
                                 stack.barrier_te_ox2()) / kHbar;
        trans = std::exp(-2 * kappa * stack.thickness_ox2 * 1e-9);
    }
    if (trans <= 0) throw ModelError("diode: reverse transmission must be positive");
    m.region[2].scale = trans;

    // negative threshold: where region III meets the shared steep branch
    auto mismatch = [&](double x) {
        return std::log(region_density(m.region[2], k, f, x, nullptr)) -
               std::log(region_density(m.region[3], k, f, x, nullptr));
    };
    double a = 1e-3, b = m.v_t_pos;
    while (mismatch(b) > 0 && b < 100) b *= 1.5;
    if (mismatch(a) < 0) throw ModelError("diode: cannot place negative threshold");
    for (int i = 0; i < 200 && b - a > 1e-15; ++i) {
        double c = 0.5 * (a + b);
        (mismatch(c) > 0 ? a : b) = c;
    }
    m.v_t_neg = -0.5 * (a + b);
    // exact C0 at the placed boundary
    double x = -m.v_t_neg;
    m.region[3].scale *= region_density(m.region[2], k, f, x, nullptr) /
                         region_density(m.region[3], k, f, x, nullptr);
    return m;
}

double DiodeModel::current(double v, double& g) const {
    double k = field_per_volt, f = ox1_fraction, dj = 0, j;
    if (v > 0) {
        j = region_density(region[v < v_t_pos ? 0 : 1], k, f, v, &dj);
        g = area * dj;
        return area * j;
    }
    if (v < 0) {
        j = region_density(region[v > v_t_neg ? 2 : 3], k, f, -v, &dj);
        g = area * dj;
        return -area * j;
    }
    // slope at the origin from a one-sided limit
    double h = 1e-9;
    g = (current(h) - current(-h)) / (2 * h);
    return 0;
}

double DiodeModel::current(double v) const {
    double g;
    return current(v, g);
}

double diode_current(const DiodeModel& model, double v) { return model.current(v); }

void MtjParams::validate() const {
    if (!(r_ap > r_p && r_p > 0)) throw ModelError("mtj: need r_ap > r_p > 0");
    if (!(thermal_stability > 0 && v_critical > 0)) throw ModelError("mtj: bad stability/critical");
    if (!(attempt_time > 0 && dynamic_time_const > 0)) throw ModelError("mtj: bad time constants");
}

double mtj_resistance(const MtjParams& p, const MagState& s) {
    double mx = std::clamp(s.mx, -1.0, 1.0);
    return 2 * p.r_p * p.r_ap / ((p.r_p + p.r_ap) + (p.r_ap - p.r_p) * mx);
}

CellPoint cell_iv(const DiodeModel& model, double r, double v) {
    CellPoint out;
    if (v == 0) {
        double g;
        model.current(0, g);
        out.conductance = g / (1 + g * r);
        return out;
    }
    double s = v > 0 ? 1 : -1, mag = std::abs(v);
    double lo = 0, hi = mag / r;
    double x = 0.5 * hi, fx = 0, gd = 0;
    auto eval = [&](double xi) {
        double vd = s * (mag - xi * r);
        double id = s * model.current(vd, gd);
        return xi - id;
    };
    // start from the diode-limited guess when it is inside the bracket
    double i0 = std::abs(model.current(v));
    if (i0 < hi) x = i0;
    int it = 0;
    for (; it < 200; ++it) {
        fx = eval(x);
        if (std::abs(fx) < 1e-14 || hi - lo < 1e-20) break;
        if (fx > 0)
            hi = x;
        else
            lo = x;
        double step = fx / (1 + gd * r);
        double xn = x - step;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        x = xn;
    }
    if (it == 200) throw SolverError("cell_iv: no convergence", fx);
    out.current = s * x;
    out.v_mtj = out.current * r;
    out.v_diode = v - out.v_mtj;
    double g;
    model.current(out.v_diode, g);
    out.conductance = g / (1 + g * r);
    return out;
}

CellPoint cell_iv(const DiodeModel& model, const MtjParams& params, const MagState& state,
                  double v) {
    return cell_iv(model, mtj_resistance(params, state), v);
}

double write_latency(const MtjParams& p, double v) {
    if (!(v > 0)) throw ModelError("write_latency: bias must be positive");
    double u = v / p.v_critical;
    if (u > 1) return p.dynamic_time_const / (u - 1 + p.dynamic_time_const / p.attempt_time);
    return p.attempt_time * std::exp(p.thermal_stability * (1 - u));
}

double retention_time(const MtjParams& p, double v) {
    v = std::abs(v);
    double u = v / p.v_critical;
    if (u < 1) return p.attempt_time * std::exp(p.thermal_stability * (1 - u));
    return write_latency(p, v);
}

namespace {
double lever_norm(double theta0) {
    return theta0 / std::sin(theta0) - std::log(std::tan(0.5 * theta0));
}
}  // namespace

double theta_rate(const MtjParams& p, double theta, double v_mtj) {
    double sig = std::cos(theta) >= 0 ? 1.0 : -1.0;
    double q = v_mtj / p.v_critical;
    double crit = q > 0 ? 1.0 : p.critical_ratio_ap_p;
    double w = sig * q / crit;
    double a = w >= 1 ? w - 1 + p.dynamic_time_const / p.attempt_time
                      : (sig > 0 ? p.relax_p : p.relax_ap) * (w - 1);
    double arm = std::max(std::sin(theta), std::sin(p.theta0));
    return sig * a * arm * lever_norm(p.theta0) / p.dynamic_time_const;
}

double advance_theta(const MtjParams& p, double th, double dt,
                     const std::function<double(double, double)>& v, double t) {
    auto f = [&](double tt, double x) {
        x = std::clamp(x, 0.0, M_PI);
        return theta_rate(p, x, v(tt, x));
    };
    double k1 = f(t, th);
    double k2 = f(t + 0.5 * dt, th + 0.5 * dt * k1);
    double k3 = f(t + 0.5 * dt, th + 0.5 * dt * k2);
    double k4 = f(t + dt, th + dt * k3);
    double next = th + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!std::isfinite(next)) throw SolverError("macrospin: non-finite state", 0);
    return std::clamp(next, 0.0, M_PI);
}

double theta_of(const MagState& s) { return std::acos(std::clamp(s.mx, -1.0, 1.0)); }

MagTrace simulate_magnetization(const MtjParams& p, const MagnetizationDrive& drive,
                                double duration, double dt, const MagState& initial) {
    if (!(dt > 0) || dt > 1e-12 * (1 + 1e-9)) throw ModelError("simulate_magnetization: dt must be in (0, 1 ps]");
    if (duration < dt) throw ModelError("simulate_magnetization: duration shorter than dt");
    auto v_mtj = [&](double t, double th, double* current) {
        double r = mtj_resistance(p, {std::cos(th)});
        double v = drive.voltage ? drive.voltage(t) : 0.0;
        double i = drive.diode ? cell_iv(*drive.diode, r, v).current : v / r;
        if (current) *current = i;
        return i * r;
    };
    MagTrace tr;
    double th = theta_of(initial);
    long steps = std::lround(duration / dt);
    tr.samples.reserve(steps + 1);
    double i0;
    v_mtj(0, th, &i0);
    tr.samples.push_back({0, std::cos(th), i0});
    for (long n = 0; n < steps; ++n) {
        double t = n * dt;
        double prev = std::cos(th);
        th = advance_theta(p, th, dt, [&](double tt, double x) { return v_mtj(tt, x, nullptr); }, t);
        double mx = std::cos(th);
        if (tr.cross_time < 0 && (prev > 0) != (mx > 0) && prev != mx)
            tr.cross_time = t + dt * prev / (prev - mx);
        double i;
        v_mtj(t + dt, th, &i);
        tr.samples.push_back({t + dt, mx, i});
    }
    return tr;
}

}  // namespace xbar
