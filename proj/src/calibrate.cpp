#include "xbar/calibrate.hpp"

#include <cmath>

namespace xbar {

void Calibration::apply(Config& c) const {
    c.stack.area = area;
    c.mtj.v_critical = v_critical;
    c.mtj.dynamic_time_const = dynamic_time_const;
    c.mtj.relax_p = relax_p;
    c.mtj.relax_ap = relax_ap;
}

std::string Calibration::to_text() const {
    std::string s;
    s += "diode.area_cm2 = " + format_number(area) + "\n";
    s += "mtj.v_critical_v = " + format_number(v_critical) + "\n";
    s += "mtj.dynamic_time_s = " + format_number(dynamic_time_const) + "\n";
    s += "mtj.relax_p = " + format_number(relax_p) + "\n";
    s += "mtj.relax_ap = " + format_number(relax_ap) + "\n";
    return s;
}

double single_cell_flip(const MtjParams& mtj, const DiodeModel& diode, const std::function<double(double)>& v,
                        const MagState& start, double horizon, double dt) {
    MagnetizationDrive drive{v, &diode};
    return simulate_magnetization(mtj, drive, horizon, dt, start).cross_time;
}

namespace {

constexpr double flip_horizon = 5e-9;

LineBias half_pulse(const Config& c) {
    const auto& w = c.write;
    return LineBias::pulse(w.v_write + w.delta, w.v_write - w.delta, w.pulse_period, w.duty, w.pulse_phase);
}

// no flip within the horizon counts as infinitely slow
double as_time(double t) { return t < 0 ? INFINITY : t; }

// smallest x in [lo, hi] with f(x) >= target, f increasing; log spacing when lo > 0
double bisect_increasing(const std::function<double(double)>& f, double target, double lo, double hi, bool log_scale,
                         int iters = 60) {
    for (int i = 0; i < iters; ++i) {
        double mid = log_scale ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        (f(mid) < target ? lo : hi) = mid;
    }
    double flo = f(lo), fhi = f(hi);
    bool take_lo = std::abs(flo - target) <= std::abs(fhi - target);
    double x = take_lo ? lo : hi;
    // Pulsed flips land in discrete drive phases, so f can jump. Step back from the
    // jump into the chosen branch so small perturbations (dt, rounding) stay on it.
    if (!(std::abs(fhi - flo) <= 0.05 * std::abs(target))) {
        double step = 0.01 * std::max(std::abs(x), 1e-12);
        double y = take_lo ? x - step : x + step;
        double fy = f(y), fx = take_lo ? flo : fhi;
        if (std::abs(fy - fx) <= 0.02 * std::abs(target)) x = y;
    }
    return x;
}

double retention_from(const MtjParams& m, double v_mtj) { return retention_time(m, v_mtj) / seconds_per_year; }

double selected_vmtj(const Config& c, double delta) {
    Config k = c;
    k.array.n = c.anchors.read_n;
    k.v_read = c.anchors.read_v;
    k.read_delta = delta;
    k.n_bits = std::min(k.n_bits, k.array.n);
    return sense_margin(k.read_config()).v_mtj_selected;
}

}  // namespace

double pulsed_flip_01(const Config& c, double dt) {
    LineBias p = half_pulse(c);
    double v2 = 2 * c.write.v_write;
    return single_cell_flip(c.mtj, c.diode(), [p, v2](double t) { return v2 - p.level_at(t); }, MagState::p(),
                            flip_horizon, dt);
}

double pulsed_flip_10(const Config& c, double dt) {
    LineBias p = half_pulse(c);
    return single_cell_flip(c.mtj, c.diode(), [p](double t) { return -p.level_at(t); }, MagState::ap(),
                            flip_horizon, dt);
}

double dc_flip(const Config& c, double dt) {
    double v = c.anchors.write_v;
    return single_cell_flip(c.mtj, c.diode(), [v](double) { return v; }, MagState::p(), flip_horizon, dt);
}

double selected_retention_years(const Config& c, double delta) {
    return retention_from(c.mtj, selected_vmtj(c, delta));
}

Calibration evaluate_anchors(const Config& c) {
    const Anchors& a = c.anchors;
    Calibration cal;
    cal.area = c.stack.area;
    cal.v_critical = c.mtj.v_critical;
    cal.dynamic_time_const = c.mtj.dynamic_time_const;
    cal.relax_p = c.mtj.relax_p;
    cal.relax_ap = c.mtj.relax_ap;
    auto add = [&](const std::string& name, double target, double got, double tol) {
        double rel = std::isfinite(got) && got >= 0 ? got / target - 1 : INFINITY;
        bool ok = std::abs(rel) <= tol;
        cal.residuals.push_back({name, target, got, rel, tol, ok});
        cal.ok = cal.ok && ok;
    };
    if (a.use_retention) {
        add("retention_delta_0_y", a.retention_low_y, selected_retention_years(c, 0.0), a.tol_retention);
        add("retention_delta_high_y", a.retention_high_y, selected_retention_years(c, a.delta_high), a.tol_retention);
    }
    if (a.use_dc_flip) add("dc_flip_s", a.dc_flip, dc_flip(c), a.tol_latency);
    if (a.use_pulse_01) add("pulse_flip_01_s", a.pulse_flip_01, pulsed_flip_01(c), a.tol_latency);
    if (a.use_pulse_10) add("pulse_flip_10_s", a.pulse_flip_10, pulsed_flip_10(c), a.tol_latency);
    return cal;
}

Calibration calibrate(const Config& base) {
    Config c = base;
    c.validate();
    const Anchors& a = c.anchors;

    if (a.use_retention) {
        if (!(a.retention_low_y > a.retention_high_y && a.retention_high_y > 0))
            throw ConfigError("calibrate: retention anchors must satisfy low-delta > high-delta > 0");
        // v_critical follows in closed form from the first anchor; area is searched for the second
        const MtjParams& m = c.mtj;
        double u0 = 1 - std::log(a.retention_low_y * seconds_per_year / m.attempt_time) / m.thermal_stability;
        if (!(u0 > 0)) throw CalibrationError("calibrate: retention anchor exceeds the thermal limit");
        auto fit = [&](double log_area) {
            Config k = c;
            k.stack.area = std::pow(10.0, log_area);
            k.mtj.v_critical = selected_vmtj(k, 0.0) / u0;
            double r = retention_from(k.mtj, selected_vmtj(k, a.delta_high));
            return std::make_pair(std::log(r / a.retention_high_y), k.mtj.v_critical);
        };
        double x0 = std::log10(c.stack.area);
        double lo = x0 - 1, hi = x0 + 1;
        const double g = (std::sqrt(5.0) - 1) / 2;
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = std::abs(fit(x1).first), f2 = std::abs(fit(x2).first);
        for (int i = 0; i < 60 && hi - lo > 1e-9; ++i) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = std::abs(fit(x1).first);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = std::abs(fit(x2).first);
            }
        }
        double best = 0.5 * (lo + hi);
        c.stack.area = std::pow(10.0, best);
        c.mtj.v_critical = fit(best).second;
    }

    if (a.use_dc_flip) {
        auto f = [&](double td) {
            Config k = c;
            k.mtj.dynamic_time_const = td;
            return as_time(dc_flip(k));
        };
        c.mtj.dynamic_time_const = bisect_increasing(f, a.dc_flip, 1e-13, 1e-9, true);
    }
    if (a.use_pulse_01) {
        auto f = [&](double kp) {
            Config k = c;
            k.mtj.relax_p = kp;
            return as_time(pulsed_flip_01(k));
        };
        c.mtj.relax_p = bisect_increasing(f, a.pulse_flip_01, 0.0, 50.0, false, 40);
    }
    if (a.use_pulse_10) {
        auto f = [&](double ka) {
            Config k = c;
            k.mtj.relax_ap = ka;
            return as_time(pulsed_flip_10(k));
        };
        c.mtj.relax_ap = bisect_increasing(f, a.pulse_flip_10, 0.0, 50.0, false, 40);
    }

    Calibration cal = evaluate_anchors(c);
    if (!cal.ok) {
        std::string msg = "calibration failed:";
        for (const auto& r : cal.residuals)
            if (!r.ok)
                msg += " " + r.name + " (target " + format_number(r.target) + ", got " + format_number(r.achieved) +
                       ", tolerance " + format_number(r.tolerance) + ")";
        throw CalibrationError(msg);
    }
    return cal;
}

}  // namespace xbar
