// One line per acceptance criterion. Exit status is non-zero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "xbar/experiment.hpp"

using namespace xbar;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("criterion %2d %s  %s: %s\n", id, ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string ns(double t) {
    if (t < 0) return "none";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g ns", t * 1e9);
    return buf;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ReadConfig rc_at(const Config& base, int n, double delta, int bits = 2, double v_read = 2.1) {
    Config c = base;
    c.array.n = n;
    c.read_delta = delta;
    c.n_bits = bits;
    c.v_read = v_read;
    return c.read_config();
}

double margin(const Config& c, int n, double delta, int bits = 2, double v_read = 2.1) {
    return sense_margin(rc_at(c, n, delta, bits, v_read)).margin;
}

WriteEnv env_at(const Config& c, int n) {
    Config k = c;
    k.array.n = n;
    return k.write_env();
}

WritePattern pat(const Config& c, Pattern p) {
    WritePattern wp = c.pattern;
    wp.pattern = p;
    return wp;
}

void guarded(int id, const char* name, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, name, false, std::string("exception: ") + e.what());
    }
}

}  // namespace

int main() {
    Config c;
    Calibration cal;
    bool calibrated = false;
    std::string cal_error;
    try {
        cal = calibrate(c);
        cal.apply(c);
        calibrated = true;
    } catch (const std::exception& e) {
        cal_error = e.what();
    }

    guarded(1, "oracle equivalence", [&] {
        double worst = 0, kcl = 0;
        for (int n : {4, 8, 16})
            for (double d : {0.0, 0.35, 0.7}) {
                ReadConfig rc = rc_at(c, n, d);
                ReadReport full = sense_margin(rc, false), lump = sense_margin(rc, true);
                worst = std::max({worst, std::abs(full.sense_voltage_p / lump.sense_voltage_p - 1),
                                  std::abs(full.sense_voltage_ap / lump.sense_voltage_ap - 1)});
                kcl = std::max({kcl, full.max_kcl, lump.max_kcl});
            }
        report(1, "oracle equivalence", worst < 1e-3 && kcl < 1e-10,
               "max relative sense-voltage difference " + fmt("%.3g", worst) + ", max KCL residual " +
                   fmt("%.3g", kcl) + " A");
    });

    guarded(2, "saturation identity", [&] {
        double m4 = margin(c, 4, 0), m50 = margin(c, 50, 0.7);
        double rel = std::abs(m50 / m4 - 1);
        bool ok = rel <= 0.02 && m50 >= 0.0256 && m50 <= 0.0384;
        report(2, "saturation identity", ok,
               "margin(N=50, delta=0.7) " + fmt("%.2f", m50 * 1e3) + " mV vs margin(N=4, delta=0) " +
                   fmt("%.2f", m4 * 1e3) + " mV (" + fmt("%.2f", rel * 100) + "%), band 25.6..38.4 mV");
    });

    guarded(3, "fig8 anchor", [&] {
        double m = margin(c, 50, 0);
        bool mono = true;
        for (double v : {2.1, 2.2, 2.3}) {
            double a = margin(c, 50, 0, 2, v), b = margin(c, 100, 0, 2, v), d = margin(c, 300, 0, 2, v);
            mono = mono && a > b && b > d;
        }
        report(3, "fig8 anchor", m >= 0.014 && m <= 0.026 && mono,
               "margin(N=50, 2.1 V) " + fmt("%.2f", m * 1e3) + " mV (band 14..26 mV), monotone over N=50/100/300: " +
                   (mono ? "yes" : "no"));
    });

    guarded(4, "R_s window", [&] {
        double best = -1, best_rs = 0, lo = 0, hi = 0;
        for (double rs = 4e3; rs <= 24e3 + 1; rs += 250) {
            Config k = c;
            k.array.r_s = rs;
            double m = margin(k, 50, 0);
            if (rs == 4e3) lo = m;
            hi = m;
            if (m > best) {
                best = m;
                best_rs = rs;
            }
        }
        bool interior = best > lo && best > hi;
        report(4, "R_s window", interior && best_rs >= 8e3 && best_rs <= 18e3,
               "maximum " + fmt("%.2f", best * 1e3) + " mV at R_s = " + fmt("%.0f", best_rs) + " ohm");
    });

    guarded(5, "n-independence", [&] {
        double m2 = margin(c, 32, 0.3, 2), worst = 0;
        for (int b : {4, 8}) worst = std::max(worst, std::abs(margin(c, 32, 0.3, b) / m2 - 1));
        report(5, "n-independence", worst <= 0.01,
               "n in {2,4,8} at N=32, delta=0.3: max spread " + fmt("%.3g", worst * 100) + "%");
    });

    guarded(6, "512-bit read", [&] {
        auto t0 = std::chrono::steady_clock::now();
        ArraySizing s = max_supported_array(0.02, 0.7, rc_at(c, 4, 0.7), c.n_cap);
        double secs = seconds_since(t0);
        bool bits_ok = true;
        for (auto [b, m] : s.bits_check) bits_ok = bits_ok && m >= 0.02;
        report(6, "512-bit read", s.achievable && s.n_max >= 512 && bits_ok && secs < 60,
               "N_max " + std::to_string(s.n_max) + (s.capped ? " (search cap)" : "") + ", n up to N_max keeps 20 mV: " +
                   (bits_ok ? "yes" : "no") + ", " + fmt("%.2f", secs) + " s");
    });

    guarded(7, "retention anchors", [&] {
        if (!calibrated) {
            report(7, "retention anchors", false, "calibration failed: " + cal_error);
            return;
        }
        double r0 = selected_retention_years(c, 0.0), r7 = selected_retention_years(c, 0.7);
        bool mono = true;
        double prev = INFINITY;
        for (double v = 0; v <= 1.0; v += 1e-3) {
            double r = retention_time(c.mtj, v);
            mono = mono && r < prev;
            prev = r;
        }
        prev = INFINITY;
        for (double d = 0; d <= 0.7001; d += 0.05) {
            double r = selected_retention_years(c, d);
            mono = mono && r < prev;
            prev = r;
        }
        bool ok = std::abs(r0 / 12.31 - 1) <= 0.2 && std::abs(r7 / 2.04 - 1) <= 0.2 && mono;
        report(7, "retention anchors", ok,
               "selected retention " + fmt("%.3f", r0) + " y at delta=0 (12.31 +-20%), " + fmt("%.3f", r7) +
                   " y at delta=0.7 (2.04 +-20%), strictly decreasing in bias: " + (mono ? "yes" : "no"));
    });

    guarded(8, "write dynamics", [&] {
        double dc = dc_flip(c), p01 = pulsed_flip_01(c), p10 = pulsed_flip_10(c);
        DiodeModel d = c.diode();
        bool slower = true;
        for (double peak : {2.1, 2.15, 2.2, 2.3}) {
            double t_dc = single_cell_flip(c.mtj, d, [peak](double) { return peak; }, MagState::p(), 5e-9);
            LineBias p = LineBias::pulse(peak, peak - 2 * c.write.delta, c.write.pulse_period, c.write.duty,
                                         c.write.pulse_phase);
            double t_p = single_cell_flip(c.mtj, d, [p](double t) { return p.level_at(t); }, MagState::p(), 5e-9);
            slower = slower && t_dc > 0 && (t_p < 0 || t_p > t_dc);
        }
        auto lat = [&](double v) { return write_latency(c.mtj, cell_iv(d, c.mtj, MagState::p(), v).v_mtj); };
        double lo_ratio = lat(1.9) / lat(2.1), hi_ratio = lat(2.1) / lat(2.3);
        bool ok = std::abs(dc / 0.75e-9 - 1) <= 0.1 && std::abs(p01 / 1.1e-9 - 1) <= 0.1 &&
                  std::abs(p10 / 1.59e-9 - 1) <= 0.1 && slower && lo_ratio > hi_ratio;
        report(8, "write dynamics", ok,
               "DC flip " + fmt("%.4g", dc * 1e9) + " ns (0.75), pulsed 0->1 " + fmt("%.4g", p01 * 1e9) +
                   " ns (1.1), pulsed 1->0 " + fmt("%.4g", p10 * 1e9) + " ns (1.59), pulsed slower than DC: " +
                   (slower ? "yes" : "no") + ", latency ratios " + fmt("%.3g", lo_ratio) + " vs " +
                   fmt("%.3g", hi_ratio));
    });

    guarded(9, "write correctness", [&] {
        std::string bad;
        bool gap_ok = true;
        std::string gaps;
        for (Pattern p : {Pattern::P00, Pattern::P11, Pattern::P10, Pattern::P01})
            for (int n : {4, 8, 16}) {
                WriteReport r = simulate_write(pat(c, p), c.write, env_at(c, n));
                bool recovered = true;
                for (const auto& h : r.half) recovered = recovered && !h.disturbed;
                if (!r.targets_flipped || !recovered) {
                    bad += std::string(bad.empty() ? "" : "; ") + pattern_name(p) + "@" + std::to_string(n) +
                           (r.targets_flipped ? "" : " targets a " + ns(r.flip_time[0]) + ", b " + ns(r.flip_time[1])) +
                           (recovered ? "" : " half-selected disturbed");
                }
                if (p == Pattern::P10 || p == Pattern::P01) {
                    gap_ok = gap_ok && r.min_reaccess_gap == 2;
                    if (n == 8 && p == Pattern::P10)
                        gaps = "half-selected pulsed flip " + fmt("%.4g", r.half_selected_flip_time * 1e9) +
                               " ns, gap " + std::to_string(r.min_reaccess_gap) + " cycles";
                }
            }
        report(9, "write correctness", bad.empty() && gap_ok,
               (bad.empty() ? std::string("all patterns write, half-selected recover") : "failing: " + bad) + "; " +
                   gaps + (gap_ok ? "" : " (gap != 2 somewhere)"));
    });

    guarded(10, "energy", [&] {
        WriteEnv e64 = env_at(c, 64);
        double e00 = write_energy(pat(c, Pattern::P00), c.write, e64).energy_per_bit;
        double e11 = write_energy(pat(c, Pattern::P11), c.write, e64).energy_per_bit;
        double e10 = write_energy(pat(c, Pattern::P10), c.write, e64).energy_per_bit;
        double e01 = write_energy(pat(c, Pattern::P01), c.write, e64).energy_per_bit;
        bool inc = true;
        double prev = 0;
        for (int n : {8, 16, 32}) {
            double e = write_energy(pat(c, Pattern::P10), c.write, env_at(c, n)).energy_per_bit;
            inc = inc && e > prev;
            prev = e;
        }
        inc = inc && e10 > prev;
        DeltaSearch ds = optimize_delta(c.write, default_delta_range(), env_at(c, 8));
        double ratio = ds.found ? ds.best_energy / ds.baseline_energy : INFINITY;
        VtSearch vt = vt_modulation_search(c.stack, c.diode_opt, c.write, env_at(c, 8), default_ox2_scales());
        bool ok_table = e10 / e00 >= 10 && std::abs(e00 / e11 - 1) <= 0.05 && std::abs(e10 / e01 - 1) <= 1e-6 && inc;
        bool ok_delta = ds.found && ratio <= 0.10;
        bool ok_vt = vt.found && vt.saving >= 0.40;
        report(10, "energy", ok_table && ok_delta && ok_vt,
               "N=64 E10/E00 " + fmt("%.1f", e10 / e00) + ", E00/E11 " + fmt("%.4f", e00 / e11) + ", E10/E01 " +
                   fmt("%.6f", e10 / e01) + ", P10 increasing in N: " + (inc ? "yes" : "no") + "; optimize_delta " +
                   (ds.found ? "best delta " + fmt("%.3g", ds.best_delta) + " V at " + fmt("%.1f", ratio * 100) +
                                   "% of baseline (need <= 10%)"
                             : std::string("no feasible delta")) +
                   "; vt search " + (vt.found ? "found" : "not found") + ", best saving " +
                   fmt("%.1f", vt.saving * 100) + "% (need >= 40%)");
    });

    guarded(11, "numerical hygiene", [&] {
        double worst = 0;
        auto cmp = [&](double a, double b) {
            if ((a < 0) != (b < 0)) worst = INFINITY;
            else if (a > 0) worst = std::max(worst, std::abs(b / a - 1));
        };
        cmp(dc_flip(c, 1e-12), dc_flip(c, 0.5e-12));
        cmp(pulsed_flip_01(c, 1e-12), pulsed_flip_01(c, 0.5e-12));
        cmp(pulsed_flip_10(c, 1e-12), pulsed_flip_10(c, 0.5e-12));
        WriteConfig fine = c.write;
        fine.dt = 0.5e-12;
        for (Pattern p : {Pattern::P11, Pattern::P00, Pattern::P10}) {
            WriteReport a = simulate_write(pat(c, p), c.write, env_at(c, 8));
            WriteReport b = simulate_write(pat(c, p), fine, env_at(c, 8));
            cmp(a.flip_time[0], b.flip_time[0]);
            cmp(a.flip_time[1], b.flip_time[1]);
            cmp(a.half_selected_flip_time, b.half_selected_flip_time);
        }
        std::string f1 = render(figure_table("fig8", c, 1), c, "fig8");
        std::string f2 = render(figure_table("fig8", c, 2), c, "fig8");
        ExperimentSpec spec = parse_experiment_spec(
            "experiment = write-sim\naxis.array.n = 4:8:4\naxis.write.delta_v = 0.04:0.06:0.01\n");
        std::string s1 = render(run_experiment(spec, c, 1), c, "sweep");
        std::string s2 = render(run_experiment(spec, c, 2), c, "sweep");
        bool det = f1 == f2 && s1 == s2;
        report(11, "numerical hygiene", worst < 0.02 && det,
               "max flip-time change on halving dt " + fmt("%.3g", worst * 100) + "%, reruns byte-identical: " +
                   (det ? "yes" : "no"));
    });

    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
