#include "xbar/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace xbar {

DiodeModel Config::diode() const { return build_diode_model(stack, diode_opt); }

ReadConfig Config::read_config() const {
    ReadConfig rc;
    rc.v_read = v_read;
    rc.delta = read_delta;
    rc.n_bits = n_bits;
    rc.array = array;
    rc.mtj = mtj;
    rc.diode = diode();
    rc.full_limit = full_limit;
    return rc;
}

WriteEnv Config::write_env() const {
    WriteEnv e;
    e.array = array;
    e.mtj = mtj;
    e.diode = diode();
    return e;
}

void Config::validate() const {
    try {
        array.validate();
        stack.validate();
        mtj.validate();
        write.validate();
    } catch (const ModelError& e) {
        throw ConfigError(e.what());
    }
    if (jobs < 1) throw ConfigError("jobs must be at least 1");
    if (!(v_read > 0)) throw ConfigError("read.v_read_v must be positive");
    if (!(read_delta >= 0)) throw ConfigError("read.delta_v must be non-negative");
    if (n_bits < 1 || n_bits > array.n) throw ConfigError("read.n_bits must be in [1, array.n]");
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

struct Entry {
    std::string key;
    std::string help;
    std::function<void(Config&, const std::string&)> set;
    std::function<std::string(const Config&)> get;
    bool numeric = true;
};

double parse_double(const std::string& key, const std::string& s) {
    size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (...) {
        throw ConfigError("value for '" + key + "' is not a number: '" + s + "'");
    }
    if (pos != s.size() || !std::isfinite(v)) throw ConfigError("value for '" + key + "' is not a number: '" + s + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& s) {
    double v = parse_double(key, s);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("value for '" + key + "' must be an integer");
    return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& s) {
    if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
    if (s == "0" || s == "false" || s == "no" || s == "off") return false;
    throw ConfigError("value for '" + key + "' must be a boolean");
}

template <class F>
Entry num(std::string key, std::string help, F field) {
    Entry e;
    e.key = key;
    e.help = std::move(help);
    e.set = [field, key](Config& c, const std::string& s) { field(c) = parse_double(key, s); };
    e.get = [field](const Config& c) { return format_number(field(const_cast<Config&>(c))); };
    return e;
}

template <class F>
Entry integer(std::string key, std::string help, F field) {
    Entry e;
    e.key = key;
    e.help = std::move(help);
    e.set = [field, key](Config& c, const std::string& s) { field(c) = parse_int(key, s); };
    e.get = [field](const Config& c) { return std::to_string(field(const_cast<Config&>(c))); };
    return e;
}

template <class F>
Entry flag(std::string key, std::string help, F field) {
    Entry e;
    e.key = key;
    e.help = std::move(help);
    e.set = [field, key](Config& c, const std::string& s) { field(c) = parse_bool(key, s); };
    e.get = [field](const Config& c) { return std::string(field(const_cast<Config&>(c)) ? "1" : "0"); };
    return e;
}

const std::vector<Entry>& registry() {
    static const std::vector<Entry> reg = [] {
        std::vector<Entry> r;
        r.push_back(integer("array.n", "crossbar size N", [](Config& c) -> int& { return c.array.n; }));
        r.push_back(num("array.r_s_ohm", "sense resistor", [](Config& c) -> double& { return c.array.r_s; }));

        r.push_back(num("diode.wf_te_ev", "top electrode work function", [](Config& c) -> double& { return c.stack.work_function_te; }));
        r.push_back(num("diode.wf_be_ev", "bottom electrode work function", [](Config& c) -> double& { return c.stack.work_function_be; }));
        r.push_back(num("diode.affinity_ox1_ev", "oxide-1 electron affinity", [](Config& c) -> double& { return c.stack.affinity_ox1; }));
        r.push_back(num("diode.affinity_ox2_ev", "oxide-2 electron affinity", [](Config& c) -> double& { return c.stack.affinity_ox2; }));
        r.push_back(num("diode.k_ox1", "oxide-1 relative permittivity", [](Config& c) -> double& { return c.stack.dielectric_ox1; }));
        r.push_back(num("diode.k_ox2", "oxide-2 relative permittivity", [](Config& c) -> double& { return c.stack.dielectric_ox2; }));
        r.push_back(num("diode.t_ox1_nm", "oxide-1 thickness", [](Config& c) -> double& { return c.stack.thickness_ox1; }));
        r.push_back(num("diode.t_ox2_nm", "oxide-2 thickness", [](Config& c) -> double& { return c.stack.thickness_ox2; }));
        r.push_back(num("diode.mass_ratio", "effective mass over free electron mass", [](Config& c) -> double& { return c.stack.mass_ratio; }));
        r.push_back(num("diode.area_cm2", "junction area", [](Config& c) -> double& { return c.stack.area; }));
        r.push_back(num("diode.v_on_v", "effective turn-on bias, <= 0 uses the stack threshold", [](Config& c) -> double& { return c.diode_opt.v_on; }));
        r.push_back(num("diode.on_barrier_ev", "effective barrier above turn-on", [](Config& c) -> double& { return c.diode_opt.on_barrier; }));
        r.push_back(num("diode.reverse_transmission", "reverse-bias transmission factor, < 0 for the WKB estimate", [](Config& c) -> double& { return c.diode_opt.reverse_transmission; }));

        r.push_back(num("mtj.r_p_ohm", "parallel resistance", [](Config& c) -> double& { return c.mtj.r_p; }));
        r.push_back(num("mtj.r_ap_ohm", "antiparallel resistance", [](Config& c) -> double& { return c.mtj.r_ap; }));
        r.push_back(num("mtj.thermal_stability", "energy barrier over kT", [](Config& c) -> double& { return c.mtj.thermal_stability; }));
        r.push_back(num("mtj.volume_m3", "free layer volume", [](Config& c) -> double& { return c.mtj.volume; }));
        r.push_back(num("mtj.v_critical_v", "critical MTJ bias", [](Config& c) -> double& { return c.mtj.v_critical; }));
        r.push_back(num("mtj.attempt_time_s", "attempt time", [](Config& c) -> double& { return c.mtj.attempt_time; }));
        r.push_back(num("mtj.dynamic_time_s", "precessional time constant", [](Config& c) -> double& { return c.mtj.dynamic_time_const; }));
        r.push_back(num("mtj.relax_p", "sub-critical relaxation near P", [](Config& c) -> double& { return c.mtj.relax_p; }));
        r.push_back(num("mtj.relax_ap", "sub-critical relaxation near AP", [](Config& c) -> double& { return c.mtj.relax_ap; }));
        r.push_back(num("mtj.critical_ratio_ap_p", "AP->P critical bias over P->AP", [](Config& c) -> double& { return c.mtj.critical_ratio_ap_p; }));
        r.push_back(num("mtj.theta0_rad", "initial angle floor", [](Config& c) -> double& { return c.mtj.theta0; }));

        r.push_back(num("read.v_read_v", "read voltage", [](Config& c) -> double& { return c.v_read; }));
        r.push_back(num("read.delta_v", "unselected-line offset", [](Config& c) -> double& { return c.read_delta; }));
        r.push_back(integer("read.n_bits", "bits read at once", [](Config& c) -> int& { return c.n_bits; }));
        r.push_back(num("read.target_margin_v", "margin target of the array-size search", [](Config& c) -> double& { return c.target_margin; }));
        r.push_back(integer("read.n_cap", "largest N tried by the array-size search", [](Config& c) -> int& { return c.n_cap; }));
        r.push_back(integer("read.full_limit", "largest N solved with the full network", [](Config& c) -> int& { return c.full_limit; }));

        r.push_back(num("write.v_write_v", "write voltage", [](Config& c) -> double& { return c.write.v_write; }));
        r.push_back(num("write.delta_v", "pulse half swing", [](Config& c) -> double& { return c.write.delta; }));
        r.push_back(num("write.pulse_period_s", "pulse period", [](Config& c) -> double& { return c.write.pulse_period; }));
        r.push_back(num("write.duty", "pulse duty cycle", [](Config& c) -> double& { return c.write.duty; }));
        r.push_back(num("write.pulse_phase_s", "pulse phase, the high level starts at this time", [](Config& c) -> double& { return c.write.pulse_phase; }));
        r.push_back(num("write.window_s", "write window", [](Config& c) -> double& { return c.write.window; }));
        r.push_back(num("write.clock_hz", "system clock", [](Config& c) -> double& { return c.write.clock; }));
        r.push_back(num("write.dt_s", "transient step", [](Config& c) -> double& { return c.write.dt; }));
        r.push_back(num("write.tail_s", "relaxation time after the window", [](Config& c) -> double& { return c.write.tail; }));
        r.push_back(num("write.horizon_s", "continued-pulse horizon", [](Config& c) -> double& { return c.write.horizon; }));
        {
            Entry e;
            e.key = "write.pattern";
            e.help = "00, 11, 10 or 01";
            e.numeric = false;
            e.set = [](Config& c, const std::string& s) {
                try {
                    c.pattern.pattern = parse_pattern(s);
                } catch (const ModelError& m) {
                    throw ConfigError(m.what());
                }
            };
            e.get = [](const Config& c) { return std::string(pattern_name(c.pattern.pattern)); };
            r.push_back(e);
        }
        r.push_back(integer("write.row", "shared word line of the targets", [](Config& c) -> int& { return c.pattern.row; }));
        r.push_back(integer("write.col_a", "bit line of the first target", [](Config& c) -> int& { return c.pattern.col_a; }));
        r.push_back(integer("write.col_b", "bit line of the second target", [](Config& c) -> int& { return c.pattern.col_b; }));

        r.push_back(num("calibrate.write_v", "DC flip anchor bias", [](Config& c) -> double& { return c.anchors.write_v; }));
        r.push_back(num("calibrate.dc_flip_s", "DC flip anchor", [](Config& c) -> double& { return c.anchors.dc_flip; }));
        r.push_back(num("calibrate.pulse_flip_01_s", "pulsed 0->1 flip anchor", [](Config& c) -> double& { return c.anchors.pulse_flip_01; }));
        r.push_back(num("calibrate.pulse_flip_10_s", "pulsed 1->0 flip anchor", [](Config& c) -> double& { return c.anchors.pulse_flip_10; }));
        r.push_back(num("calibrate.retention_low_y", "retention anchor at delta 0", [](Config& c) -> double& { return c.anchors.retention_low_y; }));
        r.push_back(num("calibrate.retention_high_y", "retention anchor at the high delta", [](Config& c) -> double& { return c.anchors.retention_high_y; }));
        r.push_back(num("calibrate.delta_high_v", "delta of the second retention anchor", [](Config& c) -> double& { return c.anchors.delta_high; }));
        r.push_back(integer("calibrate.read_n", "array size of the retention anchors", [](Config& c) -> int& { return c.anchors.read_n; }));
        r.push_back(num("calibrate.read_v", "read voltage of the retention anchors", [](Config& c) -> double& { return c.anchors.read_v; }));
        r.push_back(num("calibrate.tol_latency", "relative tolerance on flip anchors", [](Config& c) -> double& { return c.anchors.tol_latency; }));
        r.push_back(num("calibrate.tol_retention", "relative tolerance on retention anchors", [](Config& c) -> double& { return c.anchors.tol_retention; }));
        r.push_back(flag("calibrate.use_retention", "fit area and v_critical", [](Config& c) -> bool& { return c.anchors.use_retention; }));
        r.push_back(flag("calibrate.use_dc_flip", "fit the precessional time constant", [](Config& c) -> bool& { return c.anchors.use_dc_flip; }));
        r.push_back(flag("calibrate.use_pulse_01", "fit relax_p", [](Config& c) -> bool& { return c.anchors.use_pulse_01; }));
        r.push_back(flag("calibrate.use_pulse_10", "fit relax_ap", [](Config& c) -> bool& { return c.anchors.use_pulse_10; }));
        return r;
    }();
    return reg;
}

const Entry& find_entry(const std::string& key) {
    for (const auto& e : registry())
        if (e.key == key) return e;
    throw ConfigError("unknown configuration key '" + key + "'");
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = [] {
        std::vector<ConfigKey> k;
        for (const auto& e : registry()) k.push_back({e.key, e.help});
        return k;
    }();
    return keys;
}

bool is_config_key(const std::string& key) {
    for (const auto& e : registry())
        if (e.key == key) return true;
    return false;
}

void set_config_value(Config& c, const std::string& key, const std::string& value) {
    find_entry(key).set(c, trim(value));
}

void set_config_value(Config& c, const std::string& key, double value) {
    const Entry& e = find_entry(key);
    if (!e.numeric) throw ConfigError("key '" + key + "' is not numeric");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    e.set(c, buf);
}

std::string get_config_value(const Config& c, const std::string& key) { return find_entry(key).get(c); }

double get_config_number(const Config& c, const std::string& key) {
    const Entry& e = find_entry(key);
    if (!e.numeric) throw ConfigError("key '" + key + "' is not numeric");
    return std::stod(e.get(c));
}

std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text,
                                                                  const std::string& origin) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key or value");
        out.emplace_back(key, value);
    }
    return out;
}

void apply_config_text(Config& c, const std::string& text, const std::string& origin) {
    for (const auto& [k, v] : parse_key_values(text, origin)) {
        try {
            set_config_value(c, k, v);
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ": " + e.what());
        }
    }
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

Config load_config(const std::string& path) {
    Config c;
    apply_config_text(c, read_file(path), path);
    return c;
}

std::string dump_config(const Config& c) {
    std::string out;
    for (const auto& e : registry()) out += e.key + " = " + e.get(c) + "\n";
    return out;
}

}  // namespace xbar
