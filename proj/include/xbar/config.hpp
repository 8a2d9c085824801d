#pragma once

#include <map>
#include <string>
#include <vector>

#include "xbar/read.hpp"
#include "xbar/write.hpp"

namespace xbar {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Targets for the calibration routine.
struct Anchors {
    double write_v = 2.1;
    double dc_flip = 0.75e-9;
    double pulse_flip_01 = 1.1e-9;
    double pulse_flip_10 = 1.59e-9;
    double retention_low_y = 12.31;   // selected cell, delta = 0
    double retention_high_y = 2.04;   // selected cell, delta = delta_high
    double delta_high = 0.7;
    int read_n = 50;
    double read_v = 2.1;
    double tol_latency = 0.10;
    double tol_retention = 0.20;
    bool use_retention = true;
    bool use_dc_flip = true;
    bool use_pulse_01 = true;
    bool use_pulse_10 = true;
};

struct Config {
    CrossbarConfig array;
    DiodeStack stack;
    DiodeOptions diode_opt;
    MtjParams mtj;
    double v_read = 2.1;
    double read_delta = 0.0;
    int n_bits = 2;
    int full_limit = 64;
    double target_margin = 0.02;
    int n_cap = 1024;
    WriteConfig write;
    WritePattern pattern;
    Anchors anchors;
    int jobs = 1;

    DiodeModel diode() const;
    ReadConfig read_config() const;
    WriteEnv write_env() const;
    void validate() const;
};

struct ConfigKey {
    std::string key;
    std::string help;
};

const std::vector<ConfigKey>& config_keys();
bool is_config_key(const std::string& key);

void set_config_value(Config& c, const std::string& key, const std::string& value);
void set_config_value(Config& c, const std::string& key, double value);
std::string get_config_value(const Config& c, const std::string& key);
double get_config_number(const Config& c, const std::string& key);

// key = value lines, '#' comments; unknown keys and unparsable values throw ConfigError
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text,
                                                                  const std::string& origin);
void apply_config_text(Config& c, const std::string& text, const std::string& origin = "<text>");
Config load_config(const std::string& path);
std::string read_file(const std::string& path);

// every key, one per line, in registry order
std::string dump_config(const Config& c);

std::string format_number(double v);

}  // namespace xbar
