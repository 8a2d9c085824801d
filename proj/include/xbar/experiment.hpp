#pragma once

#include <string>
#include <vector>

#include "xbar/calibrate.hpp"
#include "xbar/config.hpp"

namespace xbar {

constexpr const char* tool_version = "0.1.0";

// A CSV body plus free-form notes that go into the '#' header.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;
};

std::string cell(double v);
std::string cell(int v);
std::string cell(bool v);

// '#' header: tool version, title, notes, calibration constants and the full resolved config
std::string provenance_header(const Config& c, const std::string& title, const std::vector<std::string>& notes);
std::string render_csv(const Table& t);
std::string render(const Table& t, const Config& c, const std::string& title);

const std::vector<std::string>& figure_ids();
std::string figure_columns(const std::string& id);
Table figure_table(const std::string& id, const Config& c, int jobs = 1);

enum class ExperimentKind { ReadMargin, ReadRetention, MaxArray, WriteSim, WriteEnergy, OptimizeDelta, VtSearch, Figure };

ExperimentKind parse_experiment_kind(const std::string& s);
const char* experiment_kind_name(ExperimentKind k);

struct SweepAxis {
    std::string key;
    double start = 0, stop = 0, step = 0;
    std::vector<double> values() const;
};

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::ReadMargin;
    std::string figure;
    std::vector<SweepAxis> axes;
    std::vector<std::pair<std::string, std::string>> overrides;
    std::string out;
};

ExperimentSpec parse_experiment_spec(const std::string& text, const std::string& origin = "<spec>");

// One row per sweep point in axis order (last axis fastest). A failing point becomes an error cell.
Table run_experiment(const ExperimentSpec& spec, const Config& base, int jobs = 1);

// Metrics of a single evaluation, shared by sweeps and the single-shot commands.
Table single_point(ExperimentKind kind, const Config& c, int jobs = 1);

// Search ranges used by optimize-delta and vt-search.
std::vector<double> default_delta_range();
std::vector<double> default_ox2_scales();

}  // namespace xbar
