#pragma once

#include "peakloc/baselines.hpp"
#include "peakloc/fields.hpp"
#include "peakloc/pamcur.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace peakloc::harness {

/// Named numeric series of equal length plus run metadata.
struct ExperimentTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;
    std::vector<std::pair<std::string, std::string>> metadata;

    void add_column(const std::string& name, std::vector<double> values);
    void add_metadata(const std::string& key, const std::string& value);
    int rows() const;
    int columns() const { return static_cast<int>(names.size()); }
    const std::vector<double>& column(const std::string& name) const;
};

enum class TableFormat { csv, svg_lineplot };

/// CSV: '#'-prefixed metadata lines, a header row, then data rows (UTF-8,
/// LF). SVG: one polyline per series against the first column, linear or
/// log-scaled vertical axis.
void emit_table(const ExperimentTable& table, const std::string& path, TableFormat format,
                bool log_y = false);
ExperimentTable read_table_csv(const std::string& path);

/// Worker cap: PEAKLOC_WORKERS if set, else the hardware concurrency.
int worker_count();

/// Run fn(0..count-1) across workers; results must go to per-index slots.
void parallel_for(int count, const std::function<void(int)>& fn);

/// Flat key-value configuration with [section] headers, '#' comments and
/// comma-separated numeric lists.
class Config {
public:
    static Config load(const std::string& path);
    static Config parse(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 const std::vector<double>& fallback) const;
    void set(const std::string& section, const std::string& key, const std::string& value);
    std::string echo() const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// Hash of config text and seed; identifies a reproducible run.
std::string run_id(const std::string& config_echo, std::uint64_t seed);

/// Normalized one-step localization bound (l_hi - l_lo) / n of the
/// discretized profile, per accuracy level. The profile is sampled on
/// [-half_width, half_width] and scaled to unit norm.
ExperimentTable tradeoff_curve(const fields::ProfileSpec& profile, int n,
                               const std::vector<double>& accuracy_grid, double half_width = 10.0);

enum class SweepAlgorithm { mc_only, mc_uni, interp, pamcur };
SweepAlgorithm sweep_algorithm_from_name(const std::string& name);

struct SweepConfig {
    fields::ProfileSpec profile = fields::ProfileSpec::laplacian();
    std::vector<double> window_sizes;  // physical half-width of the search space
    std::vector<double> spreads;       // profile scale s, i.e. decay a = 1/s
    int trials = 10;
    sampling::NoiseModel noise;
    SweepAlgorithm algorithm = SweepAlgorithm::mc_only;
    int grid_n = 50;
    double alpha = 0.3;
    int smooth_window = 3;
    std::uint64_t seed = 0;
};

/// Fraction of trials locating the peak within 4% of the search-space side,
/// per (window, spread) pair, with the field center drawn at random.
ExperimentTable detection_probability_sweep(const SweepConfig& config);

/// A benchmark subject: a measurable field over a domain with known truth.
struct BenchSubject {
    pamcur::FieldOracle field;
    pamcur::Rect domain;
    double peak_x = 0.0;
    double peak_y = 0.0;
};

BenchSubject make_field_subject(const fields::SeparableField& field, const pamcur::Rect& domain);
BenchSubject make_raster_subject(const Eigen::MatrixXd& raster, const pamcur::Rect& domain);

struct BenchConfig {
    std::vector<std::string> algorithms = {"pamcur", "mconly", "mcuni", "interp", "ms"};
    std::vector<double> alphas = {0.3, 0.4, 0.5, 0.7};
    std::vector<int> ms_restarts = {2, 5, 10};
    int omega = 2;
    int trials = 500;
    int grid_n = 50;
    double kappa = 0.5;
    int smooth_window = 3;
    sampling::NoiseModel noise;
    int max_stages = 6;
    double stop_tolerance = 1e-3;
    std::uint64_t seed = 0;
};

/// Localization accuracy against sample count per algorithm and parameter;
/// multi-stage box areas are reported for the adaptive algorithm.
ExperimentTable samples_vs_error(const BenchSubject& subject, const BenchConfig& config);

}  // namespace peakloc::harness
