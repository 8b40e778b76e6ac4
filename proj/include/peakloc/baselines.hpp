#pragma once

#include "peakloc/pamcur.hpp"
#include "peakloc/sampling.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <vector>

namespace peakloc::baselines {

using Matrix = Eigen::MatrixXd;

/// Grid cell, 1-based.
struct PeakCell {
    int row = 1;
    int col = 1;
    friend bool operator==(const PeakCell&, const PeakCell&) = default;
};

/// Completion followed by peak detection: rank-1 fit, then the largest
/// magnitude entries of the dominant singular vectors. Ties break to the
/// smallest index.
PeakCell mc_only_stage(const sampling::SampleSet& samples, int n_r, int n_c);

/// As mc_only_stage, with a best-unimodal-fit regression of |u| and |v|
/// before the peak detection step.
PeakCell mc_uni_stage(const sampling::SampleSet& samples, int n_r, int n_c);

/// Nearest-observed-cell imputation (Euclidean on indices; ties prefer the
/// smaller row, then the smaller column). Exposed for tests.
Matrix interp_impute(const sampling::SampleSet& samples, int n_r, int n_c);

/// Box moving average; edge cells average over the in-bounds intersection.
Matrix box_smooth(const Matrix& m, int window);

/// Impute, smooth with the given odd window, then return the argmax cell
/// (row-major first on ties).
PeakCell interp_stage(const sampling::SampleSet& samples, int n_r, int n_c, int smooth_window);

/// Zero-based measurement access to the current stage grid.
using CellOracle = std::function<double(int, int)>;

struct MeanShiftPeak {
    PeakCell cell;
    double value = 0.0;
};

/// Bookkeeping shared by the trails of one mean-shift run.
struct MeanShiftState {
    MeanShiftState(int n_r, int n_c);
    int rows, cols;
    std::vector<int> cluster;   // 0 = unvisited, else cluster id
    std::vector<char> read;     // cells already counted as samples
    long distinct_reads = 0;

    int& cluster_at(int r, int c) { return cluster[r * cols + c]; }
};

struct MeanShiftTrail {
    std::vector<sampling::Index> cells;  // visited in order
    sampling::Index end;                 // termination cell
    bool new_peak = false;               // end belongs to this trail's cluster
};

/// One gradient-ascent trail: walk toward the windowed center of mass,
/// quantized to the 8 compass neighbors, until any visited cell is reached
/// (zero displacement counts as an immediate revisit).
MeanShiftTrail mean_shift_trail(const CellOracle& field, int n_r, int n_c, int omega,
                                sampling::Index start, int cluster_id, MeanShiftState& state);

struct BaselineResult {
    double peak_x = 0.0;  // physical estimate (column axis)
    double peak_y = 0.0;  // physical estimate (row axis)
    long samples_used = 0;
    int stages = 0;
    std::vector<std::pair<double, double>> stage_peaks;
};

struct MeanShiftRunResult {
    MeanShiftPeak best;
    std::vector<MeanShiftPeak> peaks;
    long samples_used = 0;
};

/// Restarted mean-shift ascent on one grid; returns the highest-valued
/// detected peak. Samples count distinct cells read (window plus trail).
MeanShiftRunResult mean_shift_run(const CellOracle& field, int n_r, int n_c, int omega,
                                  int restarts, std::uint64_t seed);

enum class Algorithm { mc_only, mc_uni, interp, mean_shift };

struct MultistageConfig {
    Algorithm algorithm = Algorithm::mc_only;
    int grid_n = 50;
    double alpha = 0.5;        // sampling fraction (mc_only, mc_uni, interp)
    int smooth_window = 3;     // interp
    int omega = 2;             // mean_shift window radius
    int restarts = 5;          // mean_shift
    double kappa = 0.5;        // fixed per-stage ROI scale
    sampling::NoiseModel noise;
    int max_stages = 8;
    double stop_tolerance = 1e-3;
    std::uint64_t seed = 0;
};

/// Fixed-rate multi-resolution wrapper: each stage runs the single-stage
/// algorithm on the re-gridded region of interest, then recenters a
/// kappa-scaled rectangle (clipped to the current region) on the stage peak.
BaselineResult run_baseline_multistage(const pamcur::FieldOracle& field, const pamcur::Rect& domain,
                                       const MultistageConfig& config);

}  // namespace peakloc::baselines
