#pragma once

#include "peakloc/localize.hpp"
#include "peakloc/sampling.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace peakloc::pamcur {

/// Axis-aligned physical rectangle, x along columns and y along rows.
struct Rect {
    double x_lo = 0.0, x_hi = 1.0;
    double y_lo = 0.0, y_hi = 1.0;

    double width() const { return x_hi - x_lo; }
    double height() const { return y_hi - y_lo; }
    double area() const { return width() * height(); }
    double center_x() const { return 0.5 * (x_lo + x_hi); }
    double center_y() const { return 0.5 * (y_lo + y_hi); }
    bool contains(const Rect& inner, double slack = 1e-12) const;
};

/// Field measurement at a physical location.
using FieldOracle = std::function<double(double x, double y)>;

struct RunConfig {
    int grid_n = 50;              // per-stage grid is grid_n x grid_n
    double alpha = 0.5;           // per-stage budget fraction of grid_n^2
    sampling::NoiseModel noise;
    int max_stages = 8;
    double stop_tolerance = 1e-3; // peak movement fraction of initial diameter
    std::uint64_t seed = 0;
    localize::ErrorBoundMode error_bound_mode = localize::ErrorBoundMode::empirical;
    double user_error_bound = 0.0;
    double eps = -1.0;            // noise bound for formula mode; < 0 => noise.eps()
    int completion_max_iters = 500;
    double completion_tol = 1e-10;
};

struct StageTrace {
    Rect roi;
    localize::LocalizationBox box;
    Rect box_physical;
    int samples = 0;
    double accuracy = 0.0;
    double sigma = 0.0;
    double error_bound = 0.0;
    bool low_snr = false;
};

struct RunResult {
    std::vector<StageTrace> stages;
    Rect final_box_physical;
    double peak_x = 0.0;
    double peak_y = 0.0;
    long total_samples = 0;
    bool stalled = false;  // stopped after two low-SNR stages
};

/// Physical cover of a box: the outer edges of its boundary cells, so grid
/// quantization can never clip the true peak out of the next stage.
Rect box_to_physical(const localize::LocalizationBox& box, const Rect& roi, int n_r, int n_c);

/// Physical center of the covered rectangle.
std::pair<double, double> peak_estimate_from_box(const localize::LocalizationBox& box,
                                                 const Rect& roi, int n_r, int n_c);

/// Center of cell (row, col) (zero-based) of an n_r x n_c grid over roi.
std::pair<double, double> cell_center(const Rect& roi, int n_r, int n_c, int row, int col);

/// Exploration-exploitation driver: re-grid the region of interest, run one
/// localization stage, shrink to the returned box, repeat. Sampling is fresh
/// at every stage; samples are counted per observation event.
RunResult run_pamcur(const FieldOracle& field, const Rect& domain, const RunConfig& config);

}  // namespace peakloc::pamcur
