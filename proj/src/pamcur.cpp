#include "peakloc/pamcur.hpp"

#include "peakloc/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace peakloc::pamcur {

bool Rect::contains(const Rect& inner, double slack) const {
    return inner.x_lo >= x_lo - slack && inner.x_hi <= x_hi + slack &&
           inner.y_lo >= y_lo - slack && inner.y_hi <= y_hi + slack;
}

std::pair<double, double> cell_center(const Rect& roi, int n_r, int n_c, int row, int col) {
    const double dx = roi.width() / n_c;
    const double dy = roi.height() / n_r;
    return {roi.x_lo + (col + 0.5) * dx, roi.y_lo + (row + 0.5) * dy};
}

Rect box_to_physical(const localize::LocalizationBox& box, const Rect& roi, int n_r, int n_c) {
    const double dx = roi.width() / n_c;
    const double dy = roi.height() / n_r;
    Rect out;
    out.x_lo = roi.x_lo + (box.col_lo - 1) * dx;
    out.x_hi = roi.x_lo + box.col_hi * dx;
    out.y_lo = roi.y_lo + (box.row_lo - 1) * dy;
    out.y_hi = roi.y_lo + box.row_hi * dy;
    return out;
}

std::pair<double, double> peak_estimate_from_box(const localize::LocalizationBox& box,
                                                 const Rect& roi, int n_r, int n_c) {
    const Rect r = box_to_physical(box, roi, n_r, n_c);
    return {r.center_x(), r.center_y()};
}

RunResult run_pamcur(const FieldOracle& field, const Rect& domain, const RunConfig& config) {
    if (config.grid_n < 2) throw std::invalid_argument("run_pamcur: grid_n must be at least 2");
    if (!(config.alpha > 0.0) || config.alpha > 1.0)
        throw std::invalid_argument("run_pamcur: alpha must lie in (0, 1]");
    const int budget = static_cast<int>(std::ceil(config.alpha * config.grid_n * config.grid_n));
    if (budget < 1) throw std::invalid_argument("run_pamcur: empty per-stage budget");
    if (config.max_stages < 1) throw std::invalid_argument("run_pamcur: max_stages must be >= 1");

    RunResult out;
    Rect roi = domain;
    const double initial_diameter = std::hypot(domain.width(), domain.height());
    double prev_peak_x = domain.center_x();
    double prev_peak_y = domain.center_y();
    double prev_box_area = std::numeric_limits<double>::infinity();
    int stalls = 0;

    for (int stage = 0; stage < config.max_stages; ++stage) {
        const int n = config.grid_n;
        localize::StageConfig sc;
        sc.budget = budget;
        sc.noise = config.noise;
        sc.eps = config.eps;
        sc.error_bound_mode = config.error_bound_mode;
        sc.user_error_bound = config.user_error_bound;
        sc.seed = derive_seed(config.seed, static_cast<std::uint64_t>(stage));
        sc.completion_max_iters = config.completion_max_iters;
        sc.completion_tol = config.completion_tol;

        const Rect stage_roi = roi;
        auto oracle = [&field, &stage_roi, n](int r, int c) {
            auto [x, y] = cell_center(stage_roi, n, n, r, c);
            return field(x, y);
        };
        const localize::StageResult sr = localize::pamcur_stage(oracle, n, n, sc);

        StageTrace trace;
        trace.roi = stage_roi;
        trace.box = sr.box;
        trace.box_physical = box_to_physical(sr.box, stage_roi, n, n);
        trace.samples = sr.samples_used;
        trace.accuracy = sr.accuracy;
        trace.sigma = sr.completion.sigma;
        trace.error_bound = sr.error_bound;
        trace.low_snr = sr.low_snr;
        out.stages.push_back(trace);
        out.total_samples += sr.samples_used;

        if (sr.low_snr) {
            if (++stalls >= 2) {
                out.stalled = true;
                break;
            }
            continue;  // region of interest unchanged
        }

        const auto [px, py] = peak_estimate_from_box(sr.box, stage_roi, n, n);
        const double movement = std::hypot(px - prev_peak_x, py - prev_peak_y);
        prev_peak_x = px;
        prev_peak_y = py;
        roi = trace.box_physical;

        if (stage > 0 && movement < config.stop_tolerance * initial_diameter) break;
        if (trace.box_physical.area() >= prev_box_area) break;  // box stopped shrinking
        prev_box_area = trace.box_physical.area();
    }

    out.final_box_physical = roi;
    out.peak_x = prev_peak_x;
    out.peak_y = prev_peak_y;
    if (out.stages.empty()) throw std::logic_error("run_pamcur: no stages executed");
    return out;
}

}  // namespace peakloc::pamcur
