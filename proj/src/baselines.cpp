#include "peakloc/baselines.hpp"

#include "peakloc/completion.hpp"
#include "peakloc/rng.hpp"
#include "peakloc/unimodal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace peakloc::baselines {

namespace {

int argmax_abs_first(const Eigen::VectorXd& v) {  // 1-based, smallest index on ties
    int arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > best) {
            best = std::abs(v(i));
            arg = static_cast<int>(i);
        }
    }
    return arg + 1;
}

PeakCell argmax_cell(const Matrix& m) {  // row-major first on ties, 1-based
    int br = 0, bc = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            if (m(r, c) > best) {
                best = m(r, c);
                br = r;
                bc = c;
            }
    return PeakCell{br + 1, bc + 1};
}

}  // namespace

PeakCell mc_only_stage(const sampling::SampleSet& samples, int n_r, int n_c) {
    const auto res = completion::complete_rank_r(samples, n_r, n_c, 1);
    return PeakCell{argmax_abs_first(res.u), argmax_abs_first(res.v)};
}

PeakCell mc_uni_stage(const sampling::SampleSet& samples, int n_r, int n_c) {
    const auto res = completion::complete_rank_r(samples, n_r, n_c, 1);
    const auto fit_u = unimodal::best_unimodal_fit(res.u.cwiseAbs());
    const auto fit_v = unimodal::best_unimodal_fit(res.v.cwiseAbs());
    return PeakCell{argmax_abs_first(fit_u.z), argmax_abs_first(fit_v.z)};
}

Matrix interp_impute(const sampling::SampleSet& samples, int n_r, int n_c) {
    if (samples.count() < 1) throw std::invalid_argument("interp_impute: empty sample set");
    // observed cells bucketed by row, columns sorted, for a row-band search
    std::vector<std::vector<std::pair<int, double>>> by_row(n_r);
    for (int k = 0; k < samples.count(); ++k)
        by_row[samples.indices[k].row].push_back({samples.indices[k].col, samples.values[k]});
    for (auto& row : by_row) std::sort(row.begin(), row.end());

    Matrix out(n_r, n_c);
    for (int r = 0; r < n_r; ++r) {
        for (int c = 0; c < n_c; ++c) {
            long best_d2 = std::numeric_limits<long>::max();
            int best_r = -1, best_c = -1;
            double best_v = 0.0;
            auto consider = [&](int rr, int cc, double vv, long d2) {
                if (d2 < best_d2 ||
                    (d2 == best_d2 && (rr < best_r || (rr == best_r && cc < best_c)))) {
                    best_d2 = d2;
                    best_r = rr;
                    best_c = cc;
                    best_v = vv;
                }
            };
            // scan row bands outward; bands farther than the best hit so far
            // cannot improve
            for (int dr = 0; dr < n_r; ++dr) {
                const long dr2 = static_cast<long>(dr) * dr;
                if (dr2 > best_d2) break;
                for (int side = 0; side < (dr == 0 ? 1 : 2); ++side) {
                    const int rr = side == 0 ? r - dr : r + dr;
                    if (rr < 0 || rr >= n_r) continue;
                    const auto& row = by_row[rr];
                    if (row.empty()) continue;
                    // walk outward from the insertion point in both directions
                    auto it = std::lower_bound(
                        row.begin(), row.end(), std::make_pair(c, 0.0),
                        [](const auto& a, const auto& b) { return a.first < b.first; });
                    for (auto fwd = it; fwd != row.end(); ++fwd) {
                        const long d2 = dr2 + static_cast<long>(fwd->first - c) * (fwd->first - c);
                        if (d2 > best_d2) break;
                        consider(rr, fwd->first, fwd->second, d2);
                    }
                    for (auto bwd = it; bwd != row.begin();) {
                        --bwd;
                        const long d2 = dr2 + static_cast<long>(bwd->first - c) * (bwd->first - c);
                        if (d2 > best_d2) break;
                        consider(rr, bwd->first, bwd->second, d2);
                    }
                }
            }
            out(r, c) = best_v;
        }
    }
    return out;
}

Matrix box_smooth(const Matrix& m, int window) {
    if (window < 1 || window % 2 == 0)
        throw std::invalid_argument("box_smooth: window must be a positive odd integer");
    if (window == 1) return m;
    const int half = window / 2;
    const int n_r = static_cast<int>(m.rows());
    const int n_c = static_cast<int>(m.cols());
    Matrix out(n_r, n_c);
    for (int r = 0; r < n_r; ++r) {
        const int r0 = std::max(0, r - half), r1 = std::min(n_r - 1, r + half);
        for (int c = 0; c < n_c; ++c) {
            const int c0 = std::max(0, c - half), c1 = std::min(n_c - 1, c + half);
            out(r, c) = m.block(r0, c0, r1 - r0 + 1, c1 - c0 + 1).mean();
        }
    }
    return out;
}

PeakCell interp_stage(const sampling::SampleSet& samples, int n_r, int n_c, int smooth_window) {
    return argmax_cell(box_smooth(interp_impute(samples, n_r, n_c), smooth_window));
}

MeanShiftState::MeanShiftState(int n_r, int n_c)
    : rows(n_r), cols(n_c), cluster(static_cast<std::size_t>(n_r) * n_c, 0),
      read(static_cast<std::size_t>(n_r) * n_c, 0) {}

namespace {

// quantized compass steps, ordered by math angle from east, counterclockwise
constexpr int kStepRow[8] = {0, -1, -1, -1, 0, 1, 1, 1};
constexpr int kStepCol[8] = {1, 1, 0, -1, -1, -1, 0, 1};

double read_cell(const CellOracle& field, MeanShiftState& state, int r, int c) {
    const std::size_t at = static_cast<std::size_t>(r) * state.cols + c;
    if (!state.read[at]) {
        state.read[at] = 1;
        ++state.distinct_reads;
    }
    return field(r, c);
}

}  // namespace

MeanShiftTrail mean_shift_trail(const CellOracle& field, int n_r, int n_c, int omega,
                                sampling::Index start, int cluster_id, MeanShiftState& state) {
    if (omega < 1) throw std::invalid_argument("mean_shift_trail: omega must be >= 1");
    MeanShiftTrail trail;
    sampling::Index x = start;
    while (state.cluster_at(x.row, x.col) == 0) {
        state.cluster_at(x.row, x.col) = cluster_id;
        trail.cells.push_back(x);

        // value-weighted center of mass over the in-bounds infinity-norm
        // window, taken relative to the window's own centroid so that a
        // truncated boundary window does not drag the walk back inward; on
        // interior windows the centroid is the current cell
        double mass = 0.0, mr = 0.0, mc = 0.0;
        double count = 0.0, cr = 0.0, cc = 0.0;
        for (int r = std::max(0, x.row - omega); r <= std::min(n_r - 1, x.row + omega); ++r) {
            for (int c = std::max(0, x.col - omega); c <= std::min(n_c - 1, x.col + omega); ++c) {
                const double w = read_cell(field, state, r, c);
                mass += w;
                mr += w * r;
                mc += w * c;
                count += 1.0;
                cr += r;
                cc += c;
            }
        }
        if (mass == 0.0) break;  // no signal in the window: treat as zero displacement
        const double d_row = mr / mass - cr / count;
        const double d_col = mc / mass - cc / count;
        if (std::hypot(d_row, d_col) < 1e-12) break;  // converged in place

        // quantize into 8 compass bins (north = decreasing row)
        const double pi = 3.14159265358979323846;
        const double angle = std::atan2(-d_row, d_col);
        int bin = static_cast<int>(std::lround(angle / (pi / 4.0)));
        bin = ((bin % 8) + 8) % 8;
        sampling::Index next{x.row + kStepRow[bin], x.col + kStepCol[bin]};
        next.row = std::clamp(next.row, 0, n_r - 1);
        next.col = std::clamp(next.col, 0, n_c - 1);
        if (next == x) break;  // pinned against the boundary
        x = next;
    }
    trail.end = x;
    trail.new_peak = state.cluster_at(x.row, x.col) == cluster_id;
    if (!trail.new_peak) {
        // first contact with an older trail: the whole trail joins that cluster
        const int owner = state.cluster_at(x.row, x.col);
        for (const auto& cell : trail.cells) state.cluster_at(cell.row, cell.col) = owner;
    }
    return trail;
}

MeanShiftRunResult mean_shift_run(const CellOracle& field, int n_r, int n_c, int omega,
                                  int restarts, std::uint64_t seed) {
    if (restarts < 1) throw std::invalid_argument("mean_shift_run: restarts must be >= 1");
    MeanShiftState state(n_r, n_c);
    Rng rng(seed);
    MeanShiftRunResult out;
    int cluster_id = 1;
    long visited = 0;
    const long total = static_cast<long>(n_r) * n_c;

    for (int iter = 0; iter < restarts && visited < total; ++iter) {
        sampling::Index start;
        do {
            const long cell = static_cast<long>(rng.below(static_cast<std::uint64_t>(total)));
            start = sampling::Index{static_cast<int>(cell / n_c), static_cast<int>(cell % n_c)};
        } while (state.cluster_at(start.row, start.col) != 0);

        const MeanShiftTrail trail = mean_shift_trail(field, n_r, n_c, omega, start, cluster_id, state);
        visited += static_cast<long>(trail.cells.size());
        if (trail.new_peak) {
            MeanShiftPeak peak;
            peak.cell = PeakCell{trail.end.row + 1, trail.end.col + 1};
            peak.value = field(trail.end.row, trail.end.col);
            out.peaks.push_back(peak);
            ++cluster_id;
        }
    }

    out.samples_used = state.distinct_reads;
    if (out.peaks.empty()) throw std::logic_error("mean_shift_run: no peak detected");
    out.best = out.peaks.front();
    for (const auto& p : out.peaks)
        if (p.value > out.best.value) out.best = p;
    return out;
}

BaselineResult run_baseline_multistage(const pamcur::FieldOracle& field, const pamcur::Rect& domain,
                                       const MultistageConfig& config) {
    if (!(config.kappa > 0.0) || config.kappa > 1.0)
        throw std::invalid_argument("run_baseline_multistage: kappa must lie in (0, 1]");
    if (config.grid_n < 2)
        throw std::invalid_argument("run_baseline_multistage: grid_n must be at least 2");

    BaselineResult out;
    pamcur::Rect roi = domain;
    const double initial_diameter = std::hypot(domain.width(), domain.height());
    double peak_x = domain.center_x(), peak_y = domain.center_y();
    const int n = config.grid_n;

    for (int stage = 0; stage < config.max_stages; ++stage) {
        const pamcur::Rect stage_roi = roi;
        auto oracle = [&field, &stage_roi, n](int r, int c) {
            auto [x, y] = pamcur::cell_center(stage_roi, n, n, r, c);
            return field(x, y);
        };
        const std::uint64_t stage_seed = derive_seed(config.seed, static_cast<std::uint64_t>(stage));

        PeakCell cell;
        if (config.algorithm == Algorithm::mean_shift) {
            const auto ms = mean_shift_run(oracle, n, n, config.omega, config.restarts, stage_seed);
            cell = ms.best.cell;
            out.samples_used += ms.samples_used;
        } else {
            const int m = static_cast<int>(std::ceil(config.alpha * n * n));
            const auto indices = sampling::sample_uniform(n, n, m, stage_seed);
            const auto samples =
                sampling::observe(oracle, indices, config.noise, derive_seed(stage_seed, 1));
            out.samples_used += samples.count();
            switch (config.algorithm) {
                case Algorithm::mc_only: cell = mc_only_stage(samples, n, n); break;
                case Algorithm::mc_uni: cell = mc_uni_stage(samples, n, n); break;
                case Algorithm::interp: cell = interp_stage(samples, n, n, config.smooth_window); break;
                case Algorithm::mean_shift: break;  // handled above
            }
        }

        const auto [px, py] = pamcur::cell_center(stage_roi, n, n, cell.row - 1, cell.col - 1);
        out.stage_peaks.push_back({px, py});
        ++out.stages;

        const double movement = std::hypot(px - peak_x, py - peak_y);
        peak_x = px;
        peak_y = py;

        // kappa-scaled rectangle centered on the stage peak, clipped to the
        // current region of interest
        pamcur::Rect next;
        next.x_lo = std::max(stage_roi.x_lo, px - 0.5 * config.kappa * stage_roi.width());
        next.x_hi = std::min(stage_roi.x_hi, px + 0.5 * config.kappa * stage_roi.width());
        next.y_lo = std::max(stage_roi.y_lo, py - 0.5 * config.kappa * stage_roi.height());
        next.y_hi = std::min(stage_roi.y_hi, py + 0.5 * config.kappa * stage_roi.height());
        roi = next;

        if (stage > 0 && movement < config.stop_tolerance * initial_diameter) break;
    }

    out.peak_x = peak_x;
    out.peak_y = peak_y;
    return out;
}

}  // namespace peakloc::baselines
