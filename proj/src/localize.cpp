#include "peakloc/localize.hpp"

#include "peakloc/rng.hpp"
#include "peakloc/unimodal.hpp"

#include <cmath>
#include <stdexcept>

namespace peakloc::localize {

namespace {
// absorbs harmless rounding when the threshold sits at an attained support
constexpr double kSupportSlack = 1e-9;
}  // namespace

double alignment_bound(double sigma, double sigma0, double error_bound) {
    if (!(sigma0 > 0.0) || error_bound < 0.0 || error_bound > sigma || sigma > sigma0)
        throw std::invalid_argument(
            "alignment_bound: need 0 <= error_bound <= sigma <= sigma0, sigma0 > 0");
    const double gap = 1.0 - sigma / sigma0;
    const double ratio = sigma / sigma0;
    const double err = error_bound / sigma0;
    return gap + std::sqrt(std::max(0.0, gap * gap + ratio * ratio - err * err));
}

double accuracy_floor(double sigma, double error_bound) {
    if (!(sigma > 0.0) || error_bound < 0.0 || error_bound > sigma)
        throw std::invalid_argument("accuracy_floor: need 0 <= error_bound <= sigma, sigma > 0");
    const double ratio = error_bound / sigma;
    return std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
}

double shrinkage_margin(double error_bound, double sigma) {
    return 4.0 * accuracy_floor(sigma, error_bound) - 3.0;
}

std::vector<double> axis_support_profile(const Vector& u) {
    const double norm = u.norm();
    if (!(norm > 0.0)) throw std::invalid_argument("axis_support_profile: zero vector");
    return unimodal::cone_support_all(u.cwiseAbs() / norm);
}

AxisBounds localize_axis(const std::vector<double>& support_profile, double accuracy) {
    const int n = static_cast<int>(support_profile.size());
    AxisBounds b;
    b.lo = 0;
    for (int l = 1; l <= n; ++l) {
        if (support_profile[l - 1] >= accuracy - kSupportSlack) {
            if (b.lo == 0) b.lo = l;
            b.hi = l;
        }
    }
    if (b.lo == 0) {  // threshold unattainable; vacuous full-range answer
        b.lo = 1;
        b.hi = n;
        b.feasible = false;
    }
    return b;
}

AxisBounds localize_axis(const Vector& u, double accuracy) {
    return localize_axis(axis_support_profile(u), accuracy);
}

StageResult pamcur_stage(const CellOracle& field, int n_r, int n_c, const StageConfig& config) {
    if (config.budget < 1) throw std::invalid_argument("pamcur_stage: budget must be positive");
    StageResult out;

    const auto indices = sampling::sample_uniform(n_r, n_c, config.budget, config.seed);
    const auto samples = sampling::observe(field, indices, config.noise, derive_seed(config.seed, 1));
    out.samples_used = samples.count();

    out.completion = completion::complete_rank_r(samples, n_r, n_c, 1, config.completion_max_iters,
                                                 config.completion_tol);
    const double sigma = out.completion.sigma;
    const int m = samples.count();

    switch (config.error_bound_mode) {
        case ErrorBoundMode::formula: {
            const int n = std::max(n_r, n_c);
            const double q = static_cast<double>(m) / (static_cast<double>(n) * n);
            const double eps = config.eps >= 0.0 ? config.eps : config.noise.eps();
            out.error_bound = completion::reconstruction_error_bound(q, n, eps, m);
            break;
        }
        case ErrorBoundMode::empirical:
            out.error_bound = out.completion.residual *
                              std::sqrt(static_cast<double>(n_r) * n_c / static_cast<double>(m));
            break;
        case ErrorBoundMode::user:
            out.error_bound = config.user_error_bound;
            break;
    }

    if (!(sigma > 0.0) || out.error_bound >= sigma) {
        out.low_snr = true;
        out.accuracy = 0.0;
        out.box = LocalizationBox{1, n_c, 1, n_r};
        return out;
    }

    out.accuracy = accuracy_floor(sigma, out.error_bound);
    const AxisBounds rows = localize_axis(out.completion.u, out.accuracy);
    const AxisBounds cols = localize_axis(out.completion.v, out.accuracy);
    out.box = LocalizationBox{cols.lo, cols.hi, rows.lo, rows.hi};
    return out;
}

StageResult pamcur_stage(const Eigen::MatrixXd& field, const StageConfig& config) {
    return pamcur_stage([&field](int r, int c) { return field(r, c); },
                        static_cast<int>(field.rows()), static_cast<int>(field.cols()), config);
}

ShrinkageThresholds shrinkage_thresholds(const Vector& u0, double margin) {
    if (!(margin > 0.0))
        throw std::invalid_argument("shrinkage_thresholds: margin must be positive");
    if (std::abs(u0.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("shrinkage_thresholds: u0 must have unit norm");
    const int n = static_cast<int>(u0.size());
    const double bound = margin / std::sqrt(2.0);

    ShrinkageThresholds t;
    double acc = 0.0;
    t.prefix_last = 0;
    for (int j = 1; j <= n; ++j) {
        acc += std::abs(u0(j - 1));
        if (acc <= bound) t.prefix_last = j;
    }
    acc = 0.0;
    t.suffix_first = n + 1;
    for (int j = n; j >= 1; --j) {
        acc += std::abs(u0(j - 1));
        if (acc <= bound) t.suffix_first = j;
    }
    return t;
}

double shrinkage_region_bound(double l1_u, double l1_v, int n, double margin) {
    if (!(l1_u > 0.0) || !(l1_v > 0.0) || n < 1 || !(margin > 0.0))
        throw std::invalid_argument("shrinkage_region_bound: inputs must be positive");
    const double nn = static_cast<double>(n) * n;
    return 16.0 * l1_u * l1_u * l1_v * l1_v * nn / (margin * margin * margin * margin);
}

}  // namespace peakloc::localize
