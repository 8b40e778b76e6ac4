#pragma once

#include "peakloc/completion.hpp"
#include "peakloc/sampling.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <vector>

namespace peakloc::localize {

using Vector = Eigen::VectorXd;

/// Lower bound on the product of alignments between the true and the
/// estimated singular vector pairs, given the top singular values of both
/// matrices and a Frobenius bound on their difference:
///   (1 - s/s0) + sqrt((1 - s/s0)^2 + (s/s0)^2 - (e/s0)^2)
/// on the domain 0 <= error_bound <= sigma <= sigma0.
double alignment_bound(double sigma, double sigma0, double error_bound);

/// sqrt(1 - error_bound^2 / sigma^2): the alignment level certified from
/// quantities available during execution; never exceeds alignment_bound.
double accuracy_floor(double sigma, double error_bound);

/// 4 * accuracy_floor - 3; positive only while error_bound^2/sigma^2 < 7/16.
double shrinkage_margin(double error_bound, double sigma);

/// Index bounds (1-based, inclusive) of the cells an axis admits.
struct AxisBounds {
    int lo = 1;
    int hi = 1;
    bool feasible = true;  // false: no peak position attains the threshold
};

/// Cone support of |u|/|| |u| || at every peak position l = 1..n.
std::vector<double> axis_support_profile(const Vector& u);

/// Smallest and largest peak positions whose cone supports the normalized
/// |u| with inner product at least accuracy. Infeasible thresholds fall back to
/// the full range with `feasible = false`.
AxisBounds localize_axis(const Vector& u, double accuracy);
AxisBounds localize_axis(const std::vector<double>& support_profile, double accuracy);

/// Rectangular index region containing the target (all bounds 1-based).
struct LocalizationBox {
    int col_lo = 1, col_hi = 1;  // from the right singular vector v
    int row_lo = 1, row_hi = 1;  // from the left singular vector u
};

enum class ErrorBoundMode { formula, empirical, user };

struct StageConfig {
    int budget = 0;
    sampling::NoiseModel noise;    // measurement noise applied per read
    double eps = -1.0;             // noise bound input; < 0 => noise.eps()
    ErrorBoundMode error_bound_mode = ErrorBoundMode::empirical;
    double user_error_bound = 0.0;  // only read when error_bound_mode == user
    std::uint64_t seed = 0;
    int completion_max_iters = 500;
    double completion_tol = 1e-10;
};

struct StageResult {
    LocalizationBox box;
    completion::CompletionResult completion;
    double error_bound = 0.0;
    double accuracy = 0.0;  // sqrt(1 - error_bound^2/sigma^2), clamped to 0 on low SNR
    int samples_used = 0;
    bool low_snr = false;
};

/// Measurement access to a discretized field, zero-based (row, col).
using CellOracle = std::function<double(int, int)>;

/// One exploration pass: uniform sampling, rank-1 completion, dominant SVD,
/// then per-axis localization at threshold sqrt(1 - error_bound^2/sigma^2).
StageResult pamcur_stage(const CellOracle& field, int n_r, int n_c, const StageConfig& config);
StageResult pamcur_stage(const Eigen::MatrixXd& field, const StageConfig& config);

/// Geometric-shrinkage thresholds: the largest prefix index and the smallest
/// suffix index whose l1 mass stays within margin / sqrt(2). `prefix_last`
/// is 0 when even the first entry exceeds the bound; `suffix_first` is n + 1
/// symmetrically.
struct ShrinkageThresholds {
    int prefix_last = 0;
    int suffix_first = 0;
};
ShrinkageThresholds shrinkage_thresholds(const Vector& u0, double margin);

/// Localized-region size bound 16 l1_u^2 l1_v^2 n^2 / margin^4, where l1_u
/// and l1_v are the l1 norms of the unit singular vectors divided by sqrt(n).
double shrinkage_region_bound(double l1_u, double l1_v, int n, double margin);

}  // namespace peakloc::localize
