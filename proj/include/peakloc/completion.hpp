#pragma once

#include "peakloc/sampling.hpp"

#include <Eigen/Core>

#include <vector>

namespace peakloc::completion {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct SingularTriplet {
    Vector u;
    double sigma = 0.0;
    Vector v;
};

/// Dominant singular triplet by power iteration on the Gram matrix of the
/// shorter side, seeded random start, 1e-12 relative tolerance on the
/// Rayleigh quotient. Sign convention: the entry of u with the largest
/// magnitude (first on ties) is nonnegative.
SingularTriplet dominant_svd(const Matrix& m);

/// Sum of singular values.
double nuclear_norm(const Matrix& m);

struct CompletionResult {
    Matrix h_hat;
    Vector u;
    double sigma = 0.0;
    Vector v;
    double residual = 0.0;  // Frobenius norm of the misfit on observed entries
    int iterations = 0;
    bool converged = false;
    bool budget_warning = false;        // fewer samples than r (n_r + n_c)
    std::vector<double> residual_trace;  // observed-entry residual per sweep
};

/// Rank-r factorization completion by alternating least squares on the
/// observed entries, spectrally initialized from the zero-filled matrix.
/// Degenerate sampling (an unobserved row or column) is flagged through
/// `converged`, never thrown.
CompletionResult complete_rank_r(const sampling::SampleSet& samples, int n_r, int n_c, int r,
                                 int max_iters = 500, double tol = 1e-10);

/// Approximate solver for
///   min ||Q||_*  subject to  ||P(Q) - P(H)||_F <= eps_total
/// by singular-value soft-thresholding with a geometric (x0.9) threshold
/// continuation until the residual constraint is met.
CompletionResult complete_nuclear(const sampling::SampleSet& samples, int n_r, int n_c,
                                  double eps_total, int max_iters = 20000, double tol = 1e-9);

/// C(q, n) = 2 + 4 sqrt(n (1 + 2/q)).
double completion_constant(double q, int n);

/// Worst-case Frobenius reconstruction error C(q, n) * eps * m. The
/// fraction q must equal m / n^2 within 1e-9.
double reconstruction_error_bound(double q, int n, double eps, int m);

/// SNR = sigma0^2 / (eps * m)^2, noise power taken over observed entries.
double snr(double sigma0, double eps, int m);

}  // namespace peakloc::completion
