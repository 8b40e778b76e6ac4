#include "peakloc/completion.hpp"

#include "peakloc/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace peakloc::completion {

namespace {

constexpr std::uint64_t kPowerIterationSeed = 0x5eed5eed5eed5eedULL;

void apply_sign_convention(Vector& u, Vector& v) {
    int arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (std::abs(u(i)) > best) {
            best = std::abs(u(i));
            arg = static_cast<int>(i);
        }
    }
    if (u(arg) < 0.0) {
        u = -u;
        v = -v;
    }
}

Matrix zero_filled(const sampling::SampleSet& samples, int n_r, int n_c) {
    Matrix m = Matrix::Zero(n_r, n_c);
    for (int k = 0; k < samples.count(); ++k)
        m(samples.indices[k].row, samples.indices[k].col) = samples.values[k];
    return m;
}

double observed_residual(const Matrix& h_hat, const sampling::SampleSet& samples) {
    double acc = 0.0;
    for (int k = 0; k < samples.count(); ++k) {
        const double d = h_hat(samples.indices[k].row, samples.indices[k].col) - samples.values[k];
        acc += d * d;
    }
    return std::sqrt(acc);
}

}  // namespace

SingularTriplet dominant_svd(const Matrix& m) {
    SingularTriplet out;
    const int n_r = static_cast<int>(m.rows());
    const int n_c = static_cast<int>(m.cols());
    out.u = Vector::Zero(n_r);
    out.v = Vector::Zero(n_c);
    out.u(0) = 1.0;
    out.v(0) = 1.0;
    if (m.norm() == 0.0) return out;  // zero matrix: sigma 0, basis vectors by convention

    // power iteration on the Gram matrix of the shorter side, run until the
    // singular-pair residual || M^T u - sigma v || is negligible (the
    // Rayleigh quotient alone converges twice as fast as the vectors)
    const bool col_side = n_c <= n_r;
    const int dim = col_side ? n_c : n_r;
    Rng rng(kPowerIterationSeed);
    Vector x(dim);
    for (int i = 0; i < dim; ++i) x(i) = rng.normal();
    x.normalize();

    for (int iter = 0; iter < 100000; ++iter) {
        const Vector w = col_side ? Vector(m * x) : Vector(m.transpose() * x);
        const double s = w.norm();
        if (s == 0.0) {  // start vector fell in the null space; redraw
            for (int i = 0; i < dim; ++i) x(i) = rng.normal();
            x.normalize();
            continue;
        }
        const Vector y = col_side ? Vector(m.transpose() * w) : Vector(m * w);
        const double residual = (y / s - s * x).norm();
        x = y / y.norm();
        if (residual <= 1e-11 * s && iter >= 2) break;
    }

    if (col_side) {
        out.v = x;
        const Vector mu = m * x;
        out.sigma = mu.norm();
        out.u = out.sigma > 0.0 ? Vector(mu / out.sigma) : out.u;
    } else {
        out.u = x;
        const Vector mv = m.transpose() * x;
        out.sigma = mv.norm();
        out.v = out.sigma > 0.0 ? Vector(mv / out.sigma) : out.v;
    }
    apply_sign_convention(out.u, out.v);
    return out;
}

double nuclear_norm(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().sum();
}

CompletionResult complete_rank_r(const sampling::SampleSet& samples, int n_r, int n_c, int r,
                                 int max_iters, double tol) {
    if (r < 1 || r > std::min(n_r, n_c))
        throw std::invalid_argument("complete_rank_r: rank out of range");
    if (samples.count() < 1) throw std::invalid_argument("complete_rank_r: empty sample set");

    CompletionResult res;
    res.budget_warning = samples.count() < r * (n_r + n_c);

    const Matrix m0 = zero_filled(samples, n_r, n_c);
    if (m0.norm() == 0.0) {
        res.h_hat = Matrix::Zero(n_r, n_c);
        const SingularTriplet t = dominant_svd(res.h_hat);
        res.u = t.u;
        res.sigma = 0.0;
        res.v = t.v;
        res.converged = true;
        return res;
    }

    // spectral initialization from the zero-filled matrix
    Matrix x(n_r, r), y(n_c, r);
    if (r == 1) {
        const SingularTriplet t = dominant_svd(m0);
        const double s = std::sqrt(t.sigma);
        x.col(0) = s * t.u;
        y.col(0) = s * t.v;
    } else {
        Eigen::JacobiSVD<Matrix> svd(m0, Eigen::ComputeThinU | Eigen::ComputeThinV);
        for (int k = 0; k < r; ++k) {
            const double s = std::sqrt(svd.singularValues()(k));
            x.col(k) = s * svd.matrixU().col(k);
            y.col(k) = s * svd.matrixV().col(k);
        }
    }

    // per-row and per-column observation lists
    std::vector<std::vector<std::pair<int, double>>> row_obs(n_r), col_obs(n_c);
    for (int k = 0; k < samples.count(); ++k) {
        row_obs[samples.indices[k].row].push_back({samples.indices[k].col, samples.values[k]});
        col_obs[samples.indices[k].col].push_back({samples.indices[k].row, samples.values[k]});
    }
    bool degenerate = false;
    for (const auto& l : row_obs) degenerate |= l.empty();
    for (const auto& l : col_obs) degenerate |= l.empty();

    auto solve_side = [&](Matrix& target, const Matrix& fixed,
                          const std::vector<std::vector<std::pair<int, double>>>& obs) {
        for (std::size_t i = 0; i < obs.size(); ++i) {
            if (obs[i].empty()) continue;  // keep previous factors; descent is preserved
            Matrix gram = Matrix::Zero(r, r);
            Vector rhs = Vector::Zero(r);
            for (const auto& [j, value] : obs[i]) {
                gram.noalias() += fixed.row(j).transpose() * fixed.row(j);
                rhs.noalias() += value * fixed.row(j).transpose();
            }
            Eigen::LDLT<Matrix> ldlt(gram);
            if (ldlt.info() != Eigen::Success) continue;
            const Vector sol = ldlt.solve(rhs);
            const Vector check = gram * sol - rhs;
            if (check.norm() > 1e-8 * (1.0 + rhs.norm())) continue;  // singular system
            target.row(i) = sol.transpose();
        }
    };

    double obs_scale = 0.0;
    for (const double v : samples.values) obs_scale += v * v;
    obs_scale = std::sqrt(obs_scale);

    double prev = 0.0;
    bool met_tol = false;
    int iter = 0;
    for (; iter < max_iters; ++iter) {
        solve_side(x, y, row_obs);
        solve_side(y, x, col_obs);
        const double resid = observed_residual(x * y.transpose(), samples);
        res.residual_trace.push_back(resid);
        const bool exact_fit = resid <= tol * obs_scale;
        if (exact_fit || (iter > 0 && std::abs(prev - resid) <= tol * std::max(resid, 1e-300))) {
            met_tol = true;
            ++iter;
            break;
        }
        prev = resid;
    }

    res.h_hat = x * y.transpose();
    const SingularTriplet t = dominant_svd(res.h_hat);
    res.u = t.u;
    res.sigma = t.sigma;
    res.v = t.v;
    res.residual = observed_residual(res.h_hat, samples);
    res.iterations = iter;
    res.converged = met_tol && !degenerate;
    return res;
}

CompletionResult complete_nuclear(const sampling::SampleSet& samples, int n_r, int n_c,
                                  double eps_total, int max_iters, double tol) {
    if (eps_total < 0.0) throw std::invalid_argument("complete_nuclear: eps_total must be >= 0");
    if (samples.count() < 1) throw std::invalid_argument("complete_nuclear: empty sample set");

    CompletionResult res;
    const Matrix m0 = zero_filled(samples, n_r, n_c);
    const double obs_norm = m0.norm();

    if (obs_norm <= eps_total) {
        // the zero matrix is feasible, and no feasible point has a smaller
        // nuclear norm
        res.h_hat = Matrix::Zero(n_r, n_c);
        const SingularTriplet t = dominant_svd(res.h_hat);
        res.u = t.u;
        res.v = t.v;
        res.residual = obs_norm;
        res.converged = true;
        return res;
    }

    const double target = std::max(eps_total, tol * obs_norm);
    Matrix q = Matrix::Zero(n_r, n_c);
    double mu = 0.9 * dominant_svd(m0).sigma;
    double resid = obs_norm;
    int iter = 0;
    bool met = false;
    while (iter < max_iters) {
        // proximal gradient at the current threshold until the iterate
        // settles (the sampling mask has unit Lipschitz constant, so the
        // step size is 1); each settled iterate tracks the regularization
        // path, whose small-threshold limit is the minimum-nuclear-norm
        // interpolant
        while (iter < max_iters) {
            Matrix grad = Matrix::Zero(n_r, n_c);
            for (int k = 0; k < samples.count(); ++k) {
                const auto [r, c] = samples.indices[k];
                grad(r, c) = q(r, c) - samples.values[k];
            }
            Eigen::JacobiSVD<Matrix> svd(q - grad, Eigen::ComputeThinU | Eigen::ComputeThinV);
            Vector s = svd.singularValues();
            for (Eigen::Index k = 0; k < s.size(); ++k) s(k) = std::max(0.0, s(k) - mu);
            const Matrix next = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
            const double step = (next - q).norm();
            q = next;
            ++iter;
            if (step <= 1e-7 * std::max(1.0, q.norm())) break;
        }
        resid = observed_residual(q, samples);
        if (resid <= target) {
            met = true;
            break;
        }
        mu *= 0.9;
        if (mu < 1e-15 * obs_norm) break;
    }

    res.h_hat = q;
    const SingularTriplet t = dominant_svd(q);
    res.u = t.u;
    res.sigma = t.sigma;
    res.v = t.v;
    res.residual = resid;
    res.iterations = iter;
    res.converged = met;
    return res;
}

double completion_constant(double q, int n) {
    if (!(q > 0.0) || q > 1.0) throw std::invalid_argument("completion_constant: q must be in (0, 1]");
    return 2.0 + 4.0 * std::sqrt(n * (1.0 + 2.0 / q));
}

double reconstruction_error_bound(double q, int n, double eps, int m) {
    if (eps < 0.0) throw std::invalid_argument("reconstruction_error_bound: eps must be >= 0");
    const double implied = static_cast<double>(m) / (static_cast<double>(n) * n);
    if (std::abs(q - implied) > 1e-9)
        throw std::invalid_argument("reconstruction_error_bound: q inconsistent with m / n^2");
    return completion_constant(q, n) * eps * m;
}

double snr(double sigma0, double eps, int m) {
    const double noise = eps * m;
    if (!(noise > 0.0)) throw std::invalid_argument("snr: eps * m must be positive");
    return (sigma0 * sigma0) / (noise * noise);
}

}  // namespace peakloc::completion
