#include "peakloc/fields.hpp"

#include <algorithm>
#include <cmath>

namespace peakloc::fields {

double gamma_function(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("gamma_function: argument must be positive");
    // Lanczos, g = 7
    static const double coeff[9] = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        // reflection keeps small arguments accurate
        const double pi = 3.14159265358979323846;
        return pi / (std::sin(pi * x) * gamma_function(1.0 - x));
    }
    x -= 1.0;
    double a = coeff[0];
    const double t = x + 7.5;
    for (int i = 1; i < 9; ++i) a += coeff[i] / (x + i);
    const double sqrt_two_pi = 2.5066282746310002;
    return sqrt_two_pi * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

ProfileSpec ProfileSpec::laplacian(double a) {
    ProfileSpec s;
    s.kind = ProfileKind::laplacian;
    s.scale = a;
    return s;
}

ProfileSpec ProfileSpec::gaussian(double a) {
    ProfileSpec s;
    s.kind = ProfileKind::gaussian;
    s.scale = a;
    return s;
}

ProfileSpec ProfileSpec::cauchy(double a) {
    ProfileSpec s;
    s.kind = ProfileKind::cauchy;
    s.scale = a;
    return s;
}

ProfileSpec ProfileSpec::exponential(double a, double p) {
    ProfileSpec s;
    s.kind = ProfileKind::exponential;
    s.scale = a;
    s.exponent = p;
    return s;
}

ProfileSpec ProfileSpec::powerlaw(double a, double p, double r) {
    ProfileSpec s;
    s.kind = ProfileKind::powerlaw;
    s.scale = a;
    s.exponent = p;
    s.power = r;
    return s;
}

ProfileSpec ProfileSpec::product(ProfileSpec f, ProfileSpec g) {
    ProfileSpec s;
    s.kind = ProfileKind::product;
    s.lhs = std::make_shared<ProfileSpec>(std::move(f));
    s.rhs = std::make_shared<ProfileSpec>(std::move(g));
    return s;
}

double eval_profile(const ProfileSpec& profile, double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("eval_profile: coordinate must be finite");
    switch (profile.kind) {
        case ProfileKind::laplacian:
            return std::exp(-profile.scale * std::abs(x));
        case ProfileKind::gaussian:
            return std::exp(-profile.scale * x * x);
        case ProfileKind::cauchy: {
            const double pi = 3.14159265358979323846;
            const double a = profile.scale;
            return 1.0 / (pi * a * (1.0 + (x / a) * (x / a)));
        }
        case ProfileKind::exponential:
            return std::exp(-profile.scale * std::pow(std::abs(x), profile.exponent));
        case ProfileKind::powerlaw:
            return std::pow(profile.scale + std::pow(std::abs(x), profile.exponent), -profile.power);
        case ProfileKind::product:
            return eval_profile(*profile.lhs, x) * eval_profile(*profile.rhs, x);
    }
    throw std::logic_error("eval_profile: unknown profile kind");
}

double eval_field(const SeparableField& field, double y_c, double y_r) {
    return field.amplitude * eval_profile(field.col_profile, y_c - field.center_c) *
           eval_profile(field.row_profile, y_r - field.center_r);
}

GridSpec::GridSpec(std::vector<double> rows, std::vector<double> cols)
    : row_coords(std::move(rows)), col_coords(std::move(cols)) {
    if (row_coords.empty() || col_coords.empty())
        throw std::invalid_argument("GridSpec: coordinate arrays must be nonempty");
    auto ascending = [](const std::vector<double>& a) {
        for (std::size_t i = 1; i < a.size(); ++i)
            if (!(a[i - 1] < a[i])) return false;
        return true;
    };
    if (!ascending(row_coords) || !ascending(col_coords))
        throw std::invalid_argument("GridSpec: coordinates must be strictly ascending");
}

GridSpec GridSpec::uniform(int n_r, int n_c, double lo, double hi) {
    if (n_r < 1 || n_c < 1) throw std::invalid_argument("GridSpec::uniform: sizes must be positive");
    auto linspace = [&](int n) {
        std::vector<double> v(n);
        if (n == 1) {
            v[0] = 0.5 * (lo + hi);
        } else {
            for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
        }
        return v;
    };
    return GridSpec(linspace(n_r), linspace(n_c));
}

std::pair<Vector, Vector> discretize_factors(const SeparableField& field, const GridSpec& grid) {
    Vector g(grid.n_rows());
    Vector f(grid.n_cols());
    for (int r = 0; r < grid.n_rows(); ++r)
        g(r) = eval_profile(field.row_profile, grid.row_coords[r] - field.center_r);
    for (int c = 0; c < grid.n_cols(); ++c)
        f(c) = eval_profile(field.col_profile, grid.col_coords[c] - field.center_c);
    return {g, f};
}

Matrix discretize(const SeparableField& field, const GridSpec& grid) {
    auto [g, f] = discretize_factors(field, grid);
    return field.amplitude * g * f.transpose();
}

Matrix inverse_square_matrix(const GridSpec& grid, double h0) {
    Matrix out(grid.n_rows(), grid.n_cols());
    for (int r = 0; r < grid.n_rows(); ++r) {
        for (int c = 0; c < grid.n_cols(); ++c) {
            const double yc = grid.col_coords[c];
            const double yr = grid.row_coords[r];
            const double d2 = yc * yc + yr * yr;
            if (d2 == 0.0)
                throw std::invalid_argument("inverse_square_matrix: grid contains the origin");
            out(r, c) = h0 / d2;
        }
    }
    return out;
}

double analytic_coherence_exponential(double a, double p, int n) {
    if (!(a > 0.0) || !(p > 0.0) || n < 1)
        throw std::invalid_argument("analytic_coherence_exponential: need a > 0, p > 0, n >= 1");
    return std::pow(2.0 * a, 1.0 / p) /
           (std::sqrt(static_cast<double>(n)) * (2.0 / p) * gamma_function(1.0 / p));
}

double analytic_coherence_powerlaw(double a, double p, int n) {
    if (!(a > 0.0) || n < 1)
        throw std::invalid_argument("analytic_coherence_powerlaw: need a > 0, n >= 1");
    if (!(p > 0.5))
        throw std::invalid_argument("analytic_coherence_powerlaw: integral diverges for p <= 1/2");
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    if (p == 1.0) return 1.0 / (2.0 * a * sqrt_n);
    const double pi = 3.14159265358979323846;
    return p * p * std::sin(pi / p) / (2.0 * sqrt_n * pi * (p - 1.0) * std::pow(a, 1.0 / p));
}

double coherence_parameter(double mu_u, double mu_v, int n) {
    if (!(mu_u > 0.0) || mu_u > 1.0 || !(mu_v > 0.0) || mu_v > 1.0)
        throw std::invalid_argument("coherence_parameter: mu values must lie in (0, 1]");
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    return std::max(0.5 * sqrt_n * (mu_u + mu_v), n * mu_u * mu_v);
}

double numeric_mu(const Vector& unit) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < unit.size(); ++i) best = std::max(best, unit(i) * unit(i));
    return best;
}

double numeric_coherence(const Vector& u0, const Vector& v0) {
    if (u0.size() != v0.size())
        throw std::invalid_argument("numeric_coherence: vectors must have equal length");
    if (std::abs(u0.norm() - 1.0) > 1e-8 || std::abs(v0.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("numeric_coherence: inputs must have unit norm");
    const int n = static_cast<int>(u0.size());
    // unit vectors can never be less coherent than the uniform vector
    return std::max(coherence_parameter(numeric_mu(u0), numeric_mu(v0), n), 1.0);
}

}  // namespace peakloc::fields
