#pragma once

#include <Eigen/Core>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace peakloc::fields {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Gamma function by the Lanczos approximation (g = 7, 9 coefficients),
/// accurate to better than 1e-10 for arguments in (0, 10].
double gamma_function(double x);

enum class ProfileKind { laplacian, gaussian, cauchy, exponential, powerlaw, product };

/// One-dimensional decay profile along a single axis. Evaluates to a
/// strictly positive value everywhere and is non-increasing in |x|.
///
///   laplacian:     exp(-a|x|)
///   gaussian:      exp(-a x^2)
///   cauchy:        1 / (pi a (1 + (x/a)^2))
///   exponential:   exp(-a|x|^p)
///   powerlaw:      1 / (a + |x|^p)^r
///   product:       lhs(x) * rhs(x)
struct ProfileSpec {
    ProfileKind kind = ProfileKind::laplacian;
    double scale = 1.0;     // a
    double exponent = 1.0;  // p (exponential, powerlaw)
    double power = 1.0;     // r (powerlaw)
    std::shared_ptr<const ProfileSpec> lhs;  // product only
    std::shared_ptr<const ProfileSpec> rhs;

    static ProfileSpec laplacian(double a = 1.0);
    static ProfileSpec gaussian(double a = 1.0);
    static ProfileSpec cauchy(double a = 1.0);
    static ProfileSpec exponential(double a, double p);
    static ProfileSpec powerlaw(double a, double p, double r = 1.0);
    static ProfileSpec product(ProfileSpec f, ProfileSpec g);
};

double eval_profile(const ProfileSpec& profile, double x);

/// Separable 2-D field H(y) = H0 * F(y_c - c_c) * G(y_r - c_r), where F is
/// the column profile (varies along the horizontal axis) and G the row
/// profile. The center may lie anywhere, on or off any grid.
struct SeparableField {
    ProfileSpec row_profile;
    ProfileSpec col_profile;
    double amplitude = 1.0;       // H0
    double center_c = 0.0;        // y0 along the column (horizontal) axis
    double center_r = 0.0;        // y0 along the row (vertical) axis
};

double eval_field(const SeparableField& field, double y_c, double y_r);

/// Rectangular, not necessarily uniform, sampling grid. Coordinate arrays
/// are strictly ascending; rows map to row_coords, columns to col_coords.
struct GridSpec {
    std::vector<double> row_coords;
    std::vector<double> col_coords;

    GridSpec(std::vector<double> rows, std::vector<double> cols);
    static GridSpec uniform(int n_r, int n_c, double lo, double hi);

    int n_rows() const { return static_cast<int>(row_coords.size()); }
    int n_cols() const { return static_cast<int>(col_coords.size()); }
};

/// Discretize the field on the grid: entry (r, c) holds the field value at
/// (col_coords[c], row_coords[r]). The result is the outer product of the
/// two discretized profiles and therefore has numerical rank 1.
Matrix discretize(const SeparableField& field, const GridSpec& grid);

/// The two profile factor vectors of discretize(): row factor g (length
/// n_r) and column factor f (length n_c), so discretize() == H0 * g * f^T.
std::pair<Vector, Vector> discretize_factors(const SeparableField& field, const GridSpec& grid);

/// Inverse square law field H0 / (y_c^2 + y_r^2) on the grid; only
/// approximately separable. Grids containing the exact origin are rejected.
Matrix inverse_square_matrix(const GridSpec& grid, double h0);

/// Per-vector coherence mu for exponential-family profiles exp(-a|x|^p)
/// discretized at high resolution: (2a)^{1/p} / (sqrt(n) (2/p) Gamma(1/p)).
double analytic_coherence_exponential(double a, double p, int n);

/// Per-vector coherence mu for power-law profiles 1/(a + |x|^p):
/// p = 1 gives 1/(2 a sqrt(n)); p != 1 gives
/// p^2 sin(pi/p) / (2 sqrt(n) pi (p-1) a^{1/p}). Requires p > 1/2.
double analytic_coherence_powerlaw(double a, double p, int n);

/// Combined coherence parameter
/// nu = max{ (sqrt(n)/2)(mu_u + mu_v), n mu_u mu_v }.
double coherence_parameter(double mu_u, double mu_v, int n);

/// Largest squared entry of a unit vector; the per-vector coherence of a
/// discretized profile.
double numeric_mu(const Vector& unit);

/// Smallest coherence parameter consistent with the two unit singular
/// vectors, floored at 1 (the uniform vector attains exactly 1). Inputs
/// must have equal length and unit norm within 1e-8.
double numeric_coherence(const Vector& u0, const Vector& v0);

}  // namespace peakloc::fields
