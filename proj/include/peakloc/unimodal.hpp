#pragma once

#include <Eigen/Core>

#include <vector>

namespace peakloc::unimodal {

using Vector = Eigen::VectorXd;

enum class Direction { increasing, decreasing };

/// Euclidean projection of y onto the monotone cone (classic PAVA).
Vector isotonic_fit(const Vector& y, Direction direction);

/// err[k] = squared error of the monotone fit of the prefix y[0..k],
/// for every k, in one amortized O(n) sweep.
std::vector<double> prefix_isotonic_sq_errors(const Vector& y, Direction direction);

/// A vector in the fixed-peak unimodal cone together with its peak index
/// (1-based) and the squared distance from the projected input.
struct UnimodalFit {
    Vector z;
    int mode = 1;  // 1-based peak index
    double sq_error = 0.0;
};

/// Euclidean projection of v onto
///   K_l = { z : z(1) <= ... <= z(l) >= z(l+1) >= ... >= z(n) }   (1-based l).
/// Solved by PAVA on each flank plus a pooled merge of the blocks adjacent
/// to the peak, which resolves the coupling through the peak value exactly.
UnimodalFit project_unimodal_peak(const Vector& v, int l_star);

/// Largest inner product of v with a unit-norm member of K_l; equals the
/// norm of the projection of v onto K_l.
double cone_support(const Vector& v, int l_star);

/// cone_support(v, l) for every l = 1..n.
std::vector<double> cone_support_all(const Vector& v);

/// Best unimodal approximation of v over all peak positions; ties go to the
/// smallest peak index. Candidate modes are screened with prefix/suffix
/// isotonic error tables, then certified with the exact fixed-peak
/// projection.
UnimodalFit best_unimodal_fit(const Vector& v);

/// Necessity bound for cone feasibility: no unit-norm nonnegative member of
/// a cone peaked at or left of v's peak can reach an inner product with v
/// whose square exceeds
///   <1,v>^2 + (d^2 - 2 d <1,v>) (kR + kL + 1) + d^2 (kR + kL + 1)^2
/// for admissible band offsets (kL, kR) and shifts d. Valid while the band
/// [l0-kL, l0+kR] stays strictly right of the cone peak.
double feasibility_bound_rhs(const Vector& v, int k_left, int k_right, double delta);

/// Largest admissible shift for the necessity bound:
///   min over j in [l0-kL-1, l0+kR-1] of <1, v(j+1:n)> / (l0 + kR - j),
/// with 1-based l0 and slices. v must be unimodal with peak at l0.
double feasibility_delta_cap(const Vector& v, int l0, int k_left, int k_right);

}  // namespace peakloc::unimodal
