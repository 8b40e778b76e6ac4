#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <vector>

namespace peakloc::sampling {

using Matrix = Eigen::MatrixXd;

/// Zero-based (row, col) grid cell.
struct Index {
    int row = 0;
    int col = 0;
    friend bool operator==(const Index&, const Index&) = default;
};

enum class NoiseKind { none, gaussian };

struct NoiseModel {
    NoiseKind kind = NoiseKind::none;
    double std = 0.0;

    static NoiseModel none() { return {}; }
    static NoiseModel gaussian(double std);
    /// Per-sample RMS noise bound (the epsilon fed to the bound calculators).
    double eps() const { return kind == NoiseKind::gaussian ? std : 0.0; }
};

/// Observed entries of a field matrix. Indices are distinct and zero-based.
struct SampleSet {
    std::vector<Index> indices;
    std::vector<double> values;
    double noise_eps = 0.0;
    std::uint64_t seed = 0;

    int count() const { return static_cast<int>(indices.size()); }
};

/// m distinct cells of an n_r x n_c grid, uniformly at random without
/// replacement. Deterministic given seed.
std::vector<Index> sample_uniform(int n_r, int n_c, int m, std::uint64_t seed);

/// Measure H at the given cells, adding one noise draw per sample.
SampleSet observe(const Matrix& h, const std::vector<Index>& indices, const NoiseModel& noise,
                  std::uint64_t seed);

/// Same, reading a measurement callback instead of a materialized matrix.
SampleSet observe(const std::function<double(int, int)>& field, const std::vector<Index>& indices,
                  const NoiseModel& noise, std::uint64_t seed);

/// Per-stage budget min(n^2, ceil(c0 * nu * n * log^2 n)), natural log.
int sample_budget(int n, double nu, double c0);

}  // namespace peakloc::sampling
