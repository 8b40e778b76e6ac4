#include "peakloc/sampling.hpp"

#include "peakloc/rng.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace peakloc::sampling {

NoiseModel NoiseModel::gaussian(double std) {
    if (std < 0.0) throw std::invalid_argument("NoiseModel: std must be nonnegative");
    NoiseModel m;
    m.kind = NoiseKind::gaussian;
    m.std = std;
    return m;
}

std::vector<Index> sample_uniform(int n_r, int n_c, int m, std::uint64_t seed) {
    const long total = static_cast<long>(n_r) * n_c;
    if (m < 1 || m > total) throw std::invalid_argument("sample_uniform: m out of range");
    std::vector<int> cells(total);
    std::iota(cells.begin(), cells.end(), 0);
    Rng rng(seed);
    // partial Fisher-Yates: the first m slots are a uniform subset
    for (int i = 0; i < m; ++i) {
        const long j = i + static_cast<long>(rng.below(static_cast<std::uint64_t>(total - i)));
        std::swap(cells[i], cells[j]);
    }
    std::vector<Index> out(m);
    for (int i = 0; i < m; ++i) out[i] = Index{cells[i] / n_c, cells[i] % n_c};
    return out;
}

SampleSet observe(const std::function<double(int, int)>& field, const std::vector<Index>& indices,
                  const NoiseModel& noise, std::uint64_t seed) {
    SampleSet set;
    set.indices = indices;
    set.values.resize(indices.size());
    set.noise_eps = noise.eps();
    set.seed = seed;
    Rng rng(seed);
    for (std::size_t k = 0; k < indices.size(); ++k) {
        double v = field(indices[k].row, indices[k].col);
        if (noise.kind == NoiseKind::gaussian) v += noise.std * rng.normal();
        set.values[k] = v;
    }
    return set;
}

SampleSet observe(const Matrix& h, const std::vector<Index>& indices, const NoiseModel& noise,
                  std::uint64_t seed) {
    for (const auto& idx : indices)
        if (idx.row < 0 || idx.row >= h.rows() || idx.col < 0 || idx.col >= h.cols())
            throw std::out_of_range("observe: index outside matrix bounds");
    return observe([&h](int r, int c) { return h(r, c); }, indices, noise, seed);
}

int sample_budget(int n, double nu, double c0) {
    if (n < 2) throw std::invalid_argument("sample_budget: n must be at least 2");
    if (!(nu >= 1.0) || !(c0 > 0.0))
        throw std::invalid_argument("sample_budget: need nu >= 1 and c0 > 0");
    const double log_n = std::log(static_cast<double>(n));
    const double raw = c0 * nu * n * log_n * log_n;
    const double cap = static_cast<double>(n) * n;
    if (raw >= cap) return static_cast<int>(cap);
    return static_cast<int>(std::ceil(raw));
}

}  // namespace peakloc::sampling
