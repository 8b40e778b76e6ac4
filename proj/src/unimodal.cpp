#include "peakloc/unimodal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace peakloc::unimodal {

namespace {

struct Block {
    double sum = 0.0;
    double sq_sum = 0.0;
    int count = 0;
    double value() const { return sum / count; }
    double fit_error() const { return std::max(0.0, sq_sum - sum * sum / count); }
};

// Increasing PAVA over y[lo..hi); returns the pooled blocks in order of
// ascending value.
std::vector<Block> pava_increasing(const Vector& y, int lo, int hi) {
    std::vector<Block> stack;
    stack.reserve(hi - lo);
    for (int i = lo; i < hi; ++i) {
        Block b{y(i), y(i) * y(i), 1};
        while (!stack.empty() && stack.back().value() > b.value()) {
            b.sum += stack.back().sum;
            b.sq_sum += stack.back().sq_sum;
            b.count += stack.back().count;
            stack.pop_back();
        }
        stack.push_back(b);
    }
    return stack;
}

Vector expand_blocks(const std::vector<Block>& blocks, int n) {
    Vector out(n);
    int at = 0;
    for (const auto& b : blocks)
        for (int k = 0; k < b.count; ++k) out(at++) = b.value();
    return out;
}

void check_peak_range(const Vector& v, int l_star) {
    if (l_star < 1 || l_star > v.size())
        throw std::invalid_argument("peak index must lie in [1, n]");
}

}  // namespace

Vector isotonic_fit(const Vector& y, Direction direction) {
    if (y.size() == 0) throw std::invalid_argument("isotonic_fit: empty input");
    const int n = static_cast<int>(y.size());
    if (direction == Direction::increasing) {
        return expand_blocks(pava_increasing(y, 0, n), n);
    }
    Vector fit = expand_blocks(pava_increasing(y.reverse(), 0, n), n);
    return fit.reverse();
}

std::vector<double> prefix_isotonic_sq_errors(const Vector& y, Direction direction) {
    const int n = static_cast<int>(y.size());
    const bool inc = direction == Direction::increasing;
    std::vector<double> err(n, 0.0);
    std::vector<Block> stack;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        Block b{y(i), y(i) * y(i), 1};
        while (!stack.empty() &&
               (inc ? stack.back().value() > b.value() : stack.back().value() < b.value())) {
            total -= stack.back().fit_error();
            b.sum += stack.back().sum;
            b.sq_sum += stack.back().sq_sum;
            b.count += stack.back().count;
            stack.pop_back();
        }
        total += b.fit_error();
        stack.push_back(b);
        err[i] = total;
    }
    return err;
}

UnimodalFit project_unimodal_peak(const Vector& v, int l_star) {
    check_peak_range(v, l_star);
    const int n = static_cast<int>(v.size());
    const int p = l_star - 1;  // 0-based peak position

    // Unconstrained monotone fits of the two flanks.
    std::vector<Block> prefix = pava_increasing(v, 0, p);  // ascending values
    // decreasing fit of v[p+1..n-1] computed on the reversed suffix; the
    // resulting blocks ascend toward the peak.
    Vector suffix_rev(n - 1 - p);
    for (int i = p + 1; i < n; ++i) suffix_rev(n - 1 - i) = v(i);
    std::vector<Block> suffix = pava_increasing(suffix_rev, 0, n - 1 - p);

    // The peak value t caps both flanks. Blocks whose fitted value exceeds t
    // pool with the peak; the stationarity condition for the pooled value is
    // its plain mean. Absorb flank blocks until none exceeds the pooled mean.
    double pooled_sum = v(p);
    int pooled_count = 1;
    int pre_end = static_cast<int>(prefix.size());  // blocks [0, pre_end) stay unpooled
    int suf_end = static_cast<int>(suffix.size());
    for (;;) {
        const double t = pooled_sum / pooled_count;
        const double pre_head = pre_end > 0 ? prefix[pre_end - 1].value()
                                            : -std::numeric_limits<double>::infinity();
        const double suf_head = suf_end > 0 ? suffix[suf_end - 1].value()
                                            : -std::numeric_limits<double>::infinity();
        if (pre_head <= t && suf_head <= t) break;
        if (pre_head >= suf_head) {
            pooled_sum += prefix[--pre_end].sum;
            pooled_count += prefix[pre_end].count;
        } else {
            pooled_sum += suffix[--suf_end].sum;
            pooled_count += suffix[suf_end].count;
        }
    }
    const double t = pooled_sum / pooled_count;

    UnimodalFit fit;
    fit.mode = l_star;
    fit.z = Vector(n);
    int at = 0;
    for (int b = 0; b < pre_end; ++b)
        for (int k = 0; k < prefix[b].count; ++k) fit.z(at++) = prefix[b].value();
    while (at <= p) fit.z(at++) = t;  // pooled prefix entries and the peak
    int suffix_pooled = 0;
    for (int b = suf_end; b < static_cast<int>(suffix.size()); ++b) suffix_pooled += suffix[b].count;
    for (int k = 0; k < suffix_pooled; ++k) fit.z(at++) = t;
    for (int b = suf_end - 1; b >= 0; --b)
        for (int k = 0; k < suffix[b].count; ++k) fit.z(at++) = suffix[b].value();

    fit.sq_error = (v - fit.z).squaredNorm();
    return fit;
}

double cone_support(const Vector& v, int l_star) {
    return project_unimodal_peak(v, l_star).z.norm();
}

std::vector<double> cone_support_all(const Vector& v) {
    const int n = static_cast<int>(v.size());
    std::vector<double> out(n);
    for (int l = 1; l <= n; ++l) out[l - 1] = cone_support(v, l);
    return out;
}

UnimodalFit best_unimodal_fit(const Vector& v) {
    if (v.size() == 0) throw std::invalid_argument("best_unimodal_fit: empty input");
    const int n = static_cast<int>(v.size());
    // Relaxed per-mode errors: increasing fit of v[1..m] plus decreasing fit
    // of v[m+1..n], the coupling through the peak dropped. The relaxed
    // minimum equals the true minimum over modes; candidate modes are then
    // certified with the exact projection.
    const std::vector<double> inc = prefix_isotonic_sq_errors(v, Direction::increasing);
    Vector rev = v.reverse();
    const std::vector<double> dec_rev = prefix_isotonic_sq_errors(rev, Direction::increasing);
    // dec_rev[k] = error of increasing fit of rev[0..k] = decreasing fit of
    // v[n-1-k..n-1].
    auto dec_suffix_err = [&](int start) {  // decreasing fit of v[start..n-1]
        return start >= n ? 0.0 : dec_rev[n - 1 - start];
    };

    double relax_min = std::numeric_limits<double>::infinity();
    std::vector<double> relax(n);
    for (int m = 1; m <= n; ++m) {
        relax[m - 1] = inc[m - 1] + dec_suffix_err(m);
        relax_min = std::min(relax_min, relax[m - 1]);
    }

    const double tol = 1e-9 * std::max(1.0, v.squaredNorm());
    UnimodalFit best;
    bool have = false;
    for (int m = 1; m <= n; ++m) {
        if (relax[m - 1] > relax_min + tol) continue;
        UnimodalFit fit = project_unimodal_peak(v, m);
        if (!have || fit.sq_error < best.sq_error - tol) {
            best = std::move(fit);
            have = true;
        }
        if (have && best.sq_error <= relax_min + tol) break;  // smallest certified mode
    }
    return best;
}

double feasibility_bound_rhs(const Vector& v, int k_left, int k_right, double delta) {
    if (k_left < 0 || k_right < 0) throw std::invalid_argument("feasibility_bound_rhs: k values must be >= 0");
    if (delta < 0.0) throw std::invalid_argument("feasibility_bound_rhs: delta must be >= 0");
    const double s = v.sum();
    const double band = k_right + k_left + 1;
    return s * s + (delta * delta - 2.0 * delta * s) * band + delta * delta * band * band;
}

double feasibility_delta_cap(const Vector& v, int l0, int k_left, int k_right) {
    const int n = static_cast<int>(v.size());
    check_peak_range(v, l0);
    if (k_left < 0 || k_left > l0 - 1 || k_right < 0 || k_right > n - l0)
        throw std::invalid_argument("feasibility_delta_cap: k range violation");
    // tail(j) = <1, v(j+1:n)> with 1-based j, i.e. the sum of v[j..n-1] 0-based
    std::vector<double> tail(n + 1, 0.0);
    for (int i = n - 1; i >= 0; --i) tail[i] = tail[i + 1] + v(i);
    double cap = std::numeric_limits<double>::infinity();
    for (int j = l0 - k_left - 1; j <= l0 + k_right - 1; ++j)
        cap = std::min(cap, tail[j] / (l0 + k_right - j));
    return cap;
}

}  // namespace peakloc::unimodal
