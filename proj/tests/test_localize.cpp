#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "peakloc/fields.hpp"
#include "peakloc/localize.hpp"
#include "peakloc/rng.hpp"
#include "peakloc/unimodal.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace peakloc;
using localize::Vector;

namespace {

Vector reference_decay_vector() {
    Vector u(401);
    for (int l = 1; l <= 401; ++l) u(l - 1) = std::exp(-std::abs(0.1 * l - 20.1));
    return Vector(u / u.norm());
}

}  // namespace

TEST_CASE("alignment_bound hand values") {
    CHECK(localize::alignment_bound(2.0, 2.0, 0.0) == doctest::Approx(1.0));
    CHECK(localize::alignment_bound(2.0, 2.0, 2.0) == doctest::Approx(0.0));
    CHECK(localize::alignment_bound(0.9, 1.0, 0.5) == doctest::Approx(0.1 + std::sqrt(0.57)).epsilon(1e-12));
    CHECK_THROWS(localize::alignment_bound(1.1, 1.0, 0.5));
    CHECK_THROWS(localize::alignment_bound(0.5, 1.0, 0.6));
}

TEST_CASE("accuracy_floor hand values") {
    CHECK(localize::accuracy_floor(3.0, 0.0) == doctest::Approx(1.0));
    CHECK(localize::accuracy_floor(3.0, 3.0) == doctest::Approx(0.0));
    CHECK_THROWS(localize::accuracy_floor(1.0, 2.0));
}

TEST_CASE("alignment_bound dominates accuracy_floor on the whole domain") {
    Rng rng(63);
    for (int trial = 0; trial < 100000; ++trial) {
        const double sigma0 = rng.uniform(1e-3, 10.0);
        const double sigma = sigma0 * rng.uniform01();
        if (!(sigma > 0.0)) continue;
        const double error_bound = sigma * rng.uniform01();
        CHECK(localize::alignment_bound(sigma, sigma0, error_bound) >= localize::accuracy_floor(sigma, error_bound) - 1e-12);
    }
}

TEST_CASE("shrinkage_margin values and positivity boundary") {
    CHECK(localize::shrinkage_margin(0.0, 1.0) == doctest::Approx(1.0));
    const double sigma = 4.0;
    const double error_bound = sigma * std::sqrt(7.0) / 4.0;  // error_bound^2/sigma^2 = 7/16
    CHECK(localize::shrinkage_margin(error_bound, sigma) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(localize::shrinkage_margin(0.3, 1.0) == doctest::Approx(4.0 * std::sqrt(0.91) - 3.0).epsilon(1e-12));
}

TEST_CASE("localize_axis on a standard basis vector at full accuracy") {
    for (int k = 1; k <= 5; ++k) {
        Vector u = Vector::Zero(5);
        u(k - 1) = 1.0;
        const auto b = localize::localize_axis(u, 1.0);
        CHECK(b.feasible);
        CHECK(b.lo == k);
        CHECK(b.hi == k);
    }
}

TEST_CASE("localize_axis on the uniform vector spans everything") {
    const Vector u = Vector::Constant(8, 1.0 / std::sqrt(8.0));
    for (const double accuracy : {0.1, 0.5, 0.9, 1.0}) {
        const auto b = localize::localize_axis(u, accuracy);
        CHECK(b.feasible);
        CHECK(b.lo == 1);
        CHECK(b.hi == 8);
    }
}

TEST_CASE("localize_axis matches a per-mode oracle scan") {
    Vector u(5);
    u << 0.1, 0.2, 0.9, 0.2, 0.1;
    u /= u.norm();
    for (const double accuracy : {0.5, 0.9, 0.99, 0.999}) {
        const auto b = localize::localize_axis(u, accuracy);
        int lo = 0, hi = 0;
        for (int l = 1; l <= 5; ++l) {
            const double support = test::qp_project_unimodal(u, l).z.norm();
            if (support >= accuracy - 1e-9) {
                if (lo == 0) lo = l;
                hi = l;
            }
        }
        REQUIRE(lo != 0);
        CHECK(b.lo == lo);
        CHECK(b.hi == hi);
    }
}

TEST_CASE("raising accuracy never widens the bounds") {
    Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const Vector u = test::random_unit(rng, 12);
        const auto support = localize::axis_support_profile(u);
        int prev_lo = 1, prev_hi = 12;
        for (double accuracy = 0.05; accuracy <= 1.0; accuracy += 0.05) {
            const auto b = localize::localize_axis(support, accuracy);
            if (!b.feasible) break;
            CHECK(b.lo >= prev_lo);
            CHECK(b.hi <= prev_hi);
            prev_lo = b.lo;
            prev_hi = b.hi;
        }
    }
}

TEST_CASE("infeasible thresholds return the flagged full range") {
    Vector u(4);
    u << 1.0, -1.0, 1.0, -1.0;  // far from every unimodal cone after abs
    const auto profile = localize::axis_support_profile(u);
    double best = 0.0;
    for (double s : profile) best = std::max(best, s);
    const double accuracy = 0.5 * (best + 1.0) + 0.5 * (1.0 - best);  // above the best support
    const auto b = localize::localize_axis(profile, 1.0 + 1e-6);
    CHECK_FALSE(b.feasible);
    CHECK(b.lo == 1);
    CHECK(b.hi == 4);
    (void)accuracy;
}

TEST_CASE("inner product of perturbed dominant vectors respects alignment_bound") {
    Rng rng(271828);
    int done = 0;
    while (done < 2000) {
        const int n = static_cast<int>(rng.uniform_int(2, 50));
        const Vector u0 = test::random_unit(rng, n);
        const Vector v0 = test::random_unit(rng, n);
        const double sigma0 = rng.uniform(0.5, 10.0);
        Eigen::MatrixXd z(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) z(r, c) = rng.normal();
        const double error_bound = rng.uniform(0.0, 0.6) * sigma0;
        z *= error_bound / z.norm();
        const Eigen::MatrixXd h_hat = sigma0 * u0 * v0.transpose() + z;

        const auto t = completion::dominant_svd(h_hat);
        if (error_bound > t.sigma || t.sigma > sigma0) continue;  // outside the bound's domain
        const double product = u0.dot(t.u) * v0.dot(t.v);
        CHECK(product >= localize::alignment_bound(t.sigma, sigma0, error_bound) - 1e-9);
        ++done;
    }
}

TEST_CASE("localization bounds contain the true peak under an exact error bound") {
    Rng rng(1618);
    int done = 0;
    while (done < 500) {
        const int n = static_cast<int>(rng.uniform_int(4, 40));
        int peak_u = 0, peak_v = 0;
        Vector u0 = test::random_unimodal(rng, n, peak_u);
        Vector v0 = test::random_unimodal(rng, n, peak_v);
        if (u0.norm() == 0.0 || v0.norm() == 0.0) continue;
        u0 /= u0.norm();
        v0 /= v0.norm();
        // make the recorded peaks unambiguous
        u0(peak_u - 1) += 0.05;
        v0(peak_v - 1) += 0.05;
        u0 /= u0.norm();
        v0 /= v0.norm();
        const double sigma0 = rng.uniform(0.5, 5.0);

        Eigen::MatrixXd z(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) z(r, c) = rng.normal();
        z *= rng.uniform(0.0, 0.4) * sigma0 / z.norm();
        const Eigen::MatrixXd h_hat = sigma0 * u0 * v0.transpose() + z;
        const double error_bound = z.norm();  // exact reconstruction error
        const auto t = completion::dominant_svd(h_hat);
        if (error_bound > t.sigma) continue;

        const double accuracy = localize::accuracy_floor(t.sigma, error_bound);
        const auto row_bounds = localize::localize_axis(t.u, accuracy);
        const auto col_bounds = localize::localize_axis(t.v, accuracy);
        CHECK(row_bounds.lo <= peak_u);
        CHECK(row_bounds.hi >= peak_u);
        CHECK(col_bounds.lo <= peak_v);
        CHECK(col_bounds.hi >= peak_v);
        ++done;
    }
}

TEST_CASE("noiseless full-budget stage boxes the true argmax") {
    Rng rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 16;
        int pu = 0, pv = 0;
        Vector u0 = test::random_unimodal(rng, n, pu);
        Vector v0 = test::random_unimodal(rng, n, pv);
        u0.array() += 0.01;  // keep the field strictly positive
        v0.array() += 0.01;
        const Eigen::MatrixXd h = u0 * v0.transpose();
        int tr = 0, tc = 0;
        h.maxCoeff(&tr, &tc);

        localize::StageConfig sc;
        sc.budget = n * n;
        sc.seed = rng.next_u64();
        const auto stage = localize::pamcur_stage(h, sc);
        CHECK_FALSE(stage.low_snr);
        CHECK(stage.box.row_lo <= tr + 1);
        CHECK(stage.box.row_hi >= tr + 1);
        CHECK(stage.box.col_lo <= tc + 1);
        CHECK(stage.box.col_hi >= tc + 1);
    }
}

TEST_CASE("formula-mode error_bound follows the worst-case bound") {
    Rng rng(606060);
    int pu = 0, pv = 0;
    Vector u0 = test::random_unimodal(rng, 12, pu);
    Vector v0 = test::random_unimodal(rng, 12, pv);
    const Eigen::MatrixXd h =
        (u0.array() + 0.1).matrix() * (v0.array() + 0.1).matrix().transpose();

    localize::StageConfig sc;
    sc.budget = 100;
    sc.error_bound_mode = localize::ErrorBoundMode::formula;
    sc.eps = 0.0;  // noiseless bound collapses to zero
    sc.seed = 99;
    const auto exact = localize::pamcur_stage(h, sc);
    CHECK_FALSE(exact.low_snr);
    CHECK(exact.error_bound == 0.0);
    CHECK(exact.accuracy == doctest::Approx(1.0));

    // any real noise level makes the worst-case bound exceed sigma here
    sc.eps = 0.1;
    const auto saturated = localize::pamcur_stage(h, sc);
    CHECK(saturated.error_bound ==
          doctest::Approx(completion::reconstruction_error_bound(100.0 / 144.0, 12, 0.1, 100)));
    CHECK(saturated.low_snr);
}

TEST_CASE("user-supplied error_bound beyond sigma forces the vacuous box") {
    Rng rng(9);
    int pu = 0, pv = 0;
    Vector u0 = test::random_unimodal(rng, 10, pu);
    Vector v0 = test::random_unimodal(rng, 10, pv);
    const Eigen::MatrixXd h = (u0.array() + 0.1).matrix() * (v0.array() + 0.1).matrix().transpose();
    localize::StageConfig sc;
    sc.budget = 100;
    sc.error_bound_mode = localize::ErrorBoundMode::user;
    sc.user_error_bound = 1e9;
    sc.seed = 4;
    const auto stage = localize::pamcur_stage(h, sc);
    CHECK(stage.low_snr);
    CHECK(stage.accuracy == 0.0);
    CHECK(stage.box.row_lo == 1);
    CHECK(stage.box.row_hi == 10);
    CHECK(stage.box.col_lo == 1);
    CHECK(stage.box.col_hi == 10);
}

TEST_CASE("single-stage localization puts the true peak in the box at 30% sampling") {
    Rng rng(7070);
    int hits = 0;
    const int trials = 20;
    for (int trial = 0; trial < trials; ++trial) {
        fields::SeparableField f;
        f.row_profile = fields::ProfileSpec::laplacian(rng.uniform(1.0, 4.0));
        f.col_profile = fields::ProfileSpec::laplacian(rng.uniform(1.0, 4.0));
        f.center_c = rng.uniform(-0.5, 0.5);
        f.center_r = rng.uniform(-0.5, 0.5);
        const auto grid = fields::GridSpec::uniform(50, 50, -1.0, 1.0);
        const Eigen::MatrixXd h = fields::discretize(f, grid);
        int tr = 0, tc = 0;
        h.maxCoeff(&tr, &tc);

        localize::StageConfig sc;
        sc.budget = 750;  // q = 0.3
        sc.seed = 100000 + trial;
        const auto stage = localize::pamcur_stage(h, sc);
        const bool inside = stage.box.row_lo <= tr + 1 && tr + 1 <= stage.box.row_hi &&
                            stage.box.col_lo <= tc + 1 && tc + 1 <= stage.box.col_hi;
        if (inside) ++hits;
    }
    CHECK(hits >= 19);
}

TEST_CASE("shrinkage thresholds on the reference decay vector") {
    const Vector u0 = reference_decay_vector();
    const auto t = localize::shrinkage_thresholds(u0, 0.3 * std::sqrt(2.0));
    CHECK(t.prefix_last == 176);
    CHECK(t.suffix_first == 226);
}

TEST_CASE("shrinkage thresholds against a direct scan") {
    Rng rng(606);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(2, 30));
        int peak = 0;
        Vector u = test::random_unimodal(rng, n, peak);
        if (u.norm() == 0.0) continue;
        u /= u.norm();
        const double zp = rng.uniform(0.05, 2.0);
        const auto t = localize::shrinkage_thresholds(u, zp);
        const double bound = zp / std::sqrt(2.0);
        int bl = 0;
        for (int j = 1; j <= n; ++j)
            if (u.head(j).cwiseAbs().sum() <= bound) bl = j;
        int br = n + 1;
        for (int j = n; j >= 1; --j)
            if (u.tail(n - j + 1).cwiseAbs().sum() <= bound) br = j;
        CHECK(t.prefix_last == bl);
        CHECK(t.suffix_first == br);
    }
}

TEST_CASE("shrinkage thresholds on a one-hot vector") {
    Vector u = Vector::Zero(9);
    u(4) = 1.0;
    const auto wide = localize::shrinkage_thresholds(u, 2.0);  // bound sqrt(2) >= ||u||_1
    CHECK(wide.prefix_last == 9);
    CHECK(wide.suffix_first == 1);
    const auto tight = localize::shrinkage_thresholds(u, 0.1);
    CHECK(tight.prefix_last == 4);  // prefix mass steps above the bound at the peak
    CHECK(tight.suffix_first == 6);
}

TEST_CASE("shrinkage region bound") {
    const double zp = 0.37;
    CHECK(localize::shrinkage_region_bound(zp / 2, zp / 2, 13, zp) == doctest::Approx(169.0).epsilon(1e-12));
    const double full = localize::shrinkage_region_bound(0.2, 0.3, 50, zp);
    CHECK(localize::shrinkage_region_bound(0.1, 0.15, 50, zp) == doctest::Approx(full / 16.0).epsilon(1e-12));

    // the bound dominates the measured one-step box on the reference vector
    const Vector u0 = reference_decay_vector();
    const double shrinkage_margin = 0.3 * std::sqrt(2.0);
    const double accuracy = (shrinkage_margin + 3.0) / 4.0;  // error_bound' = 4 accuracy - 3
    const auto b = localize::localize_axis(u0, accuracy);
    const double l1_u = u0.lpNorm<1>() / std::sqrt(401.0);
    const double bound = localize::shrinkage_region_bound(l1_u, l1_u, 401, shrinkage_margin);
    CHECK(bound > static_cast<double>(b.hi - b.lo) * (b.hi - b.lo));
}
