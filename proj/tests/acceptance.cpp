// Acceptance suite: every release criterion runs here with its tolerance
// pinned in code, one PASS/FAIL line each. Exit status is the number of
// failed criteria.

#include "peakloc/baselines.hpp"
#include "peakloc/completion.hpp"
#include "peakloc/fields.hpp"
#include "peakloc/harness.hpp"
#include "peakloc/localize.hpp"
#include "peakloc/pamcur.hpp"
#include "peakloc/rng.hpp"
#include "peakloc/sampling.hpp"
#include "peakloc/unimodal.hpp"
#include "support/oracles.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace peakloc;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

Outcome check(bool ok, const std::string& detail = "") { return {ok, detail}; }

struct Runner {
    int failures = 0;

    void run(int id, const std::string& name, const std::function<Outcome()>& criterion) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] C%02d %-44s (%.2fs)%s%s\n", outcome.ok ? "PASS" : "FAIL", id,
                    name.c_str(), secs, outcome.detail.empty() ? "" : " -- ",
                    outcome.detail.c_str());
        if (!outcome.ok) ++failures;
    }
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matrix laplacian_50(Rng& rng, int& true_r, int& true_c) {
    fields::SeparableField f;
    f.row_profile = fields::ProfileSpec::laplacian(rng.uniform(1.0, 4.0));
    f.col_profile = fields::ProfileSpec::laplacian(rng.uniform(1.0, 4.0));
    f.center_c = rng.uniform(-0.5, 0.5);
    f.center_r = rng.uniform(-0.5, 0.5);
    const auto grid = fields::GridSpec::uniform(50, 50, -1.0, 1.0);
    const Matrix h = fields::discretize(f, grid);
    h.maxCoeff(&true_r, &true_c);
    return h;
}

}  // namespace

int main() {
    Runner runner;

    runner.run(1, "reference-vector shrinkage thresholds, exact", [] {
        const auto t0 = std::chrono::steady_clock::now();
        Vector u(401);
        for (int l = 1; l <= 401; ++l) u(l - 1) = std::exp(-std::abs(0.1 * l - 20.1));
        u /= u.norm();
        const auto t = localize::shrinkage_thresholds(u, 0.3 * std::sqrt(2.0));
        const double secs = seconds_since(t0);
        std::ostringstream detail;
        detail << "got (" << t.prefix_last << ", " << t.suffix_first << ") in " << secs << "s";
        return check(t.prefix_last == 176 && t.suffix_first == 226 && secs < 1.0, detail.str());
    });

    runner.run(2, "inverse-square spectral attenuation", [] {
        const auto t0 = std::chrono::steady_clock::now();
        auto grid_of = [](double lo, double hi, double step) {
            std::vector<double> v;
            for (double x = lo; x <= hi + 1e-9; x += step) v.push_back(x);
            return v;
        };
        auto attenuation_db = [](const fields::GridSpec& grid) {
            const Matrix h = fields::inverse_square_matrix(grid, 1.0);
            Eigen::JacobiSVD<Matrix> svd(h);
            return 10.0 * std::log10(svd.singularValues()(1) / svd.singularValues()(0));
        };
        const double small = attenuation_db(
            fields::GridSpec(grid_of(-9.5, 9.5, 1.0), grid_of(-9.5, 9.5, 1.0)));
        const double large = attenuation_db(
            fields::GridSpec(grid_of(-99.5, 99.5, 1.0), grid_of(-99.5, 99.5, 1.0)));
        const double coarse = attenuation_db(
            fields::GridSpec(grid_of(-19.0, 19.0, 2.0), grid_of(-19.0, 19.0, 2.0)));
        const double secs = seconds_since(t0);
        std::ostringstream detail;
        detail << "dB: " << small << ", " << large << ", " << coarse << " in " << secs << "s";
        const bool ok = std::abs(small + 9.0) <= 1.0 && std::abs(large + 9.0) <= 1.5 &&
                        std::abs(coarse + 9.0) <= 1.5 && secs < 5.0;
        return check(ok, detail.str());
    });

    runner.run(3, "alignment_bound dominates its execution-time floor", [] {
        Rng rng(333);
        for (int trial = 0; trial < 100000; ++trial) {
            const double sigma0 = rng.uniform(1e-6, 100.0);
            const double sigma = sigma0 * rng.uniform01();
            if (!(sigma > 0.0)) continue;
            const double error_bound = sigma * rng.uniform01();
            if (localize::alignment_bound(sigma, sigma0, error_bound) < localize::accuracy_floor(sigma, error_bound) - 1e-12) {
                std::ostringstream detail;
                detail << "violated at sigma0=" << sigma0 << " sigma=" << sigma << " error_bound=" << error_bound;
                return check(false, detail.str());
            }
        }
        return check(true);
    });

    runner.run(4, "perturbed singular vectors respect alignment_bound", [] {
        Rng rng(444);
        int done = 0;
        while (done < 10000) {
            const int n = static_cast<int>(rng.uniform_int(2, 50));
            const Vector u0 = test::random_unit(rng, n);
            const Vector v0 = test::random_unit(rng, n);
            const double sigma0 = rng.uniform(0.5, 10.0);
            Matrix z(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) z(r, c) = rng.normal();
            z *= rng.uniform(0.0, 0.6) * sigma0 / z.norm();
            const Matrix h_hat = sigma0 * u0 * v0.transpose() + z;
            const double error_bound = z.norm();
            const auto t = completion::dominant_svd(h_hat);
            if (error_bound > t.sigma || t.sigma > sigma0) continue;
            const double product = u0.dot(t.u) * v0.dot(t.v);
            if (product < localize::alignment_bound(t.sigma, sigma0, error_bound) - 1e-9) {
                std::ostringstream detail;
                detail << "violated: product=" << product
                       << " alignment_bound=" << localize::alignment_bound(t.sigma, sigma0, error_bound) << " n=" << n;
                return check(false, detail.str());
            }
            ++done;
        }
        return check(true);
    });

    runner.run(5, "cone projections match the QP oracle", [] {
        Rng rng(555);
        for (int trial = 0; trial < 10000; ++trial) {
            const int n = static_cast<int>(rng.uniform_int(1, 8));
            Vector v(n);
            for (int i = 0; i < n; ++i) v(i) = rng.uniform(-1.0, 1.0);
            const int l = static_cast<int>(rng.uniform_int(1, n));
            const auto mine = unimodal::project_unimodal_peak(v, l);
            const auto oracle = test::qp_project_unimodal(v, l);
            if (std::abs(mine.sq_error - oracle.sq_error) > 1e-8)
                return check(false, "fixed-peak projection error mismatch");
            if (std::abs(unimodal::cone_support(v, l) - oracle.z.norm()) > 1e-8)
                return check(false, "cone support mismatch");
            int mode = 0;
            const auto best_oracle = test::qp_best_unimodal(v, mode);
            const auto best = unimodal::best_unimodal_fit(v);
            if (std::abs(best.sq_error - best_oracle.sq_error) > 1e-8)
                return check(false, "best-fit error mismatch");
        }
        return check(true);
    });

    runner.run(6, "suffix means are monotone (exact)", [] {
        Rng rng(666);
        for (int trial = 0; trial < 10000; ++trial) {
            const int n = static_cast<int>(rng.uniform_int(2, 24));
            int peak = 0;
            const Vector v = test::random_unimodal(rng, n, peak);
            if (peak < 3) continue;
            std::vector<long double> tail(n + 2, 0.0L);
            for (int i = n; i >= 1; --i) tail[i] = tail[i + 1] + static_cast<long double>(v(i - 1));
            for (int j = 1; j + 1 <= peak - 1; ++j) {
                const long double lhs = tail[j + 1] * static_cast<long double>(peak - j - 1);
                const long double rhs = tail[j + 2] * static_cast<long double>(peak - j);
                if (lhs > rhs) return check(false, "monotonicity violated");
            }
        }
        return check(true);
    });

    runner.run(7, "feasibility necessity bound", [] {
        // bands are kept strictly right of the cone peak (k_left < l0 - l*),
        // the range on which the bound's dual certificate is valid
        Rng rng(777);
        int done = 0;
        while (done < 1000) {
            const int n = static_cast<int>(rng.uniform_int(3, 12));
            int peak = 0;
            Vector v = test::random_unimodal(rng, n, peak);
            if (!(v.norm() > 0.0) || peak < 2) continue;
            v /= v.norm();
            const int l_star = static_cast<int>(rng.uniform_int(1, peak - 1));
            int zp = 0;
            const Vector raw = test::random_unimodal(rng, n, zp);
            const auto member = unimodal::project_unimodal_peak(raw, l_star);
            if (!(member.z.norm() > 0.0)) continue;
            const double accuracy = member.z.dot(v) / member.z.norm();
            for (int kl = 0; kl <= peak - l_star - 1; ++kl) {
                for (int kr = 0; kr <= n - peak; ++kr) {
                    const double cap = unimodal::feasibility_delta_cap(v, peak, kl, kr);
                    for (const double frac : {0.0, 0.34, 0.67, 1.0}) {
                        const double rhs = unimodal::feasibility_bound_rhs(v, kl, kr, frac * cap);
                        if (accuracy * accuracy > rhs + 1e-10) {
                            std::ostringstream detail;
                            detail << "accuracy^2=" << accuracy * accuracy << " rhs=" << rhs << " n=" << n
                                   << " kl=" << kl << " kr=" << kr;
                            return check(false, detail.str());
                        }
                    }
                }
            }
            ++done;
        }
        return check(true);
    });

    runner.run(8, "half-sampled rank-1 recovery, 100 seeds", [] {
        const auto t0 = std::chrono::steady_clock::now();
        int good = 0;
        for (int trial = 0; trial < 100; ++trial) {
            Rng rng(880000 + trial);
            auto bump = [&rng](int n) {
                const double center = rng.uniform(0.25 * n, 0.75 * n);
                const double decay = rng.uniform(2.0 / n, 8.0 / n);
                Vector v(n);
                for (int i = 0; i < n; ++i) v(i) = std::exp(-decay * std::abs(i - center));
                return v;
            };
            const Vector u = bump(50), v = bump(50);
            const Matrix h = u * v.transpose();
            const auto idx = sampling::sample_uniform(50, 50, 1250, 990000 + trial);
            const auto samples = sampling::observe(h, idx, sampling::NoiseModel::none(), trial);
            const auto res = completion::complete_rank_r(samples, 50, 50, 1);
            if ((res.h_hat - h).norm() <= 1e-3 * h.norm()) ++good;
        }
        const double secs = seconds_since(t0);
        std::ostringstream detail;
        detail << good << "/100 recovered in " << secs << "s";
        return check(good >= 99 && secs < 60.0, detail.str());
    });

    runner.run(9, "single-stage box holds the peak at q = 0.3", [] {
        int hits = 0;
        for (int trial = 0; trial < 100; ++trial) {
            Rng rng(990000 + trial);
            int tr = 0, tc = 0;
            const Matrix h = laplacian_50(rng, tr, tc);
            localize::StageConfig sc;
            sc.budget = 750;
            sc.error_bound_mode = localize::ErrorBoundMode::empirical;
            sc.seed = 550000 + trial;
            const auto stage = localize::pamcur_stage(h, sc);
            const bool inside = stage.box.row_lo <= tr + 1 && tr + 1 <= stage.box.row_hi &&
                                stage.box.col_lo <= tc + 1 && tc + 1 <= stage.box.col_hi;
            if (inside) ++hits;
        }
        std::ostringstream detail;
        detail << hits << "/100 boxes contain the true peak";
        return check(hits >= 95, detail.str());
    });

    runner.run(10, "laplacian has the tightest bound at high accuracy", [] {
        const std::vector<double> accuracy = {0.90, 0.95, 0.99};
        const auto lap = harness::tradeoff_curve(fields::ProfileSpec::laplacian(1.0), 200, accuracy)
                             .column("normalized_bound");
        const auto gau = harness::tradeoff_curve(fields::ProfileSpec::gaussian(0.5), 200, accuracy)
                             .column("normalized_bound");
        const auto cau = harness::tradeoff_curve(fields::ProfileSpec::cauchy(1.0), 200, accuracy)
                             .column("normalized_bound");
        for (std::size_t i = 0; i < accuracy.size(); ++i) {
            if (!(lap[i] < gau[i] && lap[i] < cau[i])) {
                std::ostringstream detail;
                detail << "accuracy=" << accuracy[i] << " lap=" << lap[i] << " gauss=" << gau[i]
                       << " cauchy=" << cau[i];
                return check(false, detail.str());
            }
        }
        return check(true);
    });

    runner.run(11, "multi-stage box areas shrink geometrically", [] {
        int good = 0;
        for (int trial = 0; trial < 100; ++trial) {
            Rng rng(110000 + trial);
            fields::SeparableField f;
            f.row_profile = fields::ProfileSpec::laplacian(8.0);
            f.col_profile = fields::ProfileSpec::laplacian(8.0);
            f.center_c = rng.uniform(-0.4, 0.4);
            f.center_r = rng.uniform(-0.4, 0.4);
            pamcur::RunConfig cfg;
            cfg.grid_n = 50;
            cfg.alpha = 0.5;
            cfg.max_stages = 3;
            cfg.stop_tolerance = 0.0;
            cfg.seed = 220000 + trial;
            const auto run = pamcur::run_pamcur(
                [&f](double x, double y) { return fields::eval_field(f, x, y); },
                pamcur::Rect{-1.0, 1.0, -1.0, 1.0}, cfg);
            if (run.stages.size() < 3) continue;
            bool ok = true;
            for (std::size_t k = 1; k < 3; ++k) {
                const double ratio =
                    run.stages[k].box_physical.area() / run.stages[k - 1].box_physical.area();
                ok = ok && ratio <= 0.7;
            }
            if (ok) ++good;
        }
        std::ostringstream detail;
        detail << good << "/100 runs shrink by <= 0.7 per stage";
        return check(good >= 90, detail.str());
    });

    runner.run(12, "mean-shift trails terminate and climb ramps", [] {
        const int n = 16;
        auto ramp = [n](int r, int c) { return static_cast<double>((n - 1 - r) + c); };
        baselines::MeanShiftState state(n, n);
        const auto trail =
            baselines::mean_shift_trail(ramp, n, n, 2, sampling::Index{n - 1, 0}, 1, state);
        bool reached = false;
        for (const auto& cell : trail.cells)
            if (cell.row == 0 && cell.col == n - 1) reached = true;
        if (!reached) return check(false, "ramp trail missed the maximal corner");
        if (static_cast<long>(trail.cells.size()) > static_cast<long>(n) * n)
            return check(false, "trail exceeded the cell count");

        Rng rng(121212);
        for (int trial = 0; trial < 200; ++trial) {
            const int g = static_cast<int>(rng.uniform_int(3, 20));
            Matrix h(g, g);
            for (int r = 0; r < g; ++r)
                for (int c = 0; c < g; ++c) h(r, c) = rng.uniform(0.0, 1.0);
            baselines::MeanShiftState st(g, g);
            const auto t = baselines::mean_shift_trail(
                [&h](int r, int c) { return h(r, c); }, g, g,
                static_cast<int>(rng.uniform_int(1, 4)),
                sampling::Index{static_cast<int>(rng.uniform_int(0, g - 1)),
                                static_cast<int>(rng.uniform_int(0, g - 1))},
                1, st);
            if (static_cast<long>(t.cells.size()) > static_cast<long>(g) * g)
                return check(false, "random-field trail exceeded the cell count");
        }
        return check(true);
    });

    runner.run(13, "numeric coherence meets the analytic values", [] {
        const int n = 10000;
        const double step = 1.0 / std::sqrt(static_cast<double>(n));
        auto unit_profile = [&](const fields::ProfileSpec& p) {
            Vector f(n);
            for (int i = 0; i < n; ++i)
                f(i) = fields::eval_profile(p, (i - 0.5 * (n - 1)) * step);
            return Vector(f / f.norm());
        };
        struct Case {
            const char* name;
            fields::ProfileSpec profile;
            double analytic_mu;
        };
        const Case cases[] = {
            {"laplacian", fields::ProfileSpec::laplacian(1.0),
             fields::analytic_coherence_exponential(1.0, 1.0, n)},
            {"gaussian", fields::ProfileSpec::gaussian(1.0),
             fields::analytic_coherence_exponential(1.0, 2.0, n)},
            {"powerlaw", fields::ProfileSpec::powerlaw(1.0, 2.0, 1.0),
             fields::analytic_coherence_powerlaw(1.0, 2.0, n)},
        };
        for (const auto& c : cases) {
            const Vector u = unit_profile(c.profile);
            const double mu = fields::numeric_mu(u);
            if (std::abs(mu - c.analytic_mu) > 0.05 * c.analytic_mu) {
                std::ostringstream detail;
                detail << c.name << ": numeric mu " << mu << " vs analytic " << c.analytic_mu;
                return check(false, detail.str());
            }
            const double nu = fields::numeric_coherence(u, u);
            const double nu_ref =
                std::max(fields::coherence_parameter(c.analytic_mu, c.analytic_mu, n), 1.0);
            if (std::abs(nu - nu_ref) > 0.05 * nu_ref) {
                std::ostringstream detail;
                detail << c.name << ": numeric nu " << nu << " vs analytic " << nu_ref;
                return check(false, detail.str());
            }
        }
        return check(true);
    });

    std::printf("%d of 13 criteria passed\n", 13 - runner.failures);
    return runner.failures;
}
