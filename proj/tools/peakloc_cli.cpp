// Command-line front end: parameter-sweep experiments driven by a flat
// key-value config, reproducible from (config, seed).

#include "peakloc/elevation.hpp"
#include "peakloc/fields.hpp"
#include "peakloc/harness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace peakloc;

struct CommonArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
};

harness::Config load_config(const CommonArgs& args) {
    if (args.config_path.empty()) return harness::Config::parse("");
    return harness::Config::load(args.config_path);
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    std::filesystem::create_directories(args.out_dir);
    return (std::filesystem::path(args.out_dir) / name).string();
}

// "laplacian:1.0" -> profile; bare names take the scale of the standard
// density shape
fields::ProfileSpec parse_profile(const std::string& token) {
    std::string name = token;
    double scale = -1.0;
    const auto colon = token.find(':');
    if (colon != std::string::npos) {
        name = token.substr(0, colon);
        scale = std::stod(token.substr(colon + 1));
    }
    if (name == "laplacian") return fields::ProfileSpec::laplacian(scale < 0 ? 1.0 : scale);
    if (name == "gaussian") return fields::ProfileSpec::gaussian(scale < 0 ? 0.5 : scale);
    if (name == "cauchy") return fields::ProfileSpec::cauchy(scale < 0 ? 1.0 : scale);
    if (name == "powerlaw") return fields::ProfileSpec::powerlaw(scale < 0 ? 1.0 : scale, 2.0, 1.0);
    throw std::invalid_argument("unknown profile: " + token);
}

std::vector<std::string> split_names(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string field;
    while (std::getline(ss, field, ',')) {
        field.erase(0, field.find_first_not_of(" \t"));
        field.erase(field.find_last_not_of(" \t") + 1);
        if (!field.empty()) out.push_back(field);
    }
    return out;
}

void stamp(harness::ExperimentTable& table, const harness::Config& cfg, std::uint64_t seed) {
    table.add_metadata("config", cfg.echo().empty() ? "(defaults)" : cfg.echo());
    table.add_metadata("seed", std::to_string(seed));
    table.add_metadata("run_id", harness::run_id(cfg.echo(), seed));
}

int cmd_tradeoff(const CommonArgs& args) {
    const auto cfg = load_config(args);
    const int n = cfg.get_int("tradeoff", "n", 200);
    const double half_width = cfg.get_double("tradeoff", "half_width", 10.0);
    std::vector<double> accuracy = cfg.get_list("tradeoff", "accuracy", {});
    if (accuracy.empty())
        for (double r = 0.05; r <= 0.99; r += 0.02) accuracy.push_back(r);
    const auto names =
        split_names(cfg.get_string("tradeoff", "profiles", "laplacian:1.0,gaussian:0.5,cauchy:1.0"));

    harness::ExperimentTable combined;
    stamp(combined, cfg, args.seed);
    combined.add_column("accuracy", accuracy);
    for (const auto& name : names) {
        const auto curve = harness::tradeoff_curve(parse_profile(name), n, accuracy, half_width);
        combined.add_column(name, curve.column("normalized_bound"));
    }
    harness::emit_table(combined, out_path(args, "tradeoff.csv"), harness::TableFormat::csv);
    harness::emit_table(combined, out_path(args, "tradeoff.svg"), harness::TableFormat::svg_lineplot);
    std::cout << "wrote " << out_path(args, "tradeoff.csv") << "\n";
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    const auto cfg = load_config(args);
    harness::SweepConfig sc;
    sc.profile = parse_profile(cfg.get_string("sweep", "profile", "laplacian"));
    sc.window_sizes = cfg.get_list("sweep", "windows", {1.0, 2.0, 4.0, 8.0});
    sc.spreads = cfg.get_list("sweep", "spreads", {0.5, 1.0, 2.0});
    sc.trials = cfg.get_int("sweep", "trials", 10);
    const double noise_std = cfg.get_double("sweep", "noise_std", 0.0);
    if (noise_std > 0.0) sc.noise = sampling::NoiseModel::gaussian(noise_std);
    sc.algorithm = harness::sweep_algorithm_from_name(cfg.get_string("sweep", "algorithm", "mconly"));
    sc.grid_n = cfg.get_int("sweep", "grid_n", 50);
    sc.alpha = cfg.get_double("sweep", "alpha", 0.3);
    sc.smooth_window = cfg.get_int("sweep", "smooth_window", 3);
    sc.seed = args.seed;

    auto table = harness::detection_probability_sweep(sc);
    stamp(table, cfg, args.seed);
    harness::emit_table(table, out_path(args, "sweep.csv"), harness::TableFormat::csv);
    std::cout << "wrote " << out_path(args, "sweep.csv") << "\n";
    return 0;
}

harness::BenchConfig bench_config(const harness::Config& cfg, std::uint64_t seed) {
    harness::BenchConfig bc;
    bc.algorithms = split_names(cfg.get_string("bench", "algorithms", "pamcur,mconly,mcuni,interp,ms"));
    bc.alphas = cfg.get_list("bench", "alphas", {0.3, 0.4, 0.5, 0.7});
    const auto restarts = cfg.get_list("bench", "ms_restarts", {2, 5, 10});
    bc.ms_restarts.clear();
    for (const double r : restarts) bc.ms_restarts.push_back(static_cast<int>(r));
    bc.omega = cfg.get_int("bench", "omega", 2);
    bc.trials = cfg.get_int("bench", "trials", 500);
    bc.grid_n = cfg.get_int("bench", "grid_n", 50);
    bc.kappa = cfg.get_double("bench", "kappa", 0.5);
    bc.smooth_window = cfg.get_int("bench", "smooth_window", 3);
    const double noise_std = cfg.get_double("bench", "noise_std", 0.0);
    if (noise_std > 0.0) bc.noise = sampling::NoiseModel::gaussian(noise_std);
    bc.max_stages = cfg.get_int("bench", "max_stages", 6);
    bc.stop_tolerance = cfg.get_double("bench", "stop_tolerance", 1e-3);
    bc.seed = seed;
    return bc;
}

int cmd_bench(const CommonArgs& args) {
    const auto cfg = load_config(args);
    harness::BenchSubject subject;
    const std::string kind = cfg.get_string("bench", "subject", "laplacian");
    if (kind == "raster") {
        const std::string path = cfg.get_string("bench", "raster_path", "");
        if (path.empty()) throw std::invalid_argument("bench: raster subject needs raster_path");
        const auto raster = elevation::import_raster_csv(path);
        subject = harness::make_raster_subject(raster, {0.0, 1.0, 0.0, 1.0});
    } else {
        fields::SeparableField f;
        f.row_profile = parse_profile(kind + ":" + std::to_string(cfg.get_double("bench", "decay", 4.0)));
        f.col_profile = f.row_profile;
        f.center_c = cfg.get_double("bench", "center_c", 0.2);
        f.center_r = cfg.get_double("bench", "center_r", -0.3);
        subject = harness::make_field_subject(f, {-1.0, 1.0, -1.0, 1.0});
    }
    auto table = harness::samples_vs_error(subject, bench_config(cfg, args.seed));
    stamp(table, cfg, args.seed);
    harness::emit_table(table, out_path(args, "bench.csv"), harness::TableFormat::csv);
    std::cout << "wrote " << out_path(args, "bench.csv") << "\n";
    return 0;
}

int cmd_elevation(const CommonArgs& args) {
    const auto cfg = load_config(args);
    const std::string input = cfg.get_string("elevation", "input", "");
    if (input.empty()) throw std::invalid_argument("elevation: config needs [elevation] input = <csv>");
    const auto cloud = elevation::load_elevation(input);
    std::cout << "loaded " << cloud.points.size() << " points (" << cloud.malformed_lines
              << " malformed lines skipped)\n";

    pamcur::Rect roi = cloud.bounds;
    const auto roi_list = cfg.get_list("elevation", "roi", {});
    if (roi_list.size() == 4) roi = {roi_list[0], roi_list[1], roi_list[2], roi_list[3]};
    const int n = cfg.get_int("elevation", "n", 100);

    const auto raster = elevation::rasterize(cloud, roi, n);
    const std::string raster_path = out_path(args, "raster.csv");
    elevation::export_raster_csv(raster, raster_path);
    const auto peak = elevation::ground_truth_peak(raster);
    const auto [px, py] = pamcur::cell_center(roi, n, n, peak.row - 1, peak.col - 1);
    std::cout << "wrote " << raster_path << "; peak cell (" << peak.row << ", " << peak.col
              << ") at lon " << px << ", lat " << py << ", altitude "
              << raster(peak.row - 1, peak.col - 1) << "\n";

    if (cfg.get_int("elevation", "bench", 0) != 0) {
        const auto subject = harness::make_raster_subject(raster, roi);
        auto table = harness::samples_vs_error(subject, bench_config(cfg, args.seed));
        stamp(table, cfg, args.seed);
        harness::emit_table(table, out_path(args, "elevation_bench.csv"), harness::TableFormat::csv);
        std::cout << "wrote " << out_path(args, "elevation_bench.csv") << "\n";
    }
    return 0;
}

int cmd_coherence(const CommonArgs& args) {
    const auto cfg = load_config(args);
    const int n = cfg.get_int("coherence", "n", 10000);
    const double step = 1.0 / std::sqrt(static_cast<double>(n));
    const auto names = split_names(
        cfg.get_string("coherence", "profiles", "laplacian:1.0,gaussian:1.0,powerlaw:1.0"));

    std::vector<double> id, analytic_mu, numeric_mu, analytic_nu, numeric_nu;
    for (std::size_t k = 0; k < names.size(); ++k) {
        const auto profile = parse_profile(names[k]);
        Eigen::VectorXd f(n);
        for (int i = 0; i < n; ++i)
            f(i) = fields::eval_profile(profile, (i - 0.5 * (n - 1)) * step);
        f /= f.norm();
        double mu_a = 0.0;
        switch (profile.kind) {
            case fields::ProfileKind::laplacian:
                mu_a = fields::analytic_coherence_exponential(profile.scale, 1.0, n);
                break;
            case fields::ProfileKind::gaussian:
                mu_a = fields::analytic_coherence_exponential(profile.scale, 2.0, n);
                break;
            case fields::ProfileKind::exponential:
                mu_a = fields::analytic_coherence_exponential(profile.scale, profile.exponent, n);
                break;
            case fields::ProfileKind::powerlaw:
                mu_a = fields::analytic_coherence_powerlaw(profile.scale, profile.exponent, n);
                break;
            default:
                throw std::invalid_argument("coherence: no closed form for " + names[k]);
        }
        id.push_back(static_cast<double>(k));
        analytic_mu.push_back(mu_a);
        numeric_mu.push_back(fields::numeric_mu(f));
        analytic_nu.push_back(std::max(fields::coherence_parameter(mu_a, mu_a, n), 1.0));
        numeric_nu.push_back(fields::numeric_coherence(f, f));
    }

    harness::ExperimentTable table;
    stamp(table, cfg, args.seed);
    std::string joined;
    for (std::size_t k = 0; k < names.size(); ++k) joined += (k ? "," : "") + names[k];
    table.add_metadata("profiles", joined);
    table.add_column("profile_id", id);
    table.add_column("analytic_mu", analytic_mu);
    table.add_column("numeric_mu", numeric_mu);
    table.add_column("analytic_nu", analytic_nu);
    table.add_column("numeric_nu", numeric_nu);
    harness::emit_table(table, out_path(args, "coherence.csv"), harness::TableFormat::csv);
    std::cout << "wrote " << out_path(args, "coherence.csv") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"peak localization from sparse field samples"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&args](CLI::App* cmd) {
        cmd->add_option("--config", args.config_path, "flat key-value config file");
        cmd->add_option("--seed", args.seed, "master seed")->default_val(0);
        cmd->add_option("--out", args.out_dir, "output directory")->default_val(".");
    };

    auto* tradeoff = app.add_subcommand("tradeoff", "localization bound vs accuracy level");
    auto* sweep = app.add_subcommand("sweep", "detection probability over window and spread");
    auto* bench = app.add_subcommand("bench", "samples vs localization error benchmark");
    auto* elev = app.add_subcommand("elevation", "rasterize an elevation dataset");
    auto* coh = app.add_subcommand("coherence", "numeric vs analytic coherence");
    for (auto* cmd : {tradeoff, sweep, bench, elev, coh}) add_common(cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (tradeoff->parsed()) return cmd_tradeoff(args);
        if (sweep->parsed()) return cmd_sweep(args);
        if (bench->parsed()) return cmd_bench(args);
        if (elev->parsed()) return cmd_elevation(args);
        if (coh->parsed()) return cmd_coherence(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
