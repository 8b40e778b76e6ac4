#include "peakloc/harness.hpp"

#include "peakloc/localize.hpp"
#include "peakloc/rng.hpp"
#include "peakloc/unimodal.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace peakloc::harness {

void ExperimentTable::add_column(const std::string& name, std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("ExperimentTable: empty series " + name);
    if (!series.empty() && series.front().size() != values.size())
        throw std::invalid_argument("ExperimentTable: series length mismatch for " + name);
    names.push_back(name);
    series.push_back(std::move(values));
}

void ExperimentTable::add_metadata(const std::string& key, const std::string& value) {
    metadata.push_back({key, value});
}

int ExperimentTable::rows() const {
    return series.empty() ? 0 : static_cast<int>(series.front().size());
}

const std::vector<double>& ExperimentTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return series[i];
    throw std::out_of_range("ExperimentTable: no column named " + name);
}

namespace {

void emit_csv(const ExperimentTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw std::runtime_error("emit_table: cannot write " + path);
    for (const auto& [k, v] : table.metadata) out << "# " << k << " = " << v << "\n";
    for (int c = 0; c < table.columns(); ++c) out << (c ? "," : "") << table.names[c];
    out << "\n";
    out << std::setprecision(17);
    for (int r = 0; r < table.rows(); ++r) {
        for (int c = 0; c < table.columns(); ++c) out << (c ? "," : "") << table.series[c][r];
        out << "\n";
    }
    if (!out) throw std::runtime_error("emit_table: write failure on " + path);
}

void emit_svg(const ExperimentTable& table, const std::string& path, bool log_y) {
    if (table.columns() < 2) throw std::invalid_argument("emit_table: svg needs an x column and a series");
    const int width = 640, height = 420, pad = 50;
    const auto& x = table.series[0];
    double x_lo = x[0], x_hi = x[0], y_lo = 0, y_hi = 0;
    bool first = true;
    for (int c = 1; c < table.columns(); ++c) {
        for (double v : table.series[c]) {
            if (log_y && !(v > 0.0)) continue;
            const double t = log_y ? std::log10(v) : v;
            if (first) {
                y_lo = y_hi = t;
                first = false;
            }
            y_lo = std::min(y_lo, t);
            y_hi = std::max(y_hi, t);
        }
    }
    for (double v : x) {
        x_lo = std::min(x_lo, v);
        x_hi = std::max(x_hi, v);
    }
    if (x_hi == x_lo) x_hi = x_lo + 1.0;
    if (y_hi == y_lo) y_hi = y_lo + 1.0;
    auto sx = [&](double v) { return pad + (v - x_lo) / (x_hi - x_lo) * (width - 2 * pad); };
    auto sy = [&](double v) {
        const double t = log_y ? std::log10(std::max(v, 1e-300)) : v;
        return height - pad - (t - y_lo) / (y_hi - y_lo) * (height - 2 * pad);
    };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf"};

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_table: cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << height - pad << "\" x2=\"" << width - pad
        << "\" y2=\"" << height - pad << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\""
        << height - pad << "\" stroke=\"black\"/>\n";
    out << std::setprecision(8);
    for (int c = 1; c < table.columns(); ++c) {
        const char* color = palette[(c - 1) % 7];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (int r = 0; r < table.rows(); ++r)
            out << sx(x[r]) << "," << sy(table.series[c][r]) << " ";
        out << "\"/>\n";
        out << "<text x=\"" << width - pad + 4 << "\" y=\"" << pad + 14 * c << "\" fill=\"" << color
            << "\" font-size=\"11\">" << table.names[c] << "</text>\n";
    }
    out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12 << "\" font-size=\"12\">"
        << table.names[0] << "</text>\n";
    out << "</svg>\n";
    if (!out) throw std::runtime_error("emit_table: write failure on " + path);
}

}  // namespace

void emit_table(const ExperimentTable& table, const std::string& path, TableFormat format,
                bool log_y) {
    if (table.columns() == 0 || table.rows() == 0)
        throw std::invalid_argument("emit_table: table has no data");
    if (format == TableFormat::csv)
        emit_csv(table, path);
    else
        emit_svg(table, path, log_y);
}

ExperimentTable read_table_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_table_csv: cannot open " + path);
    ExperimentTable table;
    std::string line;
    std::vector<std::string> names;
    std::vector<std::vector<double>> cols;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                std::string k = line.substr(1, eq - 1);
                std::string v = line.substr(eq + 1);
                auto trim = [](std::string& s) {
                    s.erase(0, s.find_first_not_of(" \t"));
                    s.erase(s.find_last_not_of(" \t") + 1);
                };
                trim(k);
                trim(v);
                table.add_metadata(k, v);
            }
            continue;
        }
        std::stringstream ss(line);
        std::string field;
        if (names.empty()) {
            while (std::getline(ss, field, ',')) names.push_back(field);
            cols.resize(names.size());
            continue;
        }
        std::size_t c = 0;
        while (std::getline(ss, field, ',')) {
            if (c >= cols.size()) throw std::runtime_error("read_table_csv: ragged row");
            cols[c++].push_back(std::stod(field));
        }
        if (c != cols.size()) throw std::runtime_error("read_table_csv: short row");
    }
    for (std::size_t c = 0; c < names.size(); ++c) table.add_column(names[c], std::move(cols[c]));
    return table;
}

int worker_count() {
    if (const char* env = std::getenv("PEAKLOC_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int count, const std::function<void(int)>& fn) {
    const int workers = std::min(worker_count(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("Config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

Config Config::parse(const std::string& text) {
    Config cfg;
    std::stringstream ss(text);
    std::string line, section;
    auto trim = [](std::string s) {
        s.erase(0, s.find_first_not_of(" \t\r"));
        s.erase(s.find_last_not_of(" \t\r") + 1);
        return s;
    };
    while (std::getline(ss, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            const auto close = line.find(']');
            if (close == std::string::npos) throw std::runtime_error("Config: unterminated section");
            section = trim(line.substr(1, close - 1));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("Config: expected key = value: " + line);
        cfg.sections_[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    if (!has(section, key)) return fallback;
    return std::stod(get_string(section, key, ""));
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
    if (!has(section, key)) return fallback;
    return std::stoi(get_string(section, key, ""));
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
    if (!has(section, key)) return fallback;
    std::vector<double> out;
    std::stringstream ss(get_string(section, key, ""));
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(std::stod(field));
    return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    sections_[section][key] = value;
}

std::string Config::echo() const {
    std::stringstream out;
    for (const auto& [section, kv] : sections_) {
        out << "[" << section << "]";
        for (const auto& [k, v] : kv) out << " " << k << "=" << v << ";";
    }
    return out.str();
}

std::string run_id(const std::string& config_echo, std::uint64_t seed) {
    std::uint64_t h = seed ^ 0xcbf29ce484222325ULL;
    for (const char ch : config_echo) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ULL;
    }
    h = splitmix64(h);
    std::stringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

ExperimentTable tradeoff_curve(const fields::ProfileSpec& profile, int n,
                               const std::vector<double>& accuracy_grid, double half_width) {
    if (n < 10) throw std::invalid_argument("tradeoff_curve: n must be at least 10");
    if (accuracy_grid.empty()) throw std::invalid_argument("tradeoff_curve: empty accuracy grid");
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) {
        const double x = -half_width + 2.0 * half_width * i / (n - 1);
        u(i) = fields::eval_profile(profile, x);
    }
    u /= u.norm();
    const std::vector<double> support = localize::axis_support_profile(u);

    std::vector<double> accuracy_col, bound_col;
    for (const double accuracy : accuracy_grid) {
        const auto b = localize::localize_axis(support, accuracy);
        accuracy_col.push_back(accuracy);
        bound_col.push_back(static_cast<double>(b.hi - b.lo) / n);
    }
    ExperimentTable table;
    table.add_column("accuracy", std::move(accuracy_col));
    table.add_column("normalized_bound", std::move(bound_col));
    return table;
}

SweepAlgorithm sweep_algorithm_from_name(const std::string& name) {
    if (name == "mconly") return SweepAlgorithm::mc_only;
    if (name == "mcuni") return SweepAlgorithm::mc_uni;
    if (name == "interp") return SweepAlgorithm::interp;
    if (name == "pamcur") return SweepAlgorithm::pamcur;
    throw std::invalid_argument("unknown sweep algorithm: " + name);
}

ExperimentTable detection_probability_sweep(const SweepConfig& config) {
    if (config.trials < 1) throw std::invalid_argument("detection_probability_sweep: trials >= 1");
    const int n = config.grid_n;
    const int m = static_cast<int>(std::ceil(config.alpha * n * n));

    struct Case {
        double window, spread, p, se;
    };
    std::vector<Case> cases;
    for (const double window : config.window_sizes)
        for (const double spread : config.spreads) cases.push_back({window, spread, 0, 0});

    std::vector<double> hits(cases.size() * config.trials, 0.0);
    parallel_for(static_cast<int>(cases.size()) * config.trials, [&](int job) {
        const int case_idx = job / config.trials;
        const auto& cs = cases[case_idx];
        const std::uint64_t seed =
            derive_seed(config.seed, static_cast<std::uint64_t>(job) + 1000003ULL);

        fields::ProfileSpec profile = config.profile;
        profile.scale = 1.0 / cs.spread;
        Rng center_rng(derive_seed(seed, 77));
        fields::SeparableField field;
        field.row_profile = profile;
        field.col_profile = profile;
        // target placed uniformly within the middle half of the window
        field.center_c = center_rng.uniform(-cs.window / 2, cs.window / 2);
        field.center_r = center_rng.uniform(-cs.window / 2, cs.window / 2);
        const fields::GridSpec grid = fields::GridSpec::uniform(n, n, -cs.window, cs.window);
        const fields::Matrix h = fields::discretize(field, grid);

        // true peak cell of the discretized field
        int tr = 0, tc = 0;
        h.maxCoeff(&tr, &tc);

        double est_r = 0, est_c = 0;
        if (config.algorithm == SweepAlgorithm::pamcur) {
            localize::StageConfig sc;
            sc.budget = m;
            sc.noise = config.noise;
            sc.seed = seed;
            const auto stage = localize::pamcur_stage(h, sc);
            est_c = 0.5 * (stage.box.col_lo + stage.box.col_hi) - 1.0;
            est_r = 0.5 * (stage.box.row_lo + stage.box.row_hi) - 1.0;
        } else {
            const auto indices = sampling::sample_uniform(n, n, m, seed);
            const auto samples = sampling::observe(h, indices, config.noise, derive_seed(seed, 1));
            baselines::PeakCell cell;
            switch (config.algorithm) {
                case SweepAlgorithm::mc_only: cell = baselines::mc_only_stage(samples, n, n); break;
                case SweepAlgorithm::mc_uni: cell = baselines::mc_uni_stage(samples, n, n); break;
                case SweepAlgorithm::interp:
                    cell = baselines::interp_stage(samples, n, n, config.smooth_window);
                    break;
                case SweepAlgorithm::pamcur: break;
            }
            est_r = cell.row - 1;
            est_c = cell.col - 1;
        }
        const double err = std::hypot(est_r - tr, est_c - tc);
        hits[job] = err <= 0.04 * n ? 1.0 : 0.0;
    });

    std::vector<double> col_window, col_spread, col_p, col_se;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        double sum = 0.0;
        for (int t = 0; t < config.trials; ++t) sum += hits[i * config.trials + t];
        const double p = sum / config.trials;
        col_window.push_back(cases[i].window);
        col_spread.push_back(cases[i].spread);
        col_p.push_back(p);
        col_se.push_back(std::sqrt(std::max(0.0, p * (1.0 - p)) / config.trials));
    }
    ExperimentTable table;
    table.add_column("window", std::move(col_window));
    table.add_column("spread", std::move(col_spread));
    table.add_column("p_detect", std::move(col_p));
    table.add_column("se", std::move(col_se));
    return table;
}

BenchSubject make_field_subject(const fields::SeparableField& field, const pamcur::Rect& domain) {
    BenchSubject s;
    s.field = [field](double x, double y) { return fields::eval_field(field, x, y); };
    s.domain = domain;
    s.peak_x = field.center_c;
    s.peak_y = field.center_r;
    return s;
}

BenchSubject make_raster_subject(const Eigen::MatrixXd& raster, const pamcur::Rect& domain) {
    const int n_r = static_cast<int>(raster.rows());
    const int n_c = static_cast<int>(raster.cols());
    BenchSubject s;
    s.domain = domain;
    s.field = [raster, domain, n_r, n_c](double x, double y) {
        int c = static_cast<int>((x - domain.x_lo) / domain.width() * n_c);
        int r = static_cast<int>((y - domain.y_lo) / domain.height() * n_r);
        c = std::clamp(c, 0, n_c - 1);
        r = std::clamp(r, 0, n_r - 1);
        return raster(r, c);
    };
    int tr = 0, tc = 0;
    raster.maxCoeff(&tr, &tc);
    auto [px, py] = pamcur::cell_center(domain, n_r, n_c, tr, tc);
    s.peak_x = px;
    s.peak_y = py;
    return s;
}

ExperimentTable samples_vs_error(const BenchSubject& subject, const BenchConfig& config) {
    struct Job {
        std::string algorithm;
        double parameter;  // alpha, or restarts for mean shift
    };
    std::vector<Job> jobs;
    for (const auto& alg : config.algorithms) {
        if (alg == "ms") {
            for (const int r : config.ms_restarts) jobs.push_back({alg, static_cast<double>(r)});
        } else {
            for (const double a : config.alphas) jobs.push_back({alg, a});
        }
    }
    if (jobs.empty()) throw std::invalid_argument("samples_vs_error: nothing to run");

    struct TrialOut {
        double dist = 0.0;
        double samples = 0.0;
        std::vector<double> box_areas;  // adaptive algorithm only
    };
    std::vector<TrialOut> results(jobs.size() * config.trials);

    parallel_for(static_cast<int>(jobs.size()) * config.trials, [&](int id) {
        const std::size_t j = static_cast<std::size_t>(id) / config.trials;
        const Job& job = jobs[j];
        const std::uint64_t seed = derive_seed(config.seed, static_cast<std::uint64_t>(id) + 17);
        TrialOut& out = results[id];

        if (job.algorithm == "pamcur") {
            pamcur::RunConfig rc;
            rc.grid_n = config.grid_n;
            rc.alpha = job.parameter;
            rc.noise = config.noise;
            rc.max_stages = config.max_stages;
            rc.stop_tolerance = config.stop_tolerance;
            rc.seed = seed;
            const auto run = pamcur::run_pamcur(subject.field, subject.domain, rc);
            out.dist = std::hypot(run.peak_x - subject.peak_x, run.peak_y - subject.peak_y);
            out.samples = static_cast<double>(run.total_samples);
            for (const auto& st : run.stages) out.box_areas.push_back(st.box_physical.area());
        } else {
            baselines::MultistageConfig mc;
            mc.grid_n = config.grid_n;
            mc.kappa = config.kappa;
            mc.noise = config.noise;
            mc.max_stages = config.max_stages;
            mc.stop_tolerance = config.stop_tolerance;
            mc.smooth_window = config.smooth_window;
            mc.seed = seed;
            if (job.algorithm == "mconly") {
                mc.algorithm = baselines::Algorithm::mc_only;
                mc.alpha = job.parameter;
            } else if (job.algorithm == "mcuni") {
                mc.algorithm = baselines::Algorithm::mc_uni;
                mc.alpha = job.parameter;
            } else if (job.algorithm == "interp") {
                mc.algorithm = baselines::Algorithm::interp;
                mc.alpha = job.parameter;
            } else if (job.algorithm == "ms") {
                mc.algorithm = baselines::Algorithm::mean_shift;
                mc.omega = config.omega;
                mc.restarts = static_cast<int>(job.parameter);
            } else {
                throw std::invalid_argument("samples_vs_error: unknown algorithm " + job.algorithm);
            }
            const auto run = baselines::run_baseline_multistage(subject.field, subject.domain, mc);
            out.dist = std::hypot(run.peak_x - subject.peak_x, run.peak_y - subject.peak_y);
            out.samples = static_cast<double>(run.samples_used);
        }
    });

    const double cells = static_cast<double>(config.grid_n) * config.grid_n;
    std::vector<double> col_alg, col_param, col_samples, col_mean, col_se, col_logmse;
    std::vector<std::vector<double>> box_cols(config.max_stages);
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        double sum = 0, sum_sq = 0, sum_samples = 0;
        std::vector<double> area_sum(config.max_stages, 0.0);
        std::vector<int> area_count(config.max_stages, 0);
        for (int t = 0; t < config.trials; ++t) {
            const auto& r = results[j * config.trials + t];
            sum += r.dist;
            sum_sq += r.dist * r.dist;
            sum_samples += r.samples;
            for (std::size_t s = 0; s < r.box_areas.size() && s < area_sum.size(); ++s) {
                area_sum[s] += r.box_areas[s];
                ++area_count[s];
            }
        }
        const double mean = sum / config.trials;
        const double var = std::max(0.0, sum_sq / config.trials - mean * mean);
        double alg_id = 0;
        for (std::size_t a = 0; a < config.algorithms.size(); ++a)
            if (config.algorithms[a] == jobs[j].algorithm) alg_id = static_cast<double>(a);
        col_alg.push_back(alg_id);
        col_param.push_back(jobs[j].parameter);
        col_samples.push_back(sum_samples / config.trials / cells);
        col_mean.push_back(mean);
        col_se.push_back(std::sqrt(var / config.trials));
        col_logmse.push_back(std::log10(std::max(sum_sq / config.trials, 1e-300)));
        for (int s = 0; s < config.max_stages; ++s)
            box_cols[s].push_back(area_count[s] ? area_sum[s] / area_count[s]
                                                : std::numeric_limits<double>::quiet_NaN());
    }

    ExperimentTable table;
    std::string alg_names;
    for (std::size_t a = 0; a < config.algorithms.size(); ++a)
        alg_names += (a ? "," : "") + config.algorithms[a];
    table.add_metadata("algorithms", alg_names);
    table.add_column("algorithm_id", std::move(col_alg));
    table.add_column("parameter", std::move(col_param));
    table.add_column("samples_per_cell", std::move(col_samples));
    table.add_column("mean_dist", std::move(col_mean));
    table.add_column("se_dist", std::move(col_se));
    table.add_column("log10_mse", std::move(col_logmse));
    for (int s = 0; s < config.max_stages; ++s)
        table.add_column("box_area_stage" + std::to_string(s + 1), std::move(box_cols[s]));
    return table;
}

}  // namespace peakloc::harness
