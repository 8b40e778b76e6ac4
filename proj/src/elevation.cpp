#include "peakloc/elevation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace peakloc::elevation {

ElevationPointCloud load_elevation(const std::string& path,
                                   const std::vector<std::string>& column_order) {
    int lon_at = -1, lat_at = -1, alt_at = -1;
    for (std::size_t i = 0; i < column_order.size(); ++i) {
        if (column_order[i] == "lon") lon_at = static_cast<int>(i);
        if (column_order[i] == "lat") lat_at = static_cast<int>(i);
        if (column_order[i] == "alt") alt_at = static_cast<int>(i);
    }
    if (lon_at < 0 || lat_at < 0 || alt_at < 0)
        throw std::invalid_argument("load_elevation: column order must name lon, lat and alt");

    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_elevation: cannot open " + path);

    ElevationPointCloud cloud;
    long total_lines = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++total_lines;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        bool ok = static_cast<int>(fields.size()) > std::max({lon_at, lat_at, alt_at});
        ElevationPoint p;
        if (ok) {
            try {
                std::size_t used = 0;
                p.lon = std::stod(fields[lon_at], &used);
                ok = ok && used == fields[lon_at].size();
                p.lat = std::stod(fields[lat_at], &used);
                ok = ok && used == fields[lat_at].size();
                p.alt = std::stod(fields[alt_at], &used);
                ok = ok && used == fields[alt_at].size();
            } catch (const std::exception&) {
                ok = false;
            }
        }
        ok = ok && std::isfinite(p.lon) && std::isfinite(p.lat) && std::isfinite(p.alt);
        if (!ok) {
            ++cloud.malformed_lines;
            continue;
        }
        cloud.points.push_back(p);
    }
    if (total_lines == 0) throw std::runtime_error("load_elevation: empty file " + path);
    if (cloud.malformed_lines * 100 > total_lines)
        throw std::runtime_error("load_elevation: more than 1% malformed lines in " + path);
    if (cloud.points.empty()) throw std::runtime_error("load_elevation: no valid points in " + path);

    cloud.bounds.x_lo = cloud.bounds.x_hi = cloud.points.front().lon;
    cloud.bounds.y_lo = cloud.bounds.y_hi = cloud.points.front().lat;
    for (const auto& p : cloud.points) {
        cloud.bounds.x_lo = std::min(cloud.bounds.x_lo, p.lon);
        cloud.bounds.x_hi = std::max(cloud.bounds.x_hi, p.lon);
        cloud.bounds.y_lo = std::min(cloud.bounds.y_lo, p.lat);
        cloud.bounds.y_hi = std::max(cloud.bounds.y_hi, p.lat);
    }
    return cloud;
}

Matrix rasterize(const ElevationPointCloud& cloud, const pamcur::Rect& roi, int n) {
    if (n < 1) throw std::invalid_argument("rasterize: n must be positive");
    if (cloud.points.empty()) throw std::invalid_argument("rasterize: empty cloud");
    if (roi.x_hi < cloud.bounds.x_lo || roi.x_lo > cloud.bounds.x_hi ||
        roi.y_hi < cloud.bounds.y_lo || roi.y_lo > cloud.bounds.y_hi)
        throw std::invalid_argument("rasterize: region does not intersect the cloud bounds");

    // equirectangular scaling at the mid-latitude of the region
    const double deg = 3.14159265358979323846 / 180.0;
    const double x_scale = std::cos(0.5 * (roi.y_lo + roi.y_hi) * deg);

    // points ordered by scaled longitude; dataset order kept for tie-breaks
    std::vector<int> order(cloud.points.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> px(cloud.points.size());
    for (std::size_t i = 0; i < cloud.points.size(); ++i) px[i] = cloud.points[i].lon * x_scale;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return px[a] < px[b]; });
    std::vector<double> sorted_x(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) sorted_x[i] = px[order[i]];

    Matrix out(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const auto [cx, cy] = pamcur::cell_center(roi, n, n, r, c);
            const double qx = cx * x_scale;
            double best_d2 = std::numeric_limits<double>::infinity();
            int best_idx = std::numeric_limits<int>::max();
            double best_alt = 0.0;
            auto consider = [&](int sorted_pos) {
                const int idx = order[sorted_pos];
                const auto& p = cloud.points[idx];
                const double dx = px[idx] - qx;
                const double dy = p.lat - cy;
                const double d2 = dx * dx + dy * dy;
                if (d2 < best_d2 || (d2 == best_d2 && idx < best_idx)) {
                    best_d2 = d2;
                    best_idx = idx;
                    best_alt = p.alt;
                }
            };
            // expand from the longitude insertion point; beyond the current
            // best radius nothing can win
            const auto it = std::lower_bound(sorted_x.begin(), sorted_x.end(), qx);
            long fwd = it - sorted_x.begin();
            long bwd = fwd - 1;
            while (fwd < static_cast<long>(sorted_x.size()) || bwd >= 0) {
                bool advanced = false;
                if (fwd < static_cast<long>(sorted_x.size())) {
                    const double dx = sorted_x[fwd] - qx;
                    if (dx * dx <= best_d2) {
                        consider(static_cast<int>(fwd));
                        ++fwd;
                        advanced = true;
                    } else {
                        fwd = static_cast<long>(sorted_x.size());
                    }
                }
                if (bwd >= 0) {
                    const double dx = sorted_x[bwd] - qx;
                    if (dx * dx <= best_d2) {
                        consider(static_cast<int>(bwd));
                        --bwd;
                        advanced = true;
                    } else {
                        bwd = -1;
                    }
                }
                if (!advanced) break;
            }
            out(r, c) = best_alt;
        }
    }
    return out;
}

baselines::PeakCell ground_truth_peak(const Matrix& raster) {
    if (raster.size() == 0) throw std::invalid_argument("ground_truth_peak: empty raster");
    int br = 0, bc = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < raster.rows(); ++r)
        for (int c = 0; c < raster.cols(); ++c)
            if (raster(r, c) > best) {
                best = raster(r, c);
                br = r;
                bc = c;
            }
    return baselines::PeakCell{br + 1, bc + 1};
}

void export_raster_csv(const Matrix& raster, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_raster_csv: cannot write " + path);
    out << raster.rows() << "," << raster.cols() << "\n";
    out.precision(17);
    for (int r = 0; r < raster.rows(); ++r) {
        for (int c = 0; c < raster.cols(); ++c) {
            if (c) out << ",";
            out << raster(r, c);
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("export_raster_csv: write failure on " + path);
}

Matrix import_raster_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("import_raster_csv: cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("import_raster_csv: empty file");
    int n_r = 0, n_c = 0;
    char comma = 0;
    std::stringstream hs(header);
    if (!(hs >> n_r >> comma >> n_c) || comma != ',' || n_r < 1 || n_c < 1)
        throw std::runtime_error("import_raster_csv: bad header in " + path);
    Matrix out(n_r, n_c);
    std::string line;
    for (int r = 0; r < n_r; ++r) {
        if (!std::getline(in, line)) throw std::runtime_error("import_raster_csv: truncated file");
        std::stringstream ss(line);
        std::string field;
        for (int c = 0; c < n_c; ++c) {
            if (!std::getline(ss, field, ','))
                throw std::runtime_error("import_raster_csv: short row");
            out(r, c) = std::stod(field);
        }
    }
    return out;
}

}  // namespace peakloc::elevation
