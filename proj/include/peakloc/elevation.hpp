#pragma once

#include "peakloc/baselines.hpp"
#include "peakloc/pamcur.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace peakloc::elevation {

using Matrix = Eigen::MatrixXd;

struct ElevationPoint {
    double lon = 0.0;  // degrees
    double lat = 0.0;  // degrees
    double alt = 0.0;  // meters
};

struct ElevationPointCloud {
    std::vector<ElevationPoint> points;
    pamcur::Rect bounds;  // x = longitude, y = latitude
    long malformed_lines = 0;
};

/// Parse "id,longitude,latitude,altitude" records, one per line. Malformed
/// lines are counted and skipped; more than 1% of them (or an empty file)
/// is an error. `column_order` overrides the default schema with a
/// permutation of "lon", "lat", "alt" and "id" tokens.
ElevationPointCloud load_elevation(const std::string& path,
                                   const std::vector<std::string>& column_order = {"id", "lon",
                                                                                   "lat", "alt"});

/// n x n raster over the region: every cell takes the altitude of the point
/// nearest to its center (equirectangular planar distance; ties go to the
/// earliest dataset record). Row 0 is the southern edge.
Matrix rasterize(const ElevationPointCloud& cloud, const pamcur::Rect& roi, int n);

/// Argmax cell, 1-based, smallest row then column on ties.
baselines::PeakCell ground_truth_peak(const Matrix& raster);

/// Row-major CSV export: header "n_rows,n_cols", then one row per line.
void export_raster_csv(const Matrix& raster, const std::string& path);
Matrix import_raster_csv(const std::string& path);

}  // namespace peakloc::elevation
