//
// Copyright 2026 The PRIVIC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "privic/geo.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <string>

#include "privic/errors.hpp"

namespace privic {

namespace {

// IUGG mean Earth radius.
constexpr double kEarthRadiusKm = 6371.0088;
constexpr double kKmPerDegree = kEarthRadiusKm * std::numbers::pi / 180.0;

bool parse_coord(const std::string& field, double* out) {
  if (field.empty()) return false;
  const char* begin = field.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + field.size()) return false;
  if (!std::isfinite(v)) return false;
  *out = v;
  return true;
}

}  // namespace

GridSpace::GridSpace(const BoundingBox& bbox, std::size_t rows, std::size_t cols)
    : bbox_(bbox), rows_(rows), cols_(cols) {
  if (rows_ == 0 || cols_ == 0) throw ConfigError("grid: rows and cols must be >= 1");
  if (!(bbox.lat_min < bbox.lat_max) || !(bbox.lon_min < bbox.lon_max))
    throw ConfigError("grid: degenerate bounding box");
  if (bbox.lat_min < -90.0 || bbox.lat_max > 90.0 || bbox.lon_min < -180.0 ||
      bbox.lon_max > 180.0)
    throw ConfigError("grid: bounding box outside lat/lon range");

  const double mid_lat_rad =
      0.5 * (bbox.lat_min + bbox.lat_max) * std::numbers::pi / 180.0;
  width_km_ = (bbox.lon_max - bbox.lon_min) * kKmPerDegree * std::cos(mid_lat_rad);
  height_km_ = (bbox.lat_max - bbox.lat_min) * kKmPerDegree;

  const std::size_t m = rows_ * cols_;
  const double cw = cell_width_km();
  const double ch = cell_height_km();
  centroids_.resize(m);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      centroids_[r * cols_ + c] = {(static_cast<double>(c) + 0.5) * cw,
                                   (static_cast<double>(r) + 0.5) * ch};

  dist_ = Matrix(m, m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double dx = centroids_[i][0] - centroids_[j][0];
      const double dy = centroids_[i][1] - centroids_[j][1];
      const double d = std::hypot(dx, dy);
      dist_(i, j) = d;
      dist_(j, i) = d;
    }
  }
}

std::size_t GridSpace::locate(double lat, double lon) const {
  if (lat < bbox_.lat_min || lat > bbox_.lat_max || lon < bbox_.lon_min ||
      lon > bbox_.lon_max)
    throw ConfigError("locate: point outside the bounding box");

  const double rf = (lat - bbox_.lat_min) / (bbox_.lat_max - bbox_.lat_min) *
                    static_cast<double>(rows_);
  const double cf = (lon - bbox_.lon_min) / (bbox_.lon_max - bbox_.lon_min) *
                    static_cast<double>(cols_);
  std::size_t r = static_cast<std::size_t>(rf);
  std::size_t c = static_cast<std::size_t>(cf);
  if (r >= rows_) r = rows_ - 1;  // lat == lat_max: final cell is closed
  if (c >= cols_) c = cols_ - 1;
  return r * cols_ + c;
}

Pmf plant_island(const GridSpace& grid, const Pmf& pmf, std::size_t target,
                 int radius_cells) {
  const std::size_t m = grid.cell_count();
  if (pmf.size() != m) throw ConfigError("plant_island: pmf/grid size mismatch");
  if (target >= m) throw ConfigError("plant_island: target outside the grid");
  if (radius_cells < 0) throw ConfigError("plant_island: negative radius");

  const long tr = static_cast<long>(target / grid.cols());
  const long tc = static_cast<long>(target % grid.cols());
  std::vector<double> out = pmf.values();
  double moved = 0.0;
  for (long r = tr - radius_cells; r <= tr + radius_cells; ++r) {
    if (r < 0 || r >= static_cast<long>(grid.rows())) continue;
    for (long c = tc - radius_cells; c <= tc + radius_cells; ++c) {
      if (c < 0 || c >= static_cast<long>(grid.cols())) continue;
      const std::size_t i = static_cast<std::size_t>(r) * grid.cols() +
                            static_cast<std::size_t>(c);
      if (i == target) continue;
      moved += out[i];
      out[i] = 0.0;
    }
  }
  out[target] += moved;
  return Pmf(std::move(out));
}

IngestResult ingest_checkins(const std::filesystem::path& path,
                             const BoundingBox& bbox) {
  std::ifstream in(path);
  if (!in) throw DataError("ingest: cannot open " + path.string());

  IngestResult result;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++result.total_rows;

    // user TAB timestamp TAB lat TAB lon TAB poi
    std::array<std::string, 5> field;
    std::size_t n_fields = 0;
    std::size_t start = 0;
    bool overfull = false;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == '\t') {
        if (n_fields == 5) {
          overfull = true;
          break;
        }
        field[n_fields++] = line.substr(start, i - start);
        start = i + 1;
      }
    }
    double lat = 0.0, lon = 0.0;
    if (overfull || n_fields != 5 || !parse_coord(field[2], &lat) ||
        !parse_coord(field[3], &lon) || lat < -90.0 || lat > 90.0 ||
        lon < -180.0 || lon > 180.0) {
      ++result.malformed_rows;
      continue;
    }
    if (!(lat > bbox.lat_min && lat < bbox.lat_max && lon > bbox.lon_min &&
          lon < bbox.lon_max)) {
      ++result.outside_bbox;
      continue;
    }
    result.records.push_back(
        {std::move(field[0]), std::move(field[1]), lat, lon, std::move(field[4])});
  }
  return result;
}

SampleSet locate_all(const GridSpace& grid,
                     const std::vector<CheckinRecord>& records) {
  SampleSet out;
  out.indices.reserve(records.size());
  for (const auto& rec : records) out.indices.push_back(grid.locate(rec.lat, rec.lon));
  return out;
}

}  // namespace privic
