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

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "privic/matrix.hpp"
#include "privic/prob.hpp"

namespace privic {

struct BoundingBox {
  double lat_min = 0.0;
  double lat_max = 0.0;
  double lon_min = 0.0;
  double lon_max = 0.0;
};

// Rectangular grid of cells over a bounding box, projected to a local planar
// frame (equirectangular about the box centre: 1 degree of longitude scales by
// cos(mid-latitude)). Cells are indexed row-major, row 0 at lat_min (south),
// column 0 at lon_min (west). All distances are Euclidean km between cell
// centroids in that frame.
class GridSpace {
 public:
  GridSpace(const BoundingBox& bbox, std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t cell_count() const { return rows_ * cols_; }
  const BoundingBox& bbox() const { return bbox_; }

  double width_km() const { return width_km_; }
  double height_km() const { return height_km_; }
  double cell_width_km() const { return width_km_ / static_cast<double>(cols_); }
  double cell_height_km() const { return height_km_ / static_cast<double>(rows_); }

  // Centroid of cell i as (x_km, y_km) in the local frame (origin at the
  // box's south-west corner).
  const std::array<double, 2>& centroid(std::size_t i) const { return centroids_[i]; }
  // Full pairwise centroid distance table, km.
  const Matrix& dist() const { return dist_; }

  // Cell index of a lat/lon point inside the box. Cells are half-open
  // [low, high) along each axis; the final cell on each axis is closed so the
  // box's own boundary maps somewhere. Points outside the box throw.
  std::size_t locate(double lat, double lon) const;

 private:
  BoundingBox bbox_;
  std::size_t rows_;
  std::size_t cols_;
  double width_km_;
  double height_km_;
  std::vector<std::array<double, 2>> centroids_;
  Matrix dist_;
};

inline GridSpace build_grid(const BoundingBox& bbox, std::size_t rows,
                            std::size_t cols) {
  return GridSpace(bbox, rows, cols);
}

// Concentrates probability mass: every cell within Chebyshev distance
// `radius_cells` of `target` (in grid coordinates) gives its mass to the
// target, producing an isolated "island" with an emptied ring around it.
// Mass outside the neighbourhood is untouched.
Pmf plant_island(const GridSpace& grid, const Pmf& pmf, std::size_t target,
                 int radius_cells);

// One check-in row of a Gowalla-style dump:
// user TAB timestamp TAB latitude TAB longitude TAB poi.
struct CheckinRecord {
  std::string user;
  std::string timestamp;
  double lat = 0.0;
  double lon = 0.0;
  std::string poi;
};

struct IngestResult {
  std::vector<CheckinRecord> records;  // rows strictly inside the box, file order
  std::size_t total_rows = 0;          // non-empty lines seen
  std::size_t malformed_rows = 0;      // skipped: wrong arity / unparsable coords
  std::size_t outside_bbox = 0;        // skipped: parsed fine, outside the box
};

// Streams a check-in dump, keeping rows whose coordinates fall strictly
// inside `bbox`. Malformed rows are skipped and counted, never fatal; an
// unreadable file is fatal.
IngestResult ingest_checkins(const std::filesystem::path& path,
                             const BoundingBox& bbox);

// Maps ingested records onto grid cells. The result carries no seed: this is
// data, not draws.
SampleSet locate_all(const GridSpace& grid,
                     const std::vector<CheckinRecord>& records);

}  // namespace privic
