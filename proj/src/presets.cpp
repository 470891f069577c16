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

#include "privic/presets.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "privic/errors.hpp"

namespace privic {

namespace {

struct Bump {
  double weight;
  double rel_x;
  double rel_y;
  double sigma_km;
};

Pmf mixture_prior(const GridSpace& grid, const std::vector<Bump>& bumps) {
  const std::size_t m = grid.cell_count();
  std::vector<double> w(m, 0.0);
  for (const Bump& b : bumps) {
    if (!(b.weight > 0.0) || !(b.sigma_km > 0.0))
      throw ConfigError("synthetic prior: weights and sigmas must be > 0");
    const double cx = b.rel_x * grid.width_km();
    const double cy = b.rel_y * grid.height_km();
    const double inv2s2 = 1.0 / (2.0 * b.sigma_km * b.sigma_km);
    for (std::size_t i = 0; i < m; ++i) {
      const auto& c = grid.centroid(i);
      const double dx = c[0] - cx;
      const double dy = c[1] - cy;
      w[i] += b.weight * std::exp(-(dx * dx + dy * dy) * inv2s2);
    }
  }
  return Pmf::from_weights(w);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

double parse_num(const std::string& s) {
  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + s.size() || s.empty() || !std::isfinite(v))
    throw ConfigError("synthetic prior: bad number '" + s + "'");
  return v;
}

}  // namespace

BoundingBox paris_bbox() { return {48.8286, 48.8798, 2.2855, 2.3909}; }

GridSpace paris_grid() { return GridSpace(paris_bbox(), 12, 16); }

BoundingBox sf_bbox() { return {37.7228, 37.7946, -122.5153, -122.3789}; }

GridSpace sf_grid() { return GridSpace(sf_bbox(), 17, 24); }

Pmf city_like_prior(const GridSpace& grid) {
  // One dominant centre and two district-sized satellites.
  return mixture_prior(grid, {{0.55, 0.52, 0.56, 0.40},
                              {0.27, 0.28, 0.38, 0.30},
                              {0.18, 0.76, 0.64, 0.28}});
}

Pmf synthetic_prior(const GridSpace& grid, const std::string& spec) {
  if (spec == "uniform") return Pmf::uniform(grid.cell_count());
  if (spec == "city") return city_like_prior(grid);
  if (spec.rfind("point:", 0) == 0) {
    const double idx = parse_num(spec.substr(6));
    if (idx < 0 || idx != std::floor(idx))
      throw ConfigError("synthetic prior: bad cell index in '" + spec + "'");
    return Pmf::point(grid.cell_count(), static_cast<std::size_t>(idx));
  }
  if (spec.rfind("gauss:", 0) == 0) {
    std::vector<Bump> bumps;
    for (const std::string& part : split(spec.substr(6), ';')) {
      const auto fields = split(part, ',');
      if (fields.size() != 4)
        throw ConfigError("synthetic prior: expected w,rx,ry,s in '" + part + "'");
      bumps.push_back({parse_num(fields[0]), parse_num(fields[1]),
                       parse_num(fields[2]), parse_num(fields[3])});
    }
    return mixture_prior(grid, bumps);
  }
  throw ConfigError("synthetic prior: unknown spec '" + spec + "'");
}

}  // namespace privic
