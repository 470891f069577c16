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

#include <string>

#include "privic/geo.hpp"
#include "privic/prob.hpp"

namespace privic {

// Central Paris, ~7.7 km x 5.7 km. The usual grid is 12 rows x 16 cols, i.e.
// roughly half-kilometre cells.
BoundingBox paris_bbox();
GridSpace paris_grid();

// Central San Francisco, ~12 km x 8 km; 17 rows x 24 cols.
BoundingBox sf_bbox();
GridSpace sf_grid();

// A fixed mixture of three Gaussian bumps over a grid: a stand-in for a
// dense-city check-in distribution when no dataset is on disk. Full support.
Pmf city_like_prior(const GridSpace& grid);

// Parses a synthetic prior description:
//   "uniform"                     flat over the grid;
//   "city"                        the fixed three-bump mixture above;
//   "gauss:w,rx,ry,s[;...]"       mixture of Gaussians, weight w, centre at
//                                 relative box coordinates (rx, ry) in [0,1]^2,
//                                 standard deviation s in km;
//   "point:INDEX"                 all mass on one cell.
Pmf synthetic_prior(const GridSpace& grid, const std::string& spec);

}  // namespace privic
