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

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "privic/estimation.hpp"
#include "privic/geo.hpp"
#include "privic/markov.hpp"
#include "privic/mechanisms.hpp"
#include "privic/privic.hpp"
#include "privic/prob.hpp"

namespace privic {

// Round-trip-exact decimal form of a double ("%.17g"); all CSV numbers go
// through this so reruns are byte-identical.
std::string format_double(double v);

// Minimal CSV emitter: fixed header, rows of pre-formatted fields.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& header);
  void row(const std::vector<std::string>& fields);
  ~CsvWriter();

 private:
  std::string path_;
  std::string buffer_;
  std::size_t n_cols_;
};

nlohmann::json to_json(const Pmf& pmf);
nlohmann::json to_json(const Channel& channel);  // row-major
nlohmann::json to_json(const Matrix& mat);       // row-major with dims
nlohmann::json to_json(const GridSpace& grid);   // summary, no tables
nlohmann::json to_json(const BaResult& result);
nlohmann::json to_json(const IbuResult& result);
nlohmann::json to_json(const CycleRecord& record);
nlohmann::json to_json(const PrivicTrace& trace);
nlohmann::json to_json(const SimplexMesh& mesh);
nlohmann::json to_json(const TransitionEstimate& est);

Pmf pmf_from_json(const nlohmann::json& j);
Channel channel_from_json(const nlohmann::json& j);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace privic
