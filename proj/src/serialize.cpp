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

#include "privic/serialize.hpp"

#include <cstdio>
#include <fstream>

#include "privic/errors.hpp"

namespace privic {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header)
    : path_(path.string()), n_cols_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != n_cols_)
    throw ConfigError("csv: row width does not match header");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += fields[i];
  }
  buffer_ += '\n';
}

CsvWriter::~CsvWriter() {
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  out << buffer_;
}

nlohmann::json to_json(const Pmf& pmf) {
  return nlohmann::json{{"size", pmf.size()}, {"p", pmf.values()}};
}

nlohmann::json to_json(const Channel& channel) {
  return nlohmann::json{{"size", channel.size()},
                        {"rows", channel.values()}};
}

nlohmann::json to_json(const Matrix& mat) {
  return nlohmann::json{
      {"rows", mat.rows()}, {"cols", mat.cols()}, {"data", mat.data()}};
}

nlohmann::json to_json(const GridSpace& grid) {
  return nlohmann::json{
      {"rows", grid.rows()},
      {"cols", grid.cols()},
      {"cells", grid.cell_count()},
      {"bbox",
       {{"lat_min", grid.bbox().lat_min},
        {"lat_max", grid.bbox().lat_max},
        {"lon_min", grid.bbox().lon_min},
        {"lon_max", grid.bbox().lon_max}}},
      {"cell_km",
       {{"width", grid.cell_width_km()}, {"height", grid.cell_height_km()}}},
      {"extent_km", {{"width", grid.width_km()}, {"height", grid.height_km()}}}};
}

nlohmann::json to_json(const BaResult& result) {
  return nlohmann::json{{"iterations_used", result.iterations_used},
                        {"converged", result.converged},
                        {"avg_distortion_km", result.avg_distortion},
                        {"mi_nats", result.mi},
                        {"channel", to_json(result.channel)}};
}

nlohmann::json to_json(const IbuResult& result) {
  nlohmann::json j{{"estimate", to_json(result.estimate)},
                   {"iterations_used", result.iterations_used},
                   {"converged", result.converged},
                   {"loglik_trajectory", result.loglik_trajectory}};
  if (result.trajectory) {
    nlohmann::json steps = nlohmann::json::array();
    for (const Pmf& p : *result.trajectory) steps.push_back(p.values());
    j["trajectory"] = std::move(steps);
  }
  return j;
}

nlohmann::json to_json(const CycleRecord& record) {
  nlohmann::json j{{"cycle", record.cycle},
                   {"beta", record.beta},
                   {"epsilon_audit", record.epsilon_audit},
                   {"avg_distortion_km", record.avg_distortion},
                   {"mi_nats", record.mi},
                   {"ba_iterations", record.ba_iterations},
                   {"ba_converged", record.ba_converged},
                   {"ibu_iterations", record.ibu_iterations},
                   {"ibu_converged", record.ibu_converged},
                   {"draw_seed", record.draw_seed},
                   {"obfuscate_seed", record.obfuscate_seed},
                   {"estimate", record.estimate.values()}};
  if (record.emd_to_truth) j["emd_to_truth_km"] = *record.emd_to_truth;
  return j;
}

nlohmann::json to_json(const PrivicTrace& trace) {
  nlohmann::json cycles = nlohmann::json::array();
  for (const CycleRecord& r : trace.cycles) cycles.push_back(to_json(r));
  return nlohmann::json{{"cycles", std::move(cycles)}};
}

nlohmann::json to_json(const SimplexMesh& mesh) {
  return nlohmann::json{
      {"m", mesh.m}, {"k", mesh.k}, {"states", mesh.states}};
}

nlohmann::json to_json(const TransitionEstimate& est) {
  return nlohmann::json{{"mesh", to_json(est.mesh)},
                        {"phi", to_json(est.phi)},
                        {"trials_per_state", est.trials_per_state},
                        {"seed", est.seed}};
}

Pmf pmf_from_json(const nlohmann::json& j) {
  return Pmf(j.at("p").get<std::vector<double>>());
}

Channel channel_from_json(const nlohmann::json& j) {
  return Channel(j.at("size").get<std::size_t>(),
                 j.at("rows").get<std::vector<double>>());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace privic
