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

#include "privic/mechanisms.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "privic/errors.hpp"
#include "privic/metrics.hpp"

namespace privic {

namespace {

void check_sizes(const Pmf& prior, std::size_t m, const Matrix& dist,
                 const char* who) {
  if (prior.size() != m || dist.rows() != m || dist.cols() != m)
    throw ConfigError(std::string(who) + ": size mismatch");
}

// Row x of exp(log_weight[y]) normalized to mass 1, computed with the row
// maximum subtracted so large beta*d cannot underflow everything at once.
void write_softmax_row(const std::vector<double>& log_weight, double* out) {
  const std::size_t m = log_weight.size();
  double mx = -std::numeric_limits<double>::infinity();
  for (double lw : log_weight)
    if (lw > mx) mx = lw;
  double sum = 0.0;
  for (std::size_t y = 0; y < m; ++y) {
    out[y] = std::exp(log_weight[y] - mx);
    sum += out[y];
  }
  for (std::size_t y = 0; y < m; ++y) out[y] /= sum;
}

double max_row_l1_change(const Channel& a, const Channel& b) {
  const std::size_t m = a.size();
  double worst = 0.0;
  for (std::size_t x = 0; x < m; ++x) {
    double l1 = 0.0;
    for (std::size_t y = 0; y < m; ++y) l1 += std::abs(a(x, y) - b(x, y));
    if (l1 > worst) worst = l1;
  }
  return worst;
}

}  // namespace

BaConfig BaConfig::fixed(double beta, std::size_t iters) {
  BaConfig cfg;
  cfg.beta = beta;
  cfg.max_iters = iters;
  cfg.tol = std::numeric_limits<double>::min();  // only an exact fixed point stops early
  return cfg;
}

Channel ba_step(const Pmf& prior, const Channel& channel, double beta,
                const Matrix& dist) {
  const std::size_t m = channel.size();
  check_sizes(prior, m, dist, "ba_step");
  if (!(beta >= 0.0)) throw ConfigError("ba_step: beta must be >= 0");
  if (!prior.full_support())
    throw ConfigError("ba_step: prior must have full support");

  // A vanishing output marginal is legitimate: the optimal reporting
  // alphabet shrinks as beta decreases, and unused cells simply keep
  // probability zero (log weight -inf) in every row.
  const Pmf out_marginal = push_forward(prior, channel);
  std::vector<double> log_c(m);
  for (std::size_t y = 0; y < m; ++y)
    log_c[y] = out_marginal[y] > 0.0
                   ? std::log(out_marginal[y])
                   : -std::numeric_limits<double>::infinity();

  std::vector<double> next(m * m);
  std::vector<double> log_w(m);
  for (std::size_t x = 0; x < m; ++x) {
    const double* drow = dist.row(x);
    for (std::size_t y = 0; y < m; ++y) log_w[y] = log_c[y] - beta * drow[y];
    write_softmax_row(log_w, next.data() + x * m);
  }
  return Channel(m, std::move(next));
}

BaResult ba_run(const Pmf& prior, const Channel& init, const BaConfig& cfg,
                const Matrix& dist) {
  const std::size_t m = init.size();
  check_sizes(prior, m, dist, "ba_run");
  if (cfg.max_iters == 0) throw ConfigError("ba_run: max_iters must be >= 1");
  if (!(cfg.tol > 0.0)) throw ConfigError("ba_run: tol must be > 0");

  Channel current = init;
  std::size_t used = 0;
  bool converged = false;
  for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
    Channel next = ba_step(prior, current, cfg.beta, dist);
    const double change = max_row_l1_change(next, current);
    current = std::move(next);
    used = it;
    if (change < cfg.tol) {
      converged = true;
      break;
    }
  }

  BaResult result{std::move(current), used, converged, 0.0, 0.0};
  result.avg_distortion = avg_distortion(prior, result.channel, dist);
  result.mi = mutual_information(prior, result.channel);
  return result;
}

Channel laplace_channel(double eps, const Matrix& dist) {
  const std::size_t m = dist.rows();
  if (m == 0 || dist.cols() != m) throw ConfigError("laplace_channel: bad distance table");
  if (!(eps > 0.0)) throw ConfigError("laplace_channel: eps must be > 0");

  std::vector<double> c(m * m);
  std::vector<double> log_w(m);
  for (std::size_t x = 0; x < m; ++x) {
    const double* drow = dist.row(x);
    for (std::size_t y = 0; y < m; ++y) log_w[y] = -eps * drow[y];
    write_softmax_row(log_w, c.data() + x * m);
  }
  return Channel(m, std::move(c));
}

double verify_geo_ind(const Channel& channel, const Matrix& dist) {
  const std::size_t m = channel.size();
  if (dist.rows() != m || dist.cols() != m)
    throw ConfigError("verify_geo_ind: size mismatch");

  std::vector<double> log_c(m * m);
  for (std::size_t i = 0; i < m * m; ++i)
    log_c[i] = channel.values()[i] > 0.0
                   ? std::log(channel.values()[i])
                   : -std::numeric_limits<double>::infinity();

  // Reports that no location can emit impose no constraint; a report some
  // location emits and another cannot breaks the guarantee outright.
  double eps = 0.0;
  for (std::size_t x = 0; x < m; ++x) {
    const double* lx = log_c.data() + x * m;
    for (std::size_t xp = 0; xp < m; ++xp) {
      if (xp == x) continue;
      const double d = dist(x, xp);
      if (d <= 0.0) continue;
      const double* lxp = log_c.data() + xp * m;
      double worst = 0.0;
      for (std::size_t y = 0; y < m; ++y) {
        if (channel(x, y) <= 0.0) continue;
        if (channel(xp, y) <= 0.0)
          return std::numeric_limits<double>::infinity();
        const double gap = lx[y] - lxp[y];
        if (gap > worst) worst = gap;
      }
      const double ratio = worst / d;
      if (ratio > eps) eps = ratio;
    }
  }
  return eps;
}

ElasticReport elastic_report(const Channel& channel, const Pmf& prior,
                             double beta, const Matrix& dist) {
  const std::size_t m = channel.size();
  check_sizes(prior, m, dist, "elastic_report");

  // The BA update of the channel under its own output distribution; an
  // elastic channel reproduces itself exactly.
  const Pmf out_marginal = push_forward(prior, channel);
  std::vector<double> log_c(m);
  for (std::size_t y = 0; y < m; ++y)
    log_c[y] = out_marginal[y] > 0.0
                   ? std::log(out_marginal[y])
                   : -std::numeric_limits<double>::infinity();

  ElasticReport report;
  report.row_ratio_spread.resize(m, 0.0);
  std::vector<double> log_w(m);
  std::vector<double> fixed_row(m);
  for (std::size_t x = 0; x < m; ++x) {
    const double* drow = dist.row(x);
    for (std::size_t y = 0; y < m; ++y) log_w[y] = log_c[y] - beta * drow[y];
    write_softmax_row(log_w, fixed_row.data());

    // Ratio C[x][y] / (c(y)exp(-beta d)) should be flat across y; entries
    // whose kernel weight underflows to zero are left out of the diagnostic.
    std::vector<double> ratio(m, 0.0);
    std::vector<char> usable(m, 0);
    double mean_ratio = 0.0;
    std::size_t n_usable = 0;
    for (std::size_t y = 0; y < m; ++y) {
      const double defect = std::abs(channel(x, y) - fixed_row[y]);
      if (defect > report.max_abs_residual) report.max_abs_residual = defect;
      const double weight = out_marginal[y] * std::exp(-beta * drow[y]);
      if (weight > 0.0) {
        ratio[y] = channel(x, y) / weight;
        usable[y] = 1;
        mean_ratio += ratio[y];
        ++n_usable;
      }
    }
    mean_ratio /= static_cast<double>(n_usable);
    double spread = 0.0;
    for (std::size_t y = 0; y < m; ++y) {
      if (!usable[y]) continue;
      const double dev = std::abs(ratio[y] / mean_ratio - 1.0);
      if (dev > spread) spread = dev;
    }
    report.row_ratio_spread[x] = spread;
  }
  return report;
}

double elastic_residual(const Channel& channel, const Pmf& prior, double beta,
                        const Matrix& dist) {
  return elastic_report(channel, prior, beta, dist).max_abs_residual;
}

}  // namespace privic
