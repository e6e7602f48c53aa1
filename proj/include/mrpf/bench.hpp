// Copyright 2026 The mrpf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mrpf/errors.hpp"
#include "mrpf/hamiltonian.hpp"
#include "mrpf/metrics.hpp"
#include "mrpf/sampler.hpp"
#include "mrpf/schedule.hpp"
#include "mrpf/series.hpp"

namespace mrpf {

enum class Method { trotter_suzuki_2k, modified_4k1 };

inline const char* method_name(Method m) {
  return m == Method::trotter_suzuki_2k ? "trotter_suzuki_2k" : "modified_4k1";
}

struct ConvergenceRecord {
  Method method = Method::trotter_suzuki_2k;
  int k = 1;
  std::size_t L = 0;
  std::size_t n_qubits = 0;
  double t = 0.0;
  int r = 1;
  double error = 0.0;
  std::uint64_t exponential_count = 0;
  double bound = 0.0;
  std::uint64_t seed = 0;
};

/// Ordinary least-squares slope of y against x.
inline double ols_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("ols_slope needs at least two paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ValidationError("ols_slope: degenerate abscissae");
  return sxy / sxx;
}

/// Slope of log y against log x; needs at least `min_points` strictly
/// positive pairs.
inline std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y,
                                          std::size_t min_points = 4) {
  if (x.size() < min_points) return std::nullopt;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::nullopt;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return ols_slope(lx, ly);
}

// --- convergence study ------------------------------------------------------

enum class OutputFormat { csv, json };

struct RunConfig {
  std::string hamiltonian;  // path or inline JSON
  int k = 1;
  double t = 1.0;
  std::vector<int> r_values;
  std::uint64_t seed = 0;
  OutputFormat format = OutputFormat::csv;
  std::string out;

  void validate() const {
    if (k < 1) throw ValidationError("--k must be at least 1");
    if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("--t must be positive");
    if (r_values.empty()) throw ValidationError("--r needs at least one value");
    for (int r : r_values) {
      if (r < 1) throw ValidationError("--r values must be positive");
    }
  }
};

struct ConvergenceResult {
  std::vector<ConvergenceRecord> records;
  std::optional<double> trotter_slope;   // d log(error) / d log(r)
  std::optional<double> modified_slope;
};

inline ConvergenceResult run_converge(const Hamiltonian& h, const RunConfig& cfg) {
  cfg.validate();
  const auto st = stats(h);
  const ExponentialSchedule s = build_schedule(cfg.k, h.size());
  const CorrectionSeries c = correction_series(s, h);

  ConvergenceResult out;
  std::vector<double> rs, ts_err, mod_err;
  for (int r : cfg.r_values) {
    const double step = cfg.t / r;
    const cplx lambda{0.0, -step};
    const CorrectionEnsemble e = build_ensemble(c, lambda);

    ConvergenceRecord ts{Method::trotter_suzuki_2k, cfg.k, st.L, st.n_qubits, cfg.t, r};
    ts.error = trotter_error(s, h, cfg.t, r);
    ts.exponential_count = static_cast<std::uint64_t>(r) * s.N();
    ts.bound = r * trotter_step_bound(cfg.k, static_cast<double>(st.L), st.Lambda, step);
    ts.seed = cfg.seed;

    ConvergenceRecord mod{Method::modified_4k1, cfg.k, st.L, st.n_qubits, cfg.t, r};
    mod.error = repeated_mean_error(e, s, h, cfg.t, r);
    mod.exponential_count =
        static_cast<std::uint64_t>(r) * (2 * s.N() + (e.empty() ? 0 : 1));
    mod.bound = r * apriori_bounds(cfg.k, static_cast<double>(st.L), st.Lambda, step).b_bound;
    mod.seed = cfg.seed;

    out.records.push_back(ts);
    out.records.push_back(mod);
    rs.push_back(r);
    ts_err.push_back(ts.error);
    mod_err.push_back(mod.error);
  }
  out.trotter_slope = loglog_slope(rs, ts_err);
  out.modified_slope = loglog_slope(rs, mod_err);
  return out;
}

namespace detail {

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline constexpr const char* kConvergenceCsvHeader =
    "method,k,L,n_qubits,t,r,error,bound,exp_count,seed";

inline std::string convergence_to_csv(const ConvergenceResult& res) {
  std::string s = std::string(kConvergenceCsvHeader) + "\n";
  for (const auto& r : res.records) {
    s += std::string(method_name(r.method)) + "," + std::to_string(r.k) + "," +
         std::to_string(r.L) + "," + std::to_string(r.n_qubits) + "," +
         detail::fmt_double(r.t) + "," + std::to_string(r.r) + "," +
         detail::fmt_double(r.error) + "," + detail::fmt_double(r.bound) + "," +
         std::to_string(r.exponential_count) + "," + std::to_string(r.seed) + "\n";
  }
  return s;
}

inline nlohmann::json convergence_to_json(const ConvergenceResult& res) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : res.records) {
    rows.push_back({{"method", method_name(r.method)},
                    {"k", r.k},
                    {"L", r.L},
                    {"n_qubits", r.n_qubits},
                    {"t", r.t},
                    {"r", r.r},
                    {"error", r.error},
                    {"bound", r.bound},
                    {"exp_count", r.exponential_count},
                    {"seed", r.seed}});
  }
  nlohmann::json slopes = nlohmann::json::object();
  if (res.trotter_slope) slopes["trotter_suzuki_2k"] = *res.trotter_slope;
  if (res.modified_slope) slopes["modified_4k1"] = *res.modified_slope;
  return {{"records", std::move(rows)}, {"slopes", std::move(slopes)}};
}

// --- exponential-count table ------------------------------------------------

inline constexpr std::int64_t kMaxSegments = 1'000'000'000'000'000;

/// Smallest r >= 1 with total_error(r) <= epsilon, for total_error
/// non-increasing in r.
inline std::int64_t minimal_segments(const std::function<double(std::int64_t)>& total_error,
                                     double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (total_error(1) <= epsilon) return 1;
  std::int64_t lo = 1;  // fails
  std::int64_t hi = 2;
  while (total_error(hi) > epsilon) {
    lo = hi;
    if (hi > kMaxSegments / 2) {
      throw ValidationError("epsilon unreachable within the segment cap");
    }
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (total_error(mid) <= epsilon ? hi : lo) = mid;
  }
  return hi;
}

struct CountRow {
  Method method = Method::trotter_suzuki_2k;
  int k = 1;
  std::size_t L = 0;
  double t = 0.0;
  double epsilon = 0.0;
  std::int64_t r = 0;
  std::uint64_t per_step = 0;
  double exponential_count = 0.0;  // g = r * per_step
};

struct CountTable {
  std::vector<CountRow> rows;
  struct Fit {
    Method method;
    int k;
    std::size_t L;
    std::optional<double> exponent;  // d log g / d log epsilon
  };
  std::vector<Fit> fits;
};

/**
 * Segments needed to reach each target channel error from the closed-form
 * bounds: r (a^2 + 2b) for the modified formula and r * 2 ||V - S_2k|| for
 * plain Trotter-Suzuki.
 */
inline CountTable run_count_table(std::span<const int> ks, std::span<const std::size_t> Ls,
                                  std::span<const double> epsilons, double t,
                                  double Lambda = 1.0) {
  if (!(t > 0.0)) throw ValidationError("t must be positive");
  CountTable table;
  for (int k : ks) {
    for (std::size_t L : Ls) {
      if (k < 1 || L < 1) throw ValidationError("k and L must be positive");
      const std::uint64_t N = expected_exponential_count(k, L);
      const double Ld = static_cast<double>(L);
      for (Method m : {Method::trotter_suzuki_2k, Method::modified_4k1}) {
        auto total = [&](std::int64_t r) {
          const double rd = static_cast<double>(r);
          const double step = t / rd;
          if (m == Method::modified_4k1) {
            return rd * apriori_bounds(k, Ld, Lambda, step).diamond_bound;
          }
          return rd * 2.0 * trotter_step_bound(k, Ld, Lambda, step);
        };
        const std::uint64_t per_step = m == Method::modified_4k1 ? 2 * N + 1 : N;
        std::vector<double> eps_used, gs;
        for (double eps : epsilons) {
          CountRow row{m, k, L, t, eps};
          row.r = minimal_segments(total, eps);
          row.per_step = per_step;
          row.exponential_count = static_cast<double>(row.r) * static_cast<double>(per_step);
          table.rows.push_back(row);
          eps_used.push_back(eps);
          gs.push_back(row.exponential_count);
        }
        table.fits.push_back({m, k, L, loglog_slope(eps_used, gs)});
      }
    }
  }
  return table;
}

inline std::string count_table_to_csv(const CountTable& t) {
  std::string s = "method,k,L,t,epsilon,r,per_step,exp_count\n";
  for (const auto& r : t.rows) {
    s += std::string(method_name(r.method)) + "," + std::to_string(r.k) + "," +
         std::to_string(r.L) + "," + detail::fmt_double(r.t) + "," +
         detail::fmt_double(r.epsilon) + "," + std::to_string(r.r) + "," +
         std::to_string(r.per_step) + "," + detail::fmt_double(r.exponential_count) + "\n";
  }
  return s;
}

inline nlohmann::json count_table_to_json(const CountTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"method", method_name(r.method)},
                    {"k", r.k},
                    {"L", r.L},
                    {"t", r.t},
                    {"epsilon", r.epsilon},
                    {"r", r.r},
                    {"per_step", r.per_step},
                    {"exp_count", r.exponential_count}});
  }
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& f : t.fits) {
    nlohmann::json j = {{"method", method_name(f.method)}, {"k", f.k}, {"L", f.L}};
    j["exponent"] = f.exponent ? nlohmann::json(*f.exponent) : nlohmann::json(nullptr);
    fits.push_back(std::move(j));
  }
  return {{"rows", std::move(rows)}, {"fits", std::move(fits)}};
}

}  // namespace mrpf
