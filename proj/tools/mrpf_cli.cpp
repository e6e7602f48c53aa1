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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mrpf/mrpf.hpp"

namespace {

using namespace mrpf;
using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitAssertion = 3;

struct Options {
  std::string hamiltonian;
  int k = 1;
  double t = 1.0;
  std::vector<int> r;
  std::vector<int> ks;
  std::vector<std::size_t> Ls;
  std::vector<double> epsilons;
  double Lambda = 1.0;
  std::uint64_t seed = 0;
  std::string format;
  std::string out;
  bool print_schedule = false;
  int trajectories = 16;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw ValidationError("cannot open output file '" + o.out + "'");
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int single_r(const Options& o) {
  if (o.r.size() != 1) throw ValidationError("--r takes a single value for this subcommand");
  if (o.r[0] < 1) throw ValidationError("--r must be positive");
  return o.r[0];
}

void check_k(int k) {
  if (k < 1) throw ValidationError("--k must be at least 1");
}

void check_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("--t must be positive");
}

int run_expand(const Options& o) {
  check_k(o.k);
  const Hamiltonian h = load(o.hamiltonian);
  const ExponentialSchedule s = build_schedule(o.k, h.size());
  if (o.print_schedule) {
    emit(o, dump(schedule_to_json(s)));
    return 0;
  }
  emit(o, dump(corrections_to_json(correction_series(s, h))));
  return 0;
}

int run_build_sampler(const Options& o) {
  check_k(o.k);
  check_t(o.t);
  const int r = single_r(o);
  const Hamiltonian h = load(o.hamiltonian);
  const auto e = build_ensemble(correction_series(o.k, h), detail::step_lambda(o.t, r));
  emit(o, dump(ensemble_to_json(e)));
  return 0;
}

int run_verify(const Options& o) {
  check_k(o.k);
  check_t(o.t);
  const int r = single_r(o);
  const Hamiltonian h = load(o.hamiltonian);
  const ExponentialSchedule s = build_schedule(o.k, h.size());
  const auto e = build_ensemble(correction_series(s, h), detail::step_lambda(o.t, r));
  const MixingReport report = measure(e, s, h);
  emit(o, dump(report_to_json(report)));
  if (!report.all_pass()) {
    std::cerr << "verify: at least one inequality failed\n";
    return kExitAssertion;
  }
  return 0;
}

int run_converge_cmd(const Options& o) {
  RunConfig cfg;
  cfg.hamiltonian = o.hamiltonian;
  cfg.k = o.k;
  cfg.t = o.t;
  cfg.r_values = o.r;
  cfg.seed = o.seed;
  cfg.format = o.format == "json" ? OutputFormat::json : OutputFormat::csv;
  cfg.out = o.out;
  cfg.validate();
  const auto res = run_converge(load(cfg.hamiltonian), cfg);
  emit(o, cfg.format == OutputFormat::csv ? convergence_to_csv(res) : dump(convergence_to_json(res)));
  return 0;
}

int run_bench_counts(const Options& o) {
  check_t(o.t);
  if (o.ks.empty() || o.Ls.empty() || o.epsilons.empty()) {
    throw ValidationError("--k, --L and --epsilon each need at least one value");
  }
  const auto table = run_count_table(o.ks, o.Ls, o.epsilons, o.t, o.Lambda);
  emit(o, o.format == "csv" ? count_table_to_csv(table) : dump(count_table_to_json(table)));
  return 0;
}

// Monte-Carlo trajectories: each trajectory draws one correction per segment
// and applies the resulting unitary to |0...0>. The averaged state is
// compared with exact evolution.
int run_sample(const Options& o) {
  check_k(o.k);
  check_t(o.t);
  const int r = single_r(o);
  if (o.trajectories < 1) throw ValidationError("--trajectories must be positive");
  const Hamiltonian h = load(o.hamiltonian);
  const ExponentialSchedule s = build_schedule(o.k, h.size());
  const auto e = build_ensemble(correction_series(s, h), detail::step_lambda(o.t, r));

  const DenseOperator half = schedule_to_dense(s, h, e.lambda / 2.0);
  const DenseOperator V = exact_evolution(h, {0.0, -o.t});
  const Eigen::Index dim = V.rows();
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(dim);
  psi0(0) = 1.0;
  const Eigen::VectorXcd exact_state = V * psi0;

  std::map<std::size_t, DenseOperator> middle;  // cached exp(alpha P) per entry
  DenseOperator rho_avg = DenseOperator::Zero(dim, dim);
  json rows = json::array();
  std::uint64_t total_count = 0;
  for (int traj = 0; traj < o.trajectories; ++traj) {
    std::seed_seq seq{o.seed, static_cast<std::uint64_t>(traj)};
    std::mt19937_64 rng(seq);
    DenseOperator U = DenseOperator::Identity(dim, dim);
    std::uint64_t count = 0;
    json picks = json::array();
    for (int step = 0; step < r; ++step) {
      const SampledStep draw = sample_step(e, s, rng);
      count += draw.exponential_count;
      if (!draw.entry) {
        U = half * half * U;
        continue;
      }
      auto it = middle.find(*draw.entry);
      if (it == middle.end()) {
        it = middle.emplace(*draw.entry, pauli_exp(*draw.pauli, draw.alpha)).first;
      }
      U = half * it->second * half * U;
      picks.push_back(*draw.entry);
    }
    const Eigen::VectorXcd state = U * psi0;
    rho_avg += state * state.adjoint() / static_cast<double>(o.trajectories);
    const double overlap = std::abs(exact_state.dot(state));
    rows.push_back({{"trajectory", traj},
                    {"exp_count", count},
                    {"operator_error", spectral_norm(V - U)},
                    {"infidelity", std::max(0.0, 1.0 - overlap * overlap)},
                    {"picks", std::move(picks)}});
    total_count += count;
  }
  const DenseOperator rho_exact = exact_state * exact_state.adjoint();
  const double distance = 0.5 * trace_norm(rho_avg - rho_exact);

  if (o.format == "csv") {
    std::string text = "trajectory,exp_count,operator_error,infidelity\n";
    for (const auto& row : rows) {
      text += std::to_string(row["trajectory"].get<int>()) + "," +
              std::to_string(row["exp_count"].get<std::uint64_t>()) + "," +
              detail::fmt_double(row["operator_error"].get<double>()) + "," +
              detail::fmt_double(row["infidelity"].get<double>()) + "\n";
    }
    emit(o, text);
    return 0;
  }
  emit(o, dump({{"k", o.k},
                {"t", o.t},
                {"r", r},
                {"seed", o.seed},
                {"ensemble_size", e.entries.size()},
                {"A", e.A},
                {"total_exp_count", total_count},
                {"averaged_state_trace_distance", distance},
                {"trajectories", std::move(rows)}}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized product formulas with Trotter-Suzuki error correction"};
  app.require_subcommand(1);
  Options o;

  auto add_hamiltonian = [&](CLI::App* sub) {
    sub->add_option("--hamiltonian", o.hamiltonian, "Hamiltonian JSON file or inline JSON")
        ->required();
  };
  auto add_k = [&](CLI::App* sub) {
    sub->add_option("--k", o.k, "Trotter-Suzuki order parameter (order 2k)")->required();
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output file (default: stdout)");
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  auto* expand = app.add_subcommand("expand", "Correction operators H_l, or the schedule");
  add_hamiltonian(expand);
  add_k(expand);
  expand->add_flag("--print-schedule", o.print_schedule, "Print the exponential schedule");
  add_out(expand);

  auto* sampler = app.add_subcommand("build-sampler", "Correction ensemble for one segment");
  add_hamiltonian(sampler);
  add_k(sampler);
  sampler->add_option("--t", o.t, "Total evolution time")->required();
  sampler->add_option("--r", o.r, "Number of segments")->required()->delimiter(',');
  add_out(sampler);

  auto* verify = app.add_subcommand("verify", "Measured errors against the a-priori bounds");
  add_hamiltonian(verify);
  add_k(verify);
  verify->add_option("--t", o.t, "Total evolution time")->required();
  verify->add_option("--r", o.r, "Number of segments")->required()->delimiter(',');
  add_out(verify);

  auto* converge = app.add_subcommand("converge", "Error against segment count");
  add_hamiltonian(converge);
  add_k(converge);
  converge->add_option("--t", o.t, "Total evolution time")->required();
  converge->add_option("--r", o.r, "Comma-separated segment counts")->required()->delimiter(',');
  converge->add_option("--seed", o.seed, "Seed recorded with each row");
  add_format(converge);
  add_out(converge);

  auto* counts = app.add_subcommand("bench-counts", "Exponential counts from the bounds");
  counts->add_option("--k", o.ks, "Comma-separated k values")->required()->delimiter(',');
  counts->add_option("--L", o.Ls, "Comma-separated term counts")->required()->delimiter(',');
  counts->add_option("--epsilon", o.epsilons, "Comma-separated target errors")
      ->required()
      ->delimiter(',');
  counts->add_option("--t", o.t, "Total evolution time");
  counts->add_option("--Lambda", o.Lambda, "Largest term norm");
  add_format(counts);
  add_out(counts);

  auto* sample = app.add_subcommand("sample", "Monte-Carlo trajectories of the random formula");
  add_hamiltonian(sample);
  add_k(sample);
  sample->add_option("--t", o.t, "Total evolution time")->required();
  sample->add_option("--r", o.r, "Number of segments")->required()->delimiter(',');
  sample->add_option("--trajectories", o.trajectories, "Number of trajectories");
  sample->add_option("--seed", o.seed, "Random seed");
  add_format(sample);
  add_out(sample);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (expand->parsed()) return run_expand(o);
    if (sampler->parsed()) return run_build_sampler(o);
    if (verify->parsed()) return run_verify(o);
    if (converge->parsed()) return run_converge_cmd(o);
    if (counts->parsed()) return run_bench_counts(o);
    if (sample->parsed()) return run_sample(o);
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAssertion;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
