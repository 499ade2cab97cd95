// Copyright 2026 The PNC Authors
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

#include "pnc/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "pnc/scenario.hpp"

namespace pnc::cli {
namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

struct ScenarioOptions {
  std::string source;
  bool alternating = false;
  std::int64_t phase_offset = 0;
  std::optional<double> a1;
};

Scenario resolve_scenario(const ScenarioOptions& opt) {
  Scenario sc;
  try {
    if (opt.alternating) {
      if (opt.source != "builtin:natural" && opt.source != "builtin:natural-alternating")
        throw ConfigError("--alternating is only defined for builtin:natural");
      sc = natural_alternating_scenario(opt.phase_offset);
    } else {
      sc = load_scenario(opt.source);
    }
    if (opt.a1) sc.spec = with_arrival_rate(sc.spec, 0, *opt.a1);
  } catch (const ScenarioError& e) {
    throw ConfigError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return sc;
}

int resolve_tau(int horizon, std::optional<int> tau_hard, bool all_hard) {
  if (all_hard && tau_hard) throw ConfigError("--tau-hard and --all-hard are mutually exclusive");
  if (all_hard) return horizon;
  const int tau = tau_hard.value_or(2);
  if (tau_hard && (tau < 1 || tau > horizon))
    throw ConfigError("--tau-hard must lie in [1, horizon]");
  return std::min(tau, horizon);
}

PolicyConfig make_policy(const std::string& name, int horizon, std::optional<int> tau_hard,
                         bool all_hard) {
  PolicyKind kind;
  try {
    kind = parse_policy_kind(name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (kind == PolicyKind::kMaxWeight) return PolicyConfig::maxweight();
  if (horizon < 1) throw ConfigError("--horizon must be >= 1");
  const int tau = resolve_tau(horizon, tau_hard, all_hard);
  return kind == PolicyKind::kLinearPnc ? PolicyConfig::lpnc(horizon, tau)
                                        : PolicyConfig::qpnc(horizon, tau);
}

void add_scenario_flags(CLI::App* cmd, ScenarioOptions& opt) {
  cmd->add_option("--scenario", opt.source, "JSON file or builtin:generic|generic-modified|natural")
      ->required();
  cmd->add_flag("--alternating", opt.alternating,
                "Square-wave arrivals on the natural example");
  cmd->add_option("--phase-offset", opt.phase_offset, "Shift of the alternating schedules in slots");
}

struct SimulateArgs {
  ScenarioOptions scenario;
  std::string policy = "qpnc";
  int horizon = 2;
  std::optional<int> tau_hard;
  bool all_hard = false;
  std::int64_t slots = 100;
  std::uint64_t seed = 1;
  std::string out;
  std::string summary;
  std::optional<double> a1;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
  ScenarioOptions so = args.scenario;
  so.a1 = args.a1;
  const Scenario sc = resolve_scenario(so);
  const PolicyConfig cfg = make_policy(args.policy, args.horizon, args.tau_hard, args.all_hard);
  if (args.slots < 1) throw ConfigError("--slots must be >= 1");

  const SimulationTrace trace = run(sc.spec, cfg, sc.initial, args.slots, args.seed);
  std::optional<StabilityVerdict> verdict;
  if (trace.slots() >= 200) verdict = classify_stability(trace);

  if (!args.out.empty()) write_file(args.out, trace_csv(trace));
  if (!args.summary.empty()) {
    nlohmann::json js;
    const Vector avg = trace.average_queue();
    js["policy"] = cfg.label();
    js["seed"] = args.seed;
    js["slots"] = args.slots;
    js["avg_queue"] = std::vector<double>(avg.data(), avg.data() + avg.size());
    js["final_queue"] = std::vector<int>(trace.final_queue.data(),
                                         trace.final_queue.data() + trace.final_queue.size());
    js["total_departures"] = trace.total_departures;
    js["slope"] = verdict ? nlohmann::json(verdict->slope) : nlohmann::json(nullptr);
    js["stable"] = verdict ? nlohmann::json(verdict->stable) : nlohmann::json(nullptr);
    write_file(args.summary, js.dump(2) + "\n");
  }
  out << cfg.label() << ": " << args.slots << " slots, final queue";
  for (Eigen::Index i = 0; i < trace.final_queue.size(); ++i) out << ' ' << trace.final_queue(i);
  if (verdict) out << ", slope " << fmt_real(verdict->slope) << (verdict->stable ? " (stable)" : " (unstable)");
  out << '\n';
  return kExitOk;
}

struct SweepArgs {
  ScenarioOptions scenario;
  std::string policy = "qpnc";
  int horizon = 2;
  std::optional<int> tau_hard;
  bool all_hard = false;
  std::string a1 = "0:3.5:0.25";
  std::string a2 = "0:0:1";
  std::int64_t slots = 20000;
  int seeds = 5;
  std::string out;
};

int cmd_sweep(const SweepArgs& args, std::ostream& out) {
  const Scenario sc = resolve_scenario(args.scenario);
  const PolicyConfig cfg = make_policy(args.policy, args.horizon, args.tau_hard, args.all_hard);
  std::vector<double> a1s, a2s;
  try {
    a1s = parse_range(args.a1);
    a2s = parse_range(args.a2);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (args.slots < 200) throw ConfigError("--slots must be >= 200 for stability classification");
  if (args.seeds < 1) throw ConfigError("--seeds must be >= 1");
  if (sc.spec.buffers() < 2) throw ConfigError("sweep needs a scenario with at least two buffers");

  std::vector<std::pair<double, double>> grid;
  for (double a2 : a2s)
    for (double a1 : a1s) grid.emplace_back(a1, a2);
  const NetworkSpec spec = fit_arrival_weights(sc.spec, grid);
  const auto region = sweep_region(spec, cfg, sc.initial, grid, args.slots, seed_range(args.seeds));

  std::ostringstream csv;
  csv << "a1,a2,stable_fraction,stable\n";
  for (const auto& pt : region)
    csv << fmt_real(pt.a1) << ',' << fmt_real(pt.a2) << ',' << fmt_real(pt.stable_fraction) << ','
        << (pt.stable ? 1 : 0) << '\n';
  if (!args.out.empty()) write_file(args.out, csv.str());

  for (double a2 : a2s) {
    std::optional<double> last;
    for (const auto& pt : region)
      if (pt.a2 == a2 && pt.stable) last = pt.a1;
    out << cfg.label() << " a2=" << fmt_real(a2) << ": last stable a1 = "
        << (last ? fmt_real(*last) : std::string("none")) << '\n';
  }
  return kExitOk;
}

struct CompareArgs {
  ScenarioOptions scenario;
  std::string policies = "mw,qpnc:2,qpnc:3";
  std::optional<int> tau_hard;
  bool all_hard = false;
  std::int64_t slots = 2000;
  int seeds = 10;
  std::string out;
};

int cmd_compare(const CompareArgs& args, std::ostream& out) {
  const Scenario sc = resolve_scenario(args.scenario);
  const auto cfgs = parse_policy_list(args.policies, 2, args.tau_hard.value_or(2), args.all_hard);
  if (args.tau_hard && args.all_hard) throw ConfigError("--tau-hard and --all-hard are mutually exclusive");
  if (args.slots < 1) throw ConfigError("--slots must be >= 1");
  if (args.seeds < 1) throw ConfigError("--seeds must be >= 1");

  const auto rows = compare_policies(sc.spec, cfgs, sc.initial, args.slots, seed_range(args.seeds));
  std::ostringstream csv;
  csv << "policy,horizon,buffer,avg_queue\n";
  for (const auto& row : rows) {
    for (Eigen::Index i = 0; i < row.avg_queue.size(); ++i)
      csv << to_string(row.cfg.kind) << ',' << row.cfg.H << ',' << (i + 1) << ','
          << fmt_real(row.avg_queue(i)) << '\n';
    out << row.cfg.label() << ':';
    for (Eigen::Index i = 0; i < row.avg_queue.size(); ++i) out << ' ' << fmt_real(row.avg_queue(i));
    out << '\n';
  }
  if (!args.out.empty()) write_file(args.out, csv.str());
  return kExitOk;
}

}  // namespace

std::vector<double> parse_range(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed range '" + spec + "' (expected min:max:step)");
    }
  }
  if (parts.size() != 3) throw std::invalid_argument("malformed range '" + spec + "' (expected min:max:step)");
  const double lo = parts[0], hi = parts[1], stepsize = parts[2];
  if (lo > hi) throw std::invalid_argument("empty range '" + spec + "' (min > max)");
  if (!(stepsize > 0.0)) throw std::invalid_argument("range step must be positive in '" + spec + "'");
  const auto count = static_cast<long>(std::floor((hi - lo) / stepsize + 1e-9)) + 1;
  std::vector<double> values;
  values.reserve(count);
  for (long k = 0; k < count; ++k) values.push_back(lo + static_cast<double>(k) * stepsize);
  return values;
}

std::vector<PolicyConfig> parse_policy_list(const std::string& list, int default_horizon,
                                            int tau_hard, bool all_hard) {
  std::vector<PolicyConfig> cfgs;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    const std::string name = item.substr(0, colon);
    int horizon = default_horizon;
    if (colon != std::string::npos) {
      try {
        horizon = std::stoi(item.substr(colon + 1));
      } catch (const std::exception&) {
        throw ConfigError("bad horizon in policy '" + item + "'");
      }
    }
    const int tau = all_hard ? horizon : std::min(tau_hard, horizon);
    cfgs.push_back(make_policy(name, horizon, tau, false));
  }
  if (cfgs.empty()) throw ConfigError("--policies is empty");
  return cfgs;
}

std::string trace_csv(const SimulationTrace& trace) {
  const auto n = trace.queues.cols();
  const auto m = trace.controls.cols();
  std::string s;
  s.reserve(static_cast<std::size_t>(trace.slots()) * static_cast<std::size_t>(8 + 4 * (n + m)));
  s += "t,sigma";
  for (Eigen::Index i = 1; i <= n; ++i) s += ",q_" + std::to_string(i);
  for (Eigen::Index j = 1; j <= m; ++j) s += ",u_" + std::to_string(j);
  for (Eigen::Index j = 1; j <= m; ++j) s += ",s_" + std::to_string(j);
  for (Eigen::Index i = 1; i <= n; ++i) s += ",a_" + std::to_string(i);
  s += '\n';
  for (std::int64_t t = 0; t < trace.slots(); ++t) {
    s += std::to_string(t);
    s += ',';
    s += std::to_string(trace.sigma[t] + 1);
    for (Eigen::Index i = 0; i < n; ++i) (s += ',') += std::to_string(trace.queues(t, i));
    for (Eigen::Index j = 0; j < m; ++j) (s += ',') += std::to_string(trace.controls(t, j));
    for (Eigen::Index j = 0; j < m; ++j) (s += ',') += std::to_string(trace.successes(t, j));
    for (Eigen::Index i = 0; i < n; ++i) (s += ',') += std::to_string(trace.arrivals(t, i));
    s += '\n';
  }
  return s;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Predictive network control and MaxWeight simulator", "pnc"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run one closed-loop simulation");
  add_scenario_flags(simulate, sim.scenario);
  simulate->add_option("--policy", sim.policy, "mw | lpnc | qpnc");
  simulate->add_option("--horizon", sim.horizon, "Prediction horizon H");
  simulate->add_option("--tau-hard", sim.tau_hard, "Number of worst-case constrained steps");
  simulate->add_flag("--all-hard", sim.all_hard, "Worst-case constraints on every step");
  simulate->add_option("--slots", sim.slots, "Number of slots T");
  simulate->add_option("--seed", sim.seed, "Random stream seed");
  simulate->add_option("--a1", sim.a1, "Override the mean arrival rate of buffer 1");
  simulate->add_option("--out", sim.out, "Trace CSV path");
  simulate->add_option("--summary", sim.summary, "Summary JSON path");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Stability region over a grid of arrival rates");
  add_scenario_flags(sweep_cmd, sweep.scenario);
  sweep_cmd->add_option("--policy", sweep.policy, "mw | lpnc | qpnc");
  sweep_cmd->add_option("--horizon", sweep.horizon, "Prediction horizon H");
  sweep_cmd->add_option("--tau-hard", sweep.tau_hard, "Number of worst-case constrained steps");
  sweep_cmd->add_flag("--all-hard", sweep.all_hard, "Worst-case constraints on every step");
  sweep_cmd->add_option("--a1", sweep.a1, "Buffer 1 rates, min:max:step");
  sweep_cmd->add_option("--a2", sweep.a2, "Buffer 2 rates, min:max:step");
  sweep_cmd->add_option("--slots", sweep.slots, "Slots per run");
  sweep_cmd->add_option("--seeds", sweep.seeds, "Seeds per grid point");
  sweep_cmd->add_option("--out", sweep.out, "Region CSV path");

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "Paired comparison of several policies");
  add_scenario_flags(compare, cmp.scenario);
  compare->add_option("--policies", cmp.policies, "Comma list of kind[:horizon]");
  compare->add_option("--tau-hard", cmp.tau_hard, "Number of worst-case constrained steps");
  compare->add_flag("--all-hard", cmp.all_hard, "Worst-case constraints on every step");
  compare->add_option("--slots", cmp.slots, "Slots per run");
  compare->add_option("--seeds", cmp.seeds, "Number of paired seeds");
  compare->add_option("--out", cmp.out, "Summary CSV path");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("pnc");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "pnc: " << e.what() << '\n';
    return kExitInvalidConfig;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep, out);
    if (compare->parsed()) return cmd_compare(cmp, out);
  } catch (const ConfigError& e) {
    err << "pnc: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    err << "pnc: " << e.what() << '\n';
    return kExitRuntimeFailure;
  }
  return kExitInvalidConfig;
}

}  // namespace pnc::cli
