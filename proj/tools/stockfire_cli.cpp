// Copyright 2026 The Stockfire Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// stockfire CLI: pathway balances, regime rankings, methane-price tipping
// points, allocations, the corridor Monte Carlo, and the headline site
// report. Machine-readable output goes to files under --out (or the
// STOCKFIRE_OUT directory); a human summary goes to stdout.
//
// Exit codes: 0 success, 1 usage error, 2 data/parse error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stockfire/stockfire.hpp"

namespace {

namespace fs = std::filesystem;
using namespace stockfire;

fs::path resolve_out_dir(const std::string& out_flag) {
  if (!out_flag.empty()) return out_flag;
  if (const char* env = std::getenv("STOCKFIRE_OUT"); env && *env)
    return env;
  return "out";
}

CorridorScenario load_scenario_or_default(const std::string& path) {
  if (path.empty()) return parse_scenario("", "<defaults>");
  return load_scenario(path);
}

void print_balances(const std::vector<PathwayBalance>& balances) {
  std::cout << "pathway            direct  energy_credit  methane_credit  "
               "net (tCO2e/t)\n";
  for (const PathwayBalance& b : balances) {
    std::cout << to_string(b.pathway_id) << "  " << format_g9(b.direct_tco2e)
              << "  " << format_g9(b.energy_credit_tco2e) << "  "
              << format_g9(b.methane_credit_tco2e) << "  "
              << format_g9(b.net_tco2e) << "\n";
  }
}

int run_pathways(const std::string& scenario_path, const fs::path& out_dir) {
  const CorridorScenario s = load_scenario_or_default(scenario_path);
  ReportBundle bundle;
  bundle.pathways = pathway_balances(s);
  write_report(bundle, out_dir);
  print_balances(bundle.pathways);
  std::cout << "wrote " << (out_dir / "pathways.csv").string() << "\n";
  return 0;
}

int run_rank(const std::string& scenario_path,
             const std::vector<std::string>& regime_paths,
             const fs::path& out_dir) {
  const CorridorScenario s = load_scenario_or_default(scenario_path);
  ReportBundle bundle;
  for (const std::string& rp : regime_paths) {
    const AccountingRegime regime = load_regime(rp);
    RegimeIncentives ri;
    ri.regime_name = regime.name;
    ri.profiles = evaluate_regime(s, regime);
    bundle.incentives.push_back(ri);

    std::cout << "regime " << regime.name << " (ascending private cost):\n";
    for (const IncentiveProfile& p : rank_pathways(ri.profiles)) {
      std::cout << "  " << to_string(p.pathway_id) << "  "
                << format_g9(p.private_cost) << " $/t"
                << "  (capex " << format_g9(p.capex_opex) << ", carbon "
                << format_g9(p.carbon_cost) << ", energy -"
                << format_g9(p.energy_revenue) << ", tipping -"
                << format_g9(p.tipping_revenue) << ", land -"
                << format_g9(p.land_revenue) << ")\n";
    }
  }
  write_report(bundle, out_dir);
  std::cout << "wrote " << (out_dir / "incentives.csv").string() << "\n";
  return 0;
}

int run_tipping_point(const std::string& scenario_path,
                      const std::vector<std::string>& regime_paths,
                      double lambda_min, double lambda_max, double tol) {
  const CorridorScenario s = load_scenario_or_default(scenario_path);
  const AccountingRegime regime = load_regime(regime_paths.front());
  const TippingPoint tp =
      tipping_point_for_scenario(s, regime, lambda_min, lambda_max, tol);
  if (tp.found) {
    std::cout << "lambda_star = " << format_g9(tp.lambda) << " $/tCO2e ("
              << regime.name << ", " << regime.gwp.label << ")\n";
  } else {
    std::cout << "none in range [" << format_g9(lambda_min) << ", "
              << format_g9(lambda_max) << "] (" << regime.name << ")\n";
  }
  return 0;
}

int run_allocate(const std::string& scenario_path,
                 const std::vector<std::string>& regime_paths) {
  const CorridorScenario s = load_scenario_or_default(scenario_path);
  const AccountingRegime regime = load_regime(regime_paths.front());
  const std::vector<AllocationCandidate> cands =
      allocation_candidates(s, regime);
  const std::vector<double> x = optimal_allocation(cands);
  std::cout << "allocation under " << regime.name << ":\n";
  for (std::size_t i = 0; i < cands.size(); ++i) {
    std::cout << "  " << cands[i].label << "  " << format_g9(x[i]) << "  (cost "
              << format_g9(cands[i].cost) << " $/t, cap "
              << format_g9(cands[i].cap) << ")\n";
  }
  return 0;
}

int run_corridor(const std::string& scenario_path, std::uint64_t trials,
                 std::uint64_t seed, const fs::path& out_dir) {
  const CorridorScenario s = load_scenario_or_default(scenario_path);
  ReportBundle bundle;
  bundle.resilience = monte_carlo(s.microgrid, trials, seed);
  bundle.trials = trials;
  bundle.seed = seed;
  write_report(bundle, out_dir);
  const ResilienceMetrics& m = *bundle.resilience;
  std::cout << "corridor Monte Carlo (" << trials << " trials, seed " << seed
            << "):\n"
            << "  chp_energy_gwh  " << format_g9(m.chp_energy_gwh) << "\n"
            << "  chp_share       " << format_g9(m.chp_share) << "\n"
            << "  critical_lolh   " << format_g9(m.critical_lolh) << "\n"
            << "  unserved_gwh    " << format_g9(m.unserved_bulk_gwh) << "\n";
  std::cout << "wrote " << (out_dir / "resilience.json").string() << "\n";
  return 0;
}

int run_table3(const std::string& scenario_path, const fs::path& out_dir) {
  const CorridorScenario s = load_scenario_or_default(scenario_path);
  ReportBundle bundle;
  bundle.table3 = reproduce_table3(s);
  bundle.pathways = pathway_balances(s);
  write_report(bundle, out_dir);
  const Table3Report& t = *bundle.table3;
  std::cout << "baseline CH4      " << format_g9(t.baseline_ch4_tco2e_yr)
            << " tCO2e/yr\n"
            << "project CH4       " << format_g9(t.project_ch4_tco2e_yr)
            << " tCO2e/yr\n"
            << "reduction         " << format_g9(100.0 * t.reduction_pct)
            << " %\n"
            << "land recovered    " << format_g9(t.land_ha) << " ha\n"
            << "firm capacity     " << format_g9(t.firm_capacity_mw)
            << " MW\n"
            << "annual generation " << format_g9(t.annual_generation_gwh)
            << " GWh\n"
            << "dc share          " << format_g9(100.0 * t.dc_share_pct)
            << " %\n"
            << "legacy LFG unit   " << format_g9(annual_chp_energy(s.baseline_lfg))
            << " GWh\n";
  std::cout << "wrote " << (out_dir / "table3.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stockfire: per-tonne waste-pathway GHG balances, accounting-"
               "regime incentives, and corridor microgrid resilience"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::vector<std::string> regime_paths;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 42;
  double lambda_min = 0.0;
  double lambda_max = 500.0;
  double tol = 0.01;
  std::string out_flag;

  auto add_common = [&](CLI::App* cmd, bool with_regimes) {
    cmd->add_option("--scenario", scenario_path, "scenario file");
    if (with_regimes)
      cmd->add_option("--regime", regime_paths, "regime file (repeatable)");
    cmd->add_option("--out", out_flag, "output directory");
  };

  CLI::App* pathways = app.add_subcommand(
      "pathways", "per-tonne GHG balances for the three pathways");
  add_common(pathways, false);

  CLI::App* rank = app.add_subcommand(
      "rank", "incentive profiles and ranking under each regime");
  add_common(rank, true);

  CLI::App* tipping = app.add_subcommand(
      "tipping-point",
      "methane price at which remediation beats monitor-and-maintain");
  add_common(tipping, true);
  tipping->add_option("--lambda-min", lambda_min, "search lower bound");
  tipping->add_option("--lambda-max", lambda_max, "search upper bound");
  tipping->add_option("--tol", tol, "bisection tolerance ($)");

  CLI::App* allocate = app.add_subcommand(
      "allocate", "cost-minimizing allocation across pathways");
  add_common(allocate, true);

  CLI::App* corridor =
      app.add_subcommand("corridor", "hourly Monte Carlo of the microgrid");
  add_common(corridor, false);
  corridor->add_option("--trials", trials, "Monte Carlo trials");
  corridor->add_option("--seed", seed, "master seed");

  CLI::App* table3 =
      app.add_subcommand("table3", "site-level headline report");
  add_common(table3, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message and usage hint
    return 1;
  }

  if ((rank->parsed() || tipping->parsed() || allocate->parsed()) &&
      regime_paths.empty()) {
    std::cerr << "error: this subcommand requires at least one --regime\n";
    return 1;
  }

  try {
    const fs::path out_dir = resolve_out_dir(out_flag);
    if (pathways->parsed()) return run_pathways(scenario_path, out_dir);
    if (rank->parsed()) return run_rank(scenario_path, regime_paths, out_dir);
    if (tipping->parsed())
      return run_tipping_point(scenario_path, regime_paths, lambda_min,
                               lambda_max, tol);
    if (allocate->parsed()) return run_allocate(scenario_path, regime_paths);
    if (corridor->parsed())
      return run_corridor(scenario_path, trials, seed, out_dir);
    if (table3->parsed()) return run_table3(scenario_path, out_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
