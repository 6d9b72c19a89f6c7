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

#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <json.hpp>
#include <string>

#include "stockfire/scenario_io.hpp"
#include "support.hpp"

using namespace stockfire;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("stockfire_" + tag);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

}  // namespace

TEST_CASE("reference scenario file loads", "[scenario_io]") {
  const CorridorScenario s =
      load_scenario(test_support::data_path("reference_corridor.scenario"));
  CHECK(s.chp().capacity_mw == 20.0);
  CHECK(s.chp().islandable);
  CHECK(s.dc().bulk_mw == 300.0);
  CHECK(s.waste.doc == 0.15);
  CHECK(s.site_annual_mass_basis == 123000.0);
  CHECK(s.land_recovered_ha == 25.0);
  CHECK(s.gwp.label == "GWP100");
}

TEST_CASE("empty scenario equals the shipped reference", "[scenario_io]") {
  const CorridorScenario file =
      load_scenario(test_support::data_path("reference_corridor.scenario"));
  const CorridorScenario defaults = parse_scenario("", "<empty>");
  CHECK(file.waste.doc == defaults.waste.doc);
  CHECK(file.waste.f_doc == defaults.waste.f_doc);
  CHECK(file.waste.stoich_factor == defaults.waste.stoich_factor);
  CHECK(file.baseline_policy == defaults.baseline_policy);
  CHECK(file.remediation.residual_policy ==
        defaults.remediation.residual_policy);
  CHECK(file.microgrid.chp.capacity_factor ==
        defaults.microgrid.chp.capacity_factor);
  CHECK(file.microgrid.diesel.fuel_hours_at_capacity ==
        defaults.microgrid.diesel.fuel_hours_at_capacity);
  CHECK(file.costs.remediation_land_ha_per_tonne ==
        defaults.costs.remediation_land_ha_per_tonne);
  CHECK(file.site_annual_mass_basis == defaults.site_annual_mass_basis);
}

TEST_CASE("scenario rejects out-of-invariant values with key and line",
          "[scenario_io]") {
  const std::string text = "waste.doc = 0.15\ncapture.r = 1.5\n";
  CHECK_THROWS_MATCHES(
      parse_scenario(text, "bad.scenario"), ParseError,
      Catch::Matchers::MessageMatches(
          Catch::Matchers::ContainsSubstring("bad.scenario:2") &&
          Catch::Matchers::ContainsSubstring("capture.r")));
}

TEST_CASE("scenario rejects unknown and malformed keys", "[scenario_io]") {
  CHECK_THROWS_MATCHES(
      parse_scenario("chp.capacty_mw = 20\n", "s"), ParseError,
      Catch::Matchers::MessageMatches(
          Catch::Matchers::ContainsSubstring("chp.capacty_mw")));
  CHECK_THROWS_AS(parse_scenario("dc.bulk_mw = lots\n", "s"), ParseError);
  CHECK_THROWS_AS(parse_scenario("gwp = 30\n", "s"), ParseError);
  CHECK_THROWS_AS(parse_scenario("chp.availability_mode = sometimes\n", "s"),
                  ParseError);
  // residual-policy violations point at the remediation key
  CHECK_THROWS_MATCHES(
      parse_scenario("remediation.residual_r = 2.0\n", "s"), ParseError,
      Catch::Matchers::MessageMatches(
          Catch::Matchers::ContainsSubstring("remediation.residual_r")));
}

TEST_CASE("scenario gwp switch changes pathway weighting", "[scenario_io]") {
  const CorridorScenario s100 = parse_scenario("", "<a>");
  const CorridorScenario s20 = parse_scenario("gwp = 20\n", "<b>");
  const double net100 = pathway_balances(s100)[0].net_tco2e;
  const double net20 = pathway_balances(s20)[0].net_tco2e;
  CHECK(net20 > net100);
}

TEST_CASE("table3 reproduction hits the published bands", "[scenario_io]") {
  const CorridorScenario s = parse_scenario("", "<defaults>");
  const Table3Report t = reproduce_table3(s);
  CHECK_THAT(t.baseline_ch4_tco2e_yr, WithinRel(200000.0, 0.10));
  CHECK(t.project_ch4_tco2e_yr >= 60000.0);
  CHECK(t.project_ch4_tco2e_yr <= 80000.0);
  CHECK(t.reduction_pct >= 0.60);
  CHECK(t.reduction_pct <= 0.70);
  CHECK(t.land_ha == 25.0);
  CHECK(t.firm_capacity_mw == 20.0);
  CHECK(t.annual_generation_gwh >= 148.0);
  CHECK(t.annual_generation_gwh <= 158.0);
  CHECK(t.dc_share_pct >= 0.05);
  CHECK(t.dc_share_pct <= 0.06);
}

TEST_CASE("disabling remediation zeroes the reduction", "[scenario_io]") {
  const std::string text =
      "remediation.excavated_fraction = 0\n"
      "remediation.residual_r = 0.35\n"
      "remediation.residual_ox = 0.1\n";
  const CorridorScenario s = parse_scenario(text, "<off>");
  const Table3Report t = reproduce_table3(s);
  CHECK_THAT(t.reduction_pct, WithinAbs(0.0, 1e-12));
  CHECK_THAT(t.project_ch4_tco2e_yr,
             WithinRel(t.baseline_ch4_tco2e_yr, 1e-12));
}

TEST_CASE("report schema and round-trip fidelity", "[scenario_io]") {
  const CorridorScenario s = parse_scenario("", "<defaults>");
  ReportBundle bundle;
  bundle.table3 = reproduce_table3(s);
  bundle.pathways = pathway_balances(s);
  const fs::path dir = fresh_dir("report");
  write_report(bundle, dir);

  // resilience.json is omitted when no Monte Carlo ran
  CHECK_FALSE(fs::exists(dir / "resilience.json"));
  CHECK_FALSE(fs::exists(dir / "incentives.csv"));
  REQUIRE(fs::exists(dir / "table3.csv"));
  REQUIRE(fs::exists(dir / "table3.json"));
  REQUIRE(fs::exists(dir / "pathways.csv"));

  const std::string csv = test_support::read_file((dir / "table3.csv").string());
  const std::size_t eol = csv.find('\n');
  CHECK(csv.substr(0, eol) ==
        "baseline_ch4_tco2e_yr,project_ch4_tco2e_yr,reduction_pct,land_ha,"
        "firm_capacity_mw,annual_generation_gwh,dc_share_pct");
  const auto cells = split_csv_line(csv.substr(eol + 1, csv.find('\n', eol + 1) - eol - 1));
  REQUIRE(cells.size() == 7);
  CHECK_THAT(std::stod(cells[0]),
             WithinRel(bundle.table3->baseline_ch4_tco2e_yr, 1e-9));
  CHECK_THAT(std::stod(cells[2]), WithinRel(bundle.table3->reduction_pct, 1e-9));
  CHECK_THAT(std::stod(cells[6]), WithinRel(bundle.table3->dc_share_pct, 1e-9));

  const nlohmann::json j = nlohmann::json::parse(
      test_support::read_file((dir / "table3.json").string()));
  CHECK_THAT(j.at("baseline_ch4_tco2e_yr").get<double>(),
             WithinRel(bundle.table3->baseline_ch4_tco2e_yr, 1e-9));
  CHECK_THAT(j.at("project_ch4_tco2e_yr").get<double>(),
             WithinRel(bundle.table3->project_ch4_tco2e_yr, 1e-9));
  CHECK_THAT(j.at("annual_generation_gwh").get<double>(),
             WithinRel(bundle.table3->annual_generation_gwh, 1e-9));

  const std::string pcsv =
      test_support::read_file((dir / "pathways.csv").string());
  CHECK(pcsv.rfind("pathway,direct,energy_credit,methane_credit,net\n", 0) ==
        0);
  CHECK(pcsv.find("LANDFILL_CAPTURE") != std::string::npos);
  CHECK(pcsv.find("REMEDIATION_WTE") != std::string::npos);
}

TEST_CASE("resilience report echoes run parameters", "[scenario_io]") {
  const CorridorScenario s = parse_scenario("", "<defaults>");
  ReportBundle bundle;
  bundle.resilience = monte_carlo(s.microgrid, 10, 7);
  bundle.trials = 10;
  bundle.seed = 7;
  const fs::path dir = fresh_dir("resilience");
  write_report(bundle, dir);
  const nlohmann::json j = nlohmann::json::parse(
      test_support::read_file((dir / "resilience.json").string()));
  CHECK(j.at("trials").get<int>() == 10);
  CHECK(j.at("seed").get<int>() == 7);
  CHECK_THAT(j.at("chp_energy_gwh").get<double>(),
             WithinRel(bundle.resilience->chp_energy_gwh, 1e-9));
  CHECK(j.at("ride_through_hours").is_object());
}

TEST_CASE("incentives report covers every regime and pathway",
          "[scenario_io]") {
  const CorridorScenario s = parse_scenario("", "<defaults>");
  ReportBundle bundle;
  for (const char* name :
       {"us_baseline.regime", "china_delandfill.regime"}) {
    const AccountingRegime regime =
        load_regime(test_support::data_path(name));
    bundle.incentives.push_back(
        RegimeIncentives{regime.name, evaluate_regime(s, regime)});
  }
  const fs::path dir = fresh_dir("incentives");
  write_report(bundle, dir);
  const std::string csv =
      test_support::read_file((dir / "incentives.csv").string());
  CHECK(csv.rfind("regime,pathway,private_cost,carbon_cost,energy_revenue,"
                  "tipping_revenue,land_revenue,capex_opex\n",
                  0) == 0);
  // 2 regimes x 3 pathways + header
  int lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 7);
}

TEST_CASE("format_g9 is stable and 9-significant-digit", "[scenario_io]") {
  CHECK(format_g9(0.5) == "0.5");
  CHECK(format_g9(25.0) == "25");
  CHECK(format_g9(0.0588316151) == "0.0588316151");
  CHECK(format_g9(123456789.123) == "123456789");
  CHECK(format_g9(1.0 / 3.0) == "0.333333333");
  CHECK(format_g9(-2.5e-07) == "-2.5e-07");
}

TEST_CASE("missing scenario file raises an I/O error", "[scenario_io]") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/path.scenario"), IoError);
}

TEST_CASE("trace CSV paths resolve against the scenario directory",
          "[scenario_io]") {
  const fs::path dir = fresh_dir("tracedir");
  fs::create_directories(dir);
  {
    std::ofstream trace(dir / "year.csv", std::ios::binary);
    trace << "hour,grid_up,bulk_mw,critical_mw\n";
    for (int h = 0; h < kHoursPerYear; ++h)
      trace << h << ",1,291,15\n";
  }
  {
    std::ofstream scen(dir / "with_trace.scenario", std::ios::binary);
    scen << "loads.trace_csv = year.csv\n";
  }
  const CorridorScenario s =
      load_scenario((dir / "with_trace.scenario").string());
  REQUIRE(s.microgrid.trace.has_value());
  CHECK(s.microgrid.trace->bulk_mw[0] == 291.0);

  // missing trace file points at the referencing line
  {
    std::ofstream scen(dir / "broken.scenario", std::ios::binary);
    scen << "loads.trace_csv = nothere.csv\n";
  }
  CHECK_THROWS_AS(load_scenario((dir / "broken.scenario").string()),
                  ParseError);
}

TEST_CASE("composting enters the allocation as an exogenous option",
          "[scenario_io]") {
  const CorridorScenario s = parse_scenario(
      "allocation.composting_cost = -100\n"
      "allocation.composting_cap = 0.25\n",
      "<composting>");
  const AccountingRegime us =
      load_regime(test_support::data_path("us_baseline.regime"));
  const auto cands = allocation_candidates(s, us);
  REQUIRE(cands.size() == 4);
  CHECK(cands[3].label == "COMPOSTING");
  const auto x = optimal_allocation(cands);
  CHECK(x[3] == 0.25);  // cheapest option fills to its cap
  double total = 0.0;
  for (double v : x) total += v;
  CHECK_THAT(total, WithinAbs(1.0, 1e-12));
}
