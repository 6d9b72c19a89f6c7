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

#pragma once

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stockfire/corridor_sim.hpp"
#include "stockfire/errors.hpp"
#include "stockfire/gas_model.hpp"
#include "stockfire/kv.hpp"
#include "stockfire/pathway_model.hpp"
#include "stockfire/regime_engine.hpp"

namespace stockfire {

// Scenario files, typed assembly for the other modules, and CSV/JSON
// reports. Scenario files share the regime files' `key = value` format,
// with dotted section prefixes (`chp.capacity_mw = 20`). Every key has a
// default; the defaults are the frozen reference calibration, so an empty
// file loads the reference corridor.

/// Numbers in reports are serialized with 9 significant digits, `.` decimal
/// separator, no locale — golden files diff bit-exactly.
inline std::string format_g9(double v) {
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                               std::chars_format::general, 9);
  return std::string(buf.data(), p);
}

/// Non-carbon cost parameters for the incentive layer.
struct ScenarioCosts {
  double landfill_capex_opex = 25.0;        // $/t
  double wte_capex_opex = 60.0;             // $/t
  double remediation_capex_opex = 45.0;     // $/t in place
  double remediation_land_ha_per_tonne = 8.33333333e-07;  // ~25 ha over 30 Mt
  double monitor_compliance_per_tonne = 2.0;  // monitor-and-maintain $/t

  void validate() const {
    if (landfill_capex_opex < 0.0)
      throw InvariantError("costs.landfill_capex_opex", "must be >= 0");
    if (wte_capex_opex < 0.0)
      throw InvariantError("costs.wte_capex_opex", "must be >= 0");
    if (remediation_capex_opex < 0.0)
      throw InvariantError("costs.remediation_capex_opex", "must be >= 0");
    if (remediation_land_ha_per_tonne < 0.0)
      throw InvariantError("costs.remediation_land_ha_per_tonne",
                           "must be >= 0");
    if (monitor_compliance_per_tonne < 0.0)
      throw InvariantError("costs.monitor_compliance_per_tonne",
                           "must be >= 0");
  }
};

/// Capacity caps for the allocation problem, plus an optional exogenous
/// composting option at a user-supplied cost.
struct AllocationSettings {
  double cap_landfill = 1.0;
  double cap_wte = 1.0;
  double cap_remediation = 1.0;
  std::optional<double> composting_cost;  // $/t; absent -> not offered
  double composting_cap = 1.0;

  void validate() const {
    check_fraction("allocation.cap_landfill", cap_landfill);
    check_fraction("allocation.cap_wte", cap_wte);
    check_fraction("allocation.cap_remediation", cap_remediation);
    check_fraction("allocation.composting_cap", composting_cap);
  }

 private:
  static void check_fraction(const char* name, double v) {
    if (v < 0.0 || v > 1.0) throw InvariantError(name, "must be in [0, 1]");
  }
};

/// Everything needed to evaluate the corridor: waste physics, the three
/// pathways' parameters, the microgrid, and the scaling from per-tonne
/// intensities to site totals.
struct CorridorScenario {
  WasteStream waste;
  CapturePolicy baseline_policy;
  DecayParams decay;
  GwpHorizon gwp;
  RemediationParams remediation;
  WtePlantParams wte_plant;
  GridModel grid;
  MicrogridScenario microgrid;
  ChpUnit baseline_lfg;  // the small legacy gas unit, for comparison only
  double site_annual_mass_basis = 123000.0;  // t/yr of gas-generating mass
  double land_recovered_ha = 25.0;
  double campaign_months = 24.0;
  ScenarioCosts costs;
  AllocationSettings allocation;

  const ChpUnit& chp() const { return microgrid.chp; }
  const DataCenterLoad& dc() const { return microgrid.dc; }

  void validate() const {
    waste.validate();
    baseline_policy.validate();
    decay.validate();
    gwp.validate();
    remediation.validate();
    wte_plant.validate();
    grid.validate();
    microgrid.validate();
    baseline_lfg.validate();
    costs.validate();
    allocation.validate();
    if (!(site_annual_mass_basis > 0.0))
      throw InvariantError("site.annual_mass_basis_tonnes", "must be > 0");
    if (land_recovered_ha < 0.0)
      throw InvariantError("site.land_recovered_ha", "must be >= 0");
    if (campaign_months < 0.0)
      throw InvariantError("site.campaign_months", "must be >= 0");
  }
};

namespace scenario_keys {
inline constexpr std::array<const char*, 55> kAll = {
    "waste.doc", "waste.f_doc", "waste.mcf", "waste.f_ch4",
    "waste.fossil_carbon", "waste.stoich_factor",
    "capture.r", "capture.ox", "capture.utilization",
    "capture.lfg_elec_yield",
    "decay.k", "decay.horizon_years",
    "gwp",
    "remediation.excavated_fraction", "remediation.doc_removal_fraction",
    "remediation.residual_r", "remediation.residual_ox",
    "remediation.residual_utilization", "remediation.residual_lfg_elec_yield",
    "remediation.rdf_yield", "remediation.rdf_fossil_carbon",
    "remediation.excavation_overhead_tco2e", "remediation.discount_rate",
    "wte.net_elec_yield", "wte.heat_credit_mwh",
    "wte.heat_displacement_factor", "wte.n2o_tco2e", "wte.aux_fuel_tco2e",
    "grid.marginal_emission_factor",
    "chp.capacity_mw", "chp.capacity_factor", "chp.islandable",
    "chp.black_start", "chp.island_transfer_success_prob",
    "chp.availability_mode",
    "dc.bulk_mw", "dc.utilization", "dc.critical_mw",
    "diesel.capacity_mw", "diesel.fuel_hours_at_capacity",
    "diesel.black_start",
    "outages.mean_per_year", "outages.mean_duration_hours",
    "outages.duration_distribution",
    "site.annual_mass_basis_tonnes", "site.land_recovered_ha",
    "site.campaign_months",
    "baseline_lfg.capacity_mw", "baseline_lfg.capacity_factor",
    "costs.landfill_capex_opex", "costs.wte_capex_opex",
    "costs.remediation_capex_opex", "costs.remediation_land_ha_per_tonne",
    "costs.monitor_compliance_per_tonne",
    "loads.trace_csv",
};
inline constexpr std::array<const char*, 5> kAllocation = {
    "allocation.cap_landfill", "allocation.cap_wte",
    "allocation.cap_remediation", "allocation.composting_cost",
    "allocation.composting_cap",
};
}  // namespace scenario_keys

namespace detail {

/// Maps an InvariantError raised while validating a sub-struct back to the
/// scenario key it came from, so the error carries the offending key and
/// line of the file.
inline std::string scenario_key_for(const std::string& field,
                                    const std::string& context) {
  if (context == "remediation" && field.rfind("capture.", 0) == 0)
    return "remediation.residual_" + field.substr(8);
  if (context == "baseline_lfg" && field.rfind("chp.", 0) == 0)
    return "baseline_lfg." + field.substr(4);
  if (field.rfind("gwp.", 0) == 0) return "gwp";
  return field;  // struct fields are named after their scenario keys
}

[[noreturn]] inline void rethrow_at_key(const KvDocument& doc,
                                        const InvariantError& e,
                                        const std::string& context) {
  const std::string key = scenario_key_for(e.field(), context);
  throw ParseError(doc.source(), doc.line_of(key),
                   "invalid value for `" + key + "`: " + e.detail());
}

template <typename T>
inline void validate_mapped(const KvDocument& doc, const T& value,
                            const std::string& context) {
  try {
    value.validate();
  } catch (const InvariantError& e) {
    rethrow_at_key(doc, e, context);
  }
}

}  // namespace detail

/// Parses scenario text. `base_dir` anchors relative paths referenced by
/// the file (the optional hourly trace CSV).
inline CorridorScenario parse_scenario(
    const std::string& text, const std::string& source = "<scenario>",
    const std::filesystem::path& base_dir = {}) {
  const KvDocument doc = KvDocument::parse(text, source);
  {
    std::vector<std::string> known;
    known.reserve(scenario_keys::kAll.size() +
                  scenario_keys::kAllocation.size());
    for (const char* k : scenario_keys::kAll) known.emplace_back(k);
    for (const char* k : scenario_keys::kAllocation) known.emplace_back(k);
    doc.reject_unknown_keys(known);
  }

  CorridorScenario s;
  // gas model
  s.waste.doc = doc.get_number("waste.doc", 0.15);
  s.waste.f_doc = doc.get_number("waste.f_doc", 0.993262053);
  s.waste.mcf = doc.get_number("waste.mcf", 1.0);
  s.waste.f_ch4 = doc.get_number("waste.f_ch4", 0.5);
  s.waste.fossil_carbon = doc.get_number("waste.fossil_carbon", 0.14);
  s.waste.stoich_factor = doc.get_number("waste.stoich_factor", kStoichIpcc);
  s.baseline_policy.r = doc.get_number("capture.r", 0.35);
  s.baseline_policy.ox = doc.get_number("capture.ox", 0.1);
  s.baseline_policy.utilization_fraction =
      doc.get_number("capture.utilization", 0.5);
  s.baseline_policy.lfg_elec_yield =
      doc.get_number("capture.lfg_elec_yield", 4.9);
  s.decay.k = doc.get_number("decay.k", 0.05);
  s.decay.horizon_years =
      static_cast<int>(doc.get_int("decay.horizon_years", 100));
  if (const KvEntry* e = doc.find("gwp")) {
    if (e->value == "100") {
      s.gwp = GwpHorizon::gwp100();
    } else if (e->value == "20") {
      s.gwp = GwpHorizon::gwp20();
    } else {
      throw ParseError(source, e->line,
                       "gwp must be 100 or 20, got `" + e->value + "`");
    }
  }
  // remediation campaign
  s.remediation.excavated_fraction =
      doc.get_number("remediation.excavated_fraction", 0.6);
  s.remediation.doc_removal_fraction =
      doc.get_number("remediation.doc_removal_fraction", 0.6);
  s.remediation.residual_policy.r =
      doc.get_number("remediation.residual_r", 0.6);
  s.remediation.residual_policy.ox =
      doc.get_number("remediation.residual_ox", 0.15);
  s.remediation.residual_policy.utilization_fraction =
      doc.get_number("remediation.residual_utilization", 0.5);
  s.remediation.residual_policy.lfg_elec_yield =
      doc.get_number("remediation.residual_lfg_elec_yield", 4.9);
  s.remediation.rdf_yield = doc.get_number("remediation.rdf_yield", 0.25);
  s.remediation.rdf_fossil_carbon =
      doc.get_number("remediation.rdf_fossil_carbon", 0.12);
  s.remediation.excavation_overhead_tco2e =
      doc.get_number("remediation.excavation_overhead_tco2e", 0.03);
  s.remediation.discount_rate =
      doc.get_number("remediation.discount_rate", 0.03);
  // WtE plant
  s.wte_plant.net_elec_yield = doc.get_number("wte.net_elec_yield", 0.52);
  s.wte_plant.heat_credit_mwh = doc.get_number("wte.heat_credit_mwh", 0.0);
  s.wte_plant.heat_displacement_factor =
      doc.get_number("wte.heat_displacement_factor", 0.8);
  s.wte_plant.n2o_tco2e = doc.get_number("wte.n2o_tco2e", 0.05);
  s.wte_plant.aux_fuel_tco2e = doc.get_number("wte.aux_fuel_tco2e", 0.04);
  s.grid.marginal_emission_factor =
      doc.get_number("grid.marginal_emission_factor", 0.4);
  // microgrid
  s.microgrid.chp.capacity_mw = doc.get_number("chp.capacity_mw", 20.0);
  s.microgrid.chp.capacity_factor = doc.get_number("chp.capacity_factor", 0.856);
  s.microgrid.chp.islandable = doc.get_bool("chp.islandable", true);
  s.microgrid.chp.black_start = doc.get_bool("chp.black_start", true);
  s.microgrid.chp.island_transfer_success_prob =
      doc.get_number("chp.island_transfer_success_prob", 0.98);
  if (const KvEntry* e = doc.find("chp.availability_mode")) {
    if (e->value == "derate") {
      s.microgrid.chp_availability_mode = ChpAvailabilityMode::kDerate;
    } else if (e->value == "random") {
      s.microgrid.chp_availability_mode =
          ChpAvailabilityMode::kRandomForcedOutage;
    } else {
      throw ParseError(source, e->line,
                       "chp.availability_mode must be derate or random");
    }
  }
  s.microgrid.dc.bulk_mw = doc.get_number("dc.bulk_mw", 300.0);
  s.microgrid.dc.utilization = doc.get_number("dc.utilization", 0.97);
  s.microgrid.dc.critical_mw = doc.get_number("dc.critical_mw", 15.0);
  s.microgrid.diesel.capacity_mw = doc.get_number("diesel.capacity_mw", 15.0);
  s.microgrid.diesel.fuel_hours_at_capacity =
      doc.get_number("diesel.fuel_hours_at_capacity", 36.0);
  s.microgrid.diesel.black_start = doc.get_bool("diesel.black_start", true);
  s.microgrid.outages.mean_outages_per_year =
      doc.get_number("outages.mean_per_year", 8.0);
  s.microgrid.outages.mean_duration_hours =
      doc.get_number("outages.mean_duration_hours", 12.0);
  if (const KvEntry* e = doc.find("outages.duration_distribution")) {
    if (e->value == "fixed") {
      s.microgrid.outages.duration_distribution = DurationDistribution::kFixed;
    } else if (e->value == "exponential") {
      s.microgrid.outages.duration_distribution =
          DurationDistribution::kExponential;
    } else {
      throw ParseError(source, e->line,
                       "outages.duration_distribution must be fixed or "
                       "exponential");
    }
  }
  // site scaling and legacy unit
  s.site_annual_mass_basis =
      doc.get_number("site.annual_mass_basis_tonnes", 123000.0);
  s.land_recovered_ha = doc.get_number("site.land_recovered_ha", 25.0);
  s.campaign_months = doc.get_number("site.campaign_months", 24.0);
  s.baseline_lfg.capacity_mw = doc.get_number("baseline_lfg.capacity_mw", 4.0);
  s.baseline_lfg.capacity_factor =
      doc.get_number("baseline_lfg.capacity_factor", 0.8);
  // incentive-layer costs
  s.costs.landfill_capex_opex =
      doc.get_number("costs.landfill_capex_opex", 25.0);
  s.costs.wte_capex_opex = doc.get_number("costs.wte_capex_opex", 60.0);
  s.costs.remediation_capex_opex =
      doc.get_number("costs.remediation_capex_opex", 45.0);
  s.costs.remediation_land_ha_per_tonne =
      doc.get_number("costs.remediation_land_ha_per_tonne", 8.33333333e-07);
  s.costs.monitor_compliance_per_tonne =
      doc.get_number("costs.monitor_compliance_per_tonne", 2.0);
  // allocation
  s.allocation.cap_landfill = doc.get_number("allocation.cap_landfill", 1.0);
  s.allocation.cap_wte = doc.get_number("allocation.cap_wte", 1.0);
  s.allocation.cap_remediation =
      doc.get_number("allocation.cap_remediation", 1.0);
  if (doc.has("allocation.composting_cost"))
    s.allocation.composting_cost =
        doc.get_number("allocation.composting_cost", 0.0);
  s.allocation.composting_cap =
      doc.get_number("allocation.composting_cap", 1.0);
  // optional hourly trace
  if (const KvEntry* e = doc.find("loads.trace_csv")) {
    std::filesystem::path p = e->value;
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    std::ifstream in(p, std::ios::binary);
    if (!in)
      throw ParseError(source, e->line,
                       "cannot open trace file: " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    s.microgrid.trace = parse_hourly_trace(buf.str(), p.string());
  }

  // invariant checks, mapped back to keys and lines
  detail::validate_mapped(doc, s.waste, "waste");
  detail::validate_mapped(doc, s.baseline_policy, "capture");
  detail::validate_mapped(doc, s.decay, "decay");
  detail::validate_mapped(doc, s.gwp, "gwp");
  detail::validate_mapped(doc, s.remediation, "remediation");
  detail::validate_mapped(doc, s.wte_plant, "wte");
  detail::validate_mapped(doc, s.grid, "grid");
  detail::validate_mapped(doc, s.microgrid, "microgrid");
  detail::validate_mapped(doc, s.baseline_lfg, "baseline_lfg");
  detail::validate_mapped(doc, s.costs, "costs");
  detail::validate_mapped(doc, s.allocation, "allocation");
  try {
    s.validate();
  } catch (const InvariantError& e) {
    detail::rethrow_at_key(doc, e, "site");
  }
  return s;
}

inline CorridorScenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path,
                        std::filesystem::path(path).parent_path());
}

// ---------------------------------------------------------------------------
// Scenario-level assembly for the pathway and regime layers.

/// The three pathway balances under the given horizon (defaults to the
/// scenario's). WtE uses the inventory view (no counterfactual credit).
inline std::vector<PathwayBalance> pathway_balances(
    const CorridorScenario& s,
    const std::optional<GwpHorizon>& gwp_override = std::nullopt) {
  const GwpHorizon gwp = gwp_override.value_or(s.gwp);
  return {
      landfill_pathway(s.waste, s.baseline_policy, s.grid, gwp),
      wte_pathway(s.waste, s.wte_plant, s.grid),
      remediation_pathway(s.waste, s.baseline_policy, s.remediation,
                          s.wte_plant, s.grid, s.decay, gwp),
  };
}

inline PathwayCosts pathway_costs(const CorridorScenario& s, PathwayId id) {
  switch (id) {
    case PathwayId::LANDFILL_CAPTURE:
      return {id, s.costs.landfill_capex_opex, 0.0, true};
    case PathwayId::WTE_CURRENT:
      return {id, s.costs.wte_capex_opex, 0.0, true};
    case PathwayId::REMEDIATION_WTE:
      return {id, s.costs.remediation_capex_opex,
              s.costs.remediation_land_ha_per_tonne, false};
  }
  throw DomainError("pathway_costs: unknown pathway");
}

/// Incentive profiles for the three pathways under a regime (balances are
/// re-weighted to the regime's GWP horizon).
inline std::vector<IncentiveProfile> evaluate_regime(
    const CorridorScenario& s, const AccountingRegime& regime) {
  std::vector<IncentiveProfile> out;
  for (const PathwayBalance& b : pathway_balances(s, regime.gwp))
    out.push_back(private_cost(b, pathway_costs(s, b.pathway_id), regime));
  return out;
}

/// The monitor-and-maintain baseline: the legacy site under its current
/// capture policy, a fixed compliance cost, no tipping revenue (the site is
/// closed), no land recovery.
struct MonitorBaseline {
  PathwayBalance balance;
  PathwayCosts costs;
};

inline MonitorBaseline monitor_baseline(const CorridorScenario& s,
                                        const GwpHorizon& gwp) {
  MonitorBaseline mb;
  mb.balance = landfill_pathway(s.waste, s.baseline_policy, s.grid, gwp);
  mb.costs = PathwayCosts{PathwayId::LANDFILL_CAPTURE,
                          s.costs.monitor_compliance_per_tonne, 0.0, false};
  return mb;
}

/// Methane price at which remediation's private cost crosses the
/// monitor-and-maintain baseline's under the regime template.
inline TippingPoint tipping_point_for_scenario(
    const CorridorScenario& s, const AccountingRegime& regime_template,
    double lambda_low = 0.0, double lambda_high = 500.0, double tol = 0.01) {
  const GwpHorizon gwp = regime_template.gwp;
  const PathwayBalance rem = remediation_pathway(
      s.waste, s.baseline_policy, s.remediation, s.wte_plant, s.grid, s.decay,
      gwp);
  const PathwayCosts rem_costs =
      pathway_costs(s, PathwayId::REMEDIATION_WTE);
  const MonitorBaseline mb = monitor_baseline(s, gwp);
  return tipping_point_lambda(rem, rem_costs, mb.balance, mb.costs,
                              regime_template, lambda_low, lambda_high, tol);
}

/// Allocation candidates: the three pathways under the regime, plus the
/// exogenous composting option when the scenario prices one.
inline std::vector<AllocationCandidate> allocation_candidates(
    const CorridorScenario& s, const AccountingRegime& regime) {
  std::vector<AllocationCandidate> cands;
  const std::vector<IncentiveProfile> profiles = evaluate_regime(s, regime);
  cands.push_back(to_candidate(profiles[0], s.allocation.cap_landfill));
  cands.push_back(to_candidate(profiles[1], s.allocation.cap_wte));
  cands.push_back(to_candidate(profiles[2], s.allocation.cap_remediation));
  if (s.allocation.composting_cost) {
    cands.push_back(AllocationCandidate{"COMPOSTING", 3,
                                        *s.allocation.composting_cost,
                                        s.allocation.composting_cap});
  }
  return cands;
}

// ---------------------------------------------------------------------------
// Table 3 and report writing.

struct Table3Report {
  double baseline_ch4_tco2e_yr = 0.0;
  double project_ch4_tco2e_yr = 0.0;
  double reduction_pct = 0.0;  // fraction: 1 - project/baseline
  double land_ha = 0.0;
  double firm_capacity_mw = 0.0;
  double annual_generation_gwh = 0.0;
  double dc_share_pct = 0.0;  // fraction of annual DC demand

  void validate() const {
    if (baseline_ch4_tco2e_yr < 0.0 || project_ch4_tco2e_yr < 0.0 ||
        land_ha < 0.0 || firm_capacity_mw < 0.0 ||
        annual_generation_gwh < 0.0 || dc_share_pct < 0.0 ||
        reduction_pct < 0.0)
      throw InvariantError("table3", "all fields must be >= 0");
    if (baseline_ch4_tco2e_yr > 0.0) {
      const double expect =
          1.0 - project_ch4_tco2e_yr / baseline_ch4_tco2e_yr;
      if (std::abs(reduction_pct - expect) > 1e-9)
        throw InvariantError("table3.reduction_pct",
                             "must equal 1 - project/baseline");
    }
  }
};

/// Site-level reproduction of the corridor headline numbers: methane before
/// and after remediation (scaled by the annual mass basis), recovered land,
/// firm capacity, generation, and DC demand share.
inline Table3Report reproduce_table3(const CorridorScenario& s) {
  s.validate();
  const RemediationMethane ch4 =
      remediation_methane(s.waste, s.baseline_policy, s.remediation, s.decay);

  Table3Report t;
  t.baseline_ch4_tco2e_yr =
      to_co2e(ch4.baseline_total, s.gwp) * s.site_annual_mass_basis;
  t.project_ch4_tco2e_yr =
      to_co2e(ch4.project_total, s.gwp) * s.site_annual_mass_basis;
  t.reduction_pct =
      t.baseline_ch4_tco2e_yr > 0.0
          ? 1.0 - t.project_ch4_tco2e_yr / t.baseline_ch4_tco2e_yr
          : 0.0;
  t.land_ha = s.land_recovered_ha;
  t.firm_capacity_mw = s.chp().capacity_mw;
  t.annual_generation_gwh = annual_chp_energy(s.chp());
  t.dc_share_pct = dc_demand_share(s.chp(), s.dc());
  t.validate();
  return t;
}

/// Incentive profiles computed under one named regime.
struct RegimeIncentives {
  std::string regime_name;
  std::vector<IncentiveProfile> profiles;
};

/// What a run produced; write_report emits one file per present section.
struct ReportBundle {
  std::optional<Table3Report> table3;
  std::vector<PathwayBalance> pathways;
  std::vector<RegimeIncentives> incentives;
  std::optional<ResilienceMetrics> resilience;
  std::uint64_t trials = 0;  // echoed into resilience.json
  std::uint64_t seed = 0;
};

namespace detail {

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace detail

inline constexpr const char* kTable3CsvHeader =
    "baseline_ch4_tco2e_yr,project_ch4_tco2e_yr,reduction_pct,land_ha,"
    "firm_capacity_mw,annual_generation_gwh,dc_share_pct";

inline std::string table3_csv(const Table3Report& t) {
  std::string s = kTable3CsvHeader;
  s += "\n";
  s += format_g9(t.baseline_ch4_tco2e_yr) + "," +
       format_g9(t.project_ch4_tco2e_yr) + "," + format_g9(t.reduction_pct) +
       "," + format_g9(t.land_ha) + "," + format_g9(t.firm_capacity_mw) +
       "," + format_g9(t.annual_generation_gwh) + "," +
       format_g9(t.dc_share_pct) + "\n";
  return s;
}

inline std::string table3_json(const Table3Report& t) {
  std::string s = "{\n";
  s += "  \"baseline_ch4_tco2e_yr\": " + format_g9(t.baseline_ch4_tco2e_yr) +
       ",\n";
  s += "  \"project_ch4_tco2e_yr\": " + format_g9(t.project_ch4_tco2e_yr) +
       ",\n";
  s += "  \"reduction_pct\": " + format_g9(t.reduction_pct) + ",\n";
  s += "  \"land_ha\": " + format_g9(t.land_ha) + ",\n";
  s += "  \"firm_capacity_mw\": " + format_g9(t.firm_capacity_mw) + ",\n";
  s += "  \"annual_generation_gwh\": " + format_g9(t.annual_generation_gwh) +
       ",\n";
  s += "  \"dc_share_pct\": " + format_g9(t.dc_share_pct) + "\n";
  s += "}\n";
  return s;
}

inline std::string pathways_csv(const std::vector<PathwayBalance>& balances) {
  std::string s = "pathway,direct,energy_credit,methane_credit,net\n";
  for (const PathwayBalance& b : balances) {
    s += std::string(to_string(b.pathway_id)) + "," +
         format_g9(b.direct_tco2e) + "," + format_g9(b.energy_credit_tco2e) +
         "," + format_g9(b.methane_credit_tco2e) + "," +
         format_g9(b.net_tco2e) + "\n";
  }
  return s;
}

inline std::string incentives_csv(
    const std::vector<RegimeIncentives>& incentives) {
  std::string s =
      "regime,pathway,private_cost,carbon_cost,energy_revenue,"
      "tipping_revenue,land_revenue,capex_opex\n";
  for (const RegimeIncentives& ri : incentives) {
    for (const IncentiveProfile& p : ri.profiles) {
      s += ri.regime_name + "," + to_string(p.pathway_id) + "," +
           format_g9(p.private_cost) + "," + format_g9(p.carbon_cost) + "," +
           format_g9(p.energy_revenue) + "," + format_g9(p.tipping_revenue) +
           "," + format_g9(p.land_revenue) + "," + format_g9(p.capex_opex) +
           "\n";
    }
  }
  return s;
}

inline std::string resilience_json(const ResilienceMetrics& m,
                                   std::uint64_t trials, std::uint64_t seed) {
  std::string s = "{\n";
  s += "  \"trials\": " + std::to_string(trials) + ",\n";
  s += "  \"seed\": " + std::to_string(seed) + ",\n";
  s += "  \"chp_energy_gwh\": " + format_g9(m.chp_energy_gwh) + ",\n";
  s += "  \"dc_energy_gwh\": " + format_g9(m.dc_energy_gwh) + ",\n";
  s += "  \"chp_share\": " + format_g9(m.chp_share) + ",\n";
  s += "  \"unserved_bulk_gwh\": " + format_g9(m.unserved_bulk_gwh) + ",\n";
  s += "  \"critical_lolh\": " + format_g9(m.critical_lolh) + ",\n";
  s += "  \"ride_through_hours\": {\n";
  s += "    \"mean\": " + format_g9(m.ride_through_hours.mean) + ",\n";
  s += "    \"p95\": " + format_g9(m.ride_through_hours.p95) + ",\n";
  s += "    \"max\": " + format_g9(m.ride_through_hours.max) + "\n";
  s += "  },\n";
  s += "  \"diesel_energy_displaced_gwh\": " +
       format_g9(m.diesel_energy_displaced_gwh) + ",\n";
  s += "  \"island_transfer_failures\": " +
       format_g9(m.island_transfer_failures) + "\n";
  s += "}\n";
  return s;
}

/// Writes one file per present section into `out_dir` (created if needed).
/// Returns the paths written.
inline std::vector<std::filesystem::path> write_report(
    const ReportBundle& bundle, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw IoError("cannot create output directory " + out_dir.string() +
                  ": " + ec.message());

  std::vector<std::filesystem::path> written;
  if (bundle.table3) {
    detail::write_text_file(out_dir / "table3.json",
                            table3_json(*bundle.table3));
    written.push_back(out_dir / "table3.json");
    detail::write_text_file(out_dir / "table3.csv", table3_csv(*bundle.table3));
    written.push_back(out_dir / "table3.csv");
  }
  if (!bundle.pathways.empty()) {
    detail::write_text_file(out_dir / "pathways.csv",
                            pathways_csv(bundle.pathways));
    written.push_back(out_dir / "pathways.csv");
  }
  if (!bundle.incentives.empty()) {
    detail::write_text_file(out_dir / "incentives.csv",
                            incentives_csv(bundle.incentives));
    written.push_back(out_dir / "incentives.csv");
  }
  if (bundle.resilience) {
    detail::write_text_file(
        out_dir / "resilience.json",
        resilience_json(*bundle.resilience, bundle.trials, bundle.seed));
    written.push_back(out_dir / "resilience.json");
  }
  return written;
}

}  // namespace stockfire
