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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stockfire/errors.hpp"
#include "stockfire/gas_model.hpp"

namespace stockfire {

// Per-tonne GHG balances for the three treatment pathways. Every balance is
// decomposed as net = direct - energy_credit - methane_credit; biogenic CO2
// is carried as a memo item outside the net.

enum class PathwayId {
  LANDFILL_CAPTURE = 0,
  WTE_CURRENT = 1,
  REMEDIATION_WTE = 2,
};

inline const char* to_string(PathwayId id) {
  switch (id) {
    case PathwayId::LANDFILL_CAPTURE: return "LANDFILL_CAPTURE";
    case PathwayId::WTE_CURRENT: return "WTE_CURRENT";
    case PathwayId::REMEDIATION_WTE: return "REMEDIATION_WTE";
  }
  return "?";
}

/// Decomposed per-tonne balance. direct_ch4_tco2e is the slice of direct
/// that is residual methane (as CO2e); accounting regimes can make that
/// slice invisible independently of the CO2/N2O remainder.
struct PathwayBalance {
  PathwayId pathway_id = PathwayId::LANDFILL_CAPTURE;
  double direct_tco2e = 0.0;
  double direct_ch4_tco2e = 0.0;
  double energy_credit_tco2e = 0.0;
  double methane_credit_tco2e = 0.0;
  double net_tco2e = 0.0;
  double exported_mwh = 0.0;
  double biogenic_co2_t = 0.0;  // memo item, excluded from net

  void validate() const {
    const double expect =
        direct_tco2e - energy_credit_tco2e - methane_credit_tco2e;
    const double scale = std::max(
        {std::abs(direct_tco2e), std::abs(energy_credit_tco2e),
         std::abs(methane_credit_tco2e), std::abs(net_tco2e), 1e-300});
    if (std::abs(net_tco2e - expect) > 1e-12 * scale)
      throw InvariantError("balance.net_tco2e",
                           "net must equal direct - energy - methane credit");
    if (energy_credit_tco2e < 0.0)
      throw InvariantError("balance.energy_credit_tco2e", "must be >= 0");
    if (exported_mwh < 0.0)
      throw InvariantError("balance.exported_mwh", "must be >= 0");
    if (direct_ch4_tco2e < 0.0 || direct_ch4_tco2e > direct_tco2e + 1e-12)
      throw InvariantError("balance.direct_ch4_tco2e",
                           "must be in [0, direct_tco2e]");
  }
};

/// Displaced generation mix behind exported energy.
struct GridModel {
  double marginal_emission_factor = 0.0;  // tCO2e per MWh displaced

  void validate() const {
    if (marginal_emission_factor < 0.0)
      throw InvariantError("grid.marginal_emission_factor", "must be >= 0");
  }
};

struct WtePlantParams {
  double net_elec_yield = 0.0;          // MWh per tonne fuel
  double heat_credit_mwh = 0.0;         // MWh-thermal per tonne fuel
  double heat_displacement_factor = 0.8;  // displaced-boiler factor
  double n2o_tco2e = 0.0;               // tCO2e per tonne fuel
  double aux_fuel_tco2e = 0.0;          // upstream/auxiliary, tCO2e per tonne

  void validate() const {
    if (net_elec_yield < 0.0)
      throw InvariantError("wte.net_elec_yield", "must be >= 0");
    if (heat_credit_mwh < 0.0)
      throw InvariantError("wte.heat_credit_mwh", "must be >= 0");
    if (heat_displacement_factor < 0.0)
      throw InvariantError("wte.heat_displacement_factor", "must be >= 0");
    if (n2o_tco2e < 0.0) throw InvariantError("wte.n2o_tco2e", "must be >= 0");
    if (aux_fuel_tco2e < 0.0)
      throw InvariantError("wte.aux_fuel_tco2e", "must be >= 0");
  }

  /// MWh credited against the grid per tonne of fuel burned.
  double credited_mwh_per_tonne() const {
    return net_elec_yield + heat_credit_mwh * heat_displacement_factor;
  }
};

struct RemediationParams {
  double excavated_fraction = 0.0;    // share of site mass excavated
  double doc_removal_fraction = 0.0;  // DOC removed from excavated mass
  CapturePolicy residual_policy;      // post-campaign site-wide gas control
  double rdf_yield = 0.0;             // t RDF per t excavated
  double rdf_fossil_carbon = 0.0;     // t fossil C per t RDF
  double excavation_overhead_tco2e = 0.0;  // per t excavated
  double discount_rate = 0.03;        // per year, on future methane benefit

  void validate() const {
    check_fraction("remediation.excavated_fraction", excavated_fraction);
    check_fraction("remediation.doc_removal_fraction", doc_removal_fraction);
    residual_policy.validate();
    if (rdf_yield < 0.0)
      throw InvariantError("remediation.rdf_yield", "must be >= 0");
    if (rdf_fossil_carbon < 0.0)
      throw InvariantError("remediation.rdf_fossil_carbon", "must be >= 0");
    if (excavation_overhead_tco2e < 0.0)
      throw InvariantError("remediation.excavation_overhead_tco2e",
                           "must be >= 0");
    if (discount_rate < 0.0 || discount_rate > 0.2)
      throw InvariantError("remediation.discount_rate",
                           "must be in [0, 0.2]");
  }

 private:
  static void check_fraction(const char* name, double v) {
    if (v < 0.0 || v > 1.0) throw InvariantError(name, "must be in [0, 1]");
  }
};

/// tCO2e avoided by exporting `exported` MWh against the grid margin.
inline double avoided_grid_emissions(double exported, const GridModel& grid) {
  if (exported < 0.0)
    throw DomainError("avoided_grid_emissions: exported must be >= 0");
  grid.validate();
  return exported * grid.marginal_emission_factor;
}

/// Present value, in tCO2e, of the yearly methane reduction
/// (baseline - project), discounted at `rate` with year 1 divided by
/// (1+rate)^1. Negative if the project emits more.
inline double discounted_methane_benefit(std::span<const double> baseline,
                                         std::span<const double> project,
                                         double rate, const GwpHorizon& gwp) {
  if (baseline.size() != project.size())
    throw DomainError("discounted_methane_benefit: series length mismatch (" +
                      std::to_string(baseline.size()) + " vs " +
                      std::to_string(project.size()) + ")");
  if (rate < 0.0)
    throw DomainError("discounted_methane_benefit: rate must be >= 0");
  double sum = 0.0;
  double discount = 1.0;
  for (std::size_t t = 0; t < baseline.size(); ++t) {
    discount /= (1.0 + rate);
    sum += (baseline[t] - project[t]) * gwp.ch4_factor * discount;
  }
  return sum;
}

namespace detail {

inline PathwayBalance finish_balance(PathwayBalance b) {
  b.net_tco2e =
      b.direct_tco2e - b.energy_credit_tco2e - b.methane_credit_tco2e;
  b.validate();
  return b;
}

}  // namespace detail

/// Pathway 1: landfill with partial gas capture, the accounting baseline
/// (its methane credit is zero by definition).
inline PathwayBalance landfill_pathway(const WasteStream& waste,
                                       const CapturePolicy& policy,
                                       const GridModel& grid,
                                       const GwpHorizon& gwp) {
  gwp.validate();
  const double generated = methane_generation_aggregate(waste);
  const double residual = net_methane(generated, policy);

  PathwayBalance b;
  b.pathway_id = PathwayId::LANDFILL_CAPTURE;
  b.direct_ch4_tco2e = to_co2e(residual, gwp);
  b.direct_tco2e = b.direct_ch4_tco2e;
  b.exported_mwh = generated * policy.r * policy.utilization_fraction *
                   policy.lfg_elec_yield;
  b.energy_credit_tco2e = avoided_grid_emissions(b.exported_mwh, grid);
  b.methane_credit_tco2e = 0.0;
  // LFG CO2 share (and nothing else) as the biogenic memo.
  const double decomposed_c = waste.f_doc * waste.doc * waste.mcf;
  b.biogenic_co2_t = decomposed_c * (1.0 - waste.f_ch4) * kCo2PerCarbon;
  return detail::finish_balance(b);
}

/// Pathway 2: current-waste WtE. Fossil CO2, N2O and auxiliary fuel are
/// direct; biogenic CO2 is a memo. Pass `avoided_landfill` to switch on the
/// counterfactual methane credit (credits the landfill emissions the tonne
/// would otherwise have caused); inventory accounting leaves it off.
inline PathwayBalance wte_pathway(
    const WasteStream& waste, const WtePlantParams& plant,
    const GridModel& grid,
    const std::optional<PathwayBalance>& avoided_landfill = std::nullopt) {
  waste.validate();
  plant.validate();

  PathwayBalance b;
  b.pathway_id = PathwayId::WTE_CURRENT;
  b.direct_ch4_tco2e = 0.0;
  b.direct_tco2e = waste.fossil_carbon * kCo2PerCarbon + plant.n2o_tco2e +
                   plant.aux_fuel_tco2e;
  b.exported_mwh = plant.credited_mwh_per_tonne();
  b.energy_credit_tco2e = avoided_grid_emissions(b.exported_mwh, grid);
  b.methane_credit_tco2e =
      avoided_landfill ? avoided_landfill->direct_tco2e : 0.0;
  b.biogenic_co2_t = waste.doc * kCo2PerCarbon;
  return detail::finish_balance(b);
}

/// Site-level methane outcome of a remediation campaign, per tonne of
/// in-place waste: the yearly net-emission series before and after.
/// After the campaign the excavated share keeps (1 - doc_removal) of its
/// DOC and the whole site moves to the residual capture policy.
struct RemediationMethane {
  std::vector<double> baseline_tch4;  // per year, under the current policy
  std::vector<double> project_tch4;   // per year, post-campaign
  double baseline_total = 0.0;
  double project_total = 0.0;
};

inline RemediationMethane remediation_methane(const WasteStream& site_waste,
                                              const CapturePolicy& baseline,
                                              const RemediationParams& rem,
                                              const DecayParams& decay) {
  rem.validate();
  baseline.validate();
  const std::vector<double> gross = methane_timeseries(site_waste, decay);
  const double doc_factor =
      1.0 - rem.excavated_fraction * rem.doc_removal_fraction;
  const double base_escape = (1.0 - baseline.r) * (1.0 - baseline.ox);
  const double proj_escape =
      (1.0 - rem.residual_policy.r) * (1.0 - rem.residual_policy.ox);

  RemediationMethane out;
  out.baseline_tch4.reserve(gross.size());
  out.project_tch4.reserve(gross.size());
  for (double g : gross) {
    const double base = g * base_escape;
    const double proj = g * doc_factor * proj_escape;
    out.baseline_tch4.push_back(base);
    out.project_tch4.push_back(proj);
    out.baseline_total += base;
    out.project_total += proj;
  }
  return out;
}

/// Pathway 3: legacy-site remediation + WtE, expressed per tonne of
/// in-place waste and incremental to leaving the site alone. Direct terms
/// are the campaign's own emissions (excavation overhead, RDF fossil CO2);
/// the energy credit is the added export (RDF combustion plus the gas-use
/// improvement over the baseline policy); the methane credit is the
/// discounted future reduction.
inline PathwayBalance remediation_pathway(const WasteStream& site_waste,
                                          const CapturePolicy& baseline_policy,
                                          const RemediationParams& rem,
                                          const WtePlantParams& plant,
                                          const GridModel& grid,
                                          const DecayParams& decay,
                                          const GwpHorizon& gwp) {
  gwp.validate();
  plant.validate();
  const RemediationMethane ch4 =
      remediation_methane(site_waste, baseline_policy, rem, decay);

  const double gross_total = methane_generation_aggregate(site_waste);
  const double doc_factor =
      1.0 - rem.excavated_fraction * rem.doc_removal_fraction;

  PathwayBalance b;
  b.pathway_id = PathwayId::REMEDIATION_WTE;
  b.direct_ch4_tco2e = 0.0;
  const double rdf_per_tonne = rem.excavated_fraction * rem.rdf_yield;
  b.direct_tco2e =
      rem.excavated_fraction * rem.excavation_overhead_tco2e +
      rdf_per_tonne * rem.rdf_fossil_carbon * kCo2PerCarbon;

  const double lfg_elec_project = gross_total * doc_factor *
                                  rem.residual_policy.r *
                                  rem.residual_policy.utilization_fraction *
                                  rem.residual_policy.lfg_elec_yield;
  const double lfg_elec_baseline = gross_total * baseline_policy.r *
                                   baseline_policy.utilization_fraction *
                                   baseline_policy.lfg_elec_yield;
  b.exported_mwh = rdf_per_tonne * plant.credited_mwh_per_tonne() +
                   (lfg_elec_project - lfg_elec_baseline);
  b.energy_credit_tco2e = avoided_grid_emissions(b.exported_mwh, grid);

  b.methane_credit_tco2e = discounted_methane_benefit(
      ch4.baseline_tch4, ch4.project_tch4, rem.discount_rate, gwp);

  const double decomposed_c =
      site_waste.f_doc * site_waste.doc * site_waste.mcf * doc_factor;
  b.biogenic_co2_t = decomposed_c * (1.0 - site_waste.f_ch4) * kCo2PerCarbon;
  return detail::finish_balance(b);
}

}  // namespace stockfire
