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
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "stockfire/errors.hpp"
#include "stockfire/kv.hpp"
#include "stockfire/pathway_model.hpp"

namespace stockfire {

// Accounting regimes: which physical components of a balance are monetized,
// at what prices. A regime maps PathwayBalances to private costs; rankings,
// the methane-price tipping point, and the optimal allocation follow.

/// One row of the incentive map: prices plus visibility flags.
struct AccountingRegime {
  std::string name;
  double methane_price = 0.0;        // $/tCO2e on visible net carbon
  double energy_credit_price = 0.0;  // $/MWh exported
  double tipping_fee = 0.0;          // $/t revenue for accepting waste
  double land_value = 0.0;           // $/ha of recovered land
  GwpHorizon gwp = GwpHorizon::gwp100();
  bool count_residual_methane = true;
  bool count_biogenic_co2 = false;
  bool count_energy_credit = true;
  bool count_methane_credit = true;
  bool count_land_credit = true;

  void validate() const {
    if (name.empty()) throw InvariantError("regime.name", "must be non-empty");
    if (methane_price < 0.0)
      throw InvariantError("regime.methane_price", "must be >= 0");
    if (energy_credit_price < 0.0)
      throw InvariantError("regime.energy_credit_price", "must be >= 0");
    if (tipping_fee < 0.0)
      throw InvariantError("regime.tipping_fee", "must be >= 0");
    if (land_value < 0.0)
      throw InvariantError("regime.land_value", "must be >= 0");
    gwp.validate();
  }
};

/// Non-carbon economics of operating a pathway. `tipping_eligible` marks
/// pathways that take in new waste and thus earn the regime's tipping fee;
/// remediation works on waste already in the ground and does not.
struct PathwayCosts {
  PathwayId pathway_id = PathwayId::LANDFILL_CAPTURE;
  double capex_opex_per_tonne = 0.0;
  double land_recovered_ha_per_tonne = 0.0;
  bool tipping_eligible = true;

  void validate() const {
    if (capex_opex_per_tonne < 0.0)
      throw InvariantError("costs.capex_opex_per_tonne", "must be >= 0");
    if (land_recovered_ha_per_tonne < 0.0)
      throw InvariantError("costs.land_recovered_ha_per_tonne",
                           "must be >= 0");
  }
};

/// Private cost of managing one tonne through a pathway under a regime,
/// with the component breakdown.
struct IncentiveProfile {
  PathwayId pathway_id = PathwayId::LANDFILL_CAPTURE;
  double private_cost = 0.0;  // $/t
  double carbon_cost = 0.0;
  double energy_revenue = 0.0;
  double tipping_revenue = 0.0;
  double land_revenue = 0.0;
  double capex_opex = 0.0;

  void validate() const {
    const double expect = capex_opex + carbon_cost - energy_revenue -
                          tipping_revenue - land_revenue;
    const double scale =
        std::max({std::abs(capex_opex), std::abs(carbon_cost),
                  std::abs(energy_revenue), std::abs(tipping_revenue),
                  std::abs(land_revenue), std::abs(private_cost), 1e-300});
    if (std::abs(private_cost - expect) > 1e-12 * scale)
      throw InvariantError("profile.private_cost",
                           "breakdown identity violated");
  }
};

namespace regime_keys {
inline constexpr std::array<const char*, 11> kAll = {
    "name",
    "methane_price",
    "energy_credit_price",
    "tipping_fee",
    "land_value",
    "gwp",
    "count_residual_methane",
    "count_biogenic_co2",
    "count_energy_credit",
    "count_methane_credit",
    "count_land_credit",
};
}  // namespace regime_keys

/// Parses a .regime document. Unknown keys and malformed values are parse
/// errors naming the key and line; unset optional keys take the struct
/// defaults; `name` is required.
inline AccountingRegime parse_regime(const std::string& text,
                                     const std::string& source = "<regime>") {
  const KvDocument doc = KvDocument::parse(text, source);
  doc.reject_unknown_keys(regime_keys::kAll);

  AccountingRegime r;
  if (!doc.has("name"))
    throw ParseError(source, 0, "missing required key `name`");
  r.name = doc.get_string("name", "");
  r.methane_price = doc.get_number("methane_price", r.methane_price);
  r.energy_credit_price =
      doc.get_number("energy_credit_price", r.energy_credit_price);
  r.tipping_fee = doc.get_number("tipping_fee", r.tipping_fee);
  r.land_value = doc.get_number("land_value", r.land_value);
  if (const KvEntry* e = doc.find("gwp")) {
    if (e->value == "100") {
      r.gwp = GwpHorizon::gwp100();
    } else if (e->value == "20") {
      r.gwp = GwpHorizon::gwp20();
    } else {
      throw ParseError(source, e->line, "gwp must be 100 or 20, got `" +
                                            e->value + "`");
    }
  }
  r.count_residual_methane =
      doc.get_bool("count_residual_methane", r.count_residual_methane);
  r.count_biogenic_co2 =
      doc.get_bool("count_biogenic_co2", r.count_biogenic_co2);
  r.count_energy_credit =
      doc.get_bool("count_energy_credit", r.count_energy_credit);
  r.count_methane_credit =
      doc.get_bool("count_methane_credit", r.count_methane_credit);
  r.count_land_credit = doc.get_bool("count_land_credit", r.count_land_credit);

  try {
    r.validate();
  } catch (const InvariantError& e) {
    throw ParseError(source, 0, e.what());
  }
  return r;
}

inline AccountingRegime load_regime(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_regime(buf.str(), path);
}

/// Applies a regime's prices and visibility filters to one balance.
/// Invisible components never enter the arithmetic, so scaling them leaves
/// the result bit-identical.
inline IncentiveProfile private_cost(const PathwayBalance& balance,
                                     const PathwayCosts& costs,
                                     const AccountingRegime& regime) {
  if (balance.pathway_id != costs.pathway_id)
    throw DomainError(std::string("private_cost: balance is ") +
                      to_string(balance.pathway_id) + " but costs are " +
                      to_string(costs.pathway_id));
  costs.validate();
  regime.validate();

  double visible_direct =
      balance.direct_tco2e - balance.direct_ch4_tco2e;  // CO2/N2O slice
  if (regime.count_residual_methane) visible_direct += balance.direct_ch4_tco2e;
  if (regime.count_biogenic_co2) visible_direct += balance.biogenic_co2_t;
  const double visible_credit =
      regime.count_methane_credit ? balance.methane_credit_tco2e : 0.0;

  IncentiveProfile p;
  p.pathway_id = balance.pathway_id;
  p.capex_opex = costs.capex_opex_per_tonne;
  p.carbon_cost = regime.methane_price * (visible_direct - visible_credit);
  p.energy_revenue = regime.count_energy_credit
                         ? balance.exported_mwh * regime.energy_credit_price
                         : 0.0;
  p.tipping_revenue = costs.tipping_eligible ? regime.tipping_fee : 0.0;
  p.land_revenue = regime.count_land_credit
                       ? regime.land_value * costs.land_recovered_ha_per_tonne
                       : 0.0;
  p.private_cost = p.capex_opex + p.carbon_cost - p.energy_revenue -
                   p.tipping_revenue - p.land_revenue;
  p.validate();
  return p;
}

/// Ascending private cost; ties broken by the fixed pathway order
/// LANDFILL_CAPTURE < WTE_CURRENT < REMEDIATION_WTE.
inline std::vector<IncentiveProfile> rank_pathways(
    std::vector<IncentiveProfile> profiles) {
  if (profiles.size() < 2)
    throw DomainError("rank_pathways: need at least 2 profiles");
  for (std::size_t i = 0; i < profiles.size(); ++i)
    for (std::size_t j = i + 1; j < profiles.size(); ++j)
      if (profiles[i].pathway_id == profiles[j].pathway_id)
        throw DomainError(std::string("rank_pathways: duplicate pathway ") +
                          to_string(profiles[i].pathway_id));
  std::stable_sort(profiles.begin(), profiles.end(),
                   [](const IncentiveProfile& a, const IncentiveProfile& b) {
                     if (a.private_cost != b.private_cost)
                       return a.private_cost < b.private_cost;
                     return static_cast<int>(a.pathway_id) <
                            static_cast<int>(b.pathway_id);
                   });
  return profiles;
}

/// Result of the methane-shadow-price search.
struct TippingPoint {
  bool found = false;
  double lambda = 0.0;  // $/tCO2e, meaningful only when found
};

/// Smallest methane price at which remediation's private cost meets the
/// monitor-and-maintain baseline's, by bisection on the (affine) cost
/// difference over [lambda_low, lambda_high]. No sign change -> not found.
/// Balances are held fixed; only regime.methane_price varies, so the
/// difference is exactly affine in lambda.
inline TippingPoint tipping_point_lambda(
    const PathwayBalance& remediation, const PathwayCosts& remediation_costs,
    const PathwayBalance& baseline, const PathwayCosts& baseline_costs,
    const AccountingRegime& regime_template, double lambda_low,
    double lambda_high, double tol) {
  if (!(tol > 0.0)) throw DomainError("tipping_point_lambda: tol must be > 0");
  if (!(lambda_low < lambda_high))
    throw DomainError("tipping_point_lambda: need lambda_low < lambda_high");

  auto diff = [&](double lambda) {
    AccountingRegime r = regime_template;
    r.methane_price = lambda;
    return private_cost(remediation, remediation_costs, r).private_cost -
           private_cost(baseline, baseline_costs, r).private_cost;
  };

  double lo = lambda_low;
  double hi = lambda_high;
  double f_lo = diff(lo);
  double f_hi = diff(hi);
  if (f_lo == 0.0) return {true, lo};
  if (f_hi == 0.0) return {true, hi};
  if ((f_lo > 0.0) == (f_hi > 0.0)) return {false, 0.0};

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = diff(mid);
    if (f_mid == 0.0) return {true, mid};
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return {true, 0.5 * (lo + hi)};
}

/// One option in the allocation problem. `tie_order` fixes deterministic
/// tie-breaking: the three pathways use their enum order; exogenous options
/// (e.g. composting at a user-supplied cost) follow in insertion order.
struct AllocationCandidate {
  std::string label;
  int tie_order = 0;
  double cost = 0.0;  // $/t
  double cap = 1.0;   // max fraction
};

inline AllocationCandidate to_candidate(const IncentiveProfile& p,
                                        double cap) {
  return AllocationCandidate{to_string(p.pathway_id),
                             static_cast<int>(p.pathway_id), p.private_cost,
                             cap};
}

/// Minimizes sum(x_p * cost_p) s.t. sum(x_p) = 1, 0 <= x_p <= cap_p, by
/// greedy fill in ascending cost order (optimal for this LP). Returns
/// fractions in input order.
inline std::vector<double> optimal_allocation(
    const std::vector<AllocationCandidate>& candidates) {
  if (candidates.empty())
    throw DomainError("optimal_allocation: no candidates");
  double cap_sum = 0.0;
  for (const auto& c : candidates) {
    if (c.cap < 0.0 || c.cap > 1.0)
      throw DomainError("optimal_allocation: cap for " + c.label +
                        " must be in [0, 1]");
    cap_sum += c.cap;
  }
  if (cap_sum < 1.0 - 1e-12)
    throw DomainError("optimal_allocation: capacity caps sum to " +
                      std::to_string(cap_sum) + " < 1, infeasible");

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (candidates[a].cost != candidates[b].cost)
                       return candidates[a].cost < candidates[b].cost;
                     return candidates[a].tie_order < candidates[b].tie_order;
                   });

  std::vector<double> x(candidates.size(), 0.0);
  double remaining = 1.0;
  for (std::size_t i : order) {
    const double take = std::min(candidates[i].cap, remaining);
    x[i] = take;
    remaining -= take;
    if (remaining <= 0.0) break;
  }
  return x;
}

}  // namespace stockfire
