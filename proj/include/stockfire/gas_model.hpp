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

#include <cmath>
#include <string>
#include <vector>

#include "stockfire/errors.hpp"

namespace stockfire {

// Landfill gas physics: first-order-decay methane generation, capture and
// oxidation, and CH4 -> CO2e conversion under selectable GWP horizons.
// All quantities are per-tonne-of-waste intensities; site totals are formed
// downstream by multiplying with a mass basis.

/// Mass ratio CH4/C. The aggregate generation formula is sometimes read on
/// a carbon basis (factor 1, no mass conversion); IPCC mass accounting
/// applies the 16/12 conversion. Both readings are supported.
inline constexpr double kStoichIpcc = 16.0 / 12.0;
inline constexpr double kStoichCarbonBasis = 1.0;

/// Mass ratio CO2/C for full oxidation of carbon.
inline constexpr double kCo2PerCarbon = 44.0 / 12.0;

/// Composition of one tonne of waste as it sits in (or arrives at) a site.
struct WasteStream {
  double doc = 0.0;             // t degradable organic carbon / t waste
  double f_doc = 0.0;           // fraction of DOC decomposing over the horizon
  double mcf = 1.0;             // methane correction factor
  double f_ch4 = 0.5;           // CH4 fraction of landfill gas
  double fossil_carbon = 0.0;   // t fossil C / t waste
  double stoich_factor = kStoichIpcc;  // CH4 mass per decomposed C mass

  void validate() const {
    check_fraction("waste.f_doc", f_doc);
    check_fraction("waste.mcf", mcf);
    check_fraction("waste.f_ch4", f_ch4);
    if (doc < 0.0) throw InvariantError("waste.doc", "must be >= 0");
    if (fossil_carbon < 0.0)
      throw InvariantError("waste.fossil_carbon", "must be >= 0");
    if (doc + fossil_carbon > 1.0)
      throw InvariantError("waste.doc", "doc + fossil_carbon must be <= 1");
    if (stoich_factor < kStoichCarbonBasis || stoich_factor > kStoichIpcc)
      throw InvariantError("waste.stoich_factor",
                           "must be in [1, 16/12]");
  }

 private:
  static void check_fraction(const char* name, double v) {
    if (v < 0.0 || v > 1.0) throw InvariantError(name, "must be in [0, 1]");
  }
};

/// Gas collection and use at a disposal site.
struct CapturePolicy {
  double r = 0.0;                     // capture efficiency
  double ox = 0.0;                    // oxidation factor on uncaptured gas
  double utilization_fraction = 0.0;  // captured gas share turned to power
  double lfg_elec_yield = 0.0;        // MWh per tonne CH4 combusted

  void validate() const {
    check_fraction("capture.r", r);
    check_fraction("capture.ox", ox);
    check_fraction("capture.utilization", utilization_fraction);
    if (lfg_elec_yield < 0.0)
      throw InvariantError("capture.lfg_elec_yield", "must be >= 0");
  }

  bool operator==(const CapturePolicy&) const = default;

 private:
  static void check_fraction(const char* name, double v) {
    if (v < 0.0 || v > 1.0) throw InvariantError(name, "must be in [0, 1]");
  }
};

/// CO2-equivalence horizon for methane.
struct GwpHorizon {
  std::string label = "GWP100";
  double ch4_factor = 28.0;  // tCO2e per tCH4

  static GwpHorizon gwp100() { return GwpHorizon{"GWP100", 28.0}; }
  static GwpHorizon gwp20() { return GwpHorizon{"GWP20", 80.0}; }

  void validate() const {
    if (ch4_factor < 28.0 || ch4_factor > 84.0)
      throw InvariantError("gwp.ch4_factor", "must be in [28, 84]");
    if (label != "GWP100" && label != "GWP20")
      throw InvariantError("gwp.label", "must be GWP100 or GWP20");
  }
};

/// First-order decay timing parameters. Totals are fixed by WasteStream;
/// k and the horizon only distribute them over years, subject to the
/// consistency rule f_doc = 1 - exp(-k*T).
struct DecayParams {
  double k = 0.05;         // per year
  int horizon_years = 100;

  void validate() const {
    if (!(k > 0.0)) throw InvariantError("decay.k", "must be > 0");
    if (horizon_years < 1)
      throw InvariantError("decay.horizon_years", "must be >= 1");
  }

  double implied_f_doc() const {
    return 1.0 - std::exp(-k * static_cast<double>(horizon_years));
  }
};

inline constexpr double kFdocConsistencyRelTol = 1e-6;

/// Methane generated over the whole horizon, t CH4 per tonne waste.
inline double methane_generation_aggregate(const WasteStream& waste) {
  waste.validate();
  return waste.f_doc * waste.doc * waste.mcf * waste.f_ch4 *
         waste.stoich_factor;
}

/// Year-resolved first-order-decay generation, t CH4 per tonne waste per
/// year, length horizon_years. Year t carries weight
/// exp(-k(t-1)) - exp(-kt), normalized so the series sums exactly to the
/// aggregate. Requires f_doc consistent with (k, T); inconsistency is an
/// error rather than a silent renormalization.
inline std::vector<double> methane_timeseries(const WasteStream& waste,
                                              const DecayParams& decay) {
  waste.validate();
  decay.validate();

  const double implied = decay.implied_f_doc();
  const double rel = std::abs(waste.f_doc - implied) /
                     std::max(std::abs(implied), 1e-300);
  if (rel > kFdocConsistencyRelTol) {
    throw DomainError(
        "waste.f_doc inconsistent with decay parameters: f_doc=" +
        std::to_string(waste.f_doc) + " but 1-exp(-k*T)=" +
        std::to_string(implied));
  }

  const double total = methane_generation_aggregate(waste);
  const int horizon = decay.horizon_years;
  std::vector<double> series(static_cast<std::size_t>(horizon), 0.0);
  const double norm = 1.0 - std::exp(-decay.k * static_cast<double>(horizon));
  if (norm <= 0.0) {
    // k*T underflowed; everything lands in year one.
    series[0] = total;
    return series;
  }
  for (int t = 1; t <= horizon; ++t) {
    const double w = std::exp(-decay.k * static_cast<double>(t - 1)) -
                     std::exp(-decay.k * static_cast<double>(t));
    series[static_cast<std::size_t>(t - 1)] = total * (w / norm);
  }
  return series;
}

/// Methane escaping after capture and oxidation of the uncaptured share.
inline double net_methane(double generated, const CapturePolicy& policy) {
  if (generated < 0.0)
    throw DomainError("net_methane: generated must be >= 0");
  policy.validate();
  return generated * (1.0 - policy.r) * (1.0 - policy.ox);
}

/// CH4 mass to CO2-equivalent under the given horizon.
inline double to_co2e(double ch4_mass, const GwpHorizon& gwp) {
  return ch4_mass * gwp.ch4_factor;
}

}  // namespace stockfire
