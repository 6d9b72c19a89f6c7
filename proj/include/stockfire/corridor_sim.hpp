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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "stockfire/errors.hpp"
#include "stockfire/rng.hpp"

namespace stockfire {

// Hourly Monte Carlo simulation of the corridor microgrid: grid supply with
// stochastic outages, behind-the-meter CHP, diesel backup, bulk and critical
// data-center loads, islanding. One trial is one simulated year.

inline constexpr int kHoursPerYear = 8760;

/// Threshold below which a critical shortfall is treated as zero.
inline constexpr double kLoadEps = 1e-9;

struct ChpUnit {
  double capacity_mw = 0.0;  // 0 means no CHP
  double capacity_factor = 1.0;
  bool islandable = false;
  bool black_start = false;  // capability flag; reported, not dispatched
  double island_transfer_success_prob = 1.0;

  void validate() const {
    if (capacity_mw < 0.0)
      throw InvariantError("chp.capacity_mw", "must be >= 0");
    if (capacity_factor < 0.0 || capacity_factor > 1.0)
      throw InvariantError("chp.capacity_factor", "must be in [0, 1]");
    if (island_transfer_success_prob < 0.0 ||
        island_transfer_success_prob > 1.0)
      throw InvariantError("chp.island_transfer_success_prob",
                           "must be in [0, 1]");
  }
};

struct DataCenterLoad {
  double bulk_mw = 0.0;      // nameplate
  double utilization = 1.0;  // average load as share of nameplate
  double critical_mw = 0.0;  // thermal management + orchestration

  void validate() const {
    if (bulk_mw < 0.0) throw InvariantError("dc.bulk_mw", "must be >= 0");
    if (utilization < 0.0 || utilization > 1.0)
      throw InvariantError("dc.utilization", "must be in [0, 1]");
    if (critical_mw < 0.0 || critical_mw > bulk_mw * utilization + kLoadEps)
      throw InvariantError("dc.critical_mw",
                           "must be in [0, bulk_mw * utilization]");
  }

  double average_mw() const { return bulk_mw * utilization; }
  double annual_gwh() const {
    return average_mw() * kHoursPerYear / 1000.0;
  }
};

enum class DurationDistribution { kFixed, kExponential };

/// Poisson outage arrivals; durations fixed or exponential, rounded up to
/// whole hours (minimum one hour). Overlapping outages merge into one event.
struct OutageProcess {
  double mean_outages_per_year = 0.0;
  double mean_duration_hours = 1.0;
  DurationDistribution duration_distribution =
      DurationDistribution::kExponential;

  void validate() const {
    if (mean_outages_per_year < 0.0)
      throw InvariantError("outages.mean_per_year", "must be >= 0");
    if (mean_outages_per_year > 0.0 && !(mean_duration_hours > 0.0))
      throw InvariantError("outages.mean_duration_hours", "must be > 0");
  }
};

struct DieselUnit {
  double capacity_mw = 0.0;
  double fuel_hours_at_capacity = 0.0;  // tank endurance at full output
  bool black_start = false;  // can start into a dead island

  void validate() const {
    if (capacity_mw < 0.0)
      throw InvariantError("diesel.capacity_mw", "must be >= 0");
    if (fuel_hours_at_capacity < 0.0)
      throw InvariantError("diesel.fuel_hours_at_capacity", "must be >= 0");
  }

  double tank_mwh() const { return capacity_mw * fuel_hours_at_capacity; }
};

enum class ChpAvailabilityMode {
  kDerate,             // capacity * CF available every hour
  kRandomForcedOutage  // full capacity with per-hour Bernoulli(CF) uptime
};

/// Fixed hourly grid/load override (the trace CSV).
struct HourlyTrace {
  std::vector<std::uint8_t> grid_up;
  std::vector<double> bulk_mw;
  std::vector<double> critical_mw;
};

struct MicrogridScenario {
  ChpUnit chp;
  DataCenterLoad dc;
  DieselUnit diesel;
  OutageProcess outages;
  ChpAvailabilityMode chp_availability_mode = ChpAvailabilityMode::kDerate;
  std::optional<HourlyTrace> trace;  // replaces loads and the outage process

  void validate() const {
    chp.validate();
    dc.validate();
    diesel.validate();
    outages.validate();
    if (trace && (trace->grid_up.size() != kHoursPerYear ||
                  trace->bulk_mw.size() != kHoursPerYear ||
                  trace->critical_mw.size() != kHoursPerYear))
      throw InvariantError("trace", "must cover exactly 8760 hours");
  }
};

/// Parses the optional trace CSV. Header must be exactly
/// `hour,grid_up,bulk_mw,critical_mw`, 8760 data rows, hour = 0..8759.
inline HourlyTrace parse_hourly_trace(const std::string& text,
                                      const std::string& source = "<trace>") {
  HourlyTrace trace;
  trace.grid_up.reserve(kHoursPerYear);
  trace.bulk_mw.reserve(kHoursPerYear);
  trace.critical_mw.reserve(kHoursPerYear);

  std::size_t pos = 0;
  int line_no = 0;
  auto next_line = [&](std::string& out) {
    if (pos > text.size()) return false;
    std::size_t eol = text.find('\n', pos);
    out = (eol == std::string::npos) ? text.substr(pos)
                                     : text.substr(pos, eol - pos);
    pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;
    if (!out.empty() && out.back() == '\r') out.pop_back();
    ++line_no;
    return true;
  };

  std::string line;
  if (!next_line(line) || line != "hour,grid_up,bulk_mw,critical_mw")
    throw ParseError(source, 1,
                     "expected header `hour,grid_up,bulk_mw,critical_mw`");
  int hour = 0;
  while (next_line(line)) {
    if (line.empty()) continue;
    double fields[4];
    std::size_t start = 0;
    for (int f = 0; f < 4; ++f) {
      std::size_t comma = line.find(',', start);
      std::string cell = (comma == std::string::npos)
                             ? line.substr(start)
                             : line.substr(start, comma - start);
      if ((f < 3 && comma == std::string::npos) ||
          (f == 3 && comma != std::string::npos))
        throw ParseError(source, line_no, "expected 4 comma-separated fields");
      try {
        fields[f] = std::stod(cell);
      } catch (const std::exception&) {
        throw ParseError(source, line_no, "bad number `" + cell + "`");
      }
      start = (comma == std::string::npos) ? line.size() : comma + 1;
    }
    if (hour >= kHoursPerYear)
      throw ParseError(source, line_no, "more than 8760 data rows");
    if (fields[0] != static_cast<double>(hour))
      throw ParseError(source, line_no,
                       "hour column must run 0..8759 in order");
    if (fields[1] != 0.0 && fields[1] != 1.0)
      throw ParseError(source, line_no, "grid_up must be 0 or 1");
    if (fields[2] < 0.0 || fields[3] < 0.0 || fields[3] > fields[2] + kLoadEps)
      throw ParseError(source, line_no,
                       "need 0 <= critical_mw <= bulk_mw");
    trace.grid_up.push_back(static_cast<std::uint8_t>(fields[1]));
    trace.bulk_mw.push_back(fields[2]);
    trace.critical_mw.push_back(fields[3]);
    ++hour;
  }
  if (hour != kHoursPerYear)
    throw ParseError(source, line_no,
                     "expected 8760 data rows, got " + std::to_string(hour));
  return trace;
}

/// Annual CHP output in GWh at the unit's capacity factor.
inline double annual_chp_energy(const ChpUnit& chp) {
  chp.validate();
  return chp.capacity_mw * kHoursPerYear * chp.capacity_factor / 1000.0;
}

/// Share of the data center's annual demand covered by CHP energy.
inline double dc_demand_share(const ChpUnit& chp, const DataCenterLoad& dc) {
  dc.validate();
  const double dc_gwh = dc.annual_gwh();
  if (!(dc_gwh > 0.0))
    throw DomainError("dc_demand_share: data-center annual energy is zero");
  return annual_chp_energy(chp) / dc_gwh;
}

/// Outcome of one simulated year, hourly resolution.
struct DispatchResult {
  std::vector<double> chp_mw;
  std::vector<double> diesel_mw;
  std::vector<double> grid_mw;
  std::vector<double> unserved_mw;
  std::vector<double> unserved_critical_mw;
  std::vector<double> ride_through_hours;  // one entry per outage event
  int island_transfer_failures = 0;

  double chp_mwh = 0.0;
  double demand_mwh = 0.0;
  double unserved_mwh = 0.0;
  int critical_lolh = 0;
  double diesel_displaced_mwh = 0.0;
};

/// Deterministic hourly dispatch for given grid/CHP availability traces and
/// per-event transfer outcomes.
///
/// Grid up: the grid serves bulk load, CHP runs behind the meter up to its
/// available capacity. Grid down: if the CHP is islandable and the event's
/// transfer draw succeeded, CHP output goes to critical load first and then
/// bulk, with diesel covering the remainder up to capacity and tank; if the
/// island never forms, a black-start diesel carries critical load alone
/// until the tank runs out. The tank refills between outages, never during
/// one.
inline DispatchResult simulate_dispatch(
    const MicrogridScenario& scenario, std::span<const std::uint8_t> grid_up,
    std::span<const double> chp_avail_mw,
    std::span<const std::uint8_t> transfer_ok) {
  scenario.validate();
  if (grid_up.size() != kHoursPerYear || chp_avail_mw.size() != kHoursPerYear)
    throw DomainError("simulate_dispatch: traces must cover 8760 hours");

  DispatchResult r;
  r.chp_mw.assign(kHoursPerYear, 0.0);
  r.diesel_mw.assign(kHoursPerYear, 0.0);
  r.grid_mw.assign(kHoursPerYear, 0.0);
  r.unserved_mw.assign(kHoursPerYear, 0.0);
  r.unserved_critical_mw.assign(kHoursPerYear, 0.0);

  const bool use_trace_loads = scenario.trace.has_value();
  const double flat_bulk = scenario.dc.average_mw();
  const double flat_critical = scenario.dc.critical_mw;

  int event_idx = -1;
  bool event_islanded = false;
  bool event_survived = true;
  int event_start = 0;
  double fuel_mwh = 0.0;

  // An event's ride-through is recorded at its first critical shortfall,
  // or as the full event duration if it never has one.
  auto close_event = [&](int end_hour) {
    if (event_idx < 0) return;
    if (event_survived)
      r.ride_through_hours.push_back(
          static_cast<double>(end_hour - event_start));
  };

  for (int h = 0; h < kHoursPerYear; ++h) {
    const double bulk =
        use_trace_loads ? scenario.trace->bulk_mw[static_cast<std::size_t>(h)]
                        : flat_bulk;
    const double critical =
        use_trace_loads
            ? scenario.trace->critical_mw[static_cast<std::size_t>(h)]
            : flat_critical;
    r.demand_mwh += bulk;

    const bool up = grid_up[static_cast<std::size_t>(h)] != 0;
    const bool was_up =
        (h == 0) ? true : grid_up[static_cast<std::size_t>(h - 1)] != 0;

    if (up) {
      if (!was_up) close_event(h);
      const double chp = std::min(chp_avail_mw[static_cast<std::size_t>(h)], bulk);
      r.chp_mw[static_cast<std::size_t>(h)] = chp;
      r.grid_mw[static_cast<std::size_t>(h)] = bulk - chp;
      r.chp_mwh += chp;
      continue;
    }

    if (was_up) {  // outage event begins
      ++event_idx;
      event_start = h;
      event_survived = true;
      fuel_mwh = scenario.diesel.tank_mwh();
      if (scenario.chp.islandable) {
        if (static_cast<std::size_t>(event_idx) >= transfer_ok.size())
          throw DomainError("simulate_dispatch: not enough transfer draws");
        event_islanded = transfer_ok[static_cast<std::size_t>(event_idx)] != 0;
        if (!event_islanded) ++r.island_transfer_failures;
      } else {
        event_islanded = false;
      }
    }

    double chp = 0.0;
    double diesel = 0.0;
    double served = 0.0;
    double critical_served = 0.0;
    if (event_islanded) {
      chp = std::min(chp_avail_mw[static_cast<std::size_t>(h)], bulk);
      const double need = bulk - chp;
      diesel = std::min({scenario.diesel.capacity_mw, need, fuel_mwh});
      fuel_mwh -= diesel;
      served = chp + diesel;
      critical_served = std::min(critical, served);  // critical claims first
    } else if (scenario.diesel.black_start) {
      diesel = std::min({scenario.diesel.capacity_mw, critical, fuel_mwh});
      fuel_mwh -= diesel;
      served = diesel;
      critical_served = diesel;
    }

    r.chp_mw[static_cast<std::size_t>(h)] = chp;
    r.diesel_mw[static_cast<std::size_t>(h)] = diesel;
    r.chp_mwh += chp;
    const double unserved = bulk - served;
    const double unserved_critical = critical - critical_served;
    r.unserved_mw[static_cast<std::size_t>(h)] = unserved;
    r.unserved_critical_mw[static_cast<std::size_t>(h)] = unserved_critical;
    r.unserved_mwh += unserved;
    if (unserved_critical > kLoadEps) {
      ++r.critical_lolh;
      if (event_survived) {
        r.ride_through_hours.push_back(static_cast<double>(h - event_start));
        event_survived = false;
      }
    }
    r.diesel_displaced_mwh += std::min(chp, scenario.diesel.capacity_mw);
  }
  if (event_idx >= 0 && grid_up[kHoursPerYear - 1] == 0)
    close_event(kHoursPerYear);

  return r;
}

/// Random inputs for one trial, generated in a fixed order so a trial is a
/// pure function of its seed: outage gaps and durations, then CHP
/// availability (random mode only), then one transfer draw per event.
struct TrialDraws {
  std::vector<std::uint8_t> grid_up;
  std::vector<double> chp_avail_mw;
  std::vector<std::uint8_t> transfer_ok;
};

inline TrialDraws make_trial_draws(const MicrogridScenario& scenario,
                                   Rng& rng) {
  TrialDraws d;
  if (scenario.trace) {
    d.grid_up = scenario.trace->grid_up;
  } else {
    d.grid_up.assign(kHoursPerYear, 1);
    if (scenario.outages.mean_outages_per_year > 0.0) {
      const double mean_gap_hours =
          kHoursPerYear / scenario.outages.mean_outages_per_year;
      double t = rng.exponential(mean_gap_hours);
      while (t < kHoursPerYear) {
        const double duration =
            scenario.outages.duration_distribution ==
                    DurationDistribution::kFixed
                ? scenario.outages.mean_duration_hours
                : rng.exponential(scenario.outages.mean_duration_hours);
        const int start = static_cast<int>(t);
        const int hours = std::max(1, static_cast<int>(std::ceil(duration)));
        for (int h = start; h < std::min(start + hours, kHoursPerYear); ++h)
          d.grid_up[static_cast<std::size_t>(h)] = 0;
        t += std::max(duration, 1.0) + rng.exponential(mean_gap_hours);
      }
    }
  }

  if (scenario.chp_availability_mode == ChpAvailabilityMode::kDerate) {
    d.chp_avail_mw.assign(
        kHoursPerYear, scenario.chp.capacity_mw * scenario.chp.capacity_factor);
  } else {
    d.chp_avail_mw.assign(kHoursPerYear, 0.0);
    for (int h = 0; h < kHoursPerYear; ++h)
      d.chp_avail_mw[static_cast<std::size_t>(h)] =
          rng.bernoulli(scenario.chp.capacity_factor) ? scenario.chp.capacity_mw
                                                      : 0.0;
  }

  int events = 0;
  for (int h = 0; h < kHoursPerYear; ++h) {
    const bool down = d.grid_up[static_cast<std::size_t>(h)] == 0;
    const bool was_down = h > 0 && d.grid_up[static_cast<std::size_t>(h - 1)] == 0;
    if (down && !was_down) ++events;
  }
  d.transfer_ok.reserve(static_cast<std::size_t>(events));
  for (int e = 0; e < events; ++e)
    d.transfer_ok.push_back(
        rng.bernoulli(scenario.chp.island_transfer_success_prob) ? 1 : 0);
  return d;
}

struct RideThroughSummary {
  double mean = 0.0;
  double p95 = 0.0;
  double max = 0.0;
};

struct ResilienceMetrics {
  double chp_energy_gwh = 0.0;
  double dc_energy_gwh = 0.0;
  double chp_share = 0.0;
  double unserved_bulk_gwh = 0.0;
  double critical_lolh = 0.0;  // expected hours per year
  RideThroughSummary ride_through_hours;
  double diesel_energy_displaced_gwh = 0.0;
  double island_transfer_failures = 0.0;  // expected events per year
};

namespace detail {

struct TrialOutcome {
  double chp_mwh = 0.0;
  double demand_mwh = 0.0;
  double unserved_mwh = 0.0;
  int critical_lolh = 0;
  double diesel_displaced_mwh = 0.0;
  int transfer_failures = 0;
  std::vector<double> ride_through_hours;
};

inline TrialOutcome condense(const DispatchResult& r) {
  TrialOutcome o;
  o.chp_mwh = r.chp_mwh;
  o.demand_mwh = r.demand_mwh;
  o.unserved_mwh = r.unserved_mwh;
  o.critical_lolh = r.critical_lolh;
  o.diesel_displaced_mwh = r.diesel_displaced_mwh;
  o.transfer_failures = r.island_transfer_failures;
  o.ride_through_hours = r.ride_through_hours;
  return o;
}

/// Fixed-order reduction of per-trial outcomes; the result is independent
/// of how trials were scheduled.
inline ResilienceMetrics reduce_trials(const std::vector<TrialOutcome>& trials) {
  const double n = static_cast<double>(trials.size());
  ResilienceMetrics m;
  std::vector<double> pooled;
  for (const TrialOutcome& t : trials) {
    m.chp_energy_gwh += t.chp_mwh;
    m.dc_energy_gwh += t.demand_mwh;
    m.unserved_bulk_gwh += t.unserved_mwh;
    m.critical_lolh += static_cast<double>(t.critical_lolh);
    m.diesel_energy_displaced_gwh += t.diesel_displaced_mwh;
    m.island_transfer_failures += static_cast<double>(t.transfer_failures);
    pooled.insert(pooled.end(), t.ride_through_hours.begin(),
                  t.ride_through_hours.end());
  }
  m.chp_energy_gwh /= n * 1000.0;
  m.dc_energy_gwh /= n * 1000.0;
  m.unserved_bulk_gwh /= n * 1000.0;
  m.critical_lolh /= n;
  m.diesel_energy_displaced_gwh /= n * 1000.0;
  m.island_transfer_failures /= n;
  m.chp_share =
      m.dc_energy_gwh > 0.0 ? m.chp_energy_gwh / m.dc_energy_gwh : 0.0;

  if (!pooled.empty()) {
    std::sort(pooled.begin(), pooled.end());
    double sum = 0.0;
    for (double v : pooled) sum += v;
    m.ride_through_hours.mean = sum / static_cast<double>(pooled.size());
    const std::size_t idx = static_cast<std::size_t>(
        std::ceil(0.95 * static_cast<double>(pooled.size())));
    m.ride_through_hours.p95 = pooled[std::min(idx, pooled.size()) - 1];
    m.ride_through_hours.max = pooled.back();
  }
  return m;
}

template <typename PerTrial>
inline void run_trials(std::uint64_t trials, unsigned threads,
                       PerTrial&& per_trial) {
  unsigned n_threads = threads;
  if (n_threads == 0) {
    n_threads = std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
  }
  n_threads = static_cast<unsigned>(
      std::min<std::uint64_t>(n_threads, trials));
  if (n_threads <= 1) {
    for (std::uint64_t i = 0; i < trials; ++i) per_trial(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned w = 0; w < n_threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::uint64_t i = w; i < trials; i += n_threads) per_trial(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Averages simulate_dispatch over `trials` independent years. Per-trial
/// seeds come from trial_seed(master_seed, i); outcomes are reduced in
/// trial order, so identical (scenario, trials, master_seed) give
/// bit-identical metrics at any thread count.
inline ResilienceMetrics monte_carlo(const MicrogridScenario& scenario,
                                     std::uint64_t trials,
                                     std::uint64_t master_seed,
                                     unsigned threads = 0) {
  if (trials == 0) throw DomainError("monte_carlo: trials must be >= 1");
  scenario.validate();

  std::vector<detail::TrialOutcome> outcomes(trials);
  detail::run_trials(trials, threads, [&](std::uint64_t i) {
    Rng rng(trial_seed(master_seed, i));
    const TrialDraws draws = make_trial_draws(scenario, rng);
    outcomes[i] = detail::condense(
        simulate_dispatch(scenario, draws.grid_up, draws.chp_avail_mw,
                          draws.transfer_ok));
  });
  return detail::reduce_trials(outcomes);
}

/// Paired comparison on common random numbers: the same outage and transfer
/// draws feed both the scenario as given and a variant with the CHP removed
/// (diesel only). Per-trial critical loss-of-load hours are kept for
/// trial-wise dominance checks.
struct RideThroughComparison {
  ResilienceMetrics with_chp;
  ResilienceMetrics diesel_only;
  std::vector<int> critical_lolh_with_chp;
  std::vector<int> critical_lolh_diesel_only;
};

inline RideThroughComparison ride_through_comparison(
    const MicrogridScenario& scenario, std::uint64_t trials = 1000,
    std::uint64_t master_seed = 42, unsigned threads = 0) {
  if (trials == 0)
    throw DomainError("ride_through_comparison: trials must be >= 1");
  scenario.validate();

  MicrogridScenario diesel_only = scenario;
  diesel_only.chp = ChpUnit{};  // capacity 0, not islandable

  const std::vector<double> zero_chp(kHoursPerYear, 0.0);
  std::vector<detail::TrialOutcome> with_chp(trials);
  std::vector<detail::TrialOutcome> without(trials);
  detail::run_trials(trials, threads, [&](std::uint64_t i) {
    Rng rng(trial_seed(master_seed, i));
    const TrialDraws draws = make_trial_draws(scenario, rng);
    with_chp[i] = detail::condense(
        simulate_dispatch(scenario, draws.grid_up, draws.chp_avail_mw,
                          draws.transfer_ok));
    without[i] = detail::condense(simulate_dispatch(
        diesel_only, draws.grid_up, zero_chp, draws.transfer_ok));
  });

  RideThroughComparison cmp;
  cmp.with_chp = detail::reduce_trials(with_chp);
  cmp.diesel_only = detail::reduce_trials(without);
  cmp.critical_lolh_with_chp.reserve(trials);
  cmp.critical_lolh_diesel_only.reserve(trials);
  for (std::uint64_t i = 0; i < trials; ++i) {
    cmp.critical_lolh_with_chp.push_back(with_chp[i].critical_lolh);
    cmp.critical_lolh_diesel_only.push_back(without[i].critical_lolh);
  }
  return cmp;
}

}  // namespace stockfire
