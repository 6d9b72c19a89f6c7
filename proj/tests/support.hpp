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

// Test-side helpers shared by the unit suites and the acceptance binary:
// file plumbing, process capture, and the independent oracles (exhaustive
// grid scan for the tipping point, exhaustive enumeration for the
// allocation LP). The oracles deliberately avoid the library's own search
// code.

#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stockfire/regime_engine.hpp"

namespace test_support {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string data_path(const std::string& name) {
  return std::string(STOCKFIRE_DATA_DIR) + "/" + name;
}

inline std::string golden_path(const std::string& name) {
  return std::string(STOCKFIRE_GOLDEN_DIR) + "/" + name;
}

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

inline CommandResult run_command(const std::string& cmd) {
  CommandResult r;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed for: " + cmd);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return r;
}

/// Grid-scan oracle for the tipping point: walks lambda in $0.01 steps and
/// returns the midpoint of the first step where the cost difference changes
/// sign (or crosses zero), or nullopt if it never does.
inline std::optional<double> grid_scan_tipping(
    const std::function<double(double)>& cost_difference, double lo,
    double hi, double step = 0.01) {
  double prev = cost_difference(lo);
  if (prev == 0.0) return lo;
  for (double lambda = lo + step; lambda <= hi + step / 2; lambda += step) {
    const double cur = cost_difference(lambda);
    if (cur == 0.0) return lambda;
    if ((cur > 0.0) != (prev > 0.0)) return lambda - step / 2;
    prev = cur;
  }
  return std::nullopt;
}

/// Exhaustive 0.01-resolution enumeration oracle for the allocation LP,
/// for 3 or 4 options. Returns the minimum cost over all feasible grid
/// allocations; caps are assumed to be multiples of 0.01.
inline double enumerate_allocation_cost(const std::vector<double>& costs,
                                        const std::vector<double>& caps) {
  const int res = 100;
  auto units = [&](double f) { return static_cast<int>(f * res + 0.5); };
  double best = 1e300;
  if (costs.size() == 3) {
    for (int a = 0; a <= units(caps[0]); ++a) {
      for (int b = 0; b <= units(caps[1]); ++b) {
        const int c = res - a - b;
        if (c < 0 || c > units(caps[2])) continue;
        const double cost =
            (a * costs[0] + b * costs[1] + c * costs[2]) / res;
        if (cost < best) best = cost;
      }
    }
  } else if (costs.size() == 4) {
    for (int a = 0; a <= units(caps[0]); ++a) {
      for (int b = 0; b <= units(caps[1]); ++b) {
        for (int c = 0; c <= units(caps[2]); ++c) {
          const int d = res - a - b - c;
          if (d < 0 || d > units(caps[3])) continue;
          const double cost =
              (a * costs[0] + b * costs[1] + c * costs[2] + d * costs[3]) /
              res;
          if (cost < best) best = cost;
        }
      }
    }
  } else {
    throw std::runtime_error("oracle supports 3 or 4 options");
  }
  return best;
}

}  // namespace test_support
