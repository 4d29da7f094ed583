// Copyright 2026 The ztqmc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ztqmc {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Long-running checks that only run on request.
  bool optional = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Also run the optional long-running checks.
  bool full = false;
  int threads = 1;
  /// Called as each check finishes.
  std::function<void(const CheckResult&)> on_result;
};

CheckResult check_stationarity();
CheckResult check_detailed_balance();
CheckResult check_marginal_decay();
CheckResult check_spectral_consistency();
CheckResult check_static_accuracy(int threads);
CheckResult check_annealing_success(int threads);
CheckResult check_preanneal_advantage(int threads);
CheckResult check_landscape();
CheckResult check_exactness_fuzz();
CheckResult check_reference_constant(int threads);

std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opts);

/// One line: "PASS  3 name (1.23 s): detail".
std::string format_result(const CheckResult& r);

}  // namespace ztqmc
