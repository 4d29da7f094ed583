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

// Acceptance suite: one PASS/FAIL line per criterion. `--full` adds the
// optional long-running checks; `--threads N` sizes the ensemble work pool.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>

#include "ztqmc/validation.hpp"

int main(int argc, char** argv) {
  ztqmc::AcceptanceOptions opts;
  opts.threads = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--full") {
      opts.full = true;
    } else if (arg == "--threads" && a + 1 < argc) {
      opts.threads = std::atoi(argv[++a]);
    } else {
      std::fprintf(stderr, "usage: %s [--full] [--threads N]\n", argv[0]);
      return 2;
    }
  }
  opts.on_result = [](const ztqmc::CheckResult& r) {
    std::printf("%s\n", ztqmc::format_result(r).c_str());
    std::fflush(stdout);
  };
  const auto results = ztqmc::run_acceptance(opts);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
