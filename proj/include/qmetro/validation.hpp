// Copyright 2026 The qmetro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMETRO_VALIDATION_HPP
#define QMETRO_VALIDATION_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace qmetro {

struct CheckResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;
    double tolerance = 0.0;
    int cases = 0;
};

/// Randomized pipeline cases per qubit count in the interleaved-pipeline check.
constexpr int kDefaultValidationCases = 100;

/// Cross-checks the codespace shortcuts against the dense oracle for n in {2,3,4}.
std::vector<CheckResult> run_validation_suite(std::uint64_t seed = 1, int cases = kDefaultValidationCases);

bool all_passed(const std::vector<CheckResult> &results);

}  // namespace qmetro

#endif
