// SPDX-License-Identifier: Apache-2.0
// End-to-end acceptance battery shared by `qflat verify-paper` and the test suite.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qflat/pipeline.hpp"

namespace qflat {

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Runs every criterion in order, reporting each through on_result as it finishes.
// cfg supplies caps and the job count; bounds and modes are fixed per criterion.
std::vector<CriterionResult> run_acceptance(const RunConfig& cfg,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace qflat
