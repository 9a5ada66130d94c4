// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "cpir/query_plan.hpp"
#include "cpir/report.hpp"

namespace cpir {

/// Per server, in emission order, each sum as letters plus logical columns
/// joined by '+': record 1 is 'a', record 2 is 'b', ... ("a3+b2").
std::vector<std::vector<std::string>> render_plan(const QueryPlan& plan);

/// Loads example1.json .. example3.json from `dir` and checks each table
/// against a plan built with identity permutations: parameters, the
/// per-server multiset of sums, and a decoded retrieval's metrics. One check
/// per file, named "example<k>".
Report verify_examples(const std::string& dir);

}  // namespace cpir
