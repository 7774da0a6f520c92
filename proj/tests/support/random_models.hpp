#pragma once

#include <cstdint>

#include "model/linear_model.hpp"

namespace testsupport {

// Bounded LP with small integer data: `cols` columns in [0, 10], `rows` mixed
// relations. Always feasible (rows are built around a known interior point).
chargeplan::LinearModel random_lp(std::uint64_t seed, int rows, int cols);

// Mixed model with up to `binaries` 0/1 columns and a couple of continuous ones.
// May be infeasible; callers compare statuses as well as values.
chargeplan::LinearModel random_milp(std::uint64_t seed, int binaries, int rows);

// 0/1 knapsack written as a minimisation of negated values.
chargeplan::LinearModel knapsack_model(const std::vector<int>& values, const std::vector<int>& weights, int capacity);

}  // namespace testsupport
