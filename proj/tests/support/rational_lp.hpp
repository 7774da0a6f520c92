#pragma once

#include <gmpxx.h>

#include "model/linear_model.hpp"

namespace testsupport {

enum class ExactStatus { Optimal, Infeasible, Unbounded };

struct ExactResult {
    ExactStatus status = ExactStatus::Infeasible;
    mpq_class objective;
};

// Two-phase primal simplex over GMP rationals with Bland's rule. Integrality
// marks are ignored. Every column needs a finite lower bound.
ExactResult exact_lp(const chargeplan::LinearModel& model);

}  // namespace testsupport
