// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>

#include "iclab/model.hpp"
#include "iclab/rng.hpp"
#include "iclab/tasks.hpp"

namespace iclab {

struct AccuracyEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n_tasks = 0;
};

struct MemorizationEstimate {
    double mean = 0.0;    // per-task fraction of context examples fitted, averaged
    double stderr_ = 0.0;
    double full_rate = 0.0;  // fraction of tasks with every context example fitted
    std::optional<double> noisy_fit_rate;  // pooled over flipped examples; absent when none occurred
    std::size_t noisy_examples = 0;
    std::size_t n_tasks = 0;
};

struct EvalReport {
    double test_acc_mean = 0.0;
    double test_acc_se = 0.0;
    double train_acc_mean = 0.0;
    double train_acc_se = 0.0;
    std::size_t n_tasks = 0;
    double full_memorization_rate = 0.0;
    std::optional<double> noisy_label_fit_rate;
};

// Task i of an evaluation is drawn from stream.child(i), so eval_test,
// eval_memorization and evaluate see identical tasks for the same stream.
// Predictions with score 0 count as errors.

/// In-context test accuracy against the observed (possibly flipped) query
/// label. With queries_per_task > 1 the extra queries share the task's μ and
/// context; the per-task score is the fraction answered correctly.
AccuracyEstimate eval_test(const Preconditioner& w, const TaskParams& params, std::size_t n_tasks,
                           const RngStream& stream, std::size_t queries_per_task = 1);

/// In-context training accuracy: every context example k is re-presented as
/// the query against the full context and compared with its observed label.
MemorizationEstimate eval_memorization(const Preconditioner& w, const TaskParams& params, std::size_t n_tasks,
                                       const RngStream& stream);

/// Both estimates from one pass over the same tasks.
EvalReport evaluate(const Preconditioner& w, const TaskParams& params, std::size_t n_tasks, const RngStream& stream,
                    std::size_t queries_per_task = 1);

/// Absolute constants of the risk bounds. They are never instantiated by the
/// theory, so they are plain knobs here.
struct BoundConstants {
    double c = 1.0;
    double c0 = 1.0;
    double big_c = 1.0;
};

struct TheoreticalBounds {
    double c_b = 0.0;  // B / d
    double rho = 0.0;  // (c_B ∧ 1) / log²(2B²/δ)
    double gen_bound_rhs = 0.0;
    double mem_bound_rhs = 0.0;
};

/// Literal evaluation of the generalization and memorization right-hand
/// sides. Throws InvalidArgument when p ≥ 1/2 or δ ∉ (0, 1).
TheoreticalBounds theoretical_bounds(const TaskParams& params, double delta, const BoundConstants& constants = {});

struct AssumptionCheck {
    bool pass = false;
    double lhs = 0.0;
    double threshold = 0.0;
    double slack = 0.0;  // lhs − threshold
};

struct AssumptionReport {
    AssumptionCheck signal;     // R² against the signal-to-noise threshold
    AssumptionCheck task_count; // B ≥ c_B·d
    AssumptionCheck dimension;  // d ≥ C·log⁴(2B²/δ)
    [[nodiscard]] bool all_pass() const noexcept { return signal.pass && task_count.pass && dimension.pass; }
};

AssumptionReport check_assumptions(const TaskParams& params, double delta, double big_c, double c_b = 1.0);

}  // namespace iclab
