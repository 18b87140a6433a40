// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "iclab/linalg.hpp"
#include "iclab/tasks.hpp"

namespace iclab {

// Every pre-training task contributes the rank-1 feature y_τ·μ̂_τ·x_τᵀ; the
// predictor margin on task τ is ⟨W, y_τ μ̂_τ x_τᵀ⟩_F = y_τ μ̂_τᵀ W x_τ.

/// Σ_τ c_τ · y_τ μ̂_τ x_τᵀ, accumulated in task order.
Matrix feature_combination(std::span<const double> coeffs, std::span<const PretrainTask> batch);

/// y_τ μ̂_τᵀ W x_τ for every task.
Vector feature_margins(const Matrix& w, std::span<const PretrainTask> batch);

/// Checks that all tasks share one dimension and returns it.
std::size_t batch_dimension(std::span<const PretrainTask> batch);

}  // namespace iclab
