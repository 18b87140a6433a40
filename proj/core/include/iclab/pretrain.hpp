// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iclab/linalg.hpp"
#include "iclab/model.hpp"
#include "iclab/tasks.hpp"

namespace iclab {

enum class LossKind { logistic, exponential };

std::string to_string(LossKind kind);
LossKind parse_loss_kind(const std::string& text);

/// ℓ(m), evaluated in overflow-safe branch form for the logistic loss.
double loss_value(LossKind kind, double margin);
/// ℓ′(m): −1/(1+eᵐ) for logistic, −e⁻ᵐ for exponential.
double loss_derivative(LossKind kind, double margin);

struct TrainConfig {
    LossKind loss = LossKind::logistic;
    double step_size = 0.01;
    std::size_t steps = 300;
    std::optional<Matrix> init;  // zero when unset
    std::size_t record_every = 1;
    std::size_t snapshot_every = 0;  // 0 disables snapshots

    void validate() const;
};

struct TrainTrace {
    std::vector<std::size_t> steps;  // step index of each recorded loss
    Vector losses;
    Preconditioner final_w;
    std::vector<std::pair<std::size_t, Preconditioner>> snapshots;
};

/// (1/B) Σ_τ ℓ(y_τ μ̂_τᵀ W x_τ)
double loss(const Matrix& w, std::span<const PretrainTask> batch, LossKind kind);

/// (1/B) Σ_τ ℓ′(m_τ) y_τ μ̂_τ x_τᵀ
Matrix gradient(const Matrix& w, std::span<const PretrainTask> batch, LossKind kind);

/// Full-batch gradient descent W ← W − α∇L̂(W).
///
/// Every iterate stays in W₀ + span{y_τ μ̂_τ x_τᵀ}, so the loop tracks the
/// coefficient vector a (W_t = W₀ + Σ a_τ y_τ μ̂_τ x_τᵀ) and the margins
/// m = m₀ + G·a, using the Gram matrix of the rank-1 features. One step
/// costs O(B²) instead of O(B·d²); W is only materialized for snapshots and
/// at the end. Losses are recorded before each update at multiples of
/// record_every, and after the final step.
///
/// Throws TrainingDiverged when the loss becomes non-finite.
TrainTrace train(const TrainConfig& config, std::span<const PretrainTask> batch);

}  // namespace iclab
