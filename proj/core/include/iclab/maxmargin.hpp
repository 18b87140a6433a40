// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "iclab/linalg.hpp"
#include "iclab/model.hpp"
#include "iclab/tasks.hpp"

namespace iclab {

/// G_{τq} = y_τ y_q ⟨μ̂_τ, μ̂_q⟩ ⟨x_τ, x_q⟩: the Gram matrix of the vectorized
/// rank-1 features, computed without forming any d²-dimensional vector.
struct GramMatrix {
    Matrix g;
    [[nodiscard]] std::size_t size() const noexcept { return g.rows(); }
};

GramMatrix build_gram(std::span<const PretrainTask> batch);

inline constexpr double kDefaultDualTol = 1e-8;
inline constexpr std::size_t kDefaultMaxSweeps = 100000;

/// Result of cyclic projected coordinate ascent on
///   maximize Σλ − ½ λᵀGλ  subject to λ ≥ 0.
struct DualIterate {
    Vector lambdas;
    bool converged = false;
    std::size_t sweeps = 0;
    /// max over τ of the margin deficit max(0, 1 − (Gλ)_τ), and of |(Gλ)_τ − 1| where λ_τ > 0.
    double kkt_violation = 0.0;
    /// Coordinates with G_ττ ≤ 1e-14, held at λ = 0.
    std::vector<std::size_t> frozen;
};

DualIterate solve_dual(const GramMatrix& gram, double tol = kDefaultDualTol,
                       std::size_t max_sweeps = kDefaultMaxSweeps);

struct DualSolution {
    Vector lambdas;
    Preconditioner w;
    Vector margins;  // y_τ μ̂_τᵀ W x_τ recomputed from the assembled W
    double kkt_violation = 0.0;
    bool converged = false;
    std::size_t sweeps = 0;
    std::vector<std::size_t> frozen;
};

/// W = Σ λ_τ y_τ μ̂_τ x_τᵀ with margins and KKT diagnostics; `converged`
/// means kkt_violation ≤ tol.
DualSolution assemble_W(std::span<const double> lambdas, std::span<const PretrainTask> batch,
                        double tol = kDefaultDualTol);

/// build_gram → solve_dual → assemble_W. `converged` and `sweeps` come from
/// the solver; margins and kkt_violation are recomputed from the assembled W.
DualSolution solve_max_margin(std::span<const PretrainTask> batch, double tol = kDefaultDualTol,
                              std::size_t max_sweeps = kDefaultMaxSweeps);

/// ⟨A, B⟩_F / (‖A‖_F ‖B‖_F).
double directional_alignment(const Matrix& a, const Matrix& b);

}  // namespace iclab
