// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <span>
#include <vector>

#include "iclab/linalg.hpp"
#include "iclab/maxmargin.hpp"
#include "iclab/rng.hpp"
#include "iclab/tasks.hpp"

namespace iclab {

// Empirical checks of dataset statistics, max-margin scaling and
// concentration inequalities. Inequalities with unknown absolute constants are
// checked as signs, as ratio stability across a sweep, or as "some fitted
// constant ĉ > 0 makes the tail bound hold on the grid".

struct StatEnvelope {
    double observed = 0.0;
    double envelope = 0.0;  // high-probability bound evaluated with the supplied c₀
    [[nodiscard]] bool within() const noexcept { return observed <= envelope; }
};

struct DatasetStatsReport {
    StatEnvelope mean_norm;        // max_τ |‖μ̂_τ‖² − R²|
    StatEnvelope mean_cross;       // max_{q≠τ} |⟨μ̂_q, μ̂_τ⟩|
    StatEnvelope query_norm;       // max_τ |‖x_τ‖² − R²|
    StatEnvelope query_cross;      // max_{q≠τ} |⟨x_τ, x_q⟩|
    StatEnvelope signal_alignment; // max_τ |⟨μ̂_τ, y_τ x_τ⟩ − R²|
    [[nodiscard]] bool good_run() const noexcept {
        return mean_norm.within() && mean_cross.within() && query_norm.within() && query_cross.within() &&
               signal_alignment.within();
    }
};

/// Pairwise entries are 0 when the batch has a single task.
DatasetStatsReport dataset_stats(std::span<const PretrainTask> batch, const TaskParams& params, double delta = 0.001,
                                 double c0 = 1.0);

/// Smallest margin of the scaled identity 2I/R² on the batch.
double identity_min_margin(std::span<const PretrainTask> batch, double pretrain_radius);

struct ScalingRow {
    std::size_t dim = 0;
    double radius = 0.0;
    std::size_t n_tasks = 0;
    double sum_lambda = 0.0;
    double trace_w = 0.0;
    double frob_w = 0.0;
    double sum_lambda_ratio = 0.0;  // Σλ·R⁴/d
    double trace_ratio = 0.0;       // tr(W)·R²/d
    double frob_ratio = 0.0;        // ‖W‖_F·R²/√d
    std::size_t sweeps = 0;
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    // max/min of each ratio across the sweep
    double sum_lambda_stability = 0.0;
    double trace_stability = 0.0;
    double frob_stability = 0.0;
    bool all_positive = false;
};

/// For each d: R = 5√d, B = d, Λ = I, other fields from the template; solves
/// the max-margin dual and reports the three normalized ratios. Throws
/// SolverNotConverged if any solve fails to converge.
ScalingReport scaling_sweep(std::span<const std::size_t> dims, const TaskParams& tmpl, double tol,
                            const RngStream& stream, std::size_t max_sweeps = kDefaultMaxSweeps);

struct TailPoint {
    double t = 0.0;
    double empirical = 0.0;  // P̂(|X − E X| ≥ t)
    double shape = 0.0;      // exponent s(t) of the bound 2·exp(−c·s(t))
};

struct TailReport {
    std::vector<TailPoint> points;
    /// Largest c with empirical ≤ 2·exp(−c·s(t)) at every grid point; +∞ if
    /// every empirical tail is zero.
    double c_hat = 0.0;
};

struct ConcentrationReport {
    std::size_t n_samples = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
    double expected = 0.0;
    bool mean_within_5se = false;
    TailReport tails;
};

inline constexpr std::size_t kMinConcentrationSamples = 10000;

/// μ ~ Unif(radius·S^{d−1}); statistic μᵀQμ with expectation (radius²/d)·tr(Q).
/// The default t grid has 20 log-spaced points between 0.5 and 5 empirical
/// standard deviations (empty when the statistic is deterministic).
ConcentrationReport hanson_wright_check(const Matrix& q, double radius, std::size_t n_samples,
                                        const RngStream& stream, std::optional<Vector> t_grid = {});

enum class BilinearKind { mu_q_g, zeta_q_zeta, noisy_fraction };

const char* to_string(BilinearKind kind) noexcept;
BilinearKind parse_bilinear_kind(const std::string& text);

/// mu_q_g: μᵀQg with μ on the test sphere, g ~ N(0, I); tail shape t√d/(R̃‖Q‖_F).
/// zeta_q_zeta: ζᵀQζ′ with ζ, ζ′ ~ N(0, Λ); tail shape t/(‖Λ‖₂‖Q‖_F).
/// noisy_fraction: |𝒩|/M for M labels flipped w.p. p; tail shape M·t².
/// Q defaults to the identity.
ConcentrationReport bilinear_concentration_check(BilinearKind kind, const TaskParams& params, std::size_t n_samples,
                                                 const RngStream& stream, std::optional<Matrix> q = {},
                                                 std::optional<Vector> t_grid = {});

/// Monte-Carlo E[μᵀWμ] against (radius²/d)·tr(W).
ConcentrationReport expected_quadratic_form_check(const Matrix& w, double radius, std::size_t n_samples,
                                                  const RngStream& stream);

/// Fits ĉ for the given samples; exposed for tests.
TailReport fit_tail(std::span<const double> deviations, std::span<const double> t_grid,
                    const std::function<double(double)>& shape);

}  // namespace iclab
