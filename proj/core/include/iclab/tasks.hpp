// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "iclab/covariance.hpp"
#include "iclab/linalg.hpp"
#include "iclab/rng.hpp"

namespace iclab {

/// Parameters shared by the pre-training and test-time task distributions.
struct TaskParams {
    std::size_t dim = 100;
    double pretrain_radius = 50.0;   // ‖μ_τ‖ during pre-training
    double test_radius = 1.0;        // ‖μ‖ at test time
    std::size_t pretrain_context = 40;  // examples per pre-training prompt
    std::size_t test_context = 20;      // in-context examples at test time
    std::size_t n_pretrain_tasks = 100;
    double flip_prob = 0.0;             // test-time label-flip probability
    std::optional<CovarianceSpec> cov;  // unset means Λ = I

    [[nodiscard]] CovarianceSpec noise() const { return cov ? *cov : CovarianceSpec::identity(dim); }
    /// Throws InvalidArgument when any invariant fails.
    void validate() const;
};

/// One pre-training prompt: N labelled context examples plus a query.
struct PretrainTask {
    Vector mu;
    std::vector<Vector> context_xs;  // empty when generated with ContextStorage::discard
    Labels context_ys;
    Vector query_x;
    Label query_y = 1;
    Vector context_mean;  // (1/N) Σ y_i x_i
};

/// One test-time prompt: M context examples and the query at index M, with
/// label-flipping applied to every observed label (query included).
struct TestTask {
    Vector mu;
    std::vector<Vector> xs;  // M + 1 features built from the clean labels
    Labels clean_ys;         // M + 1
    Labels observed_ys;      // M + 1
    std::vector<std::size_t> noisy_set;  // zero-based context indices (< M) with flipped labels
    std::vector<std::size_t> clean_set;  // complement of noisy_set in [0, M)
    Vector context_mean;                 // (1/M) Σ_{i<M} y_i x_i over observed labels

    [[nodiscard]] std::size_t context_size() const noexcept { return xs.empty() ? 0 : xs.size() - 1; }
    [[nodiscard]] const Vector& query_x() const { return xs.back(); }
    [[nodiscard]] Label query_y() const { return observed_ys.back(); }
};

enum class ContextStorage { keep, discard };

/// B independent clean pre-training tasks; task τ draws from stream.child(τ).
std::vector<PretrainTask> gen_pretrain_batch(const TaskParams& params, const RngStream& stream,
                                             ContextStorage storage = ContextStorage::keep);

/// One test-time task. Features and clean labels come from stream.child(0),
/// label flips from stream.child(1), so changing p leaves the features intact.
TestTask gen_test_task(const TaskParams& params, const RngStream& stream);

struct QuerySample {
    std::vector<Vector> xs;
    Labels observed_ys;
};

/// `count` further query examples for a test task with mean `mu`, each with
/// its own clean label, noise draw and label flip.
QuerySample gen_extra_queries(const TaskParams& params, std::span<const double> mu, std::size_t count,
                              const RngStream& stream);

/// (1/n) Σ y_i x_i
Vector context_mean(std::span<const Vector> xs, std::span<const Label> ys);

/// Embedding matrix of shape (d+1)×(n+1): columns (x_i; y_i), then (query; 0).
Matrix embed(std::span<const Vector> xs, std::span<const Label> ys, std::span<const double> query_x);

}  // namespace iclab
