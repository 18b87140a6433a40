// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "iclab/linalg.hpp"
#include "iclab/tasks.hpp"

namespace iclab {

/// Where a preconditioner came from.
struct Provenance {
    enum class Kind { gd_step, max_margin, identity, custom };
    Kind kind = Kind::custom;
    std::size_t step = 0;  // meaningful for gd_step only

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

std::string to_string(const Provenance& p);
Provenance parse_provenance(const std::string& text);

/// The d×d matrix W of the linear-attention predictor ŷ = meanᵀ·W·query.
class Preconditioner {
  public:
    Preconditioner() = default;
    Preconditioner(Matrix w, Provenance meta = {});

    static Preconditioner identity(std::size_t d) { return {Matrix::identity(d), {Provenance::Kind::identity, 0}}; }

    [[nodiscard]] const Matrix& matrix() const noexcept { return w_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return w_.rows(); }
    [[nodiscard]] const Provenance& meta() const noexcept { return meta_; }

    friend bool operator==(const Preconditioner&, const Preconditioner&) = default;

  private:
    Matrix w_;
    Provenance meta_;
};

/// meanᵀ·W·query, evaluated as (Wᵀ·mean)ᵀ·query.
double predict(const Matrix& w, std::span<const double> mean, std::span<const double> query);
inline double predict(const Preconditioner& w, std::span<const double> mean, std::span<const double> query) {
    return predict(w.matrix(), mean, query);
}

/// Score of context example k (zero-based, k < M) when it is re-presented as
/// the query against the full M-example context, k itself included.
double leave_none_out_score(const Preconditioner& w, const TestTask& task, std::size_t k);

/// sign(0) counts as a misclassification everywhere.
inline bool predicts_label(double score, Label y) noexcept { return score * y > 0.0; }

}  // namespace iclab
