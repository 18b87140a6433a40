// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "iclab/linalg.hpp"

namespace iclab {

class Generator;

/// Noise covariance Λ, stored as identity, diagonal variances, or a
/// user-supplied lower-triangular factor L with Λ = L·Lᵀ. The `zero` kind is
/// a degenerate stub for exact noiseless tests.
class CovarianceSpec {
  public:
    enum class Kind { identity, diagonal, factor, zero };

    static CovarianceSpec identity(std::size_t d);
    static CovarianceSpec diagonal(Vector variances);
    static CovarianceSpec factor(Matrix lower);
    static CovarianceSpec zero(std::size_t d);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return dim_; }
    [[nodiscard]] const Vector& variances() const noexcept { return variances_; }
    [[nodiscard]] const Matrix& lower_factor() const noexcept { return factor_; }

    /// tr(Λ)
    [[nodiscard]] double trace() const noexcept { return trace_; }
    /// tr(Λ²)
    [[nodiscard]] double trace_squared() const noexcept { return trace_sq_; }
    /// ‖Λ‖₂; ‖Λ^{1/2}‖₂ is its square root.
    [[nodiscard]] double spectral_norm() const noexcept { return spectral_; }

    /// Dense Λ.
    [[nodiscard]] Matrix dense() const;

    Vector sample(Generator& gen) const;

  private:
    CovarianceSpec() = default;
    void compute_summaries();

    Kind kind_ = Kind::identity;
    std::size_t dim_ = 0;
    Vector variances_;
    Matrix factor_;
    double trace_ = 0.0;
    double trace_sq_ = 0.0;
    double spectral_ = 0.0;
};

const char* to_string(CovarianceSpec::Kind kind) noexcept;

}  // namespace iclab
