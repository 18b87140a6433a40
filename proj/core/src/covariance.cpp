// SPDX-License-Identifier: Apache-2.0
#include "iclab/covariance.hpp"

#include <algorithm>
#include <cmath>

#include "iclab/error.hpp"
#include "iclab/rng.hpp"

namespace iclab {

CovarianceSpec CovarianceSpec::identity(std::size_t d) {
    if (d == 0) throw InvalidArgument("covariance dimension must be >= 1");
    CovarianceSpec c;
    c.kind_ = Kind::identity;
    c.dim_ = d;
    c.compute_summaries();
    return c;
}

CovarianceSpec CovarianceSpec::diagonal(Vector variances) {
    if (variances.empty()) throw InvalidArgument("covariance dimension must be >= 1");
    for (double v : variances)
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("diagonal variances must be positive and finite");
    CovarianceSpec c;
    c.kind_ = Kind::diagonal;
    c.dim_ = variances.size();
    c.variances_ = std::move(variances);
    c.compute_summaries();
    return c;
}

CovarianceSpec CovarianceSpec::factor(Matrix lower) {
    if (lower.empty() || !lower.square()) throw InvalidArgument("covariance factor must be square and nonempty");
    for (std::size_t i = 0; i < lower.rows(); ++i) {
        if (!(lower(i, i) > 0.0)) throw InvalidArgument("covariance factor needs a positive diagonal");
        for (std::size_t j = i + 1; j < lower.cols(); ++j)
            if (lower(i, j) != 0.0) throw InvalidArgument("covariance factor must be lower-triangular");
    }
    CovarianceSpec c;
    c.kind_ = Kind::factor;
    c.dim_ = lower.rows();
    c.factor_ = std::move(lower);
    c.compute_summaries();
    return c;
}

CovarianceSpec CovarianceSpec::zero(std::size_t d) {
    if (d == 0) throw InvalidArgument("covariance dimension must be >= 1");
    CovarianceSpec c;
    c.kind_ = Kind::zero;
    c.dim_ = d;
    c.compute_summaries();
    return c;
}

void CovarianceSpec::compute_summaries() {
    switch (kind_) {
        case Kind::identity:
            trace_ = static_cast<double>(dim_);
            trace_sq_ = static_cast<double>(dim_);
            spectral_ = 1.0;
            break;
        case Kind::zero:
            trace_ = trace_sq_ = spectral_ = 0.0;
            break;
        case Kind::diagonal:
            trace_ = trace_sq_ = spectral_ = 0.0;
            for (double v : variances_) {
                trace_ += v;
                trace_sq_ += v * v;
                spectral_ = std::max(spectral_, v);
            }
            break;
        case Kind::factor: {
            const Matrix lambda = dense();
            trace_ = iclab::trace(lambda);
            const double f = frobenius_norm(lambda);
            trace_sq_ = f * f;
            spectral_ = symmetric_spectral_norm(lambda);
            break;
        }
    }
}

Matrix CovarianceSpec::dense() const {
    Matrix m(dim_, dim_);
    switch (kind_) {
        case Kind::identity:
            return Matrix::identity(dim_);
        case Kind::zero:
            return m;
        case Kind::diagonal:
            for (std::size_t i = 0; i < dim_; ++i) m(i, i) = variances_[i];
            return m;
        case Kind::factor:
            for (std::size_t i = 0; i < dim_; ++i)
                for (std::size_t j = 0; j <= i; ++j) {
                    double s = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) s += factor_(i, k) * factor_(j, k);
                    m(i, j) = m(j, i) = s;
                }
            return m;
    }
    return m;
}

Vector CovarianceSpec::sample(Generator& gen) const {
    Vector z(dim_, 0.0);
    switch (kind_) {
        case Kind::zero:
            break;
        case Kind::identity:
            for (double& v : z) v = gen.normal();
            break;
        case Kind::diagonal:
            for (std::size_t i = 0; i < dim_; ++i) z[i] = std::sqrt(variances_[i]) * gen.normal();
            break;
        case Kind::factor: {
            Vector g(dim_);
            for (double& v : g) v = gen.normal();
            for (std::size_t i = 0; i < dim_; ++i) {
                double s = 0.0;
                for (std::size_t k = 0; k <= i; ++k) s += factor_(i, k) * g[k];
                z[i] = s;
            }
            break;
        }
    }
    return z;
}

const char* to_string(CovarianceSpec::Kind kind) noexcept {
    switch (kind) {
        case CovarianceSpec::Kind::identity: return "identity";
        case CovarianceSpec::Kind::diagonal: return "diagonal";
        case CovarianceSpec::Kind::factor: return "factor";
        case CovarianceSpec::Kind::zero: return "zero";
    }
    return "unknown";
}

}  // namespace iclab
