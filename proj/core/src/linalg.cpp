// SPDX-License-Identifier: Apache-2.0
#include "iclab/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "iclab/error.hpp"

namespace iclab {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw InvalidArgument("matrix data size does not match its shape");
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw InvalidArgument("matrix shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw InvalidArgument("matrix shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

Matrix& Matrix::operator*=(double s) noexcept {
    for (double& v : data_) v *= s;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidArgument("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }
double norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

Vector multiply(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw InvalidArgument("multiply: dimension mismatch");
    Vector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
    return y;
}

Vector multiply_transposed(const Matrix& a, std::span<const double> x) {
    if (a.rows() != x.size()) throw InvalidArgument("multiply_transposed: dimension mismatch");
    Vector y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double xi = x[i];
        auto r = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] += xi * r[j];
    }
    return y;
}

double trace(const Matrix& a) {
    if (!a.square()) throw InvalidArgument("trace of non-square matrix");
    double t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

double frobenius_inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("frobenius_inner: shape mismatch");
    return dot(a.data(), b.data());
}

double frobenius_norm(const Matrix& a) { return norm(a.data()); }

double max_abs_entry(const Matrix& a) {
    double m = 0.0;
    for (double v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

double asymmetry(const Matrix& a) {
    if (!a.square()) throw InvalidArgument("asymmetry of non-square matrix");
    const double scale = max_abs_entry(a);
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) worst = std::max(worst, std::abs(a(i, j) - a(j, i)));
    return worst / scale;
}

Vector symmetric_eigenvalues(const Matrix& input) {
    if (!input.square()) throw InvalidArgument("eigenvalues of non-square matrix");
    const std::size_t n = input.rows();
    Matrix a = input;
    // symmetrize to absorb rounding asymmetry
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off <= 1e-30 * std::max(1.0, frobenius_norm(a) * frobenius_norm(a))) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    Vector eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

double symmetric_spectral_norm(const Matrix& a) {
    const Vector eig = symmetric_eigenvalues(a);
    if (eig.empty()) return 0.0;
    return std::max(std::abs(eig.front()), std::abs(eig.back()));
}

double spectral_norm(const Matrix& a) {
    Matrix ata(a.cols(), a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.rows(); ++k) s += a(k, i) * a(k, j);
            ata(i, j) = ata(j, i) = s;
        }
    const Vector eig = symmetric_eigenvalues(ata);
    return eig.empty() ? 0.0 : std::sqrt(std::max(0.0, eig.back()));
}

}  // namespace iclab
