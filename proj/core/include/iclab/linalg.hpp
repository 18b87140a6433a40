// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace iclab {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);
    static Matrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }

    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    [[nodiscard]] Matrix transposed() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s) noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double norm(std::span<const double> a);

/// y = A x
Vector multiply(const Matrix& a, std::span<const double> x);
/// y = A^T x
Vector multiply_transposed(const Matrix& a, std::span<const double> x);

double trace(const Matrix& a);
double frobenius_inner(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& a);
double max_abs_entry(const Matrix& a);

/// Largest |a_ij - a_ji| relative to the largest entry; 0 for a symmetric matrix.
double asymmetry(const Matrix& a);

/// Eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi).
Vector symmetric_eigenvalues(const Matrix& a);

/// Spectral norm ‖A‖₂ of a symmetric matrix.
double symmetric_spectral_norm(const Matrix& a);

/// Spectral norm of a general matrix, via the eigenvalues of AᵀA.
double spectral_norm(const Matrix& a);

}  // namespace iclab
