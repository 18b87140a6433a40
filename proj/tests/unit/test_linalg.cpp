// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "iclab/error.hpp"
#include "iclab/linalg.hpp"
#include "iclab/parallel.hpp"

using namespace iclab;

TEST_CASE("matrix arithmetic and products") {
    Matrix a(2, 3, {1, 2, 3, 4, 5, 6});
    CHECK(a(1, 2) == 6);
    const Matrix at = a.transposed();
    CHECK(at.rows() == 3);
    CHECK(at(2, 1) == 6);
    const Vector ax = multiply(a, Vector{1, 0, -1});
    CHECK(ax == Vector{-2, -2});
    const Vector atx = multiply_transposed(a, Vector{1, 1});
    CHECK(atx == Vector{5, 7, 9});
    CHECK(frobenius_inner(a, a) == 91);
    CHECK(frobenius_norm(a) == doctest::Approx(std::sqrt(91.0)));
    CHECK(max_abs_entry(-1.0 * a) == 6);
    CHECK(trace(Matrix::identity(4)) == 4);
    Matrix b = a;
    b += a;
    b -= a;
    CHECK(b == a);
}

TEST_CASE("symmetric eigenvalues of a known matrix") {
    // [[2,1],[1,2]] has eigenvalues 1 and 3.
    const Vector ev = symmetric_eigenvalues(Matrix(2, 2, {2, 1, 1, 2}));
    CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(symmetric_spectral_norm(Matrix(2, 2, {-5, 0, 0, 1})) == doctest::Approx(5.0));
    // Spectral norm of [[1,1],[0,1]] is the golden ratio.
    CHECK(spectral_norm(Matrix(2, 2, {1, 1, 0, 1})) == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
}

TEST_CASE("eigenvalues sum to the trace and square-sum to the Frobenius norm") {
    const std::size_t n = 12;
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = std::sin(1.0 + i * 7.0 + j * 3.0);
    const Vector ev = symmetric_eigenvalues(a);
    double s = 0.0, s2 = 0.0;
    for (double v : ev) {
        s += v;
        s2 += v * v;
    }
    CHECK(s == doctest::Approx(trace(a)).epsilon(1e-12));
    CHECK(s2 == doctest::Approx(frobenius_inner(a, a)).epsilon(1e-12));
    for (std::size_t i = 1; i < n; ++i) CHECK(ev[i - 1] <= ev[i]);
}

TEST_CASE("parallel_for covers every index once for any thread count") {
    for (std::size_t threads : {1, 3, 8}) {
        set_thread_count(threads);
        std::vector<int> hits(1001, 0);
        parallel_for(hits.size(), 7, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) ++hits[i];
        });
        for (int h : hits) CHECK(h == 1);
    }
    set_thread_count(0);
}

TEST_CASE("parallel_for rethrows worker exceptions") {
    set_thread_count(4);
    CHECK_THROWS_AS(parallel_for(100, 1,
                                 [](std::size_t b, std::size_t) {
                                     if (b == 50) throw InvalidArgument("boom");
                                 }),
                    InvalidArgument);
    set_thread_count(0);
}
