// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <doctest.h>

#include "iclab/covariance.hpp"
#include "iclab/error.hpp"
#include "iclab/rng.hpp"

using namespace iclab;

TEST_CASE("identity summaries") {
    const auto c = CovarianceSpec::identity(7);
    CHECK(c.trace() == 7);
    CHECK(c.trace_squared() == 7);
    CHECK(c.spectral_norm() == 1);
    CHECK(c.dense() == Matrix::identity(7));
}

TEST_CASE("diagonal summaries") {
    const auto c = CovarianceSpec::diagonal({1, 4, 2});
    CHECK(c.trace() == 7);
    CHECK(c.trace_squared() == 21);
    CHECK(c.spectral_norm() == 4);
}

TEST_CASE("factor summaries match the dense matrix") {
    const auto c = CovarianceSpec::factor(Matrix(2, 2, {1, 0, 1, 1}));
    const Matrix dense = c.dense();
    CHECK(dense == Matrix(2, 2, {1, 1, 1, 2}));
    CHECK(c.trace() == doctest::Approx(3.0));
    CHECK(c.trace_squared() == doctest::Approx(1 + 1 + 1 + 4));
    // eigenvalues (3 ± √5)/2
    CHECK(c.spectral_norm() == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
}

TEST_CASE("zero stub draws zeros") {
    const auto c = CovarianceSpec::zero(4);
    Generator g = RngStream(1, 1).generator();
    CHECK(c.sample(g) == Vector(4, 0.0));
    CHECK(c.trace() == 0);
}

TEST_CASE("invalid covariance inputs are rejected") {
    CHECK_THROWS_AS(CovarianceSpec::identity(0), InvalidArgument);
    CHECK_THROWS_AS(CovarianceSpec::diagonal({1.0, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(CovarianceSpec::diagonal({}), InvalidArgument);
    CHECK_THROWS_AS(CovarianceSpec::factor(Matrix(2, 2, {1, 1, 0, 1})), InvalidArgument);
    CHECK_THROWS_AS(CovarianceSpec::factor(Matrix(2, 2, {1, 0, 1, -1})), InvalidArgument);
    CHECK_THROWS_AS(CovarianceSpec::factor(Matrix(2, 3)), InvalidArgument);
}
