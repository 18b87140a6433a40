// SPDX-License-Identifier: Apache-2.0
#include <limits>
#include <doctest.h>

#include "iclab/error.hpp"
#include "iclab/model.hpp"

using namespace iclab;

TEST_CASE("predict arithmetic") {
    CHECK(predict(Preconditioner::identity(2), Vector{1, 2}, Vector{4, 5}) == 14);
    CHECK(predict(Matrix(2, 2), Vector{1, 2}, Vector{4, 5}) == 0);
    CHECK(predict(Matrix(2, 2, {1, 0, 0, 3}), Vector{1, 2}, Vector{4, 5}) == 34);
    CHECK_THROWS_AS(predict(Matrix(2, 2), Vector{1, 2, 3}, Vector{4, 5}), InvalidArgument);
}

TEST_CASE("predict is bilinear, scale invariant in sign, and order independent") {
    const Matrix w(3, 3, {0.3, -1.2, 0.7, 2.1, 0.05, -0.4, -0.9, 1.3, 0.25});
    const Vector m{0.5, -1.5, 2.0}, q{1.25, 0.75, -0.5};
    CHECK(predict(w, Vector{2 * 0.5, 2 * -1.5, 2 * 2.0}, Vector{-4 * 1.25, -4 * 0.75, -4 * -0.5}) ==
          -8 * predict(w, m, q));
    const double base = predict(w, m, q);
    for (double c : {1e-6, 0.3, 7.0, 1e6}) CHECK((predict(c * w, m, q) > 0) == (base > 0));
    // mᵀ(W q) against (Wᵀ m)ᵀ q
    const double other = dot(m, multiply(w, q));
    CHECK(std::abs(other - base) <= 1e-12 * std::abs(base));
    CHECK(predict(Matrix::identity(3), m, q) == dot(m, q));
}

TEST_CASE("leave_none_out_score") {
    TestTask t;
    t.xs = {{1, 2, 0}, {0, 1, -1}, {3, 3, 3}};
    t.clean_ys = {1, -1, 1};
    t.observed_ys = {1, -1, 1};
    t.clean_set = {0, 1};
    t.context_mean = {0.5, 0.5, 0.5};  // ½(x₁ − x₂)
    t.mu = {0, 0, 0};
    const auto id = Preconditioner::identity(3);
    CHECK(leave_none_out_score(id, t, 0) == doctest::Approx(1.5));
    CHECK(leave_none_out_score(id, t, 1) == doctest::Approx(0.0));
    CHECK(leave_none_out_score(Preconditioner(Matrix(3, 3)), t, 0) == 0);
    CHECK_THROWS_AS(leave_none_out_score(id, t, 2), InvalidArgument);
}

TEST_CASE("single-example context is self-consistent under W = I") {
    TestTask t;
    t.xs = {{0.3, -2.0}, {1, 1}};
    t.clean_ys = {-1, 1};
    t.observed_ys = {-1, 1};
    t.context_mean = {-0.3, 2.0};
    const double s = leave_none_out_score(Preconditioner::identity(2), t, 0);
    CHECK(s == doctest::Approx(-1.0 * (0.09 + 4.0)));
    CHECK(predicts_label(s, -1));
}

TEST_CASE("sign(0) counts as an error") {
    CHECK_FALSE(predicts_label(0.0, 1));
    CHECK_FALSE(predicts_label(0.0, -1));
    CHECK(predicts_label(-0.1, -1));
}

TEST_CASE("provenance strings") {
    CHECK(to_string(Provenance{Provenance::Kind::gd_step, 300}) == "gd_step(300)");
    CHECK(parse_provenance("gd_step(300)") == Provenance{Provenance::Kind::gd_step, 300});
    for (auto k : {Provenance::Kind::max_margin, Provenance::Kind::identity, Provenance::Kind::custom}) {
        const Provenance p{k, 0};
        CHECK(parse_provenance(to_string(p)) == p);
    }
    CHECK_THROWS_AS(parse_provenance("gd_step(x)"), ParseError);
}

TEST_CASE("preconditioner validation") {
    CHECK_THROWS_AS(Preconditioner{Matrix(2, 3)}, InvalidArgument);
    Matrix bad(2, 2);
    bad(0, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Preconditioner{bad}, InvalidArgument);
}
