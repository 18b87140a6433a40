// SPDX-License-Identifier: Apache-2.0
// Independent reference implementations shared by the unit and acceptance
// tests. Nothing here calls the library routine it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "iclab/linalg.hpp"
#include "iclab/rng.hpp"
#include "iclab/tasks.hpp"

namespace oracle {

using iclab::Label;
using iclab::Matrix;
using iclab::PretrainTask;
using iclab::Vector;

inline PretrainTask make_task(Vector mean, Vector query, Label y) {
    PretrainTask t;
    t.mu = mean;
    t.context_mean = std::move(mean);
    t.query_x = std::move(query);
    t.query_y = y;
    return t;
}

/// Batch with arbitrary Gaussian means and queries; no generative structure.
inline std::vector<PretrainTask> random_batch(std::size_t d, std::size_t b, std::uint64_t seed, double scale = 1.0) {
    iclab::Generator gen = iclab::RngStream(seed, 99).generator();
    std::vector<PretrainTask> batch;
    for (std::size_t t = 0; t < b; ++t) {
        Vector m(d), q(d);
        for (double& v : m) v = scale * gen.normal();
        for (double& v : q) v = scale * gen.normal();
        batch.push_back(make_task(m, q, gen.sign()));
    }
    return batch;
}

inline double margin(const Matrix& w, const PretrainTask& t) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j) s += t.context_mean[i] * w(i, j) * t.query_x[j];
    return t.query_y * s;
}

inline double logistic(double m) { return std::log1p(std::exp(-m)); }

/// Flattened feature vec(y μ̂ xᵀ), row-major.
inline Vector feature(const PretrainTask& t) {
    const std::size_t d = t.query_x.size();
    Vector f(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) f[i * d + j] = t.query_y * t.context_mean[i] * t.query_x[j];
    return f;
}

inline Matrix vectorized_gram(const std::vector<PretrainTask>& batch) {
    std::vector<Vector> f;
    for (const auto& t : batch) f.push_back(feature(t));
    Matrix g(batch.size(), batch.size());
    for (std::size_t a = 0; a < f.size(); ++a)
        for (std::size_t b = 0; b < f.size(); ++b) {
            double s = 0.0;
            for (std::size_t k = 0; k < f[a].size(); ++k) s += f[a][k] * f[b][k];
            g(a, b) = s;
        }
    return g;
}

/// Projected gradient ascent on Σλ − ½λᵀGλ, λ ≥ 0.
inline Vector projected_gradient_dual(const Matrix& g, double step, std::size_t iters) {
    const std::size_t n = g.rows();
    Vector lam(n, 0.0), grad(n);
    for (std::size_t it = 0; it < iters; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += g(i, j) * lam[j];
            grad[i] = 1.0 - s;
        }
        for (std::size_t i = 0; i < n; ++i) lam[i] = std::max(0.0, lam[i] + step * grad[i]);
    }
    return lam;
}

inline double dual_objective(const Matrix& g, const Vector& lam) {
    double lin = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < lam.size(); ++i) {
        lin += lam[i];
        for (std::size_t j = 0; j < lam.size(); ++j) quad += lam[i] * g(i, j) * lam[j];
    }
    return lin - 0.5 * quad;
}

/// Gaussian elimination with partial pivoting; returns false when singular.
inline bool solve_linear(Matrix a, Vector b, Vector& x) {
    const std::size_t n = a.rows();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
        if (std::abs(a(p, c)) < 1e-12) return false;
        for (std::size_t k = 0; k < n; ++k) std::swap(a(c, k), a(p, k));
        std::swap(b[c], b[p]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a(r, c) / a(c, c);
            for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
            b[r] -= f * b[c];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a(i, k) * x[k];
        x[i] = s / a(i, i);
    }
    return true;
}

/// Minimum-norm primal W over all active sets: for each support S, the
/// smallest W with ⟨W, F_τ⟩ = 1 on S is Σ_S c_τ F_τ with G_S c = 1; keep the
/// smallest ‖W‖ that also satisfies every other constraint ⟨W, F_τ⟩ ≥ 1.
inline Matrix active_set_min_norm(const std::vector<PretrainTask>& batch) {
    const std::size_t b = batch.size();
    const std::size_t d = batch.front().query_x.size();
    const Matrix g = vectorized_gram(batch);
    std::vector<Vector> f;
    for (const auto& t : batch) f.push_back(feature(t));
    double best = std::numeric_limits<double>::infinity();
    Vector best_w;
    for (unsigned mask = 1; mask < (1u << b); ++mask) {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < b; ++i)
            if (mask & (1u << i)) s.push_back(i);
        Matrix gs(s.size(), s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = 0; j < s.size(); ++j) gs(i, j) = g(s[i], s[j]);
        Vector c;
        if (!solve_linear(gs, Vector(s.size(), 1.0), c)) continue;
        Vector w(d * d, 0.0);
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t k = 0; k < w.size(); ++k) w[k] += c[i] * f[s[i]][k];
        bool feasible = true;
        for (std::size_t t = 0; t < b && feasible; ++t) {
            double m = 0.0;
            for (std::size_t k = 0; k < w.size(); ++k) m += w[k] * f[t][k];
            feasible = m >= 1.0 - 1e-9;
        }
        if (!feasible) continue;
        double n2 = 0.0;
        for (double v : w) n2 += v * v;
        if (n2 < best) {
            best = n2;
            best_w = w;
        }
    }
    Matrix out(d, d);
    if (!best_w.empty()) std::copy(best_w.begin(), best_w.end(), out.data().begin());
    return out;
}

/// Reference GD in primal form: W ← W − α·(1/B)Σ ℓ′(m_τ) y_τ μ̂_τ x_τᵀ with
/// margins recomputed from W each step.
inline Matrix primal_gd(const std::vector<PretrainTask>& batch, double alpha, std::size_t steps, bool exponential) {
    const std::size_t d = batch.front().query_x.size();
    Matrix w(d, d);
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    for (std::size_t s = 0; s < steps; ++s) {
        Matrix grad(d, d);
        for (const auto& t : batch) {
            const double m = margin(w, t);
            const double lp = exponential ? -std::exp(-m) : -1.0 / (1.0 + std::exp(m));
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    grad(i, j) += lp * t.query_y * t.context_mean[i] * t.query_x[j] * inv_b;
        }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) w(i, j) -= alpha * grad(i, j);
    }
    return w;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// One-sample Kolmogorov–Smirnov statistic √n·D against N(0, 1).
inline double ks_normal_statistic(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = normal_cdf(xs[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return std::sqrt(n) * d;
}

/// Asymptotic KS critical value of √n·D at α = 0.01.
inline constexpr double kKsCritical01 = 1.628;

/// Upper α = 0.01 quantile of χ²_k by the Wilson–Hilferty approximation.
inline double chi_squared_critical01(double k) {
    const double z = 2.3263478740408408;
    const double a = 2.0 / (9.0 * k);
    return k * std::pow(1.0 - a + z * std::sqrt(a), 3.0);
}

inline double binomial_pmf(std::size_t n, std::size_t k, double p) {
    const double lg = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    return std::exp(lg + k * std::log(p) + (n - k) * std::log1p(-p));
}

struct Moments {
    double mean = 0.0;
    double stderr_ = 0.0;
};

inline Moments moments(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    const double n = static_cast<double>(xs.size());
    const double mean = s / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace oracle
