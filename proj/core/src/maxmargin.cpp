// SPDX-License-Identifier: Apache-2.0
#include "iclab/maxmargin.hpp"

#include <algorithm>
#include <cmath>

#include "iclab/error.hpp"
#include "iclab/features.hpp"
#include "iclab/parallel.hpp"

namespace iclab {

std::size_t batch_dimension(std::span<const PretrainTask> batch) {
    if (batch.empty()) throw InvalidArgument("empty pre-training batch");
    const std::size_t d = batch.front().query_x.size();
    for (const PretrainTask& t : batch)
        if (t.query_x.size() != d || t.context_mean.size() != d)
            throw InvalidArgument("pre-training batch has inconsistent dimensions");
    return d;
}

Matrix feature_combination(std::span<const double> coeffs, std::span<const PretrainTask> batch) {
    const std::size_t d = batch_dimension(batch);
    if (coeffs.size() != batch.size()) throw InvalidArgument("coefficient count does not match batch size");
    Matrix w(d, d);
    parallel_for(d, 16, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            auto row = w.row(i);
            for (std::size_t t = 0; t < batch.size(); ++t) {
                const double s = coeffs[t] * batch[t].query_y * batch[t].context_mean[i];
                if (s == 0.0) continue;
                const Vector& x = batch[t].query_x;
                for (std::size_t j = 0; j < d; ++j) row[j] += s * x[j];
            }
        }
    });
    return w;
}

Vector feature_margins(const Matrix& w, std::span<const PretrainTask> batch) {
    const std::size_t d = batch_dimension(batch);
    if (w.rows() != d || w.cols() != d) throw InvalidArgument("preconditioner dimension does not match batch");
    Vector margins(batch.size());
    parallel_for(batch.size(), 8, [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t)
            margins[t] = batch[t].query_y * dot(batch[t].context_mean, multiply(w, batch[t].query_x));
    });
    return margins;
}

GramMatrix build_gram(std::span<const PretrainTask> batch) {
    batch_dimension(batch);
    const std::size_t b = batch.size();
    GramMatrix gram{Matrix(b, b)};
    parallel_for(b, 4, [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            for (std::size_t q = t; q < b; ++q) {
                const double v = static_cast<double>(batch[t].query_y * batch[q].query_y) *
                                 dot(batch[t].context_mean, batch[q].context_mean) *
                                 dot(batch[t].query_x, batch[q].query_x);
                gram.g(t, q) = v;
            }
        }
    });
    for (std::size_t t = 0; t < b; ++t)
        for (std::size_t q = t + 1; q < b; ++q) gram.g(q, t) = gram.g(t, q);
    return gram;
}

namespace {

constexpr double kDegenerateDiagonal = 1e-14;

double kkt_violation_of(std::span<const double> lambdas, std::span<const double> margins) {
    double worst = 0.0;
    for (std::size_t t = 0; t < margins.size(); ++t) {
        worst = std::max(worst, 1.0 - margins[t]);
        if (lambdas[t] > 0.0) worst = std::max(worst, std::abs(margins[t] - 1.0));
    }
    return worst;
}

}  // namespace

DualIterate solve_dual(const GramMatrix& gram, double tol, std::size_t max_sweeps) {
    const Matrix& g = gram.g;
    if (!g.square()) throw InvalidArgument("solve_dual: Gram matrix must be square");
    if (!(tol > 0.0)) throw InvalidArgument("solve_dual: tolerance must be positive");
    const std::size_t b = g.rows();

    DualIterate out;
    out.lambdas.assign(b, 0.0);
    std::vector<bool> frozen(b, false);
    for (std::size_t t = 0; t < b; ++t) {
        if (g(t, t) <= kDegenerateDiagonal) {
            frozen[t] = true;
            out.frozen.push_back(t);
        }
    }

    Vector& lambda = out.lambdas;
    Vector g_lambda(b, 0.0);  // running Gλ
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        for (std::size_t t = 0; t < b; ++t) {
            if (frozen[t]) continue;
            const double updated = std::max(0.0, lambda[t] + (1.0 - g_lambda[t]) / g(t, t));
            const double delta = updated - lambda[t];
            if (delta == 0.0) continue;
            lambda[t] = updated;
            auto col = g.row(t);  // symmetric: row t == column t
            for (std::size_t q = 0; q < b; ++q) g_lambda[q] += delta * col[q];
        }
        out.sweeps = sweep + 1;
        // refresh to stop the incremental updates from drifting
        g_lambda = multiply(g, lambda);
        out.kkt_violation = kkt_violation_of(lambda, g_lambda);
        if (out.kkt_violation <= tol) {
            out.converged = true;
            break;
        }
    }
    if (b == 0) out.converged = true;
    return out;
}

DualSolution assemble_W(std::span<const double> lambdas, std::span<const PretrainTask> batch, double tol) {
    if (lambdas.size() != batch.size()) throw InvalidArgument("assemble_W: lambda count does not match batch size");
    for (double l : lambdas)
        if (!(l >= 0.0)) throw InvalidArgument("assemble_W: dual variables must be nonnegative");
    DualSolution sol;
    sol.lambdas.assign(lambdas.begin(), lambdas.end());
    sol.w = Preconditioner(feature_combination(lambdas, batch), {Provenance::Kind::max_margin, 0});
    sol.margins = feature_margins(sol.w.matrix(), batch);
    sol.kkt_violation = kkt_violation_of(sol.lambdas, sol.margins);
    sol.converged = sol.kkt_violation <= tol;
    return sol;
}

DualSolution solve_max_margin(std::span<const PretrainTask> batch, double tol, std::size_t max_sweeps) {
    const DualIterate it = solve_dual(build_gram(batch), tol, max_sweeps);
    DualSolution sol = assemble_W(it.lambdas, batch, tol);
    sol.converged = it.converged;
    sol.sweeps = it.sweeps;
    sol.frozen = it.frozen;
    return sol;
}

double directional_alignment(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("directional_alignment: shape mismatch");
    const double na = frobenius_norm(a);
    const double nb = frobenius_norm(b);
    if (na == 0.0 || nb == 0.0) throw InvalidArgument("directional_alignment: zero matrix");
    return std::clamp(frobenius_inner(a, b) / (na * nb), -1.0, 1.0);
}

}  // namespace iclab
