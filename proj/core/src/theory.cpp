// SPDX-License-Identifier: Apache-2.0
#include "iclab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iclab/error.hpp"
#include "iclab/features.hpp"
#include "iclab/parallel.hpp"
#include "iclab/stats.hpp"

namespace iclab {
namespace {

constexpr std::size_t kSampleBlock = 4096;

// Draws n samples of a scalar statistic, block b from stream.child(b).
std::vector<double> draw_samples(std::size_t n, const RngStream& stream,
                                 const std::function<double(Generator&)>& statistic) {
    std::vector<double> out(n);
    const std::size_t blocks = (n + kSampleBlock - 1) / kSampleBlock;
    parallel_for(blocks, 1, [&](std::size_t begin, std::size_t end) {
        for (std::size_t b = begin; b < end; ++b) {
            Generator gen = stream.child(b).generator();
            const std::size_t lo = b * kSampleBlock;
            const std::size_t hi = std::min(n, lo + kSampleBlock);
            for (std::size_t i = lo; i < hi; ++i) out[i] = statistic(gen);
        }
    });
    return out;
}

// Rounding floor for statistics that are deterministic up to float error.
bool within_5se(double gap, double stderr_, double expected) {
    return gap <= 5.0 * stderr_ || gap <= 1e-12 * (1.0 + std::abs(expected));
}

Vector default_grid(double stddev, double scale) {
    Vector grid;
    if (!(stddev > 1e-12 * std::max(1.0, scale))) return grid;
    const double lo = std::log(0.5 * stddev);
    const double hi = std::log(5.0 * stddev);
    for (int i = 0; i < 20; ++i) grid.push_back(std::exp(lo + (hi - lo) * i / 19.0));
    return grid;
}

ConcentrationReport summarize(const std::vector<double>& samples, double expected, std::optional<Vector> t_grid,
                              const std::function<double(double)>& shape) {
    ConcentrationReport r;
    r.n_samples = samples.size();
    const MeanStderr ms = mean_and_stderr(samples);
    r.mean = ms.mean;
    r.stderr_ = ms.stderr_;
    r.expected = expected;
    const double gap = std::abs(r.mean - expected);
    r.mean_within_5se = within_5se(gap, r.stderr_, expected);

    std::vector<double> deviations(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) deviations[i] = std::abs(samples[i] - expected);
    const double stddev = r.stderr_ * std::sqrt(static_cast<double>(samples.size()));
    const Vector grid = t_grid ? *t_grid : default_grid(stddev, std::abs(expected));
    r.tails = fit_tail(deviations, grid, shape);
    return r;
}

}  // namespace

TailReport fit_tail(std::span<const double> deviations, std::span<const double> t_grid,
                    const std::function<double(double)>& shape) {
    TailReport report;
    report.c_hat = std::numeric_limits<double>::infinity();
    std::vector<double> sorted(deviations.begin(), deviations.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    for (double t : t_grid) {
        const auto first = std::lower_bound(sorted.begin(), sorted.end(), t);
        const double tail = static_cast<double>(sorted.end() - first) / n;
        const double s = shape(t);
        report.points.push_back({t, tail, s});
        if (tail > 0.0 && s > 0.0) report.c_hat = std::min(report.c_hat, -std::log(tail / 2.0) / s);
    }
    return report;
}

DatasetStatsReport dataset_stats(std::span<const PretrainTask> batch, const TaskParams& params, double delta,
                                 double c0) {
    batch_dimension(batch);
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
    const CovarianceSpec noise = params.noise();
    const double r = params.pretrain_radius;
    const double r2 = r * r;
    const double d = static_cast<double>(params.dim);
    const double n = static_cast<double>(params.pretrain_context);
    const double b = static_cast<double>(batch.size());
    const double tr = noise.trace();
    const double tr2 = noise.trace_squared();
    const double op = noise.spectral_norm();
    const double l1 = std::log(2.0 * b / delta);
    const double l2 = std::log(2.0 * b * b / delta);

    DatasetStatsReport rep;
    rep.mean_norm.envelope = c0 * r * std::sqrt(tr) * l1 / std::sqrt(n * d) + 4.0 * std::max(tr, c0 * op * l1) / n;
    rep.query_norm.envelope = 2.0 * c0 * r * std::sqrt(tr) * l1 / std::sqrt(d) + 4.0 * std::max(tr, c0 * op * l1);
    rep.mean_cross.envelope = c0 * (r2 / std::sqrt(d) + r * std::sqrt(tr) / std::sqrt(n * d) + std::sqrt(tr2) / n) * l2;
    rep.query_cross.envelope = c0 * (r2 / std::sqrt(d) + r * std::sqrt(tr) / std::sqrt(d) + std::sqrt(tr2)) * l2;
    rep.signal_alignment.envelope =
        c0 * ((1.0 + 1.0 / std::sqrt(n)) * r * std::sqrt(tr) / std::sqrt(d) + std::sqrt(tr2) / std::sqrt(n)) * l1;

    for (std::size_t t = 0; t < batch.size(); ++t) {
        const PretrainTask& a = batch[t];
        rep.mean_norm.observed = std::max(rep.mean_norm.observed, std::abs(squared_norm(a.context_mean) - r2));
        rep.query_norm.observed = std::max(rep.query_norm.observed, std::abs(squared_norm(a.query_x) - r2));
        rep.signal_alignment.observed = std::max(
            rep.signal_alignment.observed, std::abs(a.query_y * dot(a.context_mean, a.query_x) - r2));
        for (std::size_t q = t + 1; q < batch.size(); ++q) {
            rep.mean_cross.observed =
                std::max(rep.mean_cross.observed, std::abs(dot(a.context_mean, batch[q].context_mean)));
            rep.query_cross.observed = std::max(rep.query_cross.observed, std::abs(dot(a.query_x, batch[q].query_x)));
        }
    }
    return rep;
}

double identity_min_margin(std::span<const PretrainTask> batch, double pretrain_radius) {
    batch_dimension(batch);
    if (!(pretrain_radius > 0.0)) throw InvalidArgument("pre-training radius must be positive");
    const double scale = 2.0 / (pretrain_radius * pretrain_radius);
    double worst = std::numeric_limits<double>::infinity();
    for (const PretrainTask& t : batch) worst = std::min(worst, scale * t.query_y * dot(t.context_mean, t.query_x));
    return worst;
}

ScalingReport scaling_sweep(std::span<const std::size_t> dims, const TaskParams& tmpl, double tol,
                            const RngStream& stream, std::size_t max_sweeps) {
    if (dims.empty()) throw InvalidArgument("scaling_sweep: empty dimension list");
    if (tmpl.cov && tmpl.cov->kind() != CovarianceSpec::Kind::identity)
        throw InvalidArgument("scaling_sweep runs with identity noise covariance");
    ScalingReport rep;
    rep.all_positive = true;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        TaskParams p = tmpl;
        p.dim = dims[i];
        p.pretrain_radius = 5.0 * std::sqrt(static_cast<double>(dims[i]));
        p.n_pretrain_tasks = dims[i];
        p.cov.reset();
        const auto batch = gen_pretrain_batch(p, stream.child(i), ContextStorage::discard);
        const DualSolution sol = solve_max_margin(batch, tol, max_sweeps);
        if (!sol.converged)
            throw SolverNotConverged("scaling_sweep: dual solver did not converge at d = " + std::to_string(dims[i]));

        ScalingRow row;
        row.dim = p.dim;
        row.radius = p.pretrain_radius;
        row.n_tasks = p.n_pretrain_tasks;
        for (double l : sol.lambdas) row.sum_lambda += l;
        row.trace_w = trace(sol.w.matrix());
        row.frob_w = frobenius_norm(sol.w.matrix());
        const double d = static_cast<double>(p.dim);
        const double r2 = p.pretrain_radius * p.pretrain_radius;
        row.sum_lambda_ratio = row.sum_lambda * r2 * r2 / d;
        row.trace_ratio = row.trace_w * r2 / d;
        row.frob_ratio = row.frob_w * r2 / std::sqrt(d);
        row.sweeps = sol.sweeps;
        rep.all_positive = rep.all_positive && row.sum_lambda > 0.0 && row.trace_w > 0.0 && row.frob_w > 0.0;
        rep.rows.push_back(row);
    }
    auto stability = [&](double ScalingRow::*field) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const ScalingRow& r : rep.rows) {
            lo = std::min(lo, r.*field);
            hi = std::max(hi, r.*field);
        }
        return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    };
    rep.sum_lambda_stability = stability(&ScalingRow::sum_lambda_ratio);
    rep.trace_stability = stability(&ScalingRow::trace_ratio);
    rep.frob_stability = stability(&ScalingRow::frob_ratio);
    return rep;
}

ConcentrationReport hanson_wright_check(const Matrix& q, double radius, std::size_t n_samples,
                                        const RngStream& stream, std::optional<Vector> t_grid) {
    if (!q.square() || q.empty()) throw InvalidArgument("hanson_wright_check: Q must be square and nonempty");
    if (n_samples < kMinConcentrationSamples)
        throw InvalidArgument("hanson_wright_check: need at least 10^4 samples for the tail grid");
    const std::size_t d = q.rows();
    const double dd = static_cast<double>(d);
    const std::vector<double> samples = draw_samples(n_samples, stream, [&](Generator& gen) {
        const Vector mu = sample_sphere(d, radius, gen);
        return dot(mu, multiply(q, mu));
    });
    const double frob = frobenius_norm(q);
    const double op = spectral_norm(q);
    const double r2 = radius * radius;
    auto shape = [=](double t) {
        if (frob == 0.0) return std::numeric_limits<double>::infinity();
        return std::min(t * t * dd * dd / (r2 * r2 * frob * frob), t * dd / (r2 * op));
    };
    return summarize(samples, r2 / dd * trace(q), std::move(t_grid), shape);
}

const char* to_string(BilinearKind kind) noexcept {
    switch (kind) {
        case BilinearKind::mu_q_g: return "mu_Q_g";
        case BilinearKind::zeta_q_zeta: return "zeta_Q_zeta";
        case BilinearKind::noisy_fraction: return "noisy_fraction";
    }
    return "unknown";
}

BilinearKind parse_bilinear_kind(const std::string& text) {
    if (text == "mu_Q_g" || text == "mu_q_g") return BilinearKind::mu_q_g;
    if (text == "zeta_Q_zeta" || text == "zeta_q_zeta") return BilinearKind::zeta_q_zeta;
    if (text == "noisy_fraction") return BilinearKind::noisy_fraction;
    throw ParseError("unknown concentration kind '" + text + "'");
}

ConcentrationReport bilinear_concentration_check(BilinearKind kind, const TaskParams& params, std::size_t n_samples,
                                                 const RngStream& stream, std::optional<Matrix> q,
                                                 std::optional<Vector> t_grid) {
    params.validate();
    if (n_samples < kMinConcentrationSamples)
        throw InvalidArgument("bilinear_concentration_check: need at least 10^4 samples for the tail grid");
    const std::size_t d = params.dim;
    const Matrix qm = q ? *q : Matrix::identity(d);
    if (qm.rows() != d || qm.cols() != d) throw InvalidArgument("Q dimension does not match task dimension");
    const double frob = frobenius_norm(qm);
    const double inf = std::numeric_limits<double>::infinity();

    switch (kind) {
        case BilinearKind::mu_q_g: {
            const double radius = params.test_radius;
            const auto samples = draw_samples(n_samples, stream, [&](Generator& gen) {
                const Vector mu = sample_sphere(d, radius, gen);
                Vector g(d);
                for (double& v : g) v = gen.normal();
                return dot(mu, multiply(qm, g));
            });
            const double dd = static_cast<double>(d);
            return summarize(samples, 0.0, std::move(t_grid), [=](double t) {
                return frob == 0.0 || radius == 0.0 ? inf : t * std::sqrt(dd) / (radius * frob);
            });
        }
        case BilinearKind::zeta_q_zeta: {
            const CovarianceSpec noise = params.noise();
            const double op = noise.spectral_norm();
            const auto samples = draw_samples(n_samples, stream, [&](Generator& gen) {
                const Vector z1 = noise.sample(gen);
                const Vector z2 = noise.sample(gen);
                return dot(z1, multiply(qm, z2));
            });
            return summarize(samples, 0.0, std::move(t_grid),
                             [=](double t) { return frob == 0.0 || op == 0.0 ? inf : t / (op * frob); });
        }
        case BilinearKind::noisy_fraction: {
            const std::size_t m = params.test_context;
            const Labels clean(m, 1);
            const auto samples = draw_samples(n_samples, stream, [&](Generator& gen) {
                return static_cast<double>(flip_labels(clean, params.flip_prob, gen).noisy_set.size()) /
                       static_cast<double>(m);
            });
            const double mm = static_cast<double>(m);
            return summarize(samples, params.flip_prob, std::move(t_grid), [=](double t) { return mm * t * t; });
        }
    }
    throw InvalidArgument("unknown concentration kind");
}

ConcentrationReport expected_quadratic_form_check(const Matrix& w, double radius, std::size_t n_samples,
                                                  const RngStream& stream) {
    if (!w.square() || w.empty()) throw InvalidArgument("expected_quadratic_form_check: W must be square");
    if (n_samples == 0) throw InvalidArgument("expected_quadratic_form_check: need samples");
    const std::size_t d = w.rows();
    const auto samples = draw_samples(n_samples, stream, [&](Generator& gen) {
        const Vector mu = sample_sphere(d, radius, gen);
        return dot(mu, multiply(w, mu));
    });
    ConcentrationReport r;
    r.n_samples = n_samples;
    const MeanStderr ms = mean_and_stderr(samples);
    r.mean = ms.mean;
    r.stderr_ = ms.stderr_;
    r.expected = radius * radius / static_cast<double>(d) * trace(w);
    const double gap = std::abs(r.mean - r.expected);
    r.mean_within_5se = within_5se(gap, r.stderr_, r.expected);
    r.tails.c_hat = std::numeric_limits<double>::infinity();
    return r;
}

}  // namespace iclab
