// SPDX-License-Identifier: Apache-2.0
#include "iclab/tasks.hpp"

#include <cmath>

#include "iclab/error.hpp"
#include "iclab/parallel.hpp"

namespace iclab {

void TaskParams::validate() const {
    if (dim < 1) throw InvalidArgument("dimension must be >= 1");
    if (pretrain_context < 1) throw InvalidArgument("pre-training context length must be >= 1");
    if (test_context < 1) throw InvalidArgument("test context length must be >= 1");
    if (n_pretrain_tasks < 1) throw InvalidArgument("number of pre-training tasks must be >= 1");
    if (!(pretrain_radius >= 0.0) || !std::isfinite(pretrain_radius))
        throw InvalidArgument("pre-training radius must be finite and >= 0");
    if (!(test_radius >= 0.0) || !std::isfinite(test_radius)) throw InvalidArgument("test radius must be finite and >= 0");
    if (!(flip_prob >= 0.0 && flip_prob <= 0.5)) throw InvalidArgument("flip probability must lie in [0, 1/2]");
    if (cov && cov->dimension() != dim) throw InvalidArgument("covariance dimension does not match task dimension");
}

namespace {

// x = y·μ + z
Vector draw_example(const Vector& mu, Label y, const CovarianceSpec& noise, Generator& gen) {
    Vector x = noise.sample(gen);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += y * mu[j];
    return x;
}

}  // namespace

std::vector<PretrainTask> gen_pretrain_batch(const TaskParams& params, const RngStream& stream,
                                             ContextStorage storage) {
    params.validate();
    const CovarianceSpec noise = params.noise();
    std::vector<PretrainTask> batch(params.n_pretrain_tasks);
    const std::size_t d = params.dim;
    const std::size_t n = params.pretrain_context;

    parallel_for(batch.size(), 8, [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            Generator gen = stream.child(t).generator();
            PretrainTask& task = batch[t];
            task.mu = sample_sphere(d, params.pretrain_radius, gen);
            task.context_ys.resize(n);
            task.context_mean.assign(d, 0.0);
            if (storage == ContextStorage::keep) task.context_xs.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                const Label y = gen.sign();
                Vector x = draw_example(task.mu, y, noise, gen);
                task.context_ys[i] = y;
                for (std::size_t j = 0; j < d; ++j) task.context_mean[j] += y * x[j];
                if (storage == ContextStorage::keep) task.context_xs.push_back(std::move(x));
            }
            for (double& v : task.context_mean) v /= static_cast<double>(n);
            task.query_y = gen.sign();
            task.query_x = draw_example(task.mu, task.query_y, noise, gen);
        }
    });
    return batch;
}

TestTask gen_test_task(const TaskParams& params, const RngStream& stream) {
    params.validate();
    const CovarianceSpec noise = params.noise();
    const std::size_t m = params.test_context;

    TestTask task;
    Generator features = stream.child(0).generator();
    task.mu = sample_sphere(params.dim, params.test_radius, features);
    task.clean_ys.resize(m + 1);
    task.xs.reserve(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
        task.clean_ys[i] = features.sign();
        task.xs.push_back(draw_example(task.mu, task.clean_ys[i], noise, features));
    }

    Generator label_noise = stream.child(1).generator();
    FlippedLabels flipped = flip_labels(task.clean_ys, params.flip_prob, label_noise);
    task.observed_ys = std::move(flipped.observed);
    for (std::size_t i : flipped.noisy_set)
        if (i < m) task.noisy_set.push_back(i);
    for (std::size_t i = 0, k = 0; i < m; ++i) {
        if (k < task.noisy_set.size() && task.noisy_set[k] == i) {
            ++k;
            continue;
        }
        task.clean_set.push_back(i);
    }
    task.context_mean = context_mean(std::span(task.xs).first(m), std::span(task.observed_ys).first(m));
    return task;
}

QuerySample gen_extra_queries(const TaskParams& params, std::span<const double> mu, std::size_t count,
                              const RngStream& stream) {
    if (mu.size() != params.dim) throw InvalidArgument("gen_extra_queries: mean has wrong dimension");
    const CovarianceSpec noise = params.noise();
    const Vector mean(mu.begin(), mu.end());
    Generator gen = stream.generator();
    QuerySample out;
    for (std::size_t i = 0; i < count; ++i) {
        const Label clean = gen.sign();
        out.xs.push_back(draw_example(mean, clean, noise, gen));
        out.observed_ys.push_back(gen.bernoulli(params.flip_prob) ? -clean : clean);
    }
    return out;
}

Vector context_mean(std::span<const Vector> xs, std::span<const Label> ys) {
    if (xs.empty()) throw InvalidArgument("context_mean: empty context");
    if (xs.size() != ys.size()) throw InvalidArgument("context_mean: feature/label count mismatch");
    const std::size_t d = xs.front().size();
    Vector mean(d, 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i].size() != d) throw InvalidArgument("context_mean: inconsistent feature dimension");
        for (std::size_t j = 0; j < d; ++j) mean[j] += ys[i] * xs[i][j];
    }
    for (double& v : mean) v /= static_cast<double>(xs.size());
    return mean;
}

Matrix embed(std::span<const Vector> xs, std::span<const Label> ys, std::span<const double> query_x) {
    if (xs.size() != ys.size()) throw InvalidArgument("embed: feature/label count mismatch");
    const std::size_t d = query_x.size();
    const std::size_t n = xs.size();
    Matrix e(d + 1, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (xs[i].size() != d) throw InvalidArgument("embed: feature dimension mismatch");
        for (std::size_t j = 0; j < d; ++j) e(j, i) = xs[i][j];
        e(d, i) = ys[i];
    }
    for (std::size_t j = 0; j < d; ++j) e(j, n) = query_x[j];
    e(d, n) = 0.0;
    return e;
}

}  // namespace iclab
