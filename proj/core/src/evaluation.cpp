// SPDX-License-Identifier: Apache-2.0
#include "iclab/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "iclab/error.hpp"
#include "iclab/parallel.hpp"
#include "iclab/stats.hpp"

namespace iclab {
namespace {

struct TaskOutcome {
    double test_acc = 0.0;
    double train_acc = 0.0;
    bool fully_memorized = false;
    std::size_t noisy = 0;
    std::size_t noisy_fitted = 0;
};

enum Parts : unsigned { kTest = 1u, kMemorization = 2u };

std::vector<TaskOutcome> run_tasks(const Preconditioner& w, const TaskParams& params, std::size_t n_tasks,
                                   const RngStream& stream, std::size_t queries_per_task, unsigned parts) {
    params.validate();
    if (n_tasks == 0) throw InvalidArgument("evaluation needs at least one task");
    if (queries_per_task == 0) throw InvalidArgument("queries_per_task must be >= 1");
    if (w.dimension() != params.dim) throw InvalidArgument("preconditioner dimension does not match task dimension");

    std::vector<TaskOutcome> outcomes(n_tasks);
    parallel_for(n_tasks, 16, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const RngStream task_stream = stream.child(i);
            const TestTask task = gen_test_task(params, task_stream);
            // Wᵀ·mean is shared by every query of this task
            const Vector projected = multiply_transposed(w.matrix(), task.context_mean);
            TaskOutcome& out = outcomes[i];

            if (parts & kTest) {
                std::size_t correct = predicts_label(dot(projected, task.query_x()), task.query_y()) ? 1 : 0;
                if (queries_per_task > 1) {
                    const QuerySample extra =
                        gen_extra_queries(params, task.mu, queries_per_task - 1, task_stream.child(2));
                    for (std::size_t q = 0; q < extra.xs.size(); ++q)
                        if (predicts_label(dot(projected, extra.xs[q]), extra.observed_ys[q])) ++correct;
                }
                out.test_acc = static_cast<double>(correct) / static_cast<double>(queries_per_task);
            }

            if (parts & kMemorization) {
                const std::size_t m = task.context_size();
                std::size_t fitted = 0;
                std::size_t k_noisy = 0;
                for (std::size_t k = 0; k < m; ++k) {
                    const bool ok = predicts_label(dot(projected, task.xs[k]), task.observed_ys[k]);
                    if (ok) ++fitted;
                    const bool is_noisy = k_noisy < task.noisy_set.size() && task.noisy_set[k_noisy] == k;
                    if (is_noisy) {
                        ++k_noisy;
                        ++out.noisy;
                        if (ok) ++out.noisy_fitted;
                    }
                }
                out.train_acc = static_cast<double>(fitted) / static_cast<double>(m);
                out.fully_memorized = fitted == m;
            }
        }
    });
    return outcomes;
}

MemorizationEstimate summarize_memorization(const std::vector<TaskOutcome>& outcomes) {
    std::vector<double> acc(outcomes.size());
    std::size_t full = 0, noisy = 0, noisy_fitted = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        acc[i] = outcomes[i].train_acc;
        full += outcomes[i].fully_memorized ? 1 : 0;
        noisy += outcomes[i].noisy;
        noisy_fitted += outcomes[i].noisy_fitted;
    }
    const MeanStderr ms = mean_and_stderr(acc);
    MemorizationEstimate est;
    est.mean = ms.mean;
    est.stderr_ = ms.stderr_;
    est.full_rate = static_cast<double>(full) / static_cast<double>(outcomes.size());
    est.noisy_examples = noisy;
    if (noisy > 0) est.noisy_fit_rate = static_cast<double>(noisy_fitted) / static_cast<double>(noisy);
    est.n_tasks = outcomes.size();
    return est;
}

AccuracyEstimate summarize_test(const std::vector<TaskOutcome>& outcomes) {
    std::vector<double> acc(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) acc[i] = outcomes[i].test_acc;
    const MeanStderr ms = mean_and_stderr(acc);
    return {ms.mean, ms.stderr_, outcomes.size()};
}

}  // namespace

AccuracyEstimate eval_test(const Preconditioner& w, const TaskParams& params, std::size_t n_tasks,
                           const RngStream& stream, std::size_t queries_per_task) {
    return summarize_test(run_tasks(w, params, n_tasks, stream, queries_per_task, kTest));
}

MemorizationEstimate eval_memorization(const Preconditioner& w, const TaskParams& params, std::size_t n_tasks,
                                       const RngStream& stream) {
    return summarize_memorization(run_tasks(w, params, n_tasks, stream, 1, kMemorization));
}

EvalReport evaluate(const Preconditioner& w, const TaskParams& params, std::size_t n_tasks, const RngStream& stream,
                    std::size_t queries_per_task) {
    const auto outcomes = run_tasks(w, params, n_tasks, stream, queries_per_task, kTest | kMemorization);
    const AccuracyEstimate test = summarize_test(outcomes);
    const MemorizationEstimate mem = summarize_memorization(outcomes);
    EvalReport report;
    report.test_acc_mean = test.mean;
    report.test_acc_se = test.stderr_;
    report.train_acc_mean = mem.mean;
    report.train_acc_se = mem.stderr_;
    report.n_tasks = n_tasks;
    report.full_memorization_rate = mem.full_rate;
    report.noisy_label_fit_rate = mem.noisy_fit_rate;
    return report;
}

TheoreticalBounds theoretical_bounds(const TaskParams& params, double delta, const BoundConstants& k) {
    params.validate();
    if (!(params.flip_prob < 0.5)) throw InvalidArgument("bounds require p < 1/2");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
    if (!(k.c > 0.0 && k.c0 > 0.0 && k.big_c > 0.0)) throw InvalidArgument("bound constants must be positive");

    const CovarianceSpec noise = params.noise();
    const double d = static_cast<double>(params.dim);
    const double b = static_cast<double>(params.n_pretrain_tasks);
    const double m = static_cast<double>(params.test_context);
    const double rt = params.test_radius;
    const double p = params.flip_prob;
    const double lambda_norm = noise.spectral_norm();
    const double lambda_sqrt_norm = std::sqrt(lambda_norm);

    TheoreticalBounds out;
    out.c_b = b / d;
    const double log_term = std::log(2.0 * b * b / delta);
    out.rho = std::min(out.c_b, 1.0) / (log_term * log_term);
    const double cr = k.c * out.rho;

    const double noise_floor = p > 0.0 ? p + 2.0 * std::exp(-k.c * m) : 0.0;
    out.gen_bound_rhs = noise_floor + 2.0 * std::exp(-cr * std::sqrt(d)) +
                        4.0 * std::exp(-cr * rt / lambda_sqrt_norm) +
                        2.0 * std::exp(-cr * std::sqrt(m) * rt * rt / (lambda_norm * std::sqrt(d)));
    out.mem_bound_rhs = 4.0 * m * std::exp(-cr * std::sqrt(d) / std::sqrt(m)) +
                        8.0 * m * std::exp(-cr * d / (m * std::max(rt * rt, rt)));
    return out;
}

AssumptionReport check_assumptions(const TaskParams& params, double delta, double big_c, double c_b) {
    params.validate();
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
    if (!(big_c > 0.0) || !(c_b > 0.0)) throw InvalidArgument("assumption constants must be positive");

    const CovarianceSpec noise = params.noise();
    const double d = static_cast<double>(params.dim);
    const double b = static_cast<double>(params.n_pretrain_tasks);
    const double n = static_cast<double>(params.pretrain_context);
    const double c2 = big_c * big_c;

    auto make = [](double lhs, double threshold) {
        return AssumptionCheck{lhs >= threshold, lhs, threshold, lhs - threshold};
    };

    AssumptionReport r;
    const double spread = std::max({noise.trace() / d, std::sqrt(noise.trace_squared() / n), noise.spectral_norm()});
    const double a1 = std::max(c2 * std::sqrt(d * noise.trace_squared()), c2 * spread * std::log(2.0 * b / delta));
    r.signal = make(params.pretrain_radius * params.pretrain_radius, a1);
    r.task_count = make(b, c_b * d);
    const double l = std::log(2.0 * b * b / delta);
    r.dimension = make(d, big_c * l * l * l * l);
    return r;
}

}  // namespace iclab
