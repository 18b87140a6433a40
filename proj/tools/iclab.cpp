// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "config.hpp"
#include "iclab/error.hpp"
#include "iclab/evaluation.hpp"
#include "iclab/harness.hpp"
#include "iclab/maxmargin.hpp"
#include "iclab/parallel.hpp"
#include "iclab/pretrain.hpp"
#include "iclab/rng.hpp"
#include "iclab/serialize.hpp"
#include "iclab/tasks.hpp"
#include "iclab/theory.hpp"

namespace {

using namespace iclab;
using cli::Settings;

struct Subcommand {
    CLI::App* app = nullptr;
    std::string config;
    std::map<std::string, std::string> flags;
};

void add_options(Subcommand& sub) {
    sub.app->add_option("--config", sub.config, "key=value config file");
    for (const cli::KeyInfo& key : cli::known_keys())
        sub.app->add_option(std::string("--") + key.name, sub.flags[key.name], key.help);
}

Settings resolve(const Subcommand& sub) {
    Settings s;
    if (!sub.config.empty()) s = Settings::load(sub.config);
    for (const auto& [name, value] : sub.flags)
        if (sub.app->count(std::string("--") + name) > 0) s.set(name, value);
    return s;
}

void configure_threads(const Settings& s) {
    if (s.has("threads")) {
        set_thread_count(s.count("threads", 1));
    } else if (const char* env = std::getenv("ICLAB_THREADS"); env != nullptr && *env != '\0') {
        Settings e;
        e.set("threads", env);
        set_thread_count(e.count("threads", 1));
    }
}

void emit(const Settings& s, const std::string& text) {
    if (const auto out = s.get("out")) {
        write_text_file(*out, text);
    } else {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    }
}

TaskParams task_params(const Settings& s, TaskParams p = {}) {
    p.dim = s.count("dim", p.dim);
    p.pretrain_radius = s.real("R", p.pretrain_radius);
    p.test_radius = s.real("rtilde", p.test_radius);
    p.pretrain_context = s.count("N", p.pretrain_context);
    p.test_context = s.count("M", p.test_context);
    p.n_pretrain_tasks = s.count("B", p.n_pretrain_tasks);
    p.flip_prob = s.real("p", p.flip_prob);
    if (s.has("noise_variances")) p.cov = CovarianceSpec::diagonal(s.reals("noise_variances", {}));
    p.validate();
    return p;
}

TrainConfig train_config(const Settings& s) {
    TrainConfig c;
    c.loss = parse_loss_kind(s.str("loss", to_string(c.loss)));
    c.step_size = s.real("step_size", c.step_size);
    c.steps = s.count("steps", c.steps);
    c.record_every = s.count("record_every", c.record_every);
    c.validate();
    return c;
}

int run_pretrain(const Settings& s) {
    const TaskParams params = task_params(s);
    const TrainConfig config = train_config(s);
    const auto batch = gen_pretrain_batch(params, RngStream(s.u64("seed", 0), stream_tag::pretrain));
    const TrainTrace trace = train(config, batch);

    const std::string out = s.str("out", "model.json");
    write_text_file(out, preconditioner_to_json(trace.final_w));
    std::filesystem::path loss_out(out);
    loss_out.replace_extension(".loss.csv");
    write_text_file(s.str("loss_out", loss_out.string()), loss_trace_csv(trace));
    if (const auto path = s.get("batch")) write_text_file(*path, pretrain_batch_to_json(batch));
    return 0;
}

int run_solve(const Settings& s) {
    std::vector<PretrainTask> batch;
    if (const auto path = s.get("batch"))
        batch = pretrain_batch_from_json(read_text_file(*path));
    else
        batch = gen_pretrain_batch(task_params(s), RngStream(s.u64("seed", 0), stream_tag::pretrain));
    const DualSolution sol =
        solve_max_margin(batch, s.real("tol", kDefaultDualTol), s.count("max_sweeps", kDefaultMaxSweeps));
    if (!sol.converged)
        std::cerr << "warning: dual solver stopped after " << sol.sweeps << " sweeps with KKT violation "
                  << sol.kkt_violation << '\n';
    emit(s, dual_solution_to_json(sol));
    return 0;
}

int run_eval(const Settings& s) {
    const auto model_path = s.get("model");
    if (!model_path) throw InvalidArgument("eval needs --model");
    const Preconditioner w = preconditioner_from_json(read_text_file(*model_path));
    TaskParams defaults;
    defaults.dim = w.dimension();
    const TaskParams params = task_params(s, defaults);
    if (params.dim != w.dimension())
        throw InvalidArgument("model dimension " + std::to_string(w.dimension()) + " does not match dim " +
                              std::to_string(params.dim));
    const EvalReport report = evaluate(w, params, s.count("n_eval_tasks", 2500),
                                       RngStream(s.u64("seed", 0), stream_tag::evaluation),
                                       s.count("queries_per_task", 1));
    emit(s, eval_report_to_json(report));
    return 0;
}

SweepConfig sweep_config(const Settings& s) {
    const std::size_t dim = s.count("dim", 1000);
    SweepConfig c = SweepConfig::benign_overfitting(dim);
    c.base = task_params(s, c.base);
    c.train = train_config(s);
    c.axis = parse_sweep_axis(s.str("axis", "rtilde"));
    c.trainer = parse_trainer(s.str("trainer", "gd"));

    if (s.has("R") && !s.has("r_scale"))
        c.radius_scale.reset();
    else
        c.radius_scale = s.real("r_scale", 5.0);
    if (s.has("B") && !s.has("b_ratio"))
        c.tasks_per_dim.reset();
    else
        c.tasks_per_dim = s.real("b_ratio", 1.0);
    if (s.has("rtilde") && !s.has("rtilde_exponent"))
        c.rtilde_exponent.reset();
    else
        c.rtilde_exponent = s.real("rtilde_exponent", 0.35);

    if (s.has("values")) {
        c.values = s.reals("values", {});
    } else if (c.axis == SweepAxis::rtilde) {
        const double d = static_cast<double>(c.base.dim);
        c.values = {c.rtilde_exponent ? std::pow(d, *c.rtilde_exponent) : c.base.test_radius};
    } else {
        throw InvalidArgument("sweep over " + to_string(c.axis) + " needs --values");
    }
    c.seeds = s.u64s("seeds", {s.u64("seed", 0)});
    c.n_eval_tasks = s.count("n_eval_tasks", c.n_eval_tasks);
    c.queries_per_task = s.count("queries_per_task", c.queries_per_task);
    c.dual_tol = s.real("tol", c.dual_tol);
    c.max_sweeps = s.count("max_sweeps", c.max_sweeps);
    c.record_timing = s.flag("record_timing", true);
    return c;
}

int run_sweep_command(const Settings& s) {
    const SweepConfig config = sweep_config(s);
    const auto records = run_sweep(config);
    std::ostringstream csv;
    write_csv(records, csv);
    emit(s, csv.str());
    int flagged = 0;
    for (const SweepRecord& r : records) {
        if (!r.flagged) continue;
        ++flagged;
        std::cerr << "flagged: " << to_string(r.axis) << '=' << format_double(r.value) << " seed=" << r.seed << ": "
                  << r.flag_reason << '\n';
    }
    return flagged > 0 ? 2 : 0;
}

Matrix random_symmetric(std::size_t d, Generator& gen) {
    Matrix q(d, d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j <= i; ++j) q(i, j) = q(j, i) = scale * gen.normal();
    return q;
}

int run_verify(const Settings& s) {
    const std::string target = s.str("target", "");
    const std::uint64_t seed = s.u64("seed", 0);
    const RngStream stream(seed, stream_tag::verification);
    const double delta = s.real("delta", 0.001);

    if (target == "assumptions") {
        const TaskParams params = task_params(s);
        const double big_c = s.real("big_c", 1.0);
        const AssumptionReport report = check_assumptions(params, delta, big_c, s.real("c_b", 1.0));
        const BoundConstants constants{s.real("c", 1.0), s.real("c0", 1.0), big_c};
        emit(s, assumption_report_to_json(report, theoretical_bounds(params, delta, constants)));
    } else if (target == "dataset") {
        const TaskParams params = task_params(s);
        const auto batch = gen_pretrain_batch(params, RngStream(seed, stream_tag::pretrain), ContextStorage::discard);
        emit(s, dataset_stats_to_json(dataset_stats(batch, params, delta, s.real("c0", 1.0)),
                                      identity_min_margin(batch, params.pretrain_radius)));
    } else if (target == "scaling") {
        std::vector<std::size_t> dims;
        for (double d : s.reals("dims", {50, 100, 200})) dims.push_back(static_cast<std::size_t>(d));
        const ScalingReport report = scaling_sweep(dims, task_params(s), s.real("tol", kDefaultDualTol), stream,
                                                   s.count("max_sweeps", kDefaultMaxSweeps));
        emit(s, scaling_report_to_json(report));
    } else if (target == "concentration") {
        TaskParams params = task_params(s);
        const std::size_t n = s.count("n_samples", 100000);
        Generator gen = stream.child(0).generator();
        const Matrix q = random_symmetric(params.dim, gen);
        std::vector<std::pair<std::string, ConcentrationReport>> reports;
        reports.emplace_back("sphere_quadratic_identity",
                             hanson_wright_check(Matrix::identity(params.dim), params.test_radius, n, stream.child(1)));
        reports.emplace_back("sphere_quadratic_random",
                             hanson_wright_check(q, params.test_radius, n, stream.child(2)));
        std::uint64_t index = 3;
        for (BilinearKind kind : {BilinearKind::mu_q_g, BilinearKind::zeta_q_zeta, BilinearKind::noisy_fraction})
            reports.emplace_back(to_string(kind), bilinear_concentration_check(kind, params, n, stream.child(index++), q));
        emit(s, concentration_report_to_json(reports));
    } else {
        throw InvalidArgument("verify needs --target assumptions|dataset|scaling|concentration");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"In-context classification with linear attention"};
    app.require_subcommand(1);

    std::map<std::string, Subcommand> subs;
    const std::pair<const char*, const char*> names[] = {
        {"pretrain", "generate a pre-training batch and fit W by gradient descent"},
        {"solve", "solve the max-margin problem for a pre-training batch"},
        {"eval", "evaluate a model on fresh test tasks"},
        {"sweep", "run a parameter sweep and write CSV records"},
        {"verify", "run a theory check and write a JSON report"},
    };
    for (const auto& [name, help] : names) {
        Subcommand& sub = subs[name];
        sub.app = app.add_subcommand(name, help);
        add_options(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        for (auto& [name, sub] : subs) {
            if (!sub.app->parsed()) continue;
            const Settings s = resolve(sub);
            configure_threads(s);
            if (name == "pretrain") return run_pretrain(s);
            if (name == "solve") return run_solve(s);
            if (name == "eval") return run_eval(s);
            if (name == "sweep") return run_sweep_command(s);
            return run_verify(s);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
