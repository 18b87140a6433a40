// SPDX-License-Identifier: Apache-2.0
#include "iclab/harness.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "iclab/error.hpp"
#include "iclab/evaluation.hpp"

namespace iclab {

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::rtilde: return "rtilde";
        case SweepAxis::batch_B: return "batch_B";
        case SweepAxis::dimension: return "dimension";
        case SweepAxis::context_M: return "context_M";
        case SweepAxis::noise_p: return "noise_p";
    }
    return "rtilde";
}

SweepAxis parse_sweep_axis(const std::string& text) {
    for (SweepAxis a : {SweepAxis::rtilde, SweepAxis::batch_B, SweepAxis::dimension, SweepAxis::context_M,
                        SweepAxis::noise_p})
        if (text == to_string(a)) return a;
    throw ParseError("unknown sweep axis '" + text + "'");
}

std::string to_string(Trainer trainer) { return trainer == Trainer::gd ? "gd" : "max_margin"; }

Trainer parse_trainer(const std::string& text) {
    if (text == "gd") return Trainer::gd;
    if (text == "max_margin") return Trainer::max_margin;
    throw ParseError("unknown trainer '" + text + "'");
}

namespace {

bool integral_axis(SweepAxis axis) {
    return axis == SweepAxis::batch_B || axis == SweepAxis::dimension || axis == SweepAxis::context_M;
}

std::size_t as_count(double v) { return static_cast<std::size_t>(std::llround(v)); }

}  // namespace

void SweepConfig::validate() const {
    if (values.empty()) throw InvalidArgument("sweep needs at least one axis value");
    if (seeds.empty()) throw InvalidArgument("sweep needs at least one seed");
    if (n_eval_tasks == 0) throw InvalidArgument("n_eval_tasks must be >= 1");
    if (queries_per_task == 0) throw InvalidArgument("queries_per_task must be >= 1");
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidArgument("sweep values must be finite");
        if (integral_axis(axis) && (v < 1.0 || v != std::floor(v)))
            throw InvalidArgument("axis " + to_string(axis) + " takes positive integer values");
    }
    train.validate();
    for (double v : values) params_at(v).validate();
}

TaskParams SweepConfig::params_at(double value) const {
    TaskParams p = base;
    if (axis == SweepAxis::dimension) {
        p.dim = as_count(value);
        if (p.cov && p.cov->dimension() != p.dim) {
            if (p.cov->kind() != CovarianceSpec::Kind::identity)
                throw InvalidArgument("dimension sweeps need an identity noise covariance");
            p.cov.reset();
        }
    }
    const double d = static_cast<double>(p.dim);
    if (radius_scale) p.pretrain_radius = *radius_scale * std::sqrt(d);
    if (tasks_per_dim) p.n_pretrain_tasks = std::max<std::size_t>(1, as_count(*tasks_per_dim * d));
    if (rtilde_exponent) p.test_radius = std::pow(d, *rtilde_exponent);
    switch (axis) {
        case SweepAxis::rtilde: p.test_radius = value; break;
        case SweepAxis::batch_B: p.n_pretrain_tasks = as_count(value); break;
        case SweepAxis::context_M: p.test_context = as_count(value); break;
        case SweepAxis::noise_p: p.flip_prob = value; break;
        case SweepAxis::dimension: break;
    }
    return p;
}

SweepConfig SweepConfig::benign_overfitting(std::size_t dim) {
    SweepConfig c;
    c.base.dim = dim;
    c.base.pretrain_context = 40;
    c.base.test_context = 20;
    c.base.flip_prob = 0.1;
    c.radius_scale = 5.0;
    c.tasks_per_dim = 1.0;
    c.rtilde_exponent = 0.35;
    c.base.pretrain_radius = 5.0 * std::sqrt(static_cast<double>(dim));
    c.base.n_pretrain_tasks = dim;
    c.base.test_radius = std::pow(static_cast<double>(dim), 0.35);
    c.axis = SweepAxis::rtilde;
    c.values = {c.base.test_radius};
    c.seeds = {0};
    return c;
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
    config.validate();
    std::vector<SweepRecord> records;
    records.reserve(config.values.size() * config.seeds.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();

    for (double value : config.values) {
        const TaskParams params = config.params_at(value);
        for (std::uint64_t seed : config.seeds) {
            const auto start = std::chrono::steady_clock::now();
            SweepRecord rec;
            rec.axis = config.axis;
            rec.value = value;
            rec.seed = seed;
            rec.n_tasks = config.n_eval_tasks;

            const auto batch =
                gen_pretrain_batch(params, RngStream(seed, stream_tag::pretrain), ContextStorage::discard);
            std::optional<Preconditioner> w;
            if (config.trainer == Trainer::gd) {
                try {
                    w = train(config.train, batch).final_w;
                } catch (const TrainingDiverged& e) {
                    rec.flagged = true;
                    rec.flag_reason = e.what();
                }
            } else {
                DualSolution sol = solve_max_margin(batch, config.dual_tol, config.max_sweeps);
                if (!sol.converged) {
                    rec.flagged = true;
                    rec.flag_reason = "dual solver did not converge (kkt violation " +
                                      format_double(sol.kkt_violation) + ")";
                }
                w = std::move(sol.w);
            }

            if (w) {
                const EvalReport r = evaluate(*w, params, config.n_eval_tasks, RngStream(seed, stream_tag::evaluation),
                                              config.queries_per_task);
                rec.train_acc_mean = r.train_acc_mean;
                rec.train_acc_se = r.train_acc_se;
                rec.test_acc_mean = r.test_acc_mean;
                rec.test_acc_se = r.test_acc_se;
                rec.full_mem_rate = r.full_memorization_rate;
            } else {
                rec.train_acc_mean = rec.train_acc_se = rec.test_acc_mean = rec.test_acc_se = rec.full_mem_rate = nan;
            }
            if (config.record_timing)
                rec.wall_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            records.push_back(std::move(rec));
        }
    }
    return records;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

void write_csv(std::span<const SweepRecord> records, std::ostream& out) {
    out << kSweepCsvHeader << '\n';
    for (const SweepRecord& r : records) {
        out << to_string(r.axis) << ',' << format_double(r.value) << ',' << r.seed << ','
            << format_double(r.train_acc_mean) << ',' << format_double(r.train_acc_se) << ','
            << format_double(r.test_acc_mean) << ',' << format_double(r.test_acc_se) << ','
            << format_double(r.full_mem_rate) << ',' << r.n_tasks << ',' << format_double(r.wall_ms) << '\n';
    }
}

void write_csv(std::span<const SweepRecord> records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_csv(records, out);
    if (!out) throw Error("failed writing '" + path + "'");
}

namespace {

template <typename T>
T parse_field(const std::string& field, std::size_t line, const char* name) {
    T value{};
    const char* first = field.data();
    const char* last = first + field.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last)
        throw ParseError("line " + std::to_string(line) + ": cannot parse " + name + " from '" + field + "'");
    return value;
}

}  // namespace

std::vector<SweepRecord> read_csv(std::istream& in) {
    std::vector<SweepRecord> records;
    std::string text;
    std::size_t line = 0;
    if (!std::getline(in, text)) throw ParseError("line 1: missing header");
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text != kSweepCsvHeader) throw ParseError("line 1: unexpected header '" + text + "'");

    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(text);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (!text.empty() && text.back() == ',') f.emplace_back();
        if (f.size() != 10)
            throw ParseError("line " + std::to_string(line) + ": expected 10 fields, found " + std::to_string(f.size()));
        SweepRecord r;
        try {
            r.axis = parse_sweep_axis(f[0]);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line) + ": " + e.what());
        }
        r.value = parse_field<double>(f[1], line, "value");
        r.seed = parse_field<std::uint64_t>(f[2], line, "seed");
        r.train_acc_mean = parse_field<double>(f[3], line, "train_acc_mean");
        r.train_acc_se = parse_field<double>(f[4], line, "train_acc_se");
        r.test_acc_mean = parse_field<double>(f[5], line, "test_acc_mean");
        r.test_acc_se = parse_field<double>(f[6], line, "test_acc_se");
        r.full_mem_rate = parse_field<double>(f[7], line, "full_mem_rate");
        r.n_tasks = parse_field<std::size_t>(f[8], line, "n_tasks");
        r.wall_ms = parse_field<double>(f[9], line, "wall_ms");
        r.flagged = std::isnan(r.test_acc_mean);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<SweepRecord> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    return read_csv(in);
}

}  // namespace iclab
