// SPDX-License-Identifier: Apache-2.0
#include "iclab/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "iclab/error.hpp"
#include "iclab/harness.hpp"

namespace iclab {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

template <typename T>
T field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad field '") + key + "': " + e.what());
    }
}

// JSON has no NaN or infinity; they are written as strings.
json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json labels(const Labels& ys) { return json(ys); }

json preconditioner_json(const Preconditioner& w) {
    const Matrix& m = w.matrix();
    return {{"d", m.rows()},
            {"layout", "row-major"},
            {"data", std::vector<double>(m.data().begin(), m.data().end())},
            {"meta", to_string(w.meta())}};
}

json check_json(const AssumptionCheck& c) {
    return {{"pass", c.pass}, {"lhs", number(c.lhs)}, {"threshold", number(c.threshold)}, {"slack", number(c.slack)}};
}

json envelope_json(const StatEnvelope& e) {
    return {{"observed", number(e.observed)}, {"envelope", number(e.envelope)}, {"within", e.within()}};
}

json pretrain_task_json(const PretrainTask& t) {
    json j = {{"mu", t.mu},
              {"context_ys", labels(t.context_ys)},
              {"query_x", t.query_x},
              {"query_y", t.query_y},
              {"context_mean", t.context_mean}};
    if (!t.context_xs.empty()) j["context_xs"] = t.context_xs;
    return j;
}

void check_label(Label y) {
    if (y != 1 && y != -1) throw ParseError("labels must be +1 or -1");
}

}  // namespace

std::string preconditioner_to_json(const Preconditioner& w) { return preconditioner_json(w).dump(); }

Preconditioner preconditioner_from_json(const std::string& text) {
    const json j = parse(text);
    const auto d = field<std::size_t>(j, "d");
    if (field<std::string>(j, "layout") != "row-major") throw ParseError("only row-major layout is supported");
    const auto data = field<std::vector<double>>(j, "data");
    if (data.size() != d * d)
        throw ParseError("data has " + std::to_string(data.size()) + " entries, expected " + std::to_string(d * d));
    Provenance meta;
    if (j.contains("meta")) meta = parse_provenance(field<std::string>(j, "meta"));
    Matrix m(d, d);
    std::copy(data.begin(), data.end(), m.data().begin());
    try {
        return {std::move(m), meta};
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
}

std::string test_task_to_json(const TestTask& task) {
    json j = {{"mu", task.mu},
              {"xs", task.xs},
              {"clean_ys", labels(task.clean_ys)},
              {"observed_ys", labels(task.observed_ys)},
              {"noisy_set", task.noisy_set}};
    return j.dump();
}

TestTask test_task_from_json(const std::string& text) {
    const json j = parse(text);
    TestTask t;
    t.mu = field<Vector>(j, "mu");
    t.xs = field<std::vector<Vector>>(j, "xs");
    t.clean_ys = field<Labels>(j, "clean_ys");
    t.observed_ys = field<Labels>(j, "observed_ys");
    t.noisy_set = field<std::vector<std::size_t>>(j, "noisy_set");
    if (t.xs.size() < 2) throw ParseError("a test task needs at least one context example and a query");
    const std::size_t m = t.xs.size() - 1;
    if (t.clean_ys.size() != m + 1 || t.observed_ys.size() != m + 1)
        throw ParseError("label arrays must have one entry per example");
    for (const Vector& x : t.xs)
        if (x.size() != t.mu.size()) throw ParseError("feature dimension does not match mu");
    std::vector<bool> noisy(m, false);
    for (std::size_t i : t.noisy_set) {
        if (i >= m) throw ParseError("noisy_set index out of range");
        noisy[i] = true;
    }
    for (std::size_t i = 0; i <= m; ++i) {
        check_label(t.clean_ys[i]);
        check_label(t.observed_ys[i]);
        if (i < m && noisy[i] != (t.clean_ys[i] != t.observed_ys[i]))
            throw ParseError("noisy_set disagrees with the labels at index " + std::to_string(i));
    }
    for (std::size_t i = 0; i < m; ++i)
        if (!noisy[i]) t.clean_set.push_back(i);
    t.context_mean = context_mean(std::span(t.xs).first(m), std::span(t.observed_ys).first(m));
    return t;
}

std::string pretrain_batch_to_json(std::span<const PretrainTask> batch) {
    json arr = json::array();
    for (const PretrainTask& t : batch) arr.push_back(pretrain_task_json(t));
    return json{{"tasks", arr}}.dump();
}

std::vector<PretrainTask> pretrain_batch_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.contains("tasks") || !j["tasks"].is_array()) throw ParseError("missing array 'tasks'");
    std::vector<PretrainTask> batch;
    for (const json& e : j["tasks"]) {
        PretrainTask t;
        t.mu = field<Vector>(e, "mu");
        t.context_ys = field<Labels>(e, "context_ys");
        t.query_x = field<Vector>(e, "query_x");
        t.query_y = field<Label>(e, "query_y");
        check_label(t.query_y);
        if (e.contains("context_xs")) {
            t.context_xs = field<std::vector<Vector>>(e, "context_xs");
            if (t.context_xs.size() != t.context_ys.size()) throw ParseError("context_xs and context_ys differ in length");
        }
        t.context_mean = e.contains("context_mean") ? field<Vector>(e, "context_mean")
                                                    : context_mean(t.context_xs, t.context_ys);
        if (t.context_mean.size() != t.query_x.size()) throw ParseError("context_mean and query_x differ in dimension");
        batch.push_back(std::move(t));
    }
    return batch;
}

std::string task_params_to_json(const TaskParams& p) {
    const CovarianceSpec cov = p.noise();
    json j = {{"dim", p.dim},
              {"pretrain_radius", p.pretrain_radius},
              {"test_radius", p.test_radius},
              {"pretrain_context", p.pretrain_context},
              {"test_context", p.test_context},
              {"n_pretrain_tasks", p.n_pretrain_tasks},
              {"flip_prob", p.flip_prob},
              {"covariance", to_string(cov.kind())}};
    return j.dump();
}

std::string dual_solution_to_json(const DualSolution& sol) {
    json j = {{"lambdas", sol.lambdas},
              {"W", preconditioner_json(sol.w)},
              {"margins", sol.margins},
              {"kkt_violation", number(sol.kkt_violation)},
              {"converged", sol.converged},
              {"sweeps", sol.sweeps},
              {"frozen", sol.frozen}};
    return j.dump();
}

std::string eval_report_to_json(const EvalReport& r) {
    json j = {{"test_acc_mean", number(r.test_acc_mean)},
              {"test_acc_se", number(r.test_acc_se)},
              {"train_acc_mean", number(r.train_acc_mean)},
              {"train_acc_se", number(r.train_acc_se)},
              {"n_tasks", r.n_tasks},
              {"full_memorization_rate", number(r.full_memorization_rate)},
              {"noisy_label_fit_rate", r.noisy_label_fit_rate ? number(*r.noisy_label_fit_rate) : json(nullptr)}};
    return j.dump(2);
}

std::string assumption_report_to_json(const AssumptionReport& r, const TheoreticalBounds& b) {
    json j = {{"signal", check_json(r.signal)},
              {"task_count", check_json(r.task_count)},
              {"dimension", check_json(r.dimension)},
              {"all_pass", r.all_pass()},
              {"bounds",
               {{"c_b", number(b.c_b)},
                {"rho", number(b.rho)},
                {"gen_bound_rhs", number(b.gen_bound_rhs)},
                {"mem_bound_rhs", number(b.mem_bound_rhs)}}}};
    return j.dump(2);
}

std::string dataset_stats_to_json(const DatasetStatsReport& r, double identity_margin) {
    json j = {{"mean_norm", envelope_json(r.mean_norm)},
              {"mean_cross", envelope_json(r.mean_cross)},
              {"query_norm", envelope_json(r.query_norm)},
              {"query_cross", envelope_json(r.query_cross)},
              {"signal_alignment", envelope_json(r.signal_alignment)},
              {"good_run", r.good_run()},
              {"identity_min_margin", number(identity_margin)}};
    return j.dump(2);
}

std::string scaling_report_to_json(const ScalingReport& r) {
    json rows = json::array();
    for (const ScalingRow& row : r.rows)
        rows.push_back({{"d", row.dim},
                        {"R", number(row.radius)},
                        {"B", row.n_tasks},
                        {"sum_lambda", number(row.sum_lambda)},
                        {"trace_w", number(row.trace_w)},
                        {"frob_w", number(row.frob_w)},
                        {"sum_lambda_ratio", number(row.sum_lambda_ratio)},
                        {"trace_ratio", number(row.trace_ratio)},
                        {"frob_ratio", number(row.frob_ratio)},
                        {"sweeps", row.sweeps}});
    json j = {{"rows", rows},
              {"sum_lambda_stability", number(r.sum_lambda_stability)},
              {"trace_stability", number(r.trace_stability)},
              {"frob_stability", number(r.frob_stability)},
              {"all_positive", r.all_positive}};
    return j.dump(2);
}

std::string concentration_report_to_json(const std::vector<std::pair<std::string, ConcentrationReport>>& reports) {
    json out = json::object();
    for (const auto& [name, r] : reports) {
        json pts = json::array();
        for (const TailPoint& p : r.tails.points)
            pts.push_back({{"t", number(p.t)}, {"empirical", number(p.empirical)}, {"shape", number(p.shape)}});
        out[name] = {{"n_samples", r.n_samples},
                     {"mean", number(r.mean)},
                     {"stderr", number(r.stderr_)},
                     {"expected", number(r.expected)},
                     {"mean_within_5se", r.mean_within_5se},
                     {"c_hat", number(r.tails.c_hat)},
                     {"tail", pts}};
    }
    return out.dump(2);
}

std::string loss_trace_csv(const TrainTrace& trace) {
    std::ostringstream out;
    out << "step,loss\n";
    for (std::size_t i = 0; i < trace.steps.size(); ++i)
        out << trace.steps[i] << ',' << format_double(trace.losses[i]) << '\n';
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace iclab
