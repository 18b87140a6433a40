// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iclab/maxmargin.hpp"
#include "iclab/pretrain.hpp"
#include "iclab/tasks.hpp"

namespace iclab {

enum class SweepAxis { rtilde, batch_B, dimension, context_M, noise_p };
enum class Trainer { gd, max_margin };

std::string to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& text);
std::string to_string(Trainer trainer);
Trainer parse_trainer(const std::string& text);

struct SweepConfig {
    TaskParams base;
    TrainConfig train;
    SweepAxis axis = SweepAxis::rtilde;
    std::vector<double> values;
    std::vector<std::uint64_t> seeds;
    std::size_t n_eval_tasks = 2500;
    std::size_t queries_per_task = 1;
    Trainer trainer = Trainer::gd;

    // Parameters tied to the dimension at every sweep point; the swept axis
    // overrides its own tie.
    std::optional<double> radius_scale = 5.0;  // R = scale·√d
    std::optional<double> tasks_per_dim;       // B = round(ratio·d)
    std::optional<double> rtilde_exponent;     // R̃ = d^β

    double dual_tol = kDefaultDualTol;
    std::size_t max_sweeps = kDefaultMaxSweeps;
    /// When false, wall_ms is written as 0 so repeated runs give identical bytes.
    bool record_timing = true;

    void validate() const;
    /// Task parameters at one value of the swept axis.
    [[nodiscard]] TaskParams params_at(double value) const;

    /// Benign-overfitting operating point: B = d, R = 5√d, N = 40, M = 20,
    /// p = 0.1, R̃ = d^0.35, GD for 300 steps at α = 0.01 from zero.
    static SweepConfig benign_overfitting(std::size_t dim);
};

struct SweepRecord {
    SweepAxis axis = SweepAxis::rtilde;
    double value = 0.0;
    std::uint64_t seed = 0;
    double train_acc_mean = 0.0;
    double train_acc_se = 0.0;
    double test_acc_mean = 0.0;
    double test_acc_se = 0.0;
    double full_mem_rate = 0.0;
    std::size_t n_tasks = 0;
    double wall_ms = 0.0;
    /// Set when training diverged (metrics are NaN) or the dual solver did
    /// not converge (metrics still reported). Not part of the CSV schema.
    bool flagged = false;
    std::string flag_reason;
};

/// One record per (value, seed), in value-major order. The pre-training batch
/// for seed s comes from RngStream(s, pretrain) and the evaluation tasks from
/// RngStream(s, evaluation), so records do not depend on each other.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

inline constexpr const char* kSweepCsvHeader =
    "axis,value,seed,train_acc_mean,train_acc_se,test_acc_mean,test_acc_se,full_mem_rate,n_tasks,wall_ms";

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

void write_csv(std::span<const SweepRecord> records, std::ostream& out);
void write_csv(std::span<const SweepRecord> records, const std::string& path);
/// Throws ParseError naming the offending line.
std::vector<SweepRecord> read_csv(std::istream& in);
std::vector<SweepRecord> read_csv(const std::string& path);

}  // namespace iclab
