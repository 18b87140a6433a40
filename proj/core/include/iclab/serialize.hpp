// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "iclab/evaluation.hpp"
#include "iclab/maxmargin.hpp"
#include "iclab/model.hpp"
#include "iclab/pretrain.hpp"
#include "iclab/tasks.hpp"
#include "iclab/theory.hpp"

namespace iclab {

// JSON documents. Doubles are written in shortest round-trip form, so
// reading a document back reproduces every value bit for bit.

/// {"d", "layout": "row-major", "data": [d·d], "meta": "gd_step(300)"}
std::string preconditioner_to_json(const Preconditioner& w);
Preconditioner preconditioner_from_json(const std::string& text);

/// {"mu", "xs", "clean_ys", "observed_ys", "noisy_set"}
std::string test_task_to_json(const TestTask& task);
TestTask test_task_from_json(const std::string& text);

std::string pretrain_batch_to_json(std::span<const PretrainTask> batch);
std::vector<PretrainTask> pretrain_batch_from_json(const std::string& text);

std::string task_params_to_json(const TaskParams& params);

std::string dual_solution_to_json(const DualSolution& sol);
std::string eval_report_to_json(const EvalReport& report);
std::string assumption_report_to_json(const AssumptionReport& report, const TheoreticalBounds& bounds);
std::string dataset_stats_to_json(const DatasetStatsReport& report, double identity_margin);
std::string scaling_report_to_json(const ScalingReport& report);
std::string concentration_report_to_json(const std::vector<std::pair<std::string, ConcentrationReport>>& reports);

/// "step,loss" CSV of a training trace.
std::string loss_trace_csv(const TrainTrace& trace);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace iclab
