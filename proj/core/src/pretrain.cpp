// SPDX-License-Identifier: Apache-2.0
#include "iclab/pretrain.hpp"

#include <cmath>

#include "iclab/error.hpp"
#include "iclab/features.hpp"
#include "iclab/maxmargin.hpp"

namespace iclab {

std::string to_string(LossKind kind) { return kind == LossKind::logistic ? "logistic" : "exponential"; }

LossKind parse_loss_kind(const std::string& text) {
    if (text == "logistic") return LossKind::logistic;
    if (text == "exponential") return LossKind::exponential;
    throw ParseError("unknown loss kind '" + text + "'");
}

double loss_value(LossKind kind, double margin) {
    if (kind == LossKind::exponential) return std::exp(-margin);
    if (margin >= 0.0) return std::log1p(std::exp(-margin));
    return -margin + std::log1p(std::exp(margin));
}

double loss_derivative(LossKind kind, double margin) {
    if (kind == LossKind::exponential) return -std::exp(-margin);
    if (margin >= 0.0) {
        const double e = std::exp(-margin);
        return -e / (1.0 + e);
    }
    return -1.0 / (1.0 + std::exp(margin));
}

void TrainConfig::validate() const {
    if (!(step_size > 0.0) || !std::isfinite(step_size)) throw InvalidArgument("step size must be positive");
    if (record_every == 0) throw InvalidArgument("record_every must be >= 1");
    if (init && !init->square()) throw InvalidArgument("initial preconditioner must be square");
}

double loss(const Matrix& w, std::span<const PretrainTask> batch, LossKind kind) {
    const Vector margins = feature_margins(w, batch);
    double total = 0.0;
    for (double m : margins) total += loss_value(kind, m);
    return total / static_cast<double>(batch.size());
}

Matrix gradient(const Matrix& w, std::span<const PretrainTask> batch, LossKind kind) {
    const Vector margins = feature_margins(w, batch);
    Vector coeffs(batch.size());
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    for (std::size_t t = 0; t < batch.size(); ++t) coeffs[t] = loss_derivative(kind, margins[t]) * inv_b;
    return feature_combination(coeffs, batch);
}

TrainTrace train(const TrainConfig& config, std::span<const PretrainTask> batch) {
    config.validate();
    const std::size_t d = batch_dimension(batch);
    const std::size_t b = batch.size();
    if (config.init && config.init->rows() != d) throw InvalidArgument("initial preconditioner dimension mismatch");

    const Matrix g = build_gram(batch).g;
    const Vector base_margins = config.init ? feature_margins(*config.init, batch) : Vector(b, 0.0);

    auto materialize = [&](const Vector& coeffs, std::size_t step) {
        Matrix w = feature_combination(coeffs, batch);
        if (config.init) w += *config.init;
        return Preconditioner(std::move(w), {Provenance::Kind::gd_step, step});
    };

    TrainTrace trace;
    Vector coeffs(b, 0.0);
    Vector margins = base_margins;
    const double inv_b = 1.0 / static_cast<double>(b);

    for (std::size_t step = 0;; ++step) {
        if (step > 0) {
            margins = multiply(g, coeffs);
            for (std::size_t t = 0; t < b; ++t) margins[t] += base_margins[t];
        }
        const bool last = step == config.steps;
        double total = 0.0;
        for (double m : margins) total += loss_value(config.loss, m);
        const double value = total * inv_b;
        if (!std::isfinite(value)) throw TrainingDiverged(step, value);
        if (step % config.record_every == 0 || last) {
            trace.steps.push_back(step);
            trace.losses.push_back(value);
        }
        if (config.snapshot_every != 0 && step % config.snapshot_every == 0)
            trace.snapshots.emplace_back(step, materialize(coeffs, step));
        if (last) break;

        for (std::size_t t = 0; t < b; ++t)
            coeffs[t] -= config.step_size * loss_derivative(config.loss, margins[t]) * inv_b;
    }
    trace.final_w = materialize(coeffs, config.steps);
    return trace;
}

}  // namespace iclab
