// SPDX-License-Identifier: Apache-2.0
#include "iclab/model.hpp"

#include <cmath>

#include "iclab/error.hpp"

namespace iclab {

std::string to_string(const Provenance& p) {
    switch (p.kind) {
        case Provenance::Kind::gd_step: return "gd_step(" + std::to_string(p.step) + ")";
        case Provenance::Kind::max_margin: return "max_margin";
        case Provenance::Kind::identity: return "identity";
        case Provenance::Kind::custom: return "custom";
    }
    return "custom";
}

Provenance parse_provenance(const std::string& text) {
    if (text == "max_margin") return {Provenance::Kind::max_margin, 0};
    if (text == "identity") return {Provenance::Kind::identity, 0};
    if (text == "custom") return {Provenance::Kind::custom, 0};
    const std::string prefix = "gd_step(";
    if (text.starts_with(prefix) && text.ends_with(")")) {
        const std::string digits = text.substr(prefix.size(), text.size() - prefix.size() - 1);
        if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos)
            return {Provenance::Kind::gd_step, std::stoull(digits)};
    }
    throw ParseError("unknown preconditioner provenance '" + text + "'");
}

Preconditioner::Preconditioner(Matrix w, Provenance meta) : w_(std::move(w)), meta_(meta) {
    if (!w_.square()) throw InvalidArgument("preconditioner must be square");
    for (double v : w_.data())
        if (!std::isfinite(v)) throw InvalidArgument("preconditioner has non-finite entries");
}

double predict(const Matrix& w, std::span<const double> mean, std::span<const double> query) {
    if (w.rows() != mean.size() || w.cols() != query.size()) throw InvalidArgument("predict: dimension mismatch");
    return dot(multiply_transposed(w, mean), query);
}

double leave_none_out_score(const Preconditioner& w, const TestTask& task, std::size_t k) {
    if (k >= task.context_size()) throw InvalidArgument("leave_none_out_score: index out of range");
    return predict(w, task.context_mean, task.xs[k]);
}

}  // namespace iclab
