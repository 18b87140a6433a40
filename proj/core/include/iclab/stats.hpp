// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <span>

namespace iclab {

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;  // sample stddev / √n; 0 when n < 2
};

/// Two-pass mean and standard error, summed in index order.
inline MeanStderr mean_and_stderr(std::span<const double> xs) {
    MeanStderr out;
    if (xs.empty()) return out;
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double n = static_cast<double>(xs.size());
    out.mean = sum / n;
    if (xs.size() < 2) return out;
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return out;
}

}  // namespace iclab
