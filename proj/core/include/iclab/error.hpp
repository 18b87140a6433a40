// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace iclab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad shape, out-of-range value).
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// Gradient descent produced a non-finite loss.
class TrainingDiverged : public Error {
  public:
    TrainingDiverged(std::size_t step, double loss)
        : Error("training diverged at step " + std::to_string(step) +
                " (loss = " + std::to_string(loss) + ")"),
          step_(step) {}

    [[nodiscard]] std::size_t step() const noexcept { return step_; }

  private:
    std::size_t step_;
};

/// The dual coordinate ascent hit its sweep cap without meeting tolerance.
class SolverNotConverged : public Error {
  public:
    using Error::Error;
};

/// Malformed input document (JSON, CSV, config).
class ParseError : public Error {
  public:
    using Error::Error;
};

}  // namespace iclab
