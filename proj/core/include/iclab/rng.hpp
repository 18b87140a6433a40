// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "iclab/linalg.hpp"

namespace iclab {

using Label = int;
using Labels = std::vector<Label>;

class Generator;

/// Immutable identity of a random stream: a (master seed, stream id) pair.
/// Equal pairs reproduce identical sequences; distinct ids are independent.
class RngStream {
  public:
    constexpr RngStream() = default;
    constexpr RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : master_seed_(master_seed), stream_id_(stream_id) {}

    [[nodiscard]] constexpr std::uint64_t master_seed() const noexcept { return master_seed_; }
    [[nodiscard]] constexpr std::uint64_t stream_id() const noexcept { return stream_id_; }

    /// Derived stream for sub-task `index` (task number, sample block, ...).
    [[nodiscard]] RngStream child(std::uint64_t index) const noexcept;

    /// Fresh sampling state positioned at the start of this stream.
    [[nodiscard]] Generator generator() const noexcept;

    friend constexpr bool operator==(const RngStream&, const RngStream&) = default;

  private:
    std::uint64_t master_seed_ = 0;
    std::uint64_t stream_id_ = 0;
};

/// Purpose tags for the top-level streams of an experiment.
namespace stream_tag {
inline constexpr std::uint64_t pretrain = 1;
inline constexpr std::uint64_t evaluation = 2;
inline constexpr std::uint64_t verification = 3;
}  // namespace stream_tag

/// Counter-based sampler (Philox4x32-10 keyed by the master seed, with the
/// stream id in the upper counter words). Not thread-safe; one per thread.
class Generator {
  public:
    Generator(std::uint64_t key, std::uint64_t stream) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() noexcept;
    double normal() noexcept;
    Label sign() noexcept { return (next_u64() >> 63) != 0 ? 1 : -1; }
    bool bernoulli(double p) noexcept { return uniform() < p; }

  private:
    void refill() noexcept;

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint64_t, 2> block_{};
    int available_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// Philox4x32-10 bijection, exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// Uniform point on the sphere of the given radius in R^d (normalized Gaussian).
Vector sample_sphere(std::size_t d, double radius, Generator& gen);
Vector sample_sphere(std::size_t d, double radius, const RngStream& stream);

class CovarianceSpec;

/// One N(0, Λ) draw.
Vector sample_noise(const CovarianceSpec& cov, Generator& gen);
Vector sample_noise(const CovarianceSpec& cov, const RngStream& stream);

struct FlippedLabels {
    Labels observed;
    /// Zero-based indices where observed differs from clean, ascending.
    std::vector<std::size_t> noisy_set;
};

/// Negates each label independently with probability p.
FlippedLabels flip_labels(std::span<const Label> clean, double p, Generator& gen);
FlippedLabels flip_labels(std::span<const Label> clean, double p, const RngStream& stream);

}  // namespace iclab
