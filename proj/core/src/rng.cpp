// SPDX-License-Identifier: Apache-2.0
#include "iclab/rng.hpp"

#include <cmath>
#include <numbers>

#include "iclab/covariance.hpp"
#include "iclab/error.hpp"

namespace iclab {
namespace {

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c,
                                           std::array<std::uint32_t, 2> k) noexcept {
    constexpr std::uint32_t m0 = 0xD2511F53u;
    constexpr std::uint32_t m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u;
    constexpr std::uint32_t w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(m0, c[0], hi0, lo0);
        mulhilo(m1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += w0;
        k[1] += w1;
    }
    return c;
}

RngStream RngStream::child(std::uint64_t index) const noexcept {
    return {master_seed_, splitmix64(stream_id_ ^ splitmix64(index + 0x632be59bd9b4e019ull))};
}

Generator RngStream::generator() const noexcept { return {master_seed_, stream_id_}; }

Generator::Generator(std::uint64_t key, std::uint64_t stream) noexcept
    : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)}, stream_(stream) {}

void Generator::refill() noexcept {
    const auto out = philox4x32_10({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                                    static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                                   key_);
    ++counter_;
    block_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    block_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    available_ = 2;
}

std::uint64_t Generator::next_u64() noexcept {
    if (available_ == 0) refill();
    return block_[2 - available_--];
}

double Generator::uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Generator::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_normal_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

Vector sample_sphere(std::size_t d, double radius, Generator& gen) {
    if (d == 0) throw InvalidArgument("sample_sphere: dimension must be >= 1");
    if (!(radius >= 0.0)) throw InvalidArgument("sample_sphere: radius must be nonnegative");
    Vector v(d);
    double n2 = 0.0;
    do {
        for (double& x : v) x = gen.normal();
        n2 = squared_norm(v);
    } while (n2 == 0.0);
    if (d == 1) {
        v[0] = std::signbit(v[0]) ? -radius : radius;
        return v;
    }
    const double scale = radius / std::sqrt(n2);
    for (double& x : v) x *= scale;
    return v;
}

Vector sample_sphere(std::size_t d, double radius, const RngStream& stream) {
    Generator gen = stream.generator();
    return sample_sphere(d, radius, gen);
}

Vector sample_noise(const CovarianceSpec& cov, Generator& gen) { return cov.sample(gen); }

Vector sample_noise(const CovarianceSpec& cov, const RngStream& stream) {
    Generator gen = stream.generator();
    return cov.sample(gen);
}

FlippedLabels flip_labels(std::span<const Label> clean, double p, Generator& gen) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("flip_labels: p must lie in [0, 1]");
    FlippedLabels out;
    out.observed.assign(clean.begin(), clean.end());
    for (std::size_t i = 0; i < clean.size(); ++i) {
        if (clean[i] != 1 && clean[i] != -1) throw InvalidArgument("flip_labels: labels must be +1 or -1");
        // always draw, so the stream position does not depend on p
        const bool flip = gen.bernoulli(p);
        if (flip) {
            out.observed[i] = -clean[i];
            out.noisy_set.push_back(i);
        }
    }
    return out;
}

FlippedLabels flip_labels(std::span<const Label> clean, double p, const RngStream& stream) {
    Generator gen = stream.generator();
    return flip_labels(clean, p, gen);
}

}  // namespace iclab
