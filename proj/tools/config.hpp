// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace iclab::cli {

struct KeyInfo {
    const char* name;
    const char* help;
};

/// Every key accepted in a config file; each is also a --name flag.
const std::vector<KeyInfo>& known_keys();

/// Flat key=value settings. Blank lines and lines starting with '#' are
/// ignored. Unknown keys and malformed lines raise ParseError.
class Settings {
  public:
    static Settings parse(const std::string& text, const std::string& origin = "config");
    static Settings load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    /// Values from `other` replace ours.
    void merge(const Settings& other);

    [[nodiscard]] bool has(const std::string& key) const { return values_.contains(key); }
    [[nodiscard]] std::optional<std::string> get(const std::string& key) const;

    [[nodiscard]] std::string str(const std::string& key, const std::string& fallback) const;
    [[nodiscard]] double real(const std::string& key, double fallback) const;
    [[nodiscard]] std::size_t count(const std::string& key, std::size_t fallback) const;
    [[nodiscard]] std::uint64_t u64(const std::string& key, std::uint64_t fallback) const;
    [[nodiscard]] bool flag(const std::string& key, bool fallback) const;
    [[nodiscard]] std::vector<double> reals(const std::string& key, std::vector<double> fallback) const;
    [[nodiscard]] std::vector<std::uint64_t> u64s(const std::string& key, std::vector<std::uint64_t> fallback) const;

  private:
    std::map<std::string, std::string> values_;
};

}  // namespace iclab::cli
