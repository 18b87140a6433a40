// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "iclab/error.hpp"
#include "iclab/serialize.hpp"

namespace iclab::cli {

const std::vector<KeyInfo>& known_keys() {
    static const std::vector<KeyInfo> keys = {
        {"seed", "master seed"},
        {"threads", "worker threads"},
        {"out", "output path"},
        {"dim", "feature dimension d"},
        {"R", "pre-training signal radius"},
        {"rtilde", "test-time signal radius"},
        {"N", "pre-training context length"},
        {"M", "test-time context length"},
        {"B", "number of pre-training tasks"},
        {"p", "test-time label-flip probability"},
        {"noise_variances", "comma-separated diagonal of the noise covariance"},
        {"loss", "logistic | exponential"},
        {"step_size", "GD step size"},
        {"steps", "GD steps"},
        {"record_every", "loss-trace stride"},
        {"loss_out", "loss-trace CSV path"},
        {"batch", "pre-training batch JSON (solve)"},
        {"tol", "dual solver KKT tolerance"},
        {"max_sweeps", "dual solver sweep cap"},
        {"model", "model JSON (eval)"},
        {"n_eval_tasks", "evaluation tasks"},
        {"queries_per_task", "queries per evaluation task"},
        {"axis", "rtilde | batch_B | dimension | context_M | noise_p"},
        {"values", "comma-separated axis values"},
        {"seeds", "comma-separated seeds"},
        {"trainer", "gd | max_margin"},
        {"r_scale", "R = r_scale * sqrt(d) at each sweep point"},
        {"b_ratio", "B = b_ratio * d at each sweep point"},
        {"rtilde_exponent", "rtilde = d^exponent at each sweep point"},
        {"record_timing", "write wall_ms (true) or 0 (false)"},
        {"target", "assumptions | dataset | scaling | concentration"},
        {"delta", "failure probability"},
        {"c", "bound constant c"},
        {"c0", "envelope constant c0"},
        {"big_c", "assumption constant C"},
        {"c_b", "task-count constant c_B"},
        {"dims", "comma-separated dimensions (scaling)"},
        {"n_samples", "Monte-Carlo samples (concentration)"},
    };
    return keys;
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool is_known(const std::string& key) {
    const auto& keys = known_keys();
    return std::any_of(keys.begin(), keys.end(), [&](const KeyInfo& k) { return key == k.name; });
}

template <typename T>
T convert(const std::string& key, const std::string& text) {
    T value{};
    const std::string t = trim(text);
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ParseError("key '" + key + "': cannot parse '" + text + "'");
    return value;
}

template <typename T>
std::vector<T> convert_list(const std::string& key, const std::string& text) {
    std::vector<T> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(convert<T>(key, item));
    if (out.empty()) throw ParseError("key '" + key + "': empty list");
    return out;
}

}  // namespace

Settings Settings::parse(const std::string& text, const std::string& origin) {
    Settings s;
    std::istringstream in(text);
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        const std::string where = origin + ":" + std::to_string(line_no) + ": ";
        if (eq == std::string::npos) throw ParseError(where + "expected key=value");
        const std::string key = trim(t.substr(0, eq));
        if (!is_known(key)) throw ParseError(where + "unknown key '" + key + "'");
        s.values_[key] = trim(t.substr(eq + 1));
    }
    return s;
}

Settings Settings::load(const std::string& path) { return parse(read_text_file(path), path); }

void Settings::set(const std::string& key, const std::string& value) {
    if (!is_known(key)) throw ParseError("unknown key '" + key + "'");
    values_[key] = value;
}

void Settings::merge(const Settings& other) {
    for (const auto& [k, v] : other.values_) values_[k] = v;
}

std::optional<std::string> Settings::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string Settings::str(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

double Settings::real(const std::string& key, double fallback) const {
    const auto v = get(key);
    return v ? convert<double>(key, *v) : fallback;
}

std::size_t Settings::count(const std::string& key, std::size_t fallback) const {
    const auto v = get(key);
    return v ? convert<std::size_t>(key, *v) : fallback;
}

std::uint64_t Settings::u64(const std::string& key, std::uint64_t fallback) const {
    const auto v = get(key);
    return v ? convert<std::uint64_t>(key, *v) : fallback;
}

bool Settings::flag(const std::string& key, bool fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ParseError("key '" + key + "': expected true or false, got '" + *v + "'");
}

std::vector<double> Settings::reals(const std::string& key, std::vector<double> fallback) const {
    const auto v = get(key);
    return v ? convert_list<double>(key, *v) : fallback;
}

std::vector<std::uint64_t> Settings::u64s(const std::string& key, std::vector<std::uint64_t> fallback) const {
    const auto v = get(key);
    return v ? convert_list<std::uint64_t>(key, *v) : fallback;
}

}  // namespace iclab::cli
