#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "model.hpp"

namespace secretary {

// Count-model spec:
//   known:n=<int> | uniform:n=<int> | poisson:lambda=<real> | table:<path>
// where the table file is CSV with header "k,p".
namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::int64_t parse_int_at(std::string_view spec, std::size_t at) {
    const auto body = spec.substr(at);
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (ec != std::errc() || p == body.data()) throw parse_error("expected an integer", at);
    if (p != body.data() + body.size())
        throw parse_error("unexpected trailing characters", at + static_cast<std::size_t>(p - body.data()));
    return v;
}

inline double parse_real_at(std::string_view spec, std::size_t at) {
    const auto body = spec.substr(at);
    double v = 0.0;
    auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (ec != std::errc() || p == body.data()) throw parse_error("expected a real number", at);
    if (p != body.data() + body.size())
        throw parse_error("unexpected trailing characters", at + static_cast<std::size_t>(p - body.data()));
    return v;
}

inline std::size_t expect_key(std::string_view spec, std::size_t at, std::string_view key) {
    if (spec.substr(at, key.size() + 1) != std::string(key) + "=")
        throw parse_error("expected '" + std::string(key) + "='", at);
    return at + key.size() + 1;
}

inline CountModel read_pmf_table(const std::string& path, std::size_t at) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open table file '" + path + "'", at);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::pair<std::int64_t, double>> pmf;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty()) continue;
        const auto comma = t.find(',');
        if (comma == std::string_view::npos)
            throw parse_error(path + " line " + std::to_string(lineno) + ": expected two fields", at);
        const auto a = trim(t.substr(0, comma)), b = trim(t.substr(comma + 1));
        if (!header) {
            if (a != "k" || b != "p") throw parse_error(path + " line " + std::to_string(lineno) + ": header must be k,p", at);
            header = true;
            continue;
        }
        std::int64_t k = 0;
        double p = 0.0;
        auto [pk, ek] = std::from_chars(a.data(), a.data() + a.size(), k);
        auto [pp, ep] = std::from_chars(b.data(), b.data() + b.size(), p);
        if (ek != std::errc() || pk != a.data() + a.size() || ep != std::errc() || pp != b.data() + b.size())
            throw parse_error(path + " line " + std::to_string(lineno) + ": malformed row", at);
        pmf.emplace_back(k, p);
    }
    if (!header) throw parse_error(path + ": missing k,p header", at);
    return CountModel::explicit_pmf(std::move(pmf));
}

}  // namespace detail

inline CountModel parse_model_spec(std::string_view spec) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) throw parse_error("expected '<kind>:' in model spec", spec.size());
    const auto kind = spec.substr(0, colon);
    const std::size_t at = colon + 1;
    if (kind == "known" || kind == "uniform") {
        const auto v = detail::parse_int_at(spec, detail::expect_key(spec, at, "n"));
        if (v < 1) throw parse_error("n must be a positive integer", at + 2);
        return kind == "known" ? CountModel::known(v) : CountModel::uniform(v);
    }
    if (kind == "poisson") {
        const std::size_t num = detail::expect_key(spec, at, "lambda");
        const double l = detail::parse_real_at(spec, num);
        if (!(l > 0.0) || l > 700.0) throw parse_error("lambda must lie in (0, 700]", num);
        return CountModel::poisson(l);
    }
    if (kind == "table") {
        if (at >= spec.size()) throw parse_error("expected a file path", at);
        return detail::read_pmf_table(std::string(spec.substr(at)), at);
    }
    throw parse_error("unknown model kind '" + std::string(kind) + "' (expected known, uniform, poisson or table)", 0);
}

}  // namespace secretary
