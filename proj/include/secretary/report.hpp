#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "errors.hpp"

namespace secretary {

using Value = std::variant<std::int64_t, double, bool, std::string>;

inline constexpr int report_digits = 12;

// x rounded to 12 significant digits, so text and binary forms agree exactly.
inline double round_sig(double x) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", report_digits, x);
    return std::strtod(buf, nullptr);
}

// 12 significant digits; always carries a '.' or exponent so it reads back as a real.
inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", report_digits, x);
    std::string s(buf);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

inline std::string to_text(const Value& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::int64_t>)
                return std::to_string(x);
            else if constexpr (std::is_same_v<T, double>)
                return format_number(x);
            else if constexpr (std::is_same_v<T, bool>)
                return x ? "true" : "false";
            else
                return x;
        },
        v);
}

struct Field {
    std::string key;
    Value value;
};

// Flat, ordered key -> value record.
class Record {
public:
    Record& add(std::string key, std::int64_t v) { return put(std::move(key), Value{v}); }
    Record& add(std::string key, int v) { return put(std::move(key), Value{static_cast<std::int64_t>(v)}); }
    Record& add(std::string key, std::uint64_t v) { return put(std::move(key), Value{static_cast<std::int64_t>(v)}); }
    Record& add(std::string key, double v) { return put(std::move(key), Value{round_sig(v)}); }
    Record& add(std::string key, bool v) { return put(std::move(key), Value{v}); }
    Record& add(std::string key, std::string v) { return put(std::move(key), Value{std::move(v)}); }
    Record& add(std::string key, const char* v) { return put(std::move(key), Value{std::string(v)}); }
    Record& add(std::string key, std::string_view v) { return put(std::move(key), Value{std::string(v)}); }

    const std::vector<Field>& fields() const noexcept { return fields_; }

    const Value* find(std::string_view key) const {
        for (const auto& f : fields_)
            if (f.key == key) return &f.value;
        return nullptr;
    }

    bool operator==(const Record& o) const {
        if (fields_.size() != o.fields_.size()) return false;
        for (std::size_t i = 0; i < fields_.size(); ++i)
            if (fields_[i].key != o.fields_[i].key || fields_[i].value != o.fields_[i].value) return false;
        return true;
    }

private:
    Record& put(std::string key, Value v) {
        for (auto& f : fields_)
            if (f.key == key) throw std::logic_error("duplicate report key " + key);
        fields_.push_back({std::move(key), std::move(v)});
        return *this;
    }
    std::vector<Field> fields_;
};

enum class Format { table, csv, json };

inline Format parse_format(std::string_view s) {
    if (s == "table") return Format::table;
    if (s == "csv") return Format::csv;
    if (s == "json" || s == "jsonl") return Format::json;
    throw parse_error("unknown format '" + std::string(s) + "' (expected table, csv or json)", 0);
}

namespace detail {

inline void require_same_keys(const std::vector<Record>& recs) {
    for (const auto& r : recs) {
        if (r.fields().size() != recs.front().fields().size())
            throw std::logic_error("records in one report must share their keys");
        for (std::size_t i = 0; i < r.fields().size(); ++i)
            if (r.fields()[i].key != recs.front().fields()[i].key)
                throw std::logic_error("records in one report must share their keys");
    }
}

inline std::string csv_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string csv_cell(const Value& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return csv_quote(*s);
    return to_text(v);
}

inline nlohmann::ordered_json to_json(const Record& r) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& f : r.fields())
        std::visit([&](const auto& x) { j[f.key] = x; }, f.value);
    return j;
}

// Bare CSV cells are typed by shape; quoted cells are always strings.
inline Value typed_cell(const std::string& s, bool quoted) {
    if (quoted) return s;
    if (s == "true") return true;
    if (s == "false") return false;
    std::int64_t i = 0;
    auto [pi, ei] = std::from_chars(s.data(), s.data() + s.size(), i);
    if (ei == std::errc() && pi == s.data() + s.size() && !s.empty()) return i;
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    double d = 0.0;
    auto [pd, ed] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ed == std::errc() && pd == s.data() + s.size() && !s.empty()) return d;
    return s;
}

}  // namespace detail

inline void write_table(std::ostream& os, const std::vector<Record>& recs) {
    if (recs.empty()) return;
    detail::require_same_keys(recs);
    const auto& keys = recs.front().fields();
    std::vector<std::size_t> width(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) width[i] = keys[i].key.size();
    for (const auto& r : recs)
        for (std::size_t i = 0; i < keys.size(); ++i) width[i] = std::max(width[i], to_text(r.fields()[i].value).size());
    auto line = [&](auto cell) {
        std::string s;
        for (std::size_t i = 0; i < keys.size(); ++i) {
            std::string c = cell(i);
            if (i + 1 < keys.size()) c.resize(width[i] + 2, ' ');
            s += c;
        }
        os << s << '\n';
    };
    line([&](std::size_t i) { return keys[i].key; });
    line([&](std::size_t i) { return std::string(width[i], '-'); });
    for (const auto& r : recs) line([&](std::size_t i) { return to_text(r.fields()[i].value); });
}

inline void write_csv(std::ostream& os, const std::vector<Record>& recs) {
    if (recs.empty()) return;
    detail::require_same_keys(recs);
    const auto& keys = recs.front().fields();
    for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i].key;
    os << "\r\n";
    for (const auto& r : recs) {
        for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << detail::csv_cell(r.fields()[i].value);
        os << "\r\n";
    }
}

// One JSON object per line.
inline void write_json_lines(std::ostream& os, const std::vector<Record>& recs) {
    for (const auto& r : recs) os << detail::to_json(r).dump() << '\n';
}

inline void write_records(std::ostream& os, const std::vector<Record>& recs, Format f) {
    switch (f) {
        case Format::table: write_table(os, recs); break;
        case Format::csv: write_csv(os, recs); break;
        case Format::json: write_json_lines(os, recs); break;
    }
}

inline std::vector<Record> read_csv(std::istream& is) {
    struct Cell {
        std::string text;
        bool quoted = false;
    };
    std::vector<std::vector<Cell>> rows;
    std::vector<Cell> row;
    Cell cell;
    bool in_quotes = false, any = false;
    std::size_t pos = 0;
    char c;
    auto end_cell = [&] {
        row.push_back(std::move(cell));
        cell = {};
    };
    auto end_row = [&] {
        end_cell();
        rows.push_back(std::move(row));
        row.clear();
        any = false;
    };
    while (is.get(c)) {
        ++pos;
        if (in_quotes) {
            if (c == '"') {
                if (is.peek() == '"') {
                    is.get(c);
                    ++pos;
                    cell.text += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                cell.text += c;
            }
            continue;
        }
        if (c == '"') {
            if (!cell.text.empty()) throw parse_error("quote inside an unquoted CSV field", pos);
            in_quotes = true;
            cell.quoted = true;
            any = true;
        } else if (c == ',') {
            end_cell();
            any = true;
        } else if (c == '\r') {
            continue;
        } else if (c == '\n') {
            end_row();
        } else {
            cell.text += c;
            any = true;
        }
    }
    if (in_quotes) throw parse_error("unterminated quoted CSV field", pos);
    if (any) end_row();
    std::vector<Record> out;
    if (rows.empty()) return out;
    const auto header = rows.front();
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != header.size())
            throw parse_error("CSV row " + std::to_string(i) + " has the wrong number of fields", 0);
        Record r;
        for (std::size_t j = 0; j < header.size(); ++j) {
            auto v = detail::typed_cell(rows[i][j].text, rows[i][j].quoted);
            std::visit([&](auto&& x) { r.add(header[j].text, std::forward<decltype(x)>(x)); }, std::move(v));
        }
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<Record> read_json_lines(std::istream& is) {
    std::vector<Record> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::ordered_json j;
        try {
            j = nlohmann::ordered_json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw parse_error("JSON line " + std::to_string(lineno) + ": " + e.what(), e.byte);
        }
        if (!j.is_object()) throw parse_error("JSON line " + std::to_string(lineno) + " is not an object", 0);
        Record r;
        for (auto it = j.begin(); it != j.end(); ++it) {
            const auto& v = it.value();
            if (v.is_boolean())
                r.add(it.key(), v.get<bool>());
            else if (v.is_number_integer())
                r.add(it.key(), v.get<std::int64_t>());
            else if (v.is_number_float())
                r.add(it.key(), v.get<double>());
            else if (v.is_string())
                r.add(it.key(), v.get<std::string>());
            else
                throw parse_error("JSON line " + std::to_string(lineno) + " has a non-scalar value", 0);
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace secretary
