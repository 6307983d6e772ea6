#include "dwellclick/click_log.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "dwellclick/error.hpp"
#include "dwellclick/format.hpp"

namespace dwell {

namespace {

constexpr std::array<const char*, 7> kColumns = {"ad_id", "app_id", "platform", "timestamp",
                                                 "dwell_seconds", "cpc", "converted"};

// Splits one CSV line. Double-quoted fields may contain commas and "" escapes.
std::optional<std::vector<std::string>> split_csv(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) return std::nullopt;
    fields.push_back(std::move(cur));
    return fields;
}

std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<bool> parse_bool(std::string_view s) {
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false") return false;
    return std::nullopt;
}

// Shared checks on an assembled record; returns the rejection reason or empty.
std::string check_record(const ClickRecord& r) {
    if (r.ad_id.empty()) return "empty ad_id";
    if (r.app_id.empty()) return "empty app_id";
    if (!std::isfinite(r.dwell_seconds)) return "non-finite dwell";
    if (r.dwell_seconds < 0.0) return "negative dwell";
    if (r.cpc && (!std::isfinite(*r.cpc) || *r.cpc < 0.0)) return "invalid cpc";
    return {};
}

std::string parse_csv_row(std::string_view line, ClickRecord& out) {
    const auto fields = split_csv(line);
    if (!fields) return "unterminated quote";
    if (fields->size() != kColumns.size()) {
        return "expected " + std::to_string(kColumns.size()) + " fields, got " + std::to_string(fields->size());
    }
    const auto& f = *fields;
    out.ad_id = f[0];
    out.app_id = f[1];
    const auto platform = parse_platform(f[2]);
    if (!platform) return "unknown platform '" + f[2] + "'";
    out.platform = *platform;
    const auto ts = parse_int(f[3]);
    if (!ts) return "bad timestamp";
    out.timestamp = *ts;
    const auto dwell = parse_double(f[4]);
    if (!dwell) return "bad dwell_seconds";
    out.dwell_seconds = *dwell;
    if (!f[5].empty()) {
        const auto cpc = parse_double(f[5]);
        if (!cpc) return "bad cpc";
        out.cpc = *cpc;
    }
    if (!f[6].empty()) {
        const auto conv = parse_bool(f[6]);
        if (!conv) return "bad converted";
        out.converted = *conv;
    }
    return check_record(out);
}

std::string parse_json_row(std::string_view line, ClickRecord& out) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
        return "malformed json";
    }
    if (!j.is_object()) return "line is not a json object";
    for (const char* col : {"ad_id", "app_id", "platform", "timestamp", "dwell_seconds"}) {
        if (!j.contains(col) || j[col].is_null()) return std::string("missing field ") + col;
    }
    if (!j["ad_id"].is_string() || !j["app_id"].is_string() || !j["platform"].is_string()) {
        return "id and platform fields must be strings";
    }
    out.ad_id = j["ad_id"].get<std::string>();
    out.app_id = j["app_id"].get<std::string>();
    const auto platform = parse_platform(j["platform"].get<std::string>());
    if (!platform) return "unknown platform '" + j["platform"].get<std::string>() + "'";
    out.platform = *platform;
    if (!j["timestamp"].is_number_integer()) return "bad timestamp";
    out.timestamp = j["timestamp"].get<std::int64_t>();
    if (!j["dwell_seconds"].is_number()) return "bad dwell_seconds";
    out.dwell_seconds = j["dwell_seconds"].get<double>();
    if (j.contains("cpc") && !j["cpc"].is_null()) {
        if (!j["cpc"].is_number()) return "bad cpc";
        out.cpc = j["cpc"].get<double>();
    }
    if (j.contains("converted") && !j["converted"].is_null()) {
        const auto& c = j["converted"];
        if (c.is_boolean()) {
            out.converted = c.get<bool>();
        } else if (c.is_number_integer() && (c.get<int>() == 0 || c.get<int>() == 1)) {
            out.converted = c.get<int>() == 1;
        } else {
            return "bad converted";
        }
    }
    return check_record(out);
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::optional<LogFormat> parse_log_format(std::string_view text) {
    if (text == "csv") return LogFormat::csv;
    if (text == "jsonl") return LogFormat::jsonl;
    return std::nullopt;
}

const char* to_string(LogFormat f) { return f == LogFormat::csv ? "csv" : "jsonl"; }

ParsedLog parse_click_log(std::istream& in, LogFormat format) {
    ParsedLog out;
    std::string line;
    std::size_t lineno = 0;

    if (format == LogFormat::csv) {
        if (!std::getline(in, line)) throw Error(ErrorKind::schema, "empty csv input: missing header");
        ++lineno;
        strip_cr(line);
        const auto header = split_csv(line).value_or(std::vector<std::string>{});
        std::string missing;
        for (const char* col : kColumns) {
            bool found = false;
            for (const auto& h : header) found = found || h == col;
            if (!found) missing += (missing.empty() ? "" : ", ") + std::string(col);
        }
        if (!missing.empty()) throw Error(ErrorKind::schema, "csv header is missing columns: " + missing);
        if (header.size() != kColumns.size() || line != kCsvHeader) {
            throw Error(ErrorKind::schema, std::string("csv header must be exactly '") + kCsvHeader + "'");
        }
    }

    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        ClickRecord rec;
        std::string reason = format == LogFormat::csv ? parse_csv_row(line, rec) : parse_json_row(line, rec);
        if (reason.empty()) {
            out.records.push_back(std::move(rec));
        } else {
            out.rejections.push_back({lineno, std::move(reason)});
        }
    }
    if (in.bad()) throw Error(ErrorKind::io, "read failure");
    return out;
}

ParsedLog read_click_log(const std::string& path, LogFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path);
    return parse_click_log(in, format);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q.push_back('"');
        q.push_back(c);
    }
    q.push_back('"');
    return q;
}

}  // namespace

void write_click_log(std::ostream& out, const std::vector<ClickRecord>& records, LogFormat format) {
    if (format == LogFormat::csv) {
        out << kCsvHeader << '\n';
        for (const auto& r : records) {
            out << csv_field(r.ad_id) << ',' << csv_field(r.app_id) << ',' << to_string(r.platform) << ','
                << r.timestamp << ',' << format_double(r.dwell_seconds) << ','
                << (r.cpc ? format_double(*r.cpc) : "") << ','
                << (r.converted ? (*r.converted ? "1" : "0") : "") << '\n';
        }
        return;
    }
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["ad_id"] = r.ad_id;
        j["app_id"] = r.app_id;
        j["platform"] = to_string(r.platform);
        j["timestamp"] = r.timestamp;
        j["dwell_seconds"] = r.dwell_seconds;
        j["cpc"] = r.cpc ? nlohmann::ordered_json(*r.cpc) : nlohmann::ordered_json(nullptr);
        j["converted"] = r.converted ? nlohmann::ordered_json(*r.converted) : nlohmann::ordered_json(nullptr);
        out << j.dump() << '\n';
    }
}

void write_click_log(const std::string& path, const std::vector<ClickRecord>& records, LogFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write " + path);
    write_click_log(out, records, format);
    if (!out) throw Error(ErrorKind::io, "write failure on " + path);
}

void IngestConfig::validate() const {
    if (!(outlier_cap_seconds > 0.0)) throw Error(ErrorKind::contract, "outlier cap must be positive");
    if (min_clicks_threshold == 0 || min_clicks_discount == 0) {
        throw Error(ErrorKind::contract, "minimum click floors must be positive");
    }
}

PreprocessResult preprocess(const std::vector<ClickRecord>& records, const IngestConfig& cfg,
                            std::size_t min_clicks) {
    cfg.validate();
    PreprocessResult out;
    out.stats.total = records.size();
    for (const auto& r : records) {
        if (!(r.dwell_seconds > 0.0)) {
            ++out.stats.nonpositive_dropped;
            continue;
        }
        if (r.dwell_seconds > cfg.outlier_cap_seconds) {
            ++out.stats.outliers_dropped;
            continue;
        }
        const double x = std::log(r.dwell_seconds);
        if (!std::isfinite(x)) {
            ++out.stats.outliers_dropped;
            continue;
        }
        auto& sample = out.samples[{r.ad_id, r.app_id}];
        if (sample.ad_id.empty()) {
            sample.ad_id = r.ad_id;
            sample.app_id = r.app_id;
        }
        sample.log_dwell.push_back(x);
    }
    out.stats.groups = out.samples.size();
    for (auto& [key, sample] : out.samples) {
        sample.low_sample = sample.n() < min_clicks;
        if (sample.low_sample) ++out.stats.low_sample_groups;
    }
    return out;
}

FilterResult filter_accidental(const std::vector<ClickRecord>& records, const ThresholdMap& thresholds,
                               const ThresholdEstimate& default_threshold) {
    FilterResult out;
    for (const auto& r : records) {
        if (is_accidental(r.dwell_seconds, threshold_for(r.app_id, thresholds, default_threshold))) {
            out.removed.push_back(r);
        } else {
            out.kept.push_back(r);
        }
    }
    return out;
}

}  // namespace dwell
