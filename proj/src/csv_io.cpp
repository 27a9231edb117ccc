#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "omht/csv_io.hpp"
#include "omht/errors.hpp"

namespace omht {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
    char buf[40];
    if (std::isnan(v)) return "nan";
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

// FNV-1a, 64 bit: tiny, stable across platforms, good enough to detect a
// config edit between runs. Not a cryptographic digest.
std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& tok, const std::string& path, std::size_t line_no) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str()) {
        throw IoError("read_csv: bad number '" + tok + "' in " + path + ":" +
                      std::to_string(line_no));
    }
    return v;
}

}  // namespace

void emit_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("emit_csv: cannot open '" + path + "' for writing");
    }
    out << kCsvHeader << "\r\n";
    for (const SweepRow& r : result.rows) {
        out << fmt_double(r.t) << ',' << selector_name(r.selector) << ','
            << fmt_double(r.phi) << ',' << fmt_double(r.delta) << ','
            << fmt_double(r.n1) << ',' << fmt_double(r.n2) << ','
            << r.N << ',' << fmt_double(r.alpha) << ','
            << fmt_double(r.V0) << ',' << fmt_double(r.V1) << ','
            << fmt_double(r.F) << ',' << fmt_double(r.C) << ','
            << fmt_double(r.Perr) << ',' << fmt_double(r.Q_pct) << "\r\n";
    }
    out.flush();
    if (!out) {
        throw IoError("emit_csv: write to '" + path + "' failed");
    }
}

void emit_metadata(const std::vector<ScenarioConfig>& cfgs, const SweepResult& result,
                   const std::string& csv_path, int threads) {
    json meta;
    meta["code_version"] = kCodeVersion;
    meta["prng"] = kPrngDescription;
    meta["csv"] = csv_path;
    meta["rows"] = result.rows.size();
    meta["threads"] = threads;
    // Wall-clock stamp; everything else in this file and in the CSV is a pure
    // function of the configs below.
    meta["generated_unix_time"] = static_cast<std::int64_t>(std::time(nullptr));

    std::string all_cfg_text;
    json cfg_array = json::array();
    for (const ScenarioConfig& c : cfgs) {
        const std::string text = config_to_json(c);
        all_cfg_text += text;
        cfg_array.push_back(json::parse(text));
    }
    char hash_buf[20];
    std::snprintf(hash_buf, sizeof(hash_buf), "%016" PRIx64, fnv1a64(all_cfg_text));
    meta["config_hash_fnv1a64"] = hash_buf;
    meta["configs"] = cfg_array;

    json flagged = json::array();
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        if (!result.rows[i].diagnostics.empty()) {
            flagged.push_back({{"row", i}, {"note", result.rows[i].diagnostics}});
        }
    }
    meta["flagged_rows"] = flagged;

    const std::string meta_path = csv_path + ".meta.json";
    std::ofstream out(meta_path, std::ios::binary);
    if (!out) {
        throw IoError("emit_metadata: cannot open '" + meta_path + "' for writing");
    }
    out << meta.dump(2) << "\n";
    out.flush();
    if (!out) {
        throw IoError("emit_metadata: write to '" + meta_path + "' failed");
    }
}

SweepResult read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("read_csv: cannot open '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("read_csv: '" + path + "' is empty");
    }
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line != kCsvHeader) {
        throw IoError("read_csv: unexpected header in '" + path + "'");
    }
    SweepResult result;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        const auto tok = split_csv_line(line);
        if (tok.size() != 14) {
            throw IoError("read_csv: expected 14 fields, got " + std::to_string(tok.size()) +
                          " in " + path + ":" + std::to_string(line_no));
        }
        SweepRow r;
        r.t = parse_double(tok[0], path, line_no);
        r.selector = selector_from_name(tok[1]);
        r.phi = parse_double(tok[2], path, line_no);
        r.delta = parse_double(tok[3], path, line_no);
        r.n1 = parse_double(tok[4], path, line_no);
        r.n2 = parse_double(tok[5], path, line_no);
        r.N = static_cast<int>(parse_double(tok[6], path, line_no));
        r.alpha = parse_double(tok[7], path, line_no);
        r.V0 = parse_double(tok[8], path, line_no);
        r.V1 = parse_double(tok[9], path, line_no);
        r.F = parse_double(tok[10], path, line_no);
        r.C = parse_double(tok[11], path, line_no);
        r.Perr = parse_double(tok[12], path, line_no);
        r.Q_pct = parse_double(tok[13], path, line_no);
        result.rows.push_back(std::move(r));
    }
    return result;
}

}  // namespace omht
