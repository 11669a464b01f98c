// SPDX-License-Identifier: Apache-2.0
#include "life/stats_db.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "life/error.hpp"

namespace life {

using json = nlohmann::ordered_json;

std::string PhaseLabel::str() const {
    switch (kind) {
    case Kind::prefill: return "prefill";
    case Kind::decode: return "decode";
    case Kind::chunk: return "chunk_" + std::to_string(index);
    case Kind::token: return "token_" + std::to_string(index);
    }
    return "?";
}

PhaseLabel PhaseLabel::parse(std::string_view s) {
    if (s == "prefill") return prefill();
    if (s == "decode") return decode();
    auto tail = [&s](std::string_view pfx, Kind k) -> std::optional<PhaseLabel> {
        if (s.substr(0, pfx.size()) != pfx) return std::nullopt;
        std::uint64_t v = 0;
        auto rest = s.substr(pfx.size());
        auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
        if (ec != std::errc() || p != rest.data() + rest.size()) return std::nullopt;
        return PhaseLabel{k, v};
    };
    if (auto c = tail("chunk_", Kind::chunk)) return *c;
    if (auto t = tail("token_", Kind::token)) return *t;
    throw ConfigError("unknown phase label '" + std::string(s) + "'");
}

RunSummary RunSummary::from_rows(std::vector<SummaryRow> rows) {
    std::map<std::pair<PhaseLabel, OpClass>, StatsDelta> merged;
    for (const auto& r : rows) merged[{r.phase, r.op_class}] += r.delta;

    RunSummary s;
    std::map<PhaseLabel, StatsDelta> tokens;
    for (const auto& [key, d] : merged) {
        s.rows.push_back(SummaryRow{key.first, key.second, d});
        s.totals += d;
        s.by_class[key.second] += d;
        if (key.first.kind == PhaseLabel::Kind::token) tokens[key.first] += d;
    }
    for (const auto& [_, d] : tokens) s.per_token.push_back(d);
    s.dispatch_total = s.totals.dispatches;
    return s;
}

std::map<OpClass, double> RunSummary::class_shares() const {
    std::map<OpClass, double> out;
    if (totals.opcount == 0) return out;
    for (const auto& [c, d] : by_class)
        out[c] = 100.0 * static_cast<double>(d.opcount) / static_cast<double>(totals.opcount);
    return out;
}

void StatsDB::record(StatsRecord rec) {
    totals_ += rec.delta;
    records_.push_back(std::move(rec));
}

void StatsDB::update_stats_ops(std::string_view op_class, std::uint64_t opcount, Bytes mem_rd,
                               Bytes mem_wr, ExecMode mode, PhaseLabel phase) {
    StatsRecord r;
    r.op_name = std::string(op_class);
    r.op_class = parse_op_class(op_class);
    r.phase = phase;
    r.mode = mode;
    r.delta.opcount = opcount;
    r.delta.mem_rd = mem_rd;
    r.delta.mem_wr = mem_wr;
    record(std::move(r));
}

RunSummary StatsDB::summarize(const Filter& filter) const {
    std::vector<SummaryRow> rows;
    for (const auto& r : records_)
        if (!filter || filter(r)) rows.push_back(SummaryRow{r.phase, r.op_class, r.delta});
    return RunSummary::from_rows(std::move(rows));
}

Format parse_format(std::string_view s) {
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    throw ConfigError("unknown format '" + std::string(s) + "'");
}

namespace {

json bytes_json(Bytes b) {
    if (b.integral()) return b.nibbles() / 2;
    return b.value();
}

Bytes bytes_from(const json& j) {
    if (j.is_number_unsigned() || j.is_number_integer()) return Bytes::whole(j.get<std::uint64_t>());
    return Bytes::from_nibbles(static_cast<std::uint64_t>(j.get<double>() * 2.0 + 0.5));
}

json delta_json(const StatsDelta& d) {
    json j;
    j["opcount"] = d.opcount;
    j["mem_rd"] = bytes_json(d.mem_rd);
    j["mem_wr"] = bytes_json(d.mem_wr);
    j["kv_rd"] = bytes_json(d.kv_rd);
    j["kv_wr"] = bytes_json(d.kv_wr);
    j["dispatches"] = d.dispatches;
    return j;
}

StatsDelta delta_from(const json& j) {
    StatsDelta d;
    d.opcount = j.at("opcount").get<std::uint64_t>();
    d.mem_rd = bytes_from(j.at("mem_rd"));
    d.mem_wr = bytes_from(j.at("mem_wr"));
    d.kv_rd = bytes_from(j.at("kv_rd"));
    d.kv_wr = bytes_from(j.at("kv_wr"));
    d.dispatches = j.at("dispatches").get<std::uint64_t>();
    return d;
}

const char* kCsvHeader = "phase,op_class,opcount,mem_rd,mem_wr,kv_rd,kv_wr,dispatches\n";

}  // namespace

std::string export_json(const RunSummary& s) {
    json j;
    j["totals"] = delta_json(s.totals);
    json by = json::object();
    for (const auto& [c, d] : s.by_class) by[std::string(to_string(c))] = delta_json(d);
    j["by_class"] = by;
    j["dispatch_total"] = s.dispatch_total;
    json pt = json::array();
    for (const auto& d : s.per_token) pt.push_back(delta_json(d));
    j["per_token"] = pt;
    json rows = json::array();
    for (const auto& r : s.rows) {
        json row;
        row["phase"] = r.phase.str();
        row["op_class"] = to_string(r.op_class);
        const json d = delta_json(r.delta);
        for (const auto& [k, v] : d.items()) row[k] = v;
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

std::string export_csv(const RunSummary& s) {
    std::string out = kCsvHeader;
    for (const auto& r : s.rows) {
        out += r.phase.str() + "," + std::string(to_string(r.op_class)) + "," +
               std::to_string(r.delta.opcount) + "," + r.delta.mem_rd.str() + "," +
               r.delta.mem_wr.str() + "," + r.delta.kv_rd.str() + "," + r.delta.kv_wr.str() +
               "," + std::to_string(r.delta.dispatches) + "\n";
    }
    return out;
}

std::string export_summary(const RunSummary& s, Format f) {
    return f == Format::json ? export_json(s) : export_csv(s);
}

RunSummary import_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("summary: ") + e.what());
    }
    std::vector<SummaryRow> rows;
    for (const auto& r : j.at("rows"))
        rows.push_back(SummaryRow{PhaseLabel::parse(r.at("phase").get<std::string>()),
                                  parse_op_class(r.at("op_class").get<std::string>()),
                                  delta_from(r)});
    return RunSummary::from_rows(std::move(rows));
}

RunSummary import_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line + "\n" != kCsvHeader)
        throw ConfigError("summary CSV: unexpected header");
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (f.size() != 8) throw ConfigError("summary CSV: expected 8 columns");
        StatsDelta d;
        d.opcount = std::stoull(f[2]);
        d.mem_rd = Bytes::parse(f[3]);
        d.mem_wr = Bytes::parse(f[4]);
        d.kv_rd = Bytes::parse(f[5]);
        d.kv_wr = Bytes::parse(f[6]);
        d.dispatches = std::stoull(f[7]);
        rows.push_back(SummaryRow{PhaseLabel::parse(f[0]), parse_op_class(f[1]), d});
    }
    return RunSummary::from_rows(std::move(rows));
}

void write_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path);
}

}  // namespace life
