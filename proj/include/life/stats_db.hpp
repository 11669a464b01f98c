// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "life/config.hpp"
#include "life/stats_delta.hpp"

namespace life {

// prefill < chunk_0 < chunk_1 < ... < decode < token_0 < token_1 < ...
struct PhaseLabel {
    enum class Kind { prefill, chunk, decode, token };
    Kind kind = Kind::prefill;
    std::uint64_t index = 0;  // chunk or token number

    static PhaseLabel prefill() { return {Kind::prefill, 0}; }
    static PhaseLabel decode() { return {Kind::decode, 0}; }
    static PhaseLabel chunk(std::uint64_t i) { return {Kind::chunk, i}; }
    static PhaseLabel token(std::uint64_t t) { return {Kind::token, t}; }

    std::string str() const;
    static PhaseLabel parse(std::string_view s);
    friend auto operator<=>(const PhaseLabel&, const PhaseLabel&) = default;
};

struct StatsRecord {
    std::string op_name;
    OpClass op_class = OpClass::other;
    PhaseLabel phase;
    ExecMode mode = ExecMode::eager;
    StatsDelta delta;
};

struct SummaryRow {
    PhaseLabel phase;
    OpClass op_class;
    StatsDelta delta;
    friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

struct RunSummary {
    StatsDelta totals;
    std::map<OpClass, StatsDelta> by_class;
    std::vector<StatsDelta> per_token;  // token phases only, in order
    std::uint64_t dispatch_total = 0;
    std::vector<SummaryRow> rows;       // sorted by (phase, class)

    // Everything else is derived from the rows.
    static RunSummary from_rows(std::vector<SummaryRow> rows);
    // Percent of opcount per class.
    std::map<OpClass, double> class_shares() const;
    friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

class StatsDB {
public:
    using Filter = std::function<bool(const StatsRecord&)>;

    void record(StatsRecord rec);
    // Same call shape as the reference update_stats_ops.
    void update_stats_ops(std::string_view op_class, std::uint64_t opcount, Bytes mem_rd,
                          Bytes mem_wr, ExecMode mode, PhaseLabel phase = PhaseLabel::prefill());

    const std::vector<StatsRecord>& records() const { return records_; }
    const StatsDelta& totals() const { return totals_; }
    RunSummary summarize(const Filter& filter = {}) const;

private:
    std::vector<StatsRecord> records_;
    StatsDelta totals_;
};

enum class Format { json, csv };
Format parse_format(std::string_view s);

std::string export_json(const RunSummary& s);
std::string export_csv(const RunSummary& s);
std::string export_summary(const RunSummary& s, Format f);
RunSummary import_json(std::string_view text);
RunSummary import_csv(std::string_view text);

// Writes text to path; throws std::runtime_error if the file can't be written.
void write_file(const std::string& path, std::string_view text);

// Rendered units: GOPs/TOPs are decimal, GB is 2^30 bytes.
inline constexpr double kGB = 1073741824.0;
inline double to_gb(Bytes b) { return b.value() / kGB; }
inline double to_gops(std::uint64_t ops) { return static_cast<double>(ops) / 1e9; }
inline double to_tops(std::uint64_t ops) { return static_cast<double>(ops) / 1e12; }

}  // namespace life
