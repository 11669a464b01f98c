// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "life/config.hpp"
#include "life/stats_db.hpp"

namespace life {

struct ForecastResult {
    double t_c = 0;
    double t_m = 0;
    double ttft = 0;
    double tpot = 0;
    double tps = 0;
    double t_lora = 0;
    double tc_over_tm = 0;
};

// Per-class ops / (ec * peak_tops) plus dispatches * latency.
double time_compute(const RunSummary& s, const HardwareSpec& hw, const EfficiencyProfile& eff);
// Per-class (rd + wr + kv_rd + kv_wr) / (em * peak_bw) plus dispatches * latency.
double time_memory(const RunSummary& s, const HardwareSpec& hw, const EfficiencyProfile& eff);

ForecastResult forecast_ttft(const RunSummary& s, const HardwareSpec& hw,
                             const EfficiencyProfile& eff);

// TPOT = traffic / (peak_bw * em_avg) + dispatches * latency; TPS = 1 / TPOT.
// Throws ForecastError when TPOT is zero.
ForecastResult forecast_tpot_tps(const StatsDelta& token, const HardwareSpec& hw,
                                 const EfficiencyProfile& eff);
// Mean over the run's tokens, or the whole run as one token when it has none.
ForecastResult forecast_tpot_tps(const RunSummary& s, const HardwareSpec& hw,
                                 const EfficiencyProfile& eff);

// Ahead-of-time adapter merge: max of compute and memory terms. 0 without a rank.
double forecast_lora_update(const ModelConfig& cfg, const HardwareSpec& hw,
                            const EfficiencyProfile& eff, std::optional<std::uint64_t> rank = {});

struct GridPoint {
    double tops = 0;
    double bw = 0;
    double ec = 1;
    double em = 1;
    ForecastResult result;
};

// Inclusive "lo:hi:step" range.
std::vector<double> parse_axis(std::string_view spec);
std::vector<double> default_axis();  // 10..100 step 10

// Cross product ordered by tops, then bw, then ec, then em. Each point
// uses a uniform efficiency profile.
std::vector<GridPoint> efficiency_grid(const RunSummary& s, const std::vector<double>& tops_axis,
                                       const std::vector<double>& bw_axis,
                                       const std::vector<double>& ec_axis = {1.0},
                                       const std::vector<double>& em_axis = {1.0},
                                       double dispatch_latency = 0.0);
std::string grid_csv(const std::vector<GridPoint>& grid);

struct TilingRow {
    std::uint64_t tile = 0;
    std::uint64_t seq = 0;
    std::uint64_t ideal_ops = 0;
    std::uint64_t padded_ops = 0;
    double efficiency = 0;
    double running_avg = 0;  // cum_ideal / cum_padded, i.e. weighted by work
    std::uint64_t cum_ideal = 0;
    std::uint64_t cum_padded = 0;
};

// Decode-step QK^T and PV BMMs with the key length padded to the tile.
std::vector<TilingRow> bmm_tiling_efficiency(const std::vector<std::uint64_t>& tile_sizes,
                                             std::uint64_t head_dim, std::uint64_t heads,
                                             std::uint64_t seq_lo, std::uint64_t seq_hi);

struct TpsTimeline {
    std::vector<double> tpot;
    std::vector<double> tps;
    std::vector<Bytes> traffic;
    double first = 0;
    double last = 0;
    double drop_pct = 0;  // 100 * (first - last) / first
};

TpsTimeline decode_tps_timeline(const RunSummary& run, const HardwareSpec& hw,
                                const EfficiencyProfile& eff);
std::string timeline_csv(const TpsTimeline& t);

}  // namespace life
