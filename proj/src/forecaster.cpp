// SPDX-License-Identifier: Apache-2.0
#include "life/forecaster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "life/derived_ops.hpp"
#include "life/error.hpp"
#include "life/foundational_ops.hpp"

namespace life {
namespace {

constexpr double kTera = 1e12;

double dispatch_time(const RunSummary& s, const HardwareSpec& hw) {
    return static_cast<double>(s.dispatch_total) * hw.dispatch_latency;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

double time_compute(const RunSummary& s, const HardwareSpec& hw, const EfficiencyProfile& eff) {
    validate(hw);
    double t = 0;
    for (const auto& [cls, d] : s.by_class)
        t += static_cast<double>(d.opcount) / (eff.compute(cls) * hw.peak_tops * kTera);
    return t + dispatch_time(s, hw);
}

double time_memory(const RunSummary& s, const HardwareSpec& hw, const EfficiencyProfile& eff) {
    validate(hw);
    double t = 0;
    for (const auto& [cls, d] : s.by_class)
        t += d.traffic().value() / (eff.memory(cls) * hw.peak_bw * kGB);
    return t + dispatch_time(s, hw);
}

ForecastResult forecast_ttft(const RunSummary& s, const HardwareSpec& hw,
                             const EfficiencyProfile& eff) {
    ForecastResult r;
    r.t_c = time_compute(s, hw, eff);
    r.t_m = time_memory(s, hw, eff);
    r.ttft = std::max(r.t_c, r.t_m);
    r.tc_over_tm = r.t_m > 0 ? r.t_c / r.t_m : 0.0;
    return r;
}

ForecastResult forecast_tpot_tps(const StatsDelta& token, const HardwareSpec& hw,
                                 const EfficiencyProfile& eff) {
    validate(hw);
    ForecastResult r;
    r.tpot = token.traffic().value() / (hw.peak_bw * kGB * eff.memory_avg()) +
             static_cast<double>(token.dispatches) * hw.dispatch_latency;
    if (!(r.tpot > 0)) throw ForecastError("TPS undefined: zero time per token");
    r.tps = 1.0 / r.tpot;
    return r;
}

ForecastResult forecast_tpot_tps(const RunSummary& s, const HardwareSpec& hw,
                                 const EfficiencyProfile& eff) {
    if (s.per_token.empty()) return forecast_tpot_tps(s.totals, hw, eff);
    ForecastResult r;
    double sum = 0;
    for (const auto& d : s.per_token) sum += forecast_tpot_tps(d, hw, eff).tpot;
    r.tpot = sum / static_cast<double>(s.per_token.size());
    r.tps = 1.0 / r.tpot;
    return r;
}

double forecast_lora_update(const ModelConfig& cfg, const HardwareSpec& hw,
                            const EfficiencyProfile& eff, std::optional<std::uint64_t> rank) {
    validate(hw);
    const StatsDelta d = lora_merge_total(cfg, rank);
    if (d.opcount == 0) return 0.0;
    const double tc = static_cast<double>(d.opcount) / (eff.compute(OpClass::gemm) * hw.peak_tops * kTera);
    const double tm = d.traffic().value() / (eff.memory(OpClass::gemm) * hw.peak_bw * kGB);
    return std::max(tc, tm);
}

std::vector<double> parse_axis(std::string_view spec) {
    double v[3];
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        auto end = spec.find(':', pos);
        if ((i < 2) == (end == std::string_view::npos))
            throw ConfigError("axis must look like lo:hi:step, got '" + std::string(spec) + "'");
        std::string part(spec.substr(pos, end == std::string_view::npos ? spec.npos : end - pos));
        try {
            std::size_t used = 0;
            v[i] = std::stod(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw ConfigError("bad axis value '" + part + "'");
        }
        pos = end + 1;
    }
    if (!(v[0] > 0) || v[1] < v[0] || !(v[2] > 0))
        throw ConfigError("axis needs 0 < lo <= hi and step > 0");
    std::vector<double> out;
    for (int i = 0;; ++i) {
        const double x = v[0] + i * v[2];
        if (x > v[1] * (1 + 1e-12)) break;
        out.push_back(x);
    }
    return out;
}

std::vector<double> default_axis() { return parse_axis("10:100:10"); }

std::vector<GridPoint> efficiency_grid(const RunSummary& s, const std::vector<double>& tops_axis,
                                       const std::vector<double>& bw_axis,
                                       const std::vector<double>& ec_axis,
                                       const std::vector<double>& em_axis,
                                       double dispatch_latency) {
    std::vector<GridPoint> out;
    out.reserve(tops_axis.size() * bw_axis.size() * ec_axis.size() * em_axis.size());
    for (double tops : tops_axis)
        for (double bw : bw_axis)
            for (double ec : ec_axis)
                for (double em : em_axis) {
                    HardwareSpec hw{tops, bw, dispatch_latency, std::nullopt};
                    const auto eff = EfficiencyProfile::uniform(ec, em);
                    validate(eff);
                    out.push_back(GridPoint{tops, bw, ec, em, forecast_ttft(s, hw, eff)});
                }
    return out;
}

std::string grid_csv(const std::vector<GridPoint>& grid) {
    std::string out = "tops,bw,ec,em,t_c,t_m,tc_over_tm,ttft\n";
    for (const auto& p : grid)
        out += fmt(p.tops) + "," + fmt(p.bw) + "," + fmt(p.ec) + "," + fmt(p.em) + "," +
               fmt(p.result.t_c) + "," + fmt(p.result.t_m) + "," + fmt(p.result.tc_over_tm) +
               "," + fmt(p.result.ttft) + "\n";
    return out;
}

std::vector<TilingRow> bmm_tiling_efficiency(const std::vector<std::uint64_t>& tile_sizes,
                                             std::uint64_t head_dim, std::uint64_t heads,
                                             std::uint64_t seq_lo, std::uint64_t seq_hi) {
    if (seq_lo == 0 || seq_hi < seq_lo) throw ConfigError("tiling: need 1 <= seq_lo <= seq_hi");
    auto step_ops = [&](std::uint64_t len) {
        return bmm(heads, 1, head_dim, len, DataType::bf16).opcount +
               bmm(heads, 1, len, head_dim, DataType::bf16).opcount;
    };
    std::vector<TilingRow> out;
    for (std::uint64_t tile : tile_sizes) {
        if (tile == 0) throw ConfigError("tiling: tile size must be positive");
        std::uint64_t ci = 0, cp = 0;
        for (std::uint64_t s = seq_lo; s <= seq_hi; ++s) {
            TilingRow r;
            r.tile = tile;
            r.seq = s;
            r.ideal_ops = step_ops(s);
            r.padded_ops = step_ops((s + tile - 1) / tile * tile);
            r.efficiency = static_cast<double>(r.ideal_ops) / static_cast<double>(r.padded_ops);
            ci += r.ideal_ops;
            cp += r.padded_ops;
            r.running_avg = static_cast<double>(ci) / static_cast<double>(cp);
            r.cum_ideal = ci;
            r.cum_padded = cp;
            out.push_back(r);
        }
    }
    return out;
}

TpsTimeline decode_tps_timeline(const RunSummary& run, const HardwareSpec& hw,
                                const EfficiencyProfile& eff) {
    TpsTimeline t;
    for (const auto& d : run.per_token) {
        const auto r = forecast_tpot_tps(d, hw, eff);
        t.tpot.push_back(r.tpot);
        t.tps.push_back(r.tps);
        t.traffic.push_back(d.traffic());
    }
    if (!t.tps.empty()) {
        t.first = t.tps.front();
        t.last = t.tps.back();
        t.drop_pct = 100.0 * (t.first - t.last) / t.first;
    }
    return t;
}

std::string timeline_csv(const TpsTimeline& t) {
    std::string out = "token_index,mem_rd,tpot,tps\n";
    for (std::size_t i = 0; i < t.tps.size(); ++i)
        out += std::to_string(i + 1) + "," + t.traffic[i].str() + "," + fmt(t.tpot[i]) + "," +
               fmt(t.tps[i]) + "\n";
    return out;
}

}  // namespace life
