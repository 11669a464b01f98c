// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "life/error.hpp"
#include "life/forecaster.hpp"
#include "life/simulator.hpp"

using namespace life;

namespace {

RunSummary one_row(OpClass c, std::uint64_t ops, double bytes, std::uint64_t dispatches = 1) {
    StatsDelta d;
    d.opcount = ops;
    d.mem_rd = Bytes::whole(static_cast<std::uint64_t>(bytes));
    d.dispatches = dispatches;
    return RunSummary::from_rows({SummaryRow{PhaseLabel::prefill(), c, d}});
}

HardwareSpec hw(double tops, double bw, double lat = 0) {
    HardwareSpec h;
    h.peak_tops = tops;
    h.peak_bw = bw;
    h.dispatch_latency = lat;
    return h;
}

}  // namespace

TEST_CASE("tpot is traffic over bandwidth") {
    StatsDelta tok;
    tok.mem_rd = Bytes::whole(static_cast<std::uint64_t>(12.85 * kGB));
    EfficiencyProfile e;
    e.em_avg = 1.0;
    auto r = forecast_tpot_tps(tok, hw(1, 240), e);
    CHECK(r.tpot == doctest::Approx(12.85 / 240).epsilon(1e-6));
    CHECK(r.tpot * 1000 == doctest::Approx(53.5).epsilon(0.001));
    CHECK(r.tps * r.tpot == doctest::Approx(1.0));
    e.em_avg = 0.1;
    r = forecast_tpot_tps(tok, hw(1, 240), e);
    CHECK(r.tpot * 1000 == doctest::Approx(535.4).epsilon(0.001));
}

TEST_CASE("ttft on a CPU-class part") {
    const auto s = simulate_prefill(build_model(preset_variant("bf16-bf16")), 1024);
    const auto full = forecast_ttft(s, hw(0.3264, 240), EfficiencyProfile::uniform(1, 1));
    // 14.6 TOPs / 0.3264
    CHECK(full.t_c == doctest::Approx(to_tops(s.totals.opcount) / 0.3264));
    CHECK(full.ttft == doctest::Approx(43.17).epsilon(0.01));
    const auto half = forecast_ttft(s, hw(0.3264, 240), EfficiencyProfile::uniform(0.5, 1));
    CHECK(half.ttft == doctest::Approx(2 * full.ttft));
    const auto big = simulate_prefill(build_model(preset_variant("bf16-bf16")), 2048);
    CHECK(forecast_ttft(big, hw(0.3264, 240), EfficiencyProfile::uniform(1, 1)).ttft ==
          doctest::Approx(89.74).epsilon(0.01));
    CHECK(forecast_ttft(big, hw(0.3264, 240), EfficiencyProfile::uniform(0.5, 1)).ttft ==
          doctest::Approx(179.47).epsilon(0.01));
}

TEST_CASE("forecast laws on random summaries") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint64_t> ops(1, 1ull << 44), bytes(1, 1ull << 36), disp(0, 1000);
    std::uniform_real_distribution<double> frac(0.05, 1.0), tops(0.1, 500), bw(1, 4000), lat(0, 1e-5);
    for (int i = 0; i < 10000; ++i) {
        const auto s = one_row(OpClass::gemm, ops(rng), static_cast<double>(bytes(rng)), disp(rng));
        const auto h = hw(tops(rng), bw(rng), lat(rng));
        const double ec = frac(rng), em = frac(rng);
        const auto r = forecast_ttft(s, h, EfficiencyProfile::uniform(ec, em));
        REQUIRE(r.ttft == std::max(r.t_c, r.t_m));
        REQUIRE(r.tc_over_tm == doctest::Approx(r.t_c / r.t_m));
        const auto lower = forecast_ttft(s, h, EfficiencyProfile::uniform(ec * 0.5, em * 0.5));
        REQUIRE(lower.ttft >= r.ttft);
        EfficiencyProfile pe;
        pe.em_avg = em;
        const auto d = forecast_tpot_tps(s, h, pe);
        REQUIRE(d.tps * d.tpot == doctest::Approx(1.0));
        pe.em_avg = em * 0.5;
        REQUIRE(forecast_tpot_tps(s, h, pe).tpot >= d.tpot);
    }
}

TEST_CASE("doubling hardware halves time") {
    const auto s = one_row(OpClass::gemm, 1'000'000'000'000ull, 5e9);
    const auto a = forecast_ttft(s, hw(10, 100), EfficiencyProfile::uniform(1, 1));
    const auto b = forecast_ttft(s, hw(20, 200), EfficiencyProfile::uniform(1, 1));
    CHECK(b.t_c == doctest::Approx(a.t_c / 2));
    CHECK(b.t_m == doctest::Approx(a.t_m / 2));
    CHECK(a.t_c == doctest::Approx(0.1));
    CHECK(a.t_m == doctest::Approx(5e9 / (100 * kGB)));
}

TEST_CASE("dispatch latency adds to both terms") {
    const auto s = one_row(OpClass::other, 0, 0, 100);
    const auto r = forecast_ttft(s, hw(1, 1, 1e-3), EfficiencyProfile::uniform(1, 1));
    CHECK(r.t_c == doctest::Approx(0.1));
    CHECK(r.t_m == doctest::Approx(0.1));
}

TEST_CASE("per-class efficiency") {
    StatsDelta g, o;
    g.opcount = 2'000'000'000'000ull;
    o.opcount = 1'000'000'000'000ull;
    const auto s = RunSummary::from_rows({{PhaseLabel::prefill(), OpClass::gemm, g},
                                          {PhaseLabel::prefill(), OpClass::softmax, o}});
    EfficiencyProfile e;
    e.ec[static_cast<int>(OpClass::gemm)] = 0.5;
    CHECK(time_compute(s, hw(1, 1), e) == doctest::Approx(4.0 + 1.0));
}

TEST_CASE("zero tpot throws") {
    CHECK_THROWS_AS(forecast_tpot_tps(StatsDelta{}, hw(1, 1), EfficiencyProfile{}), ForecastError);
}

TEST_CASE("run-level tpot averages tokens") {
    const auto s = simulate_decode(build_model(preset_variant("bf16-bf16")), 128, 4);
    EfficiencyProfile e;
    e.em_avg = 1;
    double sum = 0;
    for (const auto& t : s.per_token) sum += forecast_tpot_tps(t, hw(1, 100), e).tpot;
    CHECK(forecast_tpot_tps(s, hw(1, 100), e).tpot == doctest::Approx(sum / 4));
}

TEST_CASE("efficiency grid") {
    const auto s = simulate_prefill(build_model(preset_variant("bf16-int4")), 4096);
    const auto ax = default_axis();
    REQUIRE(ax.size() == 10);
    CHECK(ax.front() == 10);
    CHECK(ax.back() == 100);
    const auto grid = efficiency_grid(s, ax, ax);
    REQUIRE(grid.size() == 100);
    CHECK(grid[0].tops == 10);
    CHECK(grid[1].bw == 20);
    CHECK(grid[10].tops == 20);
    for (const auto& p : grid) {
        const auto one = forecast_ttft(s, hw(p.tops, p.bw), EfficiencyProfile::uniform(1, 1));
        REQUIRE(p.result.ttft == one.ttft);
    }
    int compute_bound = 0;
    for (const auto& p : grid) compute_bound += p.result.tc_over_tm < 1 ? 0 : 1;
    CHECK(compute_bound < 50);
    const auto csv = grid_csv(grid);
    CHECK(csv.rfind("tops,bw,ec,em,t_c,t_m,tc_over_tm,ttft\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 101);
    CHECK(efficiency_grid(s, {1}, {1}, {0.5, 1}, {0.25, 0.5, 1}).size() == 6);
}

TEST_CASE("kv4 has higher tc/tm than int4 at the same point") {
    const auto a = simulate_decode(build_model(preset_variant("bf16-int4")), 4096, 1);
    const auto b = simulate_decode(build_model(preset_variant("bf16-int4-kv4")), 4096, 1);
    const auto e = EfficiencyProfile::uniform(1, 1);
    CHECK(forecast_ttft(b, hw(10, 100), e).tc_over_tm > forecast_ttft(a, hw(10, 100), e).tc_over_tm);
}

TEST_CASE("axis parsing") {
    CHECK(parse_axis("1:3:1") == std::vector<double>{1, 2, 3});
    CHECK(parse_axis("0.5:1:0.25").size() == 3);
    CHECK_THROWS_AS(parse_axis("1:3"), ConfigError);
    CHECK_THROWS_AS(parse_axis("3:1:1"), ConfigError);
    CHECK_THROWS_AS(parse_axis("1:3:0"), ConfigError);
    CHECK_THROWS_AS(parse_axis("a:b:c"), ConfigError);
}

TEST_CASE("tiling efficiency") {
    const auto rows = bmm_tiling_efficiency({64}, 128, 32, 1, 6400);
    REQUIRE(rows.size() == 6400);
    for (const auto& r : rows) {
        if (r.seq % 64 == 0) REQUIRE(r.efficiency == 1.0);
        REQUIRE(r.efficiency <= 1.0);
    }
    // padded key length 128 for 65 keys; PV scales with key length too
    CHECK(rows[64].efficiency == doctest::Approx(65.0 / 128).epsilon(0.02));
    const double a50 = rows[50 * 64 - 1].running_avg;
    const double a100 = rows[100 * 64 - 1].running_avg;
    CHECK(std::abs(a100 - a50) / a100 < 0.01);
    CHECK(a100 > 0.98);
    const auto two = bmm_tiling_efficiency({16, 64}, 128, 32, 1, 10);
    CHECK(two.size() == 20);
}

TEST_CASE("timeline") {
    EfficiencyProfile e;
    e.em_avg = 1;
    const auto base = simulate_decode(build_model(preset_variant("bf16-bf16")), 128, 2000);
    const auto t = decode_tps_timeline(base, hw(1, 100), e);
    REQUIRE(t.tps.size() == 2000);
    CHECK(t.first == t.tps.front());
    CHECK(t.last == t.tps.back());
    CHECK(t.drop_pct == doctest::Approx(100 * (t.first - t.last) / t.first));
    for (std::size_t i = 1; i < t.tps.size(); ++i) REQUIRE(t.tps[i] <= t.tps[i - 1]);
    const auto kv4 = simulate_decode(build_model(preset_variant("bf16-int4-kv4")), 128, 2000);
    CHECK(decode_tps_timeline(kv4, hw(1, 100), e).drop_pct <= 10.0);
    CHECK(decode_tps_timeline(kv4, hw(1, 100), e).drop_pct < t.drop_pct);
    const auto csv = timeline_csv(t);
    CHECK(csv.rfind("token_index,mem_rd,tpot,tps\n", 0) == 0);
}

TEST_CASE("lora merge time") {
    auto cfg = preset_variant("bf16-bf16");
    EfficiencyProfile e = EfficiencyProfile::uniform(1, 1);
    // 1670.8 GOPs at 326.4 GOPs/s
    CHECK(forecast_lora_update(cfg, hw(0.3264, 240), e, 128) == doctest::Approx(1670.8 / 326.4).epsilon(0.005));
    CHECK(forecast_lora_update(cfg, hw(0.3264, 240), e) == 0.0);
    cfg.lora_rank = 16;
    CHECK(forecast_lora_update(cfg, hw(0.3264, 240), e) == doctest::Approx(220.2 / 326.4).epsilon(0.005));
}
