// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "life/error.hpp"
#include "life/simulator.hpp"

using namespace life;

namespace {

const LayerGraph& g(const char* v) {
    static std::map<std::string, LayerGraph> cache;
    auto it = cache.find(v);
    if (it == cache.end()) it = cache.emplace(v, build_model(preset_variant(v))).first;
    return it->second;
}

double share(const RunSummary& s, OpClass c) {
    const auto m = operator_distribution(s);
    auto it = m.find(c);
    return it == m.end() ? 0.0 : it->second;
}

}  // namespace

TEST_CASE("graph structure") {
    const auto& m = g("bf16-bf16");
    CHECK(m.num_layers() == 32);
    CHECK(m.head.size() == 1);
    CHECK(m.tail.size() == 2);
    CHECK(m.layer.size() == 6);
    auto one = preset_variant("bf16-bf16");
    one.num_decoder_layers = 1;
    CHECK(build_model(one).num_layers() == 1);
    CHECK(build_model(preset_variant("bf16-int4-mla")).attn.mechanism == AttnKind::MLA);
}

TEST_CASE("prefill totals") {
    const auto s = simulate_prefill(g("bf16-bf16"), 2048);
    CHECK(to_tops(s.totals.opcount) == doctest::Approx(29.29).epsilon(0.02));
    CHECK(share(s, OpClass::bmm) == doctest::Approx(7.5).epsilon(0.2));
    const auto s256 = simulate_prefill(g("bf16-bf16"), 256);
    CHECK(to_tops(s256.totals.opcount) == doctest::Approx(3.42).epsilon(0.02));
    CHECK(share(s256, OpClass::gemm) == doctest::Approx(99.0).epsilon(0.015));
}

TEST_CASE("kv size at prompt") {
    // 2 tensors * 32 layers * 4096 wide * 2 bytes per token
    const auto& m = g("bf16-bf16");
    const auto kv = kv_state(m, 2048);
    CHECK(kv.past_len == 2048);
    CHECK(kv.bytes_per_token_per_layer.value() == 2 * 4096 * 2);
    CHECK(to_gb(kv.bytes_per_token_per_layer) * 2048 * 32 == doctest::Approx(1.0));
    const auto s = simulate_prefill(m, 2048);
    CHECK(s.totals.kv_wr.value() == 2048.0 * 32 * 2 * 4096 * 2);
}

TEST_CASE("prompt of one is a decode step's worth of GEMM") {
    const auto p = simulate_prefill(g("bf16-bf16"), 1);
    const auto d = simulate_decode(g("bf16-bf16"), 1, 1);
    CHECK(p.by_class.at(OpClass::gemm).opcount == d.by_class.at(OpClass::gemm).opcount);
    CHECK(to_gops(p.totals.opcount) == doctest::Approx(13.34).epsilon(0.05));
}

TEST_CASE("decode dispatches") {
    // embedding + 19 per layer + final norm + lm_head
    CHECK(simulate_decode(g("bf16-int4"), 128, 1).dispatch_total == 1 + 19 * 32 + 2);
    CHECK(simulate_decode(g("bf16-bf16"), 128, 1).dispatch_total == 611);
    CHECK(simulate_decode(g("bf16-int4-fused"), 128, 1).dispatch_total < 611);
}

TEST_CASE("decode table cells") {
    const auto a = simulate_decode(g("bf16-bf16"), 32, 1);
    CHECK(to_gops(a.totals.opcount) == doctest::Approx(13.34).epsilon(0.05));
    CHECK(to_gb(a.totals.traffic()) == doctest::Approx(12.85).epsilon(0.05));
    const auto b = simulate_decode(g("bf16-int4"), 2048, 1);
    CHECK(to_gops(b.totals.opcount) == doctest::Approx(27.62).epsilon(0.05));
    CHECK(to_gb(b.totals.traffic()) == doctest::Approx(5.72).epsilon(0.05));
}

TEST_CASE("decode growth per token") {
    // bf16 eager, per layer: cached K,V read (16 KiB) + K,V broadcast into the
    // BMMs (16 KiB) + 32 heads of score traffic, 4 touches of 2 bytes
    const auto s = simulate_decode(g("bf16-bf16"), 128, 3);
    REQUIRE(s.per_token.size() == 3);
    const double step = 32.0 * (2 * 4096 * 2 + 2 * 4096 * 2 + 32 * 4 * 2);
    CHECK(s.per_token[1].traffic().value() - s.per_token[0].traffic().value() == step);
    CHECK(s.per_token[2].traffic().value() - s.per_token[1].traffic().value() == step);
    // int4 cache: half a byte per element, bf16 scale + zero per head and tensor
    const auto q = simulate_decode(g("bf16-int4-kv4"), 128, 2);
    const double kv4 = 32.0 * (2 * 4096 * 0.5 + 2 * 32 * 2 * 2);
    CHECK(q.per_token[1].kv_rd.value() - q.per_token[0].kv_rd.value() == kv4);
}

TEST_CASE("timeline ratio and monotone reads") {
    const auto s = simulate_decode(g("bf16-int4-kv4"), 128, 2000);
    REQUIRE(s.per_token.size() == 2000);
    const double r = s.per_token.back().traffic().value() / s.per_token.front().traffic().value();
    CHECK(r == doctest::Approx(1.10).epsilon(0.10));
    for (std::size_t i = 1; i < s.per_token.size(); ++i) REQUIRE(s.per_token[i - 1].mem_rd <= s.per_token[i].mem_rd);
}

TEST_CASE("chunked prefill") {
    const auto& m = g("bf16-bf16");
    const auto base = simulate_prefill(m, 4096);
    CHECK(simulate_chunked_prefill(m, 4096, 4096) == base);
    const auto c64 = simulate_chunked_prefill(m, 4096, 64);
    CHECK(c64.dispatch_total == 64 * base.dispatch_total);
    const auto c1k = simulate_chunked_prefill(m, 4096, 1024);
    CHECK(c1k.totals.opcount >= base.totals.opcount);
    CHECK(static_cast<double>(c1k.totals.opcount) / base.totals.opcount <= 1.35);
    CHECK(c1k.totals.mem_rd > base.totals.mem_rd);
    CHECK(c64.totals.mem_rd > c1k.totals.mem_rd);
    // GEMM work never changes with chunking
    CHECK(c64.by_class.at(OpClass::gemm).opcount == base.by_class.at(OpClass::gemm).opcount);
    // remainder chunk runs at its true size
    const auto odd = simulate_chunked_prefill(m, 100, 30);
    CHECK(odd.rows.back().phase.str() == "chunk_3");
    CHECK(odd.totals.kv_wr == simulate_prefill(m, 100).totals.kv_wr);
    CHECK_THROWS_AS(simulate_chunked_prefill(m, 64, 65), ConfigError);
    CHECK_THROWS_AS(simulate_chunked_prefill(m, 64, 0), ConfigError);
}

TEST_CASE("scenario dispatch") {
    ScenarioConfig sc;
    sc.phase = Phase::timeline;
    sc.prompt_len = 16;
    sc.gen_len = 5;
    CHECK(simulate(g("bf16-bf16"), sc).per_token.size() == 5);
    sc.prompt_len = 0;
    CHECK_THROWS_AS(simulate(g("bf16-bf16"), sc), ConfigError);
}

TEST_CASE("stats db receives records") {
    StatsDB db;
    const auto s = simulate_decode(g("bf16-bf16"), 16, 2, &db);
    CHECK_FALSE(db.records().empty());
    CHECK(db.summarize() == s);
}

TEST_CASE("every variant runs") {
    for (const auto& v : preset_names()) {
        CAPTURE(v);
        const auto m = build_model(preset_variant(v));
        CHECK(simulate_prefill(m, 64).totals.opcount > 0);
        CHECK(simulate_decode(m, 64, 2).per_token.size() == 2);
    }
}

TEST_CASE("fused and quantized variants move memory, not much compute") {
    const auto e = simulate_decode(g("bf16-int4"), 1024, 1).totals;
    const auto f = simulate_decode(g("bf16-int4-fused"), 1024, 1).totals;
    CHECK(f.opcount == e.opcount);
    CHECK(f.traffic() < e.traffic());
    const auto w = simulate_decode(g("bf16-bf16"), 1024, 1).totals;
    CHECK(e.traffic().value() < 0.4 * w.traffic().value());
}

TEST_CASE("on-chip budget splits kernels") {
    auto m = build_model(preset_variant("bf16-bf16"));
    const auto plain = simulate_decode(m, 128, 1).dispatch_total;
    m.onchip_bytes = 8ull << 20;
    const auto tiled = simulate_decode(m, 128, 1);
    CHECK(tiled.dispatch_total > plain);
    CHECK(tiled.totals.opcount == simulate_decode(g("bf16-bf16"), 128, 1).totals.opcount);
}

TEST_CASE("attention comparison") {
    const auto rows = compare_attention(preset_variant("bf16-bf16"), *preset_variant("bf16-int4-mla").mla_dims,
                                        8192, 2000);
    REQUIRE(rows.size() == 16);
    // eager MHA: 4 projections (128 MiB) + cache (128 MiB) + K,V into the BMMs (128 MiB) + small terms
    CHECK(rows[0].first_mib == doctest::Approx(388).epsilon(0.02));
    CHECK(rows[1].first_mib == doctest::Approx(244).epsilon(0.02));
    CHECK(rows[2].first_mib == doctest::Approx(202).epsilon(0.02));
    for (const auto& r : rows) CHECK(r.last_mib > r.first_mib);
    CHECK_THROWS_AS(compare_attention(preset_variant("bf16-bf16"), {}, 0, 1), ConfigError);
}
