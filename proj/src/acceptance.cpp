// SPDX-License-Identifier: Apache-2.0
#include "life/acceptance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "life/derived_ops.hpp"
#include "life/forecaster.hpp"
#include "life/foundational_ops.hpp"
#include "life/simulator.hpp"

namespace life {
namespace {

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

struct Checker {
    CriterionResult r;
    Checker(int id, std::string title) {
        r.id = id;
        r.title = std::move(title);
        r.pass = true;
    }
    void cell(bool ok, std::string line) {
        if (!ok) r.pass = false;
        r.details.push_back((ok ? "ok   " : "FAIL ") + line);
    }
    // relative tolerance
    void rel(const std::string& what, double got, double want, double tol) {
        const double err = (got - want) / want;
        cell(std::abs(err) <= tol + 1e-12,
             fmt("%s: %.4g vs %.4g (%+.2f%%, tol %.1f%%)", what.c_str(), got, want, 100 * err, 100 * tol));
    }
    void abs(const std::string& what, double got, double want, double tol) {
        cell(std::abs(got - want) <= tol + 1e-12,
             fmt("%s: %.4g vs %.4g (tol %.3g)", what.c_str(), got, want, tol));
    }
};

const LayerGraph& graph(const std::string& variant) {
    static std::map<std::string, LayerGraph> cache;
    auto it = cache.find(variant);
    if (it == cache.end()) it = cache.emplace(variant, build_model(preset_variant(variant))).first;
    return it->second;
}

// 1. prefill TOPs, KV size and operator shares for bf16-bf16
CriterionResult c1() {
    Checker c(1, "prefill TOPs / KV / operator shares");
    struct Row { std::uint64_t p; double gemm, bmm, sm, tops, kv; };
    const Row rows[] = {
        {256, 99.0, 1.0, 0.0, 3.42, 0.1},       {1024, 96.0, 3.9, 0.0, 14.09, 0.5},
        {2048, 92.4, 7.5, 0.1, 29.29, 1.0},     {4096, 85.9, 14.0, 0.2, 63.04, 2.0},
        {8192, 75.2, 24.5, 0.3, 143.87, 4.0},   {16384, 60.3, 39.1, 0.5, 358.94, 8.0},
        {32768, 43.2, 56.0, 0.7, 1002.67, 16.0}, {65536, 27.5, 71.6, 0.8, 3144.41, 32.0},
    };
    const auto& g = graph("bf16-bf16");
    for (const auto& row : rows) {
        const auto s = simulate_prefill(g, row.p);
        const auto sh = operator_distribution(s);
        const auto share = [&](OpClass k) { auto i = sh.find(k); return i == sh.end() ? 0.0 : i->second; };
        const std::string p = std::to_string(row.p);
        c.rel("prompt " + p + " TOPs", to_tops(s.totals.opcount), row.tops, 0.02);
        // KV is printed to one decimal; 0.125 shows as 0.1
        const double kv = to_gb(kv_state(g, row.p).bytes_per_token_per_layer) * row.p * g.num_layers();
        c.abs("prompt " + p + " KV GB", kv, row.kv, std::max(0.02 * row.kv, 0.05));
        c.abs("prompt " + p + " GEMM %", share(OpClass::gemm), row.gemm, 1.5);
        c.abs("prompt " + p + " BMM %", share(OpClass::bmm), row.bmm, 1.5);
        c.abs("prompt " + p + " softmax %", share(OpClass::softmax), row.sm, 1.5);
    }
    return c.r;
}

// decode reference: prompt -> {GOPs, GB} per variant
struct DecodeRow { std::uint64_t p; std::array<double, 3> gops, gb; };
const DecodeRow kDecode[] = {
    {32, {13.34, 26.55, 26.61}, {12.85, 3.74, 3.55}},
    {64, {13.36, 26.57, 26.64}, {12.88, 3.77, 3.57}},
    {128, {13.39, 25.60, 26.69}, {12.94, 3.83, 3.59}},
    {256, {13.46, 26.67, 26.79}, {13.07, 3.96, 3.59}},
    {512, {13.59, 26.81, 26.99}, {13.32, 4.21, 3.64}},
    {1024, {13.86, 27.08, 27.40}, {13.82, 4.71, 3.73}},
    {2048, {14.41, 27.62, 28.21}, {14.83, 5.72, 3.92}},
};
const char* kDecodeVariants[] = {"bf16-bf16", "bf16-int4", "bf16-int4-kv4"};

// 2. single decode step after the prompt
CriterionResult c2() {
    Checker c(2, "decode GOPs / memory");
    for (const auto& row : kDecode)
        for (int v = 0; v < 3; ++v) {
            const auto s = simulate_decode(graph(kDecodeVariants[v]), row.p, 1);
            const std::string tag = std::string(kDecodeVariants[v]) + " prompt " + std::to_string(row.p);
            c.rel(tag + " GOPs", to_gops(s.totals.opcount), row.gops[v], 0.05);
            c.rel(tag + " GB", to_gb(s.totals.traffic()), row.gb[v], 0.05);
        }
    return c.r;
}

// 3. TTFT at 326.4 GFLOPS, zero dispatch latency
CriterionResult c3() {
    Checker c(3, "TTFT forecast");
    struct Row { std::uint64_t p; double full, half; };
    const Row rows[] = {{32, 1.30, 2.60},     {64, 2.61, 5.21},      {128, 5.21, 10.42},
                        {256, 10.48, 20.96},  {512, 21.17, 42.34},   {1024, 43.17, 84.34},
                        {2048, 89.74, 179.47}};
    const HardwareSpec hw{0.3264, 240.0, 0.0, std::nullopt};
    for (const auto& row : rows) {
        const auto s = simulate_prefill(graph("bf16-bf16"), row.p);
        const std::string p = "prompt " + std::to_string(row.p);
        c.rel(p + " ec=1.0", forecast_ttft(s, hw, EfficiencyProfile::uniform(1.0, 1.0)).ttft, row.full, 0.01);
        c.rel(p + " ec=0.5", forecast_ttft(s, hw, EfficiencyProfile::uniform(0.5, 1.0)).ttft, row.half, 0.01);
    }
    return c.r;
}

// 4. TPS from simulated decode memory
CriterionResult c4() {
    Checker c(4, "TPS forecast");
    EfficiencyProfile cpu;
    cpu.em_avg = 0.10;
    const HardwareSpec cpu_hw{1.0, 240.0, 0.0, std::nullopt};
    const std::pair<std::uint64_t, double> cpu_rows[] = {{32, 1.87},  {64, 1.86},   {128, 1.85},
                                                         {256, 1.84}, {512, 1.80},  {1024, 1.74},
                                                         {2048, 1.62}};
    for (auto [p, tps] : cpu_rows) {
        const auto s = simulate_decode(graph("bf16-bf16"), p, 1);
        c.rel("cpu bf16-bf16 prompt " + std::to_string(p), forecast_tpot_tps(s, cpu_hw, cpu).tps, tps, 0.03);
    }
    EfficiencyProfile igpu;
    igpu.em_avg = 0.50;
    const HardwareSpec igpu_hw{1.0, 256.0, 0.0, std::nullopt};
    const std::pair<std::uint64_t, double> igpu_rows[] = {{128, 33.4}, {1536, 27.2}};
    for (auto [p, tps] : igpu_rows) {
        const auto s = simulate_decode(graph("bf16-int4"), p, 1);
        c.rel("igpu bf16-int4 prompt " + std::to_string(p), forecast_tpot_tps(s, igpu_hw, igpu).tps, tps, 0.05);
    }
    return c.r;
}

// 5. ahead-of-time LoRA merge cost
CriterionResult c5() {
    Checker c(5, "LoRA update overhead");
    const auto cfg = preset_variant("bf16-bf16");
    const std::uint64_t ranks[] = {16, 32, 64, 128};
    const double totals[] = {220.2, 427.4, 841.9, 1670.8};
    // per-layer cells, attention shapes then MLP shapes
    const double attn[] = {0.6, 1.1, 2.2, 4.3};
    const double mlp[] = {1.5, 3.0, 5.9, 11.6};
    for (int i = 0; i < 4; ++i) {
        const auto r = ranks[i];
        c.rel("r=" + std::to_string(r) + " total", to_gops(lora_merge_total(cfg, r).opcount), totals[i], 0.01);
        for (const auto& pr : lora_projections(cfg)) {
            const bool is_mlp = pr.name == "gate_proj" || pr.name == "up_proj" || pr.name == "down_proj";
            c.abs("r=" + std::to_string(r) + " " + pr.name, to_gops(lora_merge_ops(pr.k, pr.n, r)),
                  is_mlp ? mlp[i] : attn[i], 0.05);
        }
    }
    return c.r;
}

// 6. chunked prefill ratios against plain prefill, P = 4096
CriterionResult c6() {
    Checker c(6, "chunked prefill");
    const auto& g = graph("bf16-bf16");
    const std::uint64_t P = 4096;
    const auto base = simulate_prefill(g, P);
    double prev_ops = 1.0, prev_rd = 1.0;
    for (std::uint64_t C : {2048u, 1024u, 512u, 256u, 128u, 64u}) {
        const auto s = simulate_chunked_prefill(g, P, C);
        const double disp = static_cast<double>(s.dispatch_total) / static_cast<double>(base.dispatch_total);
        const double ops = static_cast<double>(s.totals.opcount) / static_cast<double>(base.totals.opcount);
        const double rd = s.totals.mem_rd.value() / base.totals.mem_rd.value();
        const std::string tag = "C=" + std::to_string(C);
        c.cell(s.dispatch_total == base.dispatch_total * (P / C),
               fmt("%s dispatch ratio %.4f (want %llu exactly)", tag.c_str(), disp,
                   static_cast<unsigned long long>(P / C)));
        c.cell(ops >= 1.0 && ops <= 1.35 && ops >= prev_ops,
               fmt("%s opcount ratio %.6f in [1, 1.35], not below previous %.6f", tag.c_str(), ops, prev_ops));
        c.cell(rd > 1.0 && rd > prev_rd,
               fmt("%s mem_rd ratio %.4f > 1 and > previous %.4f", tag.c_str(), rd, prev_rd));
        prev_ops = ops;
        prev_rd = rd;
    }
    return c.r;
}

// 7. 2000-token decode timelines
CriterionResult c7() {
    Checker c(7, "decode timeline");
    struct Row { std::uint64_t p; const char* v; double ratio; };
    const Row rows[] = {{128, "bf16-bf16", 1.15},  {128, "bf16-int4", 1.53},  {128, "bf16-int4-kv4", 1.10},
                        {4096, "bf16-bf16", 1.18}, {4096, "bf16-int4", 1.26}, {4096, "bf16-int4-kv4", 1.08}};
    for (const auto& row : rows) {
        const auto s = simulate_decode(graph(row.v), row.p, 2000);
        const double first = s.per_token.front().traffic().value();
        const double last = s.per_token.back().traffic().value();
        const std::string tag = std::string(row.v) + " prompt " + std::to_string(row.p);
        c.rel(tag + " last/first", last / first, row.ratio, 0.10);
        bool mono = s.per_token.size() == 2000;
        for (std::size_t i = 1; i < s.per_token.size(); ++i)
            mono = mono && s.per_token[i - 1].mem_rd <= s.per_token[i].mem_rd;
        c.cell(mono, tag + " per-token mem_rd non-decreasing over 2000 tokens");
    }
    return c.r;
}

// 8. per-layer attention memory at prompt 8192, first and 2000th token
CriterionResult c8() {
    Checker c(8, "attention ordering");
    const auto rows = compare_attention(preset_variant("bf16-bf16"),
                                        *preset_variant("bf16-int4-mla").mla_dims, 8192, 2000);
    // rows come mode-major: eager, fused, fused-kv8, fused-kv4; then MHA, GQA, MQA, MLA
    auto at = [&](int mode, int mech, int t) {
        const auto& r = rows[static_cast<std::size_t>(mode * 4 + mech)];
        return t == 0 ? r.first_mib : r.last_mib;
    };
    const char* mech[] = {"MHA", "GQA", "MQA", "MLA"};
    const char* tok[] = {"1st", "2000th"};
    for (int t = 0; t < 2; ++t)
        for (int m = 0; m < 4; ++m) {
            const std::string tag = rows[static_cast<std::size_t>(m * 4)].mode + " " + tok[t] + " token";
            c.cell(at(m, 2, t) < at(m, 1, t) && at(m, 1, t) < at(m, 0, t),
                   fmt("%s MQA %.1f < GQA %.1f < MHA %.1f MiB", tag.c_str(), at(m, 2, t), at(m, 1, t),
                       at(m, 0, t)));
            c.cell(at(m, 3, t) < at(m, 0, t),
                   fmt("%s MLA %.1f < MHA %.1f MiB", tag.c_str(), at(m, 3, t), at(m, 0, t)));
        }
    for (int t = 0; t < 2; ++t)
        for (int a = 0; a < 4; ++a) {
            c.cell(at(1, a, t) < at(0, a, t),
                   fmt("%s %s token fused %.1f < eager %.1f MiB", mech[a], tok[t], at(1, a, t), at(0, a, t)));
            c.cell(at(3, a, t) < at(2, a, t) && at(2, a, t) < at(1, a, t),
                   fmt("%s %s token kv4 %.1f < kv8 %.1f < none %.1f MiB", mech[a], tok[t], at(3, a, t),
                       at(2, a, t), at(1, a, t)));
        }
    return c.r;
}

// Loop-nest counters, written without the closed forms.
std::uint64_t mac_linear(std::uint64_t m, std::uint64_t k, std::uint64_t n, bool bias, bool dequant,
                         std::uint64_t lora) {
    std::uint64_t ops = 0;
    if (dequant)
        for (std::uint64_t i = 0; i < k; ++i)
            for (std::uint64_t j = 0; j < n; ++j) ops += 2;  // subtract zero, scale
    if (lora)
        for (std::uint64_t i = 0; i < k; ++i)
            for (std::uint64_t j = 0; j < n; ++j) {
                for (std::uint64_t r = 0; r < lora; ++r) ops += r == 0 ? 1 : 2;
                ops += 2;  // alpha scale, add into weight
            }
    for (std::uint64_t i = 0; i < m; ++i)
        for (std::uint64_t j = 0; j < n; ++j) {
            for (std::uint64_t x = 0; x < k; ++x) ops += x == 0 ? 1 : 2;
            if (bias) ops += 1;
        }
    return ops;
}

std::uint64_t mac_bmm(std::uint64_t b, std::uint64_t m, std::uint64_t k, std::uint64_t n) {
    std::uint64_t ops = 0;
    for (std::uint64_t z = 0; z < b; ++z) ops += mac_linear(m, k, n, false, false, 0);
    return ops;
}

// 9. oracle suite
CriterionResult c9() {
    Checker c(9, "oracle suite");
    std::uint64_t shapes = 0, bad = 0;
    for (std::uint64_t m = 1; m <= 8; ++m)
        for (std::uint64_t k = 1; k <= 8; ++k)
            for (std::uint64_t n = 1; n <= 8; ++n) {
                for (int bias = 0; bias < 2; ++bias)
                    for (int q = 0; q < 2; ++q)
                        for (std::uint64_t r : {0u, 1u, 3u}) {
                            LinearArgs a;
                            a.m = m;
                            a.k = k;
                            a.n = n;
                            a.bias = bias;
                            if (q) a.dtype_b = DataType::int4;
                            if (r) a.lora_rank = r;
                            ++shapes;
                            if (linear(a).opcount != mac_linear(m, k, n, bias, q, r)) ++bad;
                        }
                for (std::uint64_t b = 1; b <= 8; ++b) {
                    ++shapes;
                    if (bmm(b, m, k, n, DataType::bf16).opcount != mac_bmm(b, m, k, n)) ++bad;
                }
            }
    c.cell(bad == 0, fmt("linear/bmm vs loop nest: %llu shapes, %llu mismatches",
                         static_cast<unsigned long long>(shapes), static_cast<unsigned long long>(bad)));

    std::mt19937_64 rng(20240917);
    auto U = [&](std::uint64_t lo, std::uint64_t hi) {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
    };
    const char* names[] = {"inverse", "inv_sqrt", "rope", "rmsnorm", "softmax", "linear", "mlp", "attention"};
    std::array<std::uint64_t, 8> mism{};
    std::array<std::uint64_t, 8> elide{};
    const DataType types[] = {DataType::bf16, DataType::fp16, DataType::fp32};
    for (int i = 0; i < 1000; ++i) {
        const DataType t = types[U(0, 2)];
        const std::uint64_t a = U(1, 64), b = U(1, 512), h = U(1, 16);
        auto same = [&](int idx, std::uint64_t e, std::uint64_t f) { if (e != f) ++mism[idx]; };
        same(0, inverse(a * b, t, 4, Fusion::eager).opcount, inverse(a * b, t, 4, Fusion::fused).opcount);
        same(1, inv_sqrt(a * b, t, 4, Fusion::eager).opcount, inv_sqrt(a * b, t, 4, Fusion::fused).opcount);
        const std::uint64_t hd = 2 * U(1, 64);
        const std::uint64_t rows = U(1, 4096);
        const auto re = rope(a, h, hd, rows, t, Fusion::eager), rf = rope(a, h, hd, rows, t, Fusion::fused);
        same(2, re.total().opcount, rf.total().opcount);
        if (re.total().traffic() - rf.total().traffic() != rf.elided) ++elide[2];
        same(3, rmsnorm(a, b, t, Fusion::eager).total().opcount, rmsnorm(a, b, t, Fusion::fused).total().opcount);
        ExpApprox ex;
        if (U(0, 1)) {
            ex.algo = ActAlgo::poly;
            ex.degree = U(1, 6);
        } else {
            ex.table_size = U(2, 512);
        }
        const auto se = softmax(a, b, t, ex, Fusion::eager), sf = softmax(a, b, t, ex, Fusion::fused);
        same(4, se.total().opcount, sf.total().opcount);
        if (se.total().traffic() - sf.total().traffic() != sf.elided) ++elide[4];

        LinearParams lp;
        lp.act = t;
        if (U(0, 1)) {
            lp.wts = DataType::int4;
            lp.grpsize = 0;
        }
        lp.bias = U(0, 1);
        if (U(0, 1)) {
            lp.lora_rank = U(1, 16);
            lp.lora_policy = LoraPolicy::inline_merge;
        }
        same(5, block_linear(a, b, h * 8, lp, Fusion::eager).total().opcount,
             block_linear(a, b, h * 8, lp, Fusion::fused).total().opcount);

        MlpSpec ms{U(1, 256), U(1, 512), ex, U(0, 1) == 1};
        const auto me = mlp(a, ms, lp, Fusion::eager), mf = mlp(a, ms, lp, Fusion::fused);
        same(6, me.total().opcount, mf.total().opcount);
        if (me.total().traffic() - mf.total().traffic() != mf.elided) ++elide[6];

        AttentionSpec as;
        const std::uint64_t kvh = std::uint64_t{1} << U(0, 3);
        as.num_kv_heads = kvh;
        as.num_heads = kvh * U(1, 4);
        as.head_dim = 2 * U(1, 32);
        as.hidden = as.num_heads * as.head_dim;
        as.mechanism = as.num_kv_heads == as.num_heads ? AttnKind::MHA
                       : as.num_kv_heads == 1          ? AttnKind::MQA
                                                       : AttnKind::GQA;
        if (U(0, 3) == 0) {
            as.mechanism = AttnKind::MLA;
            as.num_kv_heads = as.num_heads;
            as.mla_dims = MlaDims{U(1, 64), U(1, 64), 2 * U(1, 16), 2 * U(1, 8), U(1, 32)};
        }
        as.kv_qscheme = static_cast<KvQuant>(U(0, 2));
        as.softmax_exp = ex;
        as.pad_tile = U(0, 1) ? 8 * U(1, 8) : 0;
        LinearParams alp = lp;
        alp.lora_rank.reset();
        alp.lora_policy = LoraPolicy::none;
        alp.bias = false;
        const std::uint64_t past = U(0, 256);
        as.fused = false;
        const auto ae2 = attention(as, a, past, alp, OpConstants{});
        as.fused = true;
        const auto af2 = attention(as, a, past, alp, OpConstants{});
        same(7, ae2.total().opcount, af2.total().opcount);
        if (ae2.total().traffic() - af2.total().traffic() != af2.elided) ++elide[7];
    }
    for (int i = 0; i < 8; ++i)
        c.cell(mism[i] == 0 && elide[i] == 0,
               fmt("%s fused vs eager over 1000 shapes: %llu opcount mismatches, %llu elided mismatches",
                   names[i], static_cast<unsigned long long>(mism[i]),
                   static_cast<unsigned long long>(elide[i])));
    return c.r;
}

// 10. forecast laws over random points
CriterionResult c10() {
    Checker c(10, "forecast laws");
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> frac(0.01, 1.0), tops(0.1, 500.0), bw(1.0, 4000.0),
        lat(0.0, 1e-4);
    std::uniform_int_distribution<std::uint64_t> big(0, std::uint64_t{1} << 40), disp(0, 5000);
    std::uint64_t v_max = 0, v_tps = 0, v_ec = 0, v_em = 0, points = 0;
    for (int i = 0; i < 10000; ++i) {
        std::vector<SummaryRow> rows;
        const int ntok = static_cast<int>(disp(rng) % 4);
        for (int t = 0; t <= ntok; ++t)
            for (int cls = 0; cls < kNumOpClasses; ++cls) {
                if (rng() % 2) continue;
                SummaryRow sr;
                sr.phase = ntok ? PhaseLabel::token(t + 1) : PhaseLabel::prefill();
                sr.op_class = static_cast<OpClass>(cls);
                sr.delta.opcount = big(rng);
                sr.delta.mem_rd = Bytes::from_nibbles(big(rng));
                sr.delta.mem_wr = Bytes::from_nibbles(big(rng) / 4);
                sr.delta.kv_rd = Bytes::from_nibbles(big(rng) / 8);
                sr.delta.dispatches = disp(rng);
                rows.push_back(sr);
            }
        SummaryRow floor_row;
        floor_row.phase = ntok ? PhaseLabel::token(1) : PhaseLabel::prefill();
        floor_row.op_class = OpClass::gemm;
        floor_row.delta.mem_rd = Bytes::whole(1);
        rows.push_back(floor_row);
        const auto s = RunSummary::from_rows(rows);
        const HardwareSpec hw{tops(rng), bw(rng), lat(rng), std::nullopt};
        EfficiencyProfile eff;
        for (int k = 0; k < kNumOpClasses; ++k) {
            if (rng() % 3) eff.ec[k] = frac(rng);
            if (rng() % 3) eff.em[k] = frac(rng);
        }
        eff.em_avg = frac(rng);
        ++points;

        const auto f = forecast_ttft(s, hw, eff);
        if (f.ttft != std::max(f.t_c, f.t_m)) ++v_max;
        const auto d = forecast_tpot_tps(s, hw, eff);
        if (std::abs(d.tps * d.tpot - 1.0) > 1e-12) ++v_tps;

        const int k = static_cast<int>(rng() % kNumOpClasses);
        EfficiencyProfile up = eff;
        up.ec[k] = std::min(1.0, eff.compute(static_cast<OpClass>(k)) * (1.0 + frac(rng)));
        if (time_compute(s, hw, up) > time_compute(s, hw, eff)) ++v_ec;
        up = eff;
        up.em[k] = std::min(1.0, eff.memory(static_cast<OpClass>(k)) * (1.0 + frac(rng)));
        up.em_avg = std::min(1.0, eff.memory_avg() * (1.0 + frac(rng)));
        if (time_memory(s, hw, up) > time_memory(s, hw, eff) ||
            forecast_ttft(s, hw, up).ttft > f.ttft ||
            forecast_tpot_tps(s, hw, up).tpot > d.tpot)
            ++v_em;
    }
    c.cell(v_max == 0, fmt("ttft = max(t_c, t_m): %llu violations in %llu points",
                           static_cast<unsigned long long>(v_max), static_cast<unsigned long long>(points)));
    c.cell(v_tps == 0, fmt("tps * tpot = 1: %llu violations", static_cast<unsigned long long>(v_tps)));
    c.cell(v_ec == 0, fmt("t_c non-increasing in ec: %llu violations", static_cast<unsigned long long>(v_ec)));
    c.cell(v_em == 0, fmt("t_m, ttft, tpot non-increasing in em: %llu violations",
                          static_cast<unsigned long long>(v_em)));
    return c.r;
}

}  // namespace

CriterionResult check_criterion(int id) {
    switch (id) {
    case 1: return c1();
    case 2: return c2();
    case 3: return c3();
    case 4: return c4();
    case 5: return c5();
    case 6: return c6();
    case 7: return c7();
    case 8: return c8();
    case 9: return c9();
    case 10: return c10();
    }
    throw std::out_of_range("no acceptance criterion " + std::to_string(id));
}

std::vector<CriterionResult> run_acceptance() {
    std::vector<CriterionResult> out;
    for (int i = 1; i <= 10; ++i) out.push_back(check_criterion(i));
    return out;
}

}  // namespace life
