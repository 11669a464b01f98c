// SPDX-License-Identifier: Apache-2.0
#include "life/simulator.hpp"

#include <algorithm>
#include <cstdio>

#include "life/error.hpp"

namespace life {

LayerGraph build_model(const ModelConfig& cfg) {
    validate(cfg);
    LayerGraph g;
    g.cfg = cfg;
    g.attn = AttentionSpec::from(cfg);
    g.mlp.hidden = cfg.hidden_size;
    g.mlp.intermediate = cfg.intermediate_size;
    g.mlp.act = ExpApprox{cfg.actfn_algo, cfg.actfn_table_size, cfg.poly_degree.value_or(2)};
    g.mlp.hadamard = cfg.online_hadamard;
    g.lin = LinearParams::from(cfg);
    g.head = {{"embedding", NodeKind::embedding}};
    g.layer = {{"input_norm", NodeKind::norm},      {"attn", NodeKind::attention},
               {"attn_residual", NodeKind::residual_add}, {"post_norm", NodeKind::norm},
               {"mlp", NodeKind::mlp},              {"mlp_residual", NodeKind::residual_add}};
    g.tail = {{"final_norm", NodeKind::norm}, {"lm_head", NodeKind::lm_head}};
    return g;
}

KVState kv_state(const LayerGraph& g, std::uint64_t past_len) {
    return KVState{past_len, kv_bytes_per_token(g.attn, g.cfg.dtype_in)};
}

namespace {

OpCost node_cost(const LayerGraph& g, const GraphNode& node, std::uint64_t s,
                 std::uint64_t past) {
    const ModelConfig& c = g.cfg;
    const DataType act = c.dtype_in;
    const Fusion mode = c.mode == ExecMode::fused ? Fusion::fused : Fusion::eager;
    OpCost out;
    switch (node.kind) {
    case NodeKind::embedding:
        out.add("", OpClass::embedding, embedding(c.vocab_size, c.hidden_size, act, s));
        break;
    case NodeKind::norm:
        // Library kernel in both modes.
        out.append(rmsnorm(s, c.hidden_size, act, Fusion::fused, g.consts));
        out.parts.back().name = "";
        break;
    case NodeKind::attention:
        out.append(attention(g.attn, s, past, g.lin, g.consts), ".");
        break;
    case NodeKind::residual_add:
        out.add("", OpClass::elementwise, elementwise(s, c.hidden_size, act, 2));
        break;
    case NodeKind::mlp:
        out.append(mlp(s, g.mlp, g.lin, mode), ".");
        break;
    case NodeKind::lm_head: {
        LinearParams p = g.lin;
        p.lora_policy = LoraPolicy::none;
        out.add("", OpClass::gemm, block_linear(s, c.hidden_size, c.vocab_size, p, mode).total());
        break;
    }
    }
    for (auto& part : out.parts) {
        part.name = node.name + part.name;
        apply_tiling(part.delta, g.onchip_bytes);
    }
    return out;
}

}  // namespace

OpCost forward_pass(const LayerGraph& g, std::uint64_t new_seq, std::uint64_t past_len) {
    if (new_seq == 0) throw ShapeError("forward pass needs at least one token");
    OpCost pass;
    for (const auto& n : g.head) pass.append(node_cost(g, n, new_seq, past_len));
    for (const auto& n : g.layer) {
        OpCost one = node_cost(g, n, new_seq, past_len);
        for (auto& p : one.parts) {
            p.name = "layer." + p.name;
            p.delta = p.delta * g.num_layers();
        }
        one.elided = one.elided * g.num_layers();
        pass.append(one);
    }
    for (const auto& n : g.tail) pass.append(node_cost(g, n, new_seq, past_len));
    return pass;
}

namespace {

void run_pass(const LayerGraph& g, std::uint64_t s, std::uint64_t past, PhaseLabel phase,
              std::vector<SummaryRow>& rows, StatsDB* db) {
    for (auto& p : forward_pass(g, s, past).parts) {
        rows.push_back(SummaryRow{phase, p.cls, p.delta});
        if (db) db->record(StatsRecord{std::move(p.name), p.cls, phase, g.cfg.mode, p.delta});
    }
}

}  // namespace

RunSummary simulate_prefill(const LayerGraph& g, std::uint64_t prompt_len, StatsDB* db) {
    if (prompt_len == 0) throw ConfigError("constraint violated: prompt_len >= 1");
    std::vector<SummaryRow> rows;
    run_pass(g, prompt_len, 0, PhaseLabel::prefill(), rows, db);
    return RunSummary::from_rows(std::move(rows));
}

RunSummary simulate_chunked_prefill(const LayerGraph& g, std::uint64_t prompt_len,
                                    std::uint64_t chunk_size, StatsDB* db) {
    if (prompt_len == 0) throw ConfigError("constraint violated: prompt_len >= 1");
    if (chunk_size == 0 || chunk_size > prompt_len)
        throw ConfigError("constraint violated: 1 <= chunk_size <= prompt_len");
    if (chunk_size == prompt_len) return simulate_prefill(g, prompt_len, db);
    std::vector<SummaryRow> rows;
    std::uint64_t i = 0;
    for (std::uint64_t start = 0; start < prompt_len; start += chunk_size, ++i) {
        const std::uint64_t len = std::min(chunk_size, prompt_len - start);
        // cache is allocated at prompt length; each chunk attends over the
        // whole (masked) buffer, so keys = prompt_len for every chunk
        run_pass(g, len, prompt_len - len, PhaseLabel::chunk(i), rows, db);
    }
    return RunSummary::from_rows(std::move(rows));
}

RunSummary simulate_decode(const LayerGraph& g, std::uint64_t past_len, std::uint64_t n_tokens,
                           StatsDB* db) {
    if (past_len == 0) throw ConfigError("constraint violated: past_len >= 1");
    if (n_tokens == 0) throw ConfigError("constraint violated: n_tokens >= 1");
    std::vector<SummaryRow> rows;
    for (std::uint64_t t = 1; t <= n_tokens; ++t)
        run_pass(g, 1, past_len + t - 1, PhaseLabel::token(t), rows, db);
    return RunSummary::from_rows(std::move(rows));
}

RunSummary simulate(const LayerGraph& g, const ScenarioConfig& sc, StatsDB* db) {
    validate(sc);
    switch (sc.phase) {
    case Phase::prefill: return simulate_prefill(g, sc.prompt_len, db);
    case Phase::chunked_prefill:
        return simulate_chunked_prefill(g, sc.prompt_len, sc.chunk_size, db);
    case Phase::decode: return simulate_decode(g, sc.prompt_len, 1, db);
    case Phase::timeline: return simulate_decode(g, sc.prompt_len, sc.gen_len, db);
    }
    return {};
}

std::map<OpClass, double> operator_distribution(const RunSummary& s) { return s.class_shares(); }

std::vector<AttentionRow> compare_attention(const ModelConfig& base, const MlaDims& mla,
                                            std::uint64_t prompt_len, std::uint64_t gen_len) {
    if (prompt_len == 0 || gen_len == 0)
        throw ConfigError("constraint violated: prompt_len >= 1 and gen_len >= 1");
    if (base.num_heads % 4 != 0)
        throw ConfigError("compare-attention: num_heads must be a multiple of 4 for the GQA row");
    const char* modes[] = {"eager", "fused", "fused-kv8", "fused-kv4"};
    const AttnKind kinds[] = {AttnKind::MHA, AttnKind::GQA, AttnKind::MQA, AttnKind::MLA};
    std::vector<AttentionRow> out;
    for (int m = 0; m < 4; ++m)
        for (AttnKind kind : kinds) {
            ModelConfig cfg = base;
            cfg.mode = m == 0 ? ExecMode::eager : ExecMode::fused;
            cfg.kv_qscheme = m == 2 ? KvQuant::int8 : m == 3 ? KvQuant::int4 : KvQuant::none;
            cfg.mla = false;
            cfg.mla_dims.reset();
            cfg.num_kv_heads = cfg.num_heads;
            if (kind == AttnKind::GQA) cfg.num_kv_heads = cfg.num_heads / 4;
            if (kind == AttnKind::MQA) cfg.num_kv_heads = 1;
            if (kind == AttnKind::MLA) {
                cfg.mla = true;
                cfg.mla_dims = mla;
            }
            validate(cfg);
            const auto spec = AttentionSpec::from(cfg);
            const auto lin = LinearParams::from(cfg);
            auto mib = [&](std::uint64_t past) {
                return attention(spec, 1, past, lin, OpConstants{}).total().traffic().value() /
                       (1024.0 * 1024.0);
            };
            out.push_back({modes[m], kind, mib(prompt_len), mib(prompt_len + gen_len - 1)});
        }
    return out;
}

std::string attention_csv(const std::vector<AttentionRow>& rows) {
    std::string out = "mode,mechanism,mem_first_mib,mem_last_mib\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%.3f,%.3f\n", r.mode.c_str(),
                      std::string(to_string(r.mechanism)).c_str(), r.first_mib, r.last_mib);
        out += buf;
    }
    return out;
}

}  // namespace life
