// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "life/config.hpp"
#include "life/derived_ops.hpp"
#include "life/stats_db.hpp"

namespace life {

enum class NodeKind { embedding, norm, attention, residual_add, mlp, lm_head };

struct GraphNode {
    std::string name;
    NodeKind kind;
};

// Decoder-only model: head nodes, one decoder layer repeated num_layers
// times, then tail nodes.
struct LayerGraph {
    ModelConfig cfg;
    AttentionSpec attn;
    MlpSpec mlp;
    LinearParams lin;
    OpConstants consts;
    std::optional<std::uint64_t> onchip_bytes;
    std::vector<GraphNode> head;
    std::vector<GraphNode> layer;
    std::vector<GraphNode> tail;

    std::uint64_t num_layers() const { return cfg.num_decoder_layers; }
};

LayerGraph build_model(const ModelConfig& cfg);

struct KVState {
    std::uint64_t past_len = 0;
    Bytes bytes_per_token_per_layer;
};

KVState kv_state(const LayerGraph& g, std::uint64_t past_len = 0);

// One forward pass over new_seq tokens with past_len cached. Per-layer parts
// are named "layer.*" and already multiplied by the layer count.
OpCost forward_pass(const LayerGraph& g, std::uint64_t new_seq, std::uint64_t past_len);

// Each simulate_* records into db when given, and returns the run summary.
RunSummary simulate_prefill(const LayerGraph& g, std::uint64_t prompt_len, StatsDB* db = nullptr);
RunSummary simulate_chunked_prefill(const LayerGraph& g, std::uint64_t prompt_len,
                                    std::uint64_t chunk_size, StatsDB* db = nullptr);
// Token t (1-based) runs with past = past_len + t - 1.
RunSummary simulate_decode(const LayerGraph& g, std::uint64_t past_len, std::uint64_t n_tokens,
                           StatsDB* db = nullptr);
RunSummary simulate(const LayerGraph& g, const ScenarioConfig& sc, StatsDB* db = nullptr);

std::map<OpClass, double> operator_distribution(const RunSummary& s);

// One decoder layer's attention block during decode, for each mechanism
// (MHA, GQA with kv_heads/4, MQA, MLA) under eager, fused, fused+kv8 and
// fused+kv4. Memory in MiB at the first and the gen_len-th token.
struct AttentionRow {
    std::string mode;
    AttnKind mechanism;
    double first_mib = 0;
    double last_mib = 0;
};
std::vector<AttentionRow> compare_attention(const ModelConfig& base, const MlaDims& mla,
                                            std::uint64_t prompt_len, std::uint64_t gen_len);
std::string attention_csv(const std::vector<AttentionRow>& rows);

}  // namespace life
