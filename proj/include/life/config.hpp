// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "life/dtype.hpp"
#include "life/stats_delta.hpp"

namespace life {

enum class ExecMode { eager, fused };
enum class ActAlgo { pwl, poly };
enum class QuantScheme { none, pergrp };
enum class KvQuant { none, int8, int4 };
enum class LoraPolicy { none, inline_merge, ahead_of_time };

std::string_view to_string(ExecMode m);
std::string_view to_string(KvQuant q);
std::string_view to_string(LoraPolicy p);

struct MlaDims {
    std::uint64_t q_lora_rank = 0;
    std::uint64_t kv_lora_rank = 0;
    std::uint64_t qk_nope_head_dim = 0;
    std::uint64_t qk_rope_head_dim = 0;
    std::uint64_t v_head_dim = 0;
    friend bool operator==(const MlaDims&, const MlaDims&) = default;
};

// Field names follow the JSON schema one to one.
struct ModelConfig {
    ExecMode mode = ExecMode::eager;
    DataType dtype_in = DataType::bf16;
    DataType dtype_wts = DataType::bf16;
    std::uint64_t hidden_size = 4096;
    std::uint64_t vocab_size = 32000;
    std::uint64_t intermediate_size = 11008;
    ActAlgo actfn_algo = ActAlgo::pwl;
    std::uint64_t actfn_table_size = 256;
    std::optional<std::uint64_t> poly_degree;
    QuantScheme gemm_quant_scheme = QuantScheme::none;
    std::uint64_t gemm_grpsize = 128;
    bool bias = false;
    std::uint64_t rope_table_size = 4096;
    std::uint64_t num_heads = 32;
    std::uint64_t num_kv_heads = 32;
    std::uint64_t num_decoder_layers = 32;
    KvQuant kv_qscheme = KvQuant::none;
    std::uint64_t max_position_embeddings = 4096;
    bool mla = false;
    std::optional<MlaDims> mla_dims;
    std::optional<std::uint64_t> lora_rank;
    DataType dtype_lora = DataType::bf16;
    LoraPolicy lora_merge_policy = LoraPolicy::none;
    // Not in the original listing: QuaRot-style online Hadamard rotations.
    bool online_hadamard = false;

    std::uint64_t head_dim() const { return hidden_size / num_heads; }
    // Weight group size along k; 0 means one group per column.
    std::uint64_t group_size() const {
        return gemm_quant_scheme == QuantScheme::pergrp ? gemm_grpsize : 0;
    }
    DataType kv_dtype() const;

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Throws ConfigError naming the broken invariant.
void validate(const ModelConfig& cfg);

// Parses the JSON config format. Trailing commas are accepted.
ModelConfig parse_model_config(std::string_view text);
std::string to_json(const ModelConfig& cfg);

const std::vector<std::string>& preset_names();
ModelConfig preset_variant(std::string_view name);

struct HardwareSpec {
    double peak_tops = 1.0;         // 1e12 ops/s
    double peak_bw = 1.0;           // GB/s, GB = 2^30 bytes
    double dispatch_latency = 0.0;  // s per dispatch
    std::optional<std::uint64_t> onchip_bytes;
};

// Per-class efficiencies; absent classes use 1.0.
struct EfficiencyProfile {
    std::array<std::optional<double>, kNumOpClasses> ec{};
    std::array<std::optional<double>, kNumOpClasses> em{};
    std::optional<double> em_avg;

    double compute(OpClass c) const;
    double memory(OpClass c) const;
    double memory_avg() const { return em_avg.value_or(1.0); }

    static EfficiencyProfile uniform(double ec, double em);
};

void validate(const HardwareSpec& hw);
void validate(const EfficiencyProfile& eff);

// JSON with peak_tops, peak_bw, dispatch_latency, onchip_bytes, and
// ec/em as either a number or an {op_class: fraction} object, plus em_avg.
std::pair<HardwareSpec, EfficiencyProfile> parse_hardware(std::string_view text);

enum class Phase { prefill, decode, chunked_prefill, timeline };
std::string_view to_string(Phase p);
Phase parse_phase(std::string_view s);

struct ScenarioConfig {
    Phase phase = Phase::prefill;
    std::uint64_t prompt_len = 1;
    std::uint64_t gen_len = 1;
    std::uint64_t chunk_size = 0;
};

void validate(const ScenarioConfig& sc);

}  // namespace life
