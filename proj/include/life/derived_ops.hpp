// SPDX-License-Identifier: Apache-2.0
#pragma once

// Operators built from several foundational ones: norms, softmax, RoPE,
// attention blocks, MLP, quantized and LoRA linears.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "life/config.hpp"
#include "life/foundational_ops.hpp"

namespace life {

// eager: each constituent is its own kernel with full traffic.
// fused: one kernel; intermediate traffic stays on chip.
enum class Fusion { eager, fused };

// Per-element constants the reference only names, never counts.
struct OpConstants {
    std::uint64_t newton = 4;        // inverse / inv_sqrt: two (add, mul) iterations
    std::uint64_t rope = 3;          // mul, mul, add (rotate-half form)
    std::uint64_t kv_quant = 1;      // scale-and-shift per KV element
};

struct Part {
    std::string name;
    OpClass cls = OpClass::other;
    StatsDelta delta;
};

struct OpCost {
    std::vector<Part> parts;
    Bytes elided;  // eager traffic minus fused traffic for the same shape

    StatsDelta total() const;
    void add(std::string name, OpClass cls, const StatsDelta& d);
    void append(const OpCost& other, const std::string& prefix = "");
};

StatsDelta inverse(std::uint64_t num_el, DataType t, std::uint64_t c = 4,
                   Fusion f = Fusion::fused);
StatsDelta inv_sqrt(std::uint64_t num_el, DataType t, std::uint64_t c = 4,
                    Fusion f = Fusion::fused);

// table_rows x head_dim cos/sin entries are streamed once per call.
OpCost rope(std::uint64_t seq, std::uint64_t heads, std::uint64_t head_dim,
            std::uint64_t table_rows, DataType t, Fusion f = Fusion::fused,
            const OpConstants& k = {});

OpCost rmsnorm(std::uint64_t seq, std::uint64_t hidden, DataType t, Fusion f = Fusion::fused,
               const OpConstants& k = {});

struct ExpApprox {
    ActAlgo algo = ActAlgo::pwl;
    std::uint64_t table_size = 256;  // pwl
    std::uint64_t degree = 2;        // poly
};

// max, subtract, exp, sum, inverse, normalize.
OpCost softmax(std::uint64_t rows, std::uint64_t cols, DataType t, const ExpApprox& exp = {},
               Fusion f = Fusion::fused, const OpConstants& k = {});

// Fast Walsh-Hadamard rotation on m rows of width k.
StatsDelta hadamard(std::uint64_t m, std::uint64_t k, DataType t);

// Shared description of the linears inside a block.
struct LinearParams {
    DataType act = DataType::bf16;
    DataType wts = DataType::bf16;
    std::uint64_t grpsize = 0;
    bool bias = false;
    std::optional<std::uint64_t> lora_rank;
    DataType dtype_lora = DataType::bf16;
    LoraPolicy lora_policy = LoraPolicy::none;

    static LinearParams from(const ModelConfig& cfg);
};

// Requires a quantized weight type.
StatsDelta quantized_linear(const LinearArgs& a);
// inline: per-call adapter reads and merge ops. ahead_of_time/none: plain linear.
StatsDelta lora_linear(LinearArgs a, LoraPolicy policy);
// GEMM under a block's settings. Fused drops activation traffic.
LinearCost block_linear(std::uint64_t m, std::uint64_t k, std::uint64_t n,
                        const LinearParams& p, Fusion f);

struct MlpSpec {
    std::uint64_t hidden = 4096;
    std::uint64_t intermediate = 11008;
    ExpApprox act;  // activation approximation (table or polynomial)
    bool hadamard = false;
};

// gate, up, act, mul, down. Fused folds act*mul into the up GEMM.
OpCost mlp(std::uint64_t seq, const MlpSpec& spec, const LinearParams& p, Fusion f);

enum class AttnKind { MHA, GQA, MQA, MLA };
std::string_view to_string(AttnKind k);

struct AttentionSpec {
    AttnKind mechanism = AttnKind::MHA;
    std::uint64_t num_heads = 32;
    std::uint64_t num_kv_heads = 32;
    std::uint64_t head_dim = 128;
    KvQuant kv_qscheme = KvQuant::none;
    bool fused = false;
    std::optional<MlaDims> mla_dims;

    // Block context.
    std::uint64_t hidden = 4096;
    std::uint64_t rope_table_size = 4096;
    ExpApprox softmax_exp;
    bool hadamard = false;
    std::uint64_t pad_tile = 0;  // pad the key length of both BMMs; 0 = off

    static AttentionSpec from(const ModelConfig& cfg);
    DataType kv_dtype(DataType act) const;
};

// Throws ShapeError when the mechanism and head counts disagree.
void validate(const AttentionSpec& s);

// KV cache bytes per token for one layer, including quantization params.
Bytes kv_bytes_per_token(const AttentionSpec& s, DataType act);

// The full attention block of one layer: projections, RoPE, cache update,
// QK^T, scale, softmax, PV, output projection.
OpCost attention(const AttentionSpec& s, std::uint64_t new_seq, std::uint64_t past_len,
                 const LinearParams& p, const OpConstants& k = {});

// One-off merge W' = W + s * (B A) on every projection of every layer:
// 2krn for B A, kn for the scale, kn for the add.
StatsDelta lora_merge_total(const ModelConfig& cfg, std::optional<std::uint64_t> rank = {});

struct ProjectionShape {
    std::string name;
    std::uint64_t k, n;
};
std::vector<ProjectionShape> lora_projections(const ModelConfig& cfg);
std::uint64_t lora_merge_ops(std::uint64_t k, std::uint64_t n, std::uint64_t r);

}  // namespace life
