// SPDX-License-Identifier: Apache-2.0
#pragma once

// Cost models for single-dispatch operators. Nothing here touches tensor data.

#include <cstdint>
#include <optional>

#include "life/dtype.hpp"
#include "life/stats_delta.hpp"

namespace life {

struct LinearArgs {
    std::uint64_t m = 1, k = 1, n = 1;
    DataType dtype_a = DataType::bf16;
    DataType dtype_b = DataType::bf16;
    DataType dtype_out = DataType::bf16;
    bool bias = false;
    std::uint64_t grpsize = 0;  // quantized weights only; 0 = one group spanning k
    std::optional<std::uint64_t> lora_rank;
    DataType dtype_lora = DataType::bf16;
};

// The two records of the reference GEMM model: compute with activation
// traffic, then parameter reads with zero ops.
struct LinearCost {
    StatsDelta compute;
    StatsDelta params;
    StatsDelta total() const { return compute + params; }
};

LinearCost linear_parts(const LinearArgs& a);
inline StatsDelta linear(const LinearArgs& a) { return linear_parts(a).total(); }

enum class QuantDir { quantize, dequantize };

// nbytes is the wide side, qbytes the narrow one.
StatsDelta quantize_dequantize(std::uint64_t num_el, std::uint64_t num_qparams, DataType wide,
                               DataType narrow, QuantDir dir = QuantDir::dequantize);

StatsDelta bmm(std::uint64_t b, std::uint64_t m, std::uint64_t k, std::uint64_t n, DataType t);
// Operands and output in different types (e.g. K/V held in the cache dtype).
StatsDelta bmm(std::uint64_t b, std::uint64_t m, std::uint64_t k, std::uint64_t n, DataType lhs,
               DataType rhs, DataType out);

StatsDelta elementwise(std::uint64_t m, std::uint64_t n, DataType t, int arity = 2);
StatsDelta nonlinear_pwl(std::uint64_t num_el, std::uint64_t table_size, DataType t);
StatsDelta nonlinear_poly(std::uint64_t num_el, std::uint64_t degree, DataType t);

// Full table read once per call; ops and writes scale with tokens.
StatsDelta embedding(std::uint64_t vocab_size, std::uint64_t hidden_size, DataType t,
                     std::uint64_t tokens = 1);

// With an on-chip budget, a kernel touching more bytes is split into
// ceil(bytes / onchip) dispatches. Ops with zero dispatches stay at zero.
void apply_tiling(StatsDelta& d, std::optional<std::uint64_t> onchip_bytes);

}  // namespace life
