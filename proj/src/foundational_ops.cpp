// SPDX-License-Identifier: Apache-2.0
#include "life/foundational_ops.hpp"

#include <string>

#include "life/error.hpp"

namespace life {
namespace {

void need(bool ok, const char* what) {
    if (!ok) throw ShapeError(what);
}

}  // namespace

LinearCost linear_parts(const LinearArgs& a) {
    need(a.m > 0 && a.k > 0 && a.n > 0, "linear: zero dimension");
    const std::uint64_t m = a.m, k = a.k, n = a.n;
    LinearCost c;
    c.compute.opcount = 2 * m * k * n - m * n;
    c.compute.mem_rd = Bytes::of(m * k, a.dtype_a);
    c.compute.mem_wr = Bytes::of(m * n, a.dtype_out);
    c.compute.dispatches = 1;
    c.params.mem_rd = Bytes::of(k * n, a.dtype_b);
    if (a.bias) {
        c.compute.opcount += m * n;
        c.params.mem_rd += Bytes::of(n, a.dtype_a);
    }
    if (is_quantized(a.dtype_b) && a.dtype_b != a.dtype_a) {
        const std::uint64_t g = a.grpsize ? a.grpsize : k;
        if (k % g != 0)
            throw ShapeError("linear: grpsize " + std::to_string(g) + " does not divide k " +
                             std::to_string(k));
        const std::uint64_t groups = (k / g) * n;
        c.compute.opcount += 2 * k * n;                   // dequant
        c.params.mem_rd += Bytes::of(groups, a.dtype_a);  // scales
        if (!is_mx(a.dtype_b)) c.params.mem_rd += Bytes::of(groups, a.dtype_b);  // zeros
    }
    if (a.lora_rank) {
        const std::uint64_t r = *a.lora_rank;
        need(r > 0, "linear: lora_rank must be positive");
        c.params.mem_rd += Bytes::of(k * r + r * n, a.dtype_lora);
        c.compute.opcount += 2 * k * r * n + k * n;
    }
    return c;
}

StatsDelta quantize_dequantize(std::uint64_t num_el, std::uint64_t num_qparams, DataType wide,
                               DataType narrow, QuantDir dir) {
    need(num_el > 0, "quantize_dequantize: num_el must be positive");
    StatsDelta d;
    d.opcount = 2 * num_el;
    const Bytes params = Bytes::of(num_qparams, wide);
    if (dir == QuantDir::dequantize) {
        d.mem_rd = Bytes::of(num_el, narrow) + params;
        d.mem_wr = Bytes::of(num_el, wide);
    } else {
        d.mem_rd = Bytes::of(num_el, wide) + params;
        d.mem_wr = Bytes::of(num_el, narrow);
    }
    d.dispatches = 1;
    return d;
}

StatsDelta bmm(std::uint64_t b, std::uint64_t m, std::uint64_t k, std::uint64_t n, DataType t) {
    return bmm(b, m, k, n, t, t, t);
}

StatsDelta bmm(std::uint64_t b, std::uint64_t m, std::uint64_t k, std::uint64_t n, DataType lhs,
               DataType rhs, DataType out) {
    need(b > 0 && m > 0 && k > 0 && n > 0, "bmm: zero dimension");
    StatsDelta d;
    d.opcount = 2 * b * m * k * n - b * m * n;
    d.mem_rd = Bytes::of(b * m * k, lhs) + Bytes::of(b * k * n, rhs);
    d.mem_wr = Bytes::of(b * m * n, out);
    d.dispatches = 1;
    return d;
}

StatsDelta elementwise(std::uint64_t m, std::uint64_t n, DataType t, int arity) {
    need(m > 0 && n > 0, "elementwise: zero dimension");
    need(arity == 1 || arity == 2, "elementwise: arity must be 1 or 2");
    StatsDelta d;
    d.opcount = m * n;
    d.mem_rd = Bytes::of(static_cast<std::uint64_t>(arity) * m * n, t);
    d.mem_wr = Bytes::of(m * n, t);
    d.dispatches = 1;
    return d;
}

StatsDelta nonlinear_pwl(std::uint64_t num_el, std::uint64_t table_size, DataType t) {
    need(num_el > 0 && table_size > 0, "nonlinear_pwl: empty input or table");
    StatsDelta d;
    d.opcount = 2 * num_el;
    d.mem_rd = Bytes::of(num_el + table_size, t);
    d.mem_wr = Bytes::of(num_el, t);
    d.dispatches = 1;
    return d;
}

StatsDelta nonlinear_poly(std::uint64_t num_el, std::uint64_t degree, DataType t) {
    need(num_el > 0 && degree > 0, "nonlinear_poly: empty input or zero degree");
    StatsDelta d;
    d.opcount = (degree * (degree + 1) / 2 + degree) * num_el;
    d.mem_rd = Bytes::of(num_el + degree, t);
    d.mem_wr = Bytes::of(num_el, t);
    d.dispatches = 1;
    return d;
}

StatsDelta embedding(std::uint64_t vocab_size, std::uint64_t hidden_size, DataType t,
                     std::uint64_t tokens) {
    need(vocab_size > 0 && hidden_size > 0 && tokens > 0, "embedding: zero dimension");
    StatsDelta d;
    d.opcount = tokens;
    d.mem_rd = Bytes::of(vocab_size * hidden_size, t);
    d.mem_wr = Bytes::of(tokens * hidden_size, t);
    d.dispatches = 1;
    return d;
}

void apply_tiling(StatsDelta& d, std::optional<std::uint64_t> onchip_bytes) {
    if (!onchip_bytes || d.dispatches == 0) return;
    const std::uint64_t onchip_nib = 2 * *onchip_bytes;
    const std::uint64_t touched = d.traffic().nibbles();
    const std::uint64_t tiles = (touched + onchip_nib - 1) / onchip_nib;
    d.dispatches = tiles > d.dispatches ? tiles : d.dispatches;
}

}  // namespace life
