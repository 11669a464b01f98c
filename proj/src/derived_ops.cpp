// SPDX-License-Identifier: Apache-2.0
#include "life/derived_ops.hpp"

#include <bit>
#include <utility>

#include "life/error.hpp"

namespace life {
namespace {

StatsDelta ops_only(std::uint64_t ops) {
    StatsDelta d;
    d.opcount = ops;
    return d;
}

StatsDelta traffic(std::uint64_t ops, Bytes rd, Bytes wr, std::uint64_t dispatches = 1) {
    StatsDelta d;
    d.opcount = ops;
    d.mem_rd = rd;
    d.mem_wr = wr;
    d.dispatches = dispatches;
    return d;
}

// A unary pass over num_el elements.
StatsDelta unary_pass(std::uint64_t ops, std::uint64_t num_el, DataType t) {
    return traffic(ops, Bytes::of(num_el, t), Bytes::of(num_el, t));
}

OpCost pick(OpCost eager, OpCost fused, Fusion f) {
    if (f == Fusion::eager) return eager;
    fused.elided = eager.total().traffic() - fused.total().traffic();
    return fused;
}

std::uint64_t ceil_log2(std::uint64_t x) { return x <= 1 ? 0 : std::bit_width(x - 1); }

std::uint64_t exp_ops_per_el(const ExpApprox& e) {
    return e.algo == ActAlgo::pwl ? 2 : e.degree * (e.degree + 1) / 2 + e.degree;
}

std::uint64_t exp_table(const ExpApprox& e) {
    return e.algo == ActAlgo::pwl ? e.table_size : e.degree;
}

StatsDelta activation(std::uint64_t num_el, const ExpApprox& e, DataType t) {
    return e.algo == ActAlgo::pwl ? nonlinear_pwl(num_el, e.table_size, t)
                                  : nonlinear_poly(num_el, e.degree, t);
}

}  // namespace

StatsDelta OpCost::total() const {
    StatsDelta t;
    for (const auto& p : parts) t += p.delta;
    return t;
}

void OpCost::add(std::string name, OpClass cls, const StatsDelta& d) {
    parts.push_back(Part{std::move(name), cls, d});
}

void OpCost::append(const OpCost& other, const std::string& prefix) {
    for (const auto& p : other.parts) parts.push_back(Part{prefix + p.name, p.cls, p.delta});
    elided += other.elided;
}

StatsDelta inverse(std::uint64_t num_el, DataType t, std::uint64_t c, Fusion f) {
    if (num_el == 0) throw ShapeError("inverse: num_el must be positive");
    if (f == Fusion::fused) return unary_pass(c * num_el, num_el, t);
    // one pass per iteration step
    return unary_pass(num_el, num_el, t) * c;
}

StatsDelta inv_sqrt(std::uint64_t num_el, DataType t, std::uint64_t c, Fusion f) {
    return inverse(num_el, t, c, f);
}

OpCost rope(std::uint64_t seq, std::uint64_t heads, std::uint64_t head_dim,
            std::uint64_t table_rows, DataType t, Fusion f, const OpConstants& k) {
    if (seq == 0 || heads == 0 || head_dim == 0) throw ShapeError("rope: zero dimension");
    const std::uint64_t n = seq * heads * head_dim;
    const Bytes table = Bytes::of(table_rows * head_dim, t);
    const Bytes x = Bytes::of(n, t);

    OpCost eager;
    eager.add("rope.mul_cos", OpClass::rope, traffic(n, x + table, x));
    eager.add("rope.mul_sin", OpClass::rope, traffic(n, x, x));
    eager.add("rope.add", OpClass::rope, traffic((k.rope - 2) * n, x + x, x));

    OpCost fused;
    fused.add("rope", OpClass::rope, traffic(k.rope * n, x + table, x));
    return pick(std::move(eager), std::move(fused), f);
}

OpCost rmsnorm(std::uint64_t seq, std::uint64_t hidden, DataType t, Fusion f,
               const OpConstants& k) {
    if (seq == 0 || hidden == 0) throw ShapeError("rmsnorm: zero dimension");
    const std::uint64_t n = seq * hidden;
    const Bytes x = Bytes::of(n, t);
    const Bytes rows = Bytes::of(seq, t);
    const Bytes w = Bytes::of(hidden, t);

    OpCost eager;
    eager.add("norm.square", OpClass::norm, traffic(n, x, x));
    eager.add("norm.sum", OpClass::norm, traffic(n, x, rows));
    eager.add("norm.inv_sqrt", OpClass::norm, inv_sqrt(seq, t, k.newton, Fusion::eager));
    eager.add("norm.scale", OpClass::norm, traffic(n, x + rows, x));
    eager.add("norm.weight", OpClass::norm, traffic(n, x + w, x));

    OpCost fused;
    fused.add("norm", OpClass::norm, traffic(3 * n + k.newton * seq + n, x + w, x));
    return pick(std::move(eager), std::move(fused), f);
}

OpCost softmax(std::uint64_t rows, std::uint64_t cols, DataType t, const ExpApprox& exp,
               Fusion f, const OpConstants& k) {
    if (rows == 0 || cols == 0) throw ShapeError("softmax: zero dimension");
    const std::uint64_t n = rows * cols;
    const Bytes x = Bytes::of(n, t);
    const Bytes r = Bytes::of(rows, t);
    const Bytes table = Bytes::of(exp_table(exp), t);
    const std::uint64_t exp_ops = exp_ops_per_el(exp) * n;

    OpCost eager;
    eager.add("softmax.max", OpClass::softmax, traffic(n, x, r));
    eager.add("softmax.sub", OpClass::softmax, traffic(n, x + r, x));
    eager.add("softmax.exp", OpClass::softmax, traffic(exp_ops, x + table, x));
    eager.add("softmax.sum", OpClass::softmax, traffic(n, x, r));
    eager.add("softmax.inverse", OpClass::softmax, inverse(rows, t, k.newton, Fusion::eager));
    eager.add("softmax.norm", OpClass::softmax, traffic(n, x + r, x));

    OpCost fused;
    fused.add("softmax", OpClass::softmax,
              traffic(4 * n + exp_ops + k.newton * rows, x + table, x));
    return pick(std::move(eager), std::move(fused), f);
}

StatsDelta hadamard(std::uint64_t m, std::uint64_t k, DataType t) {
    if (m == 0 || k == 0) throw ShapeError("hadamard: zero dimension");
    return unary_pass(2 * m * k * ceil_log2(k), m * k, t);
}

LinearParams LinearParams::from(const ModelConfig& cfg) {
    LinearParams p;
    p.act = cfg.dtype_in;
    p.wts = cfg.dtype_wts;
    p.grpsize = cfg.group_size();
    p.bias = cfg.bias;
    p.lora_rank = cfg.lora_rank;
    p.dtype_lora = cfg.dtype_lora;
    p.lora_policy = cfg.lora_merge_policy;
    return p;
}

StatsDelta quantized_linear(const LinearArgs& a) {
    if (!is_quantized(a.dtype_b)) throw ShapeError("quantized_linear: weights are not quantized");
    return linear(a);
}

StatsDelta lora_linear(LinearArgs a, LoraPolicy policy) {
    if (policy != LoraPolicy::none && !a.lora_rank)
        throw ShapeError("lora_linear: merge policy set without a rank");
    if (policy != LoraPolicy::inline_merge) a.lora_rank.reset();
    return linear(a);
}

LinearCost block_linear(std::uint64_t m, std::uint64_t k, std::uint64_t n, const LinearParams& p,
                        Fusion f) {
    LinearArgs a;
    a.m = m;
    a.k = k;
    a.n = n;
    a.dtype_a = a.dtype_out = p.act;
    a.dtype_b = p.wts;
    a.bias = p.bias;
    a.grpsize = p.grpsize;
    if (p.lora_policy == LoraPolicy::inline_merge) a.lora_rank = p.lora_rank;
    a.dtype_lora = p.dtype_lora;
    LinearCost c = linear_parts(a);
    if (f == Fusion::fused) {
        c.compute.mem_rd = Bytes();
        c.compute.mem_wr = Bytes();
    }
    return c;
}

OpCost mlp(std::uint64_t seq, const MlpSpec& s, const LinearParams& p, Fusion f) {
    const std::uint64_t h = s.hidden, i = s.intermediate;
    auto lin = [&](std::uint64_t k, std::uint64_t n, Fusion ff) {
        return block_linear(seq, k, n, p, ff).total();
    };

    OpCost eager;
    eager.add("mlp.gate", OpClass::gemm, lin(h, i, Fusion::eager));
    eager.add("mlp.up", OpClass::gemm, lin(h, i, Fusion::eager));
    eager.add("mlp.act", OpClass::nonlinear, activation(seq * i, s.act, p.act));
    eager.add("mlp.mul", OpClass::elementwise, elementwise(seq, i, p.act, 2));
    if (s.hadamard) eager.add("mlp.hadamard", OpClass::other, hadamard(seq, i, p.act));
    eager.add("mlp.down", OpClass::gemm, lin(i, h, Fusion::eager));

    OpCost fused;
    fused.add("mlp.gate", OpClass::gemm, lin(h, i, Fusion::fused));
    fused.add("mlp.up", OpClass::gemm, lin(h, i, Fusion::fused));
    StatsDelta act = ops_only(activation(seq * i, s.act, p.act).opcount);
    act.mem_rd = Bytes::of(exp_table(s.act), p.act);
    fused.add("mlp.act", OpClass::nonlinear, act);
    fused.add("mlp.mul", OpClass::elementwise, ops_only(seq * i));
    if (s.hadamard) fused.add("mlp.hadamard", OpClass::other, ops_only(hadamard(seq, i, p.act).opcount));
    fused.add("mlp.down", OpClass::gemm, lin(i, h, Fusion::fused));
    return pick(std::move(eager), std::move(fused), f);
}

std::string_view to_string(AttnKind k) {
    switch (k) {
    case AttnKind::MHA: return "MHA";
    case AttnKind::GQA: return "GQA";
    case AttnKind::MQA: return "MQA";
    case AttnKind::MLA: return "MLA";
    }
    return "?";
}

AttentionSpec AttentionSpec::from(const ModelConfig& cfg) {
    AttentionSpec s;
    s.num_heads = cfg.num_heads;
    s.num_kv_heads = cfg.num_kv_heads;
    s.head_dim = cfg.head_dim();
    s.kv_qscheme = cfg.kv_qscheme;
    s.fused = cfg.mode == ExecMode::fused;
    s.hidden = cfg.hidden_size;
    s.rope_table_size = cfg.rope_table_size;
    s.softmax_exp = ExpApprox{cfg.actfn_algo, cfg.actfn_table_size, cfg.poly_degree.value_or(2)};
    s.hadamard = cfg.online_hadamard;
    if (cfg.mla) {
        s.mechanism = AttnKind::MLA;
        s.mla_dims = cfg.mla_dims;
    } else if (cfg.num_kv_heads == cfg.num_heads) {
        s.mechanism = AttnKind::MHA;
    } else if (cfg.num_kv_heads == 1) {
        s.mechanism = AttnKind::MQA;
    } else {
        s.mechanism = AttnKind::GQA;
    }
    return s;
}

DataType AttentionSpec::kv_dtype(DataType act) const {
    switch (kv_qscheme) {
    case KvQuant::int8: return DataType::int8;
    case KvQuant::int4: return DataType::int4;
    case KvQuant::none: break;
    }
    return act;
}

void validate(const AttentionSpec& s) {
    auto bad = [](const std::string& m) { throw ShapeError("attention: " + m); };
    if (s.num_heads == 0 || s.num_kv_heads == 0 || s.head_dim == 0) bad("zero head count or dim");
    if (s.num_heads % s.num_kv_heads) bad("num_heads not divisible by num_kv_heads");
    if ((s.mechanism == AttnKind::MLA) != s.mla_dims.has_value())
        bad("mla_dims present iff mechanism is MLA");
    switch (s.mechanism) {
    case AttnKind::MHA:
        if (s.num_kv_heads != s.num_heads) bad("MHA needs num_kv_heads == num_heads");
        break;
    case AttnKind::MQA:
        if (s.num_kv_heads != 1) bad("MQA needs num_kv_heads == 1");
        break;
    case AttnKind::GQA:
        if (s.num_kv_heads == 1 || s.num_kv_heads == s.num_heads)
            bad("GQA needs 1 < num_kv_heads < num_heads");
        break;
    case AttnKind::MLA: break;
    }
}

namespace {

// Elements stored per token per layer, and how many (scale, zero) pairs.
std::pair<std::uint64_t, std::uint64_t> kv_layout(const AttentionSpec& s) {
    if (s.mechanism == AttnKind::MLA)
        return {s.mla_dims->kv_lora_rank + s.mla_dims->qk_rope_head_dim, 1};
    return {2 * s.num_kv_heads * s.head_dim, 2 * s.num_kv_heads};
}

Bytes kv_bytes(const AttentionSpec& s, DataType act, std::uint64_t tokens) {
    const auto [elems, groups] = kv_layout(s);
    Bytes b = Bytes::of(tokens * elems, s.kv_dtype(act));
    if (s.kv_qscheme != KvQuant::none) b += Bytes::of(tokens * groups * 2, act);
    return b;
}

}  // namespace

Bytes kv_bytes_per_token(const AttentionSpec& s, DataType act) { return kv_bytes(s, act, 1); }

OpCost attention(const AttentionSpec& s, std::uint64_t new_seq, std::uint64_t past_len,
                 const LinearParams& p, const OpConstants& k) {
    validate(s);
    if (new_seq == 0) throw ShapeError("attention: new_seq must be positive");

    const Fusion f = s.fused ? Fusion::fused : Fusion::eager;
    const DataType act = p.act;
    const DataType kvt = s.kv_dtype(act);
    const bool quant = s.kv_qscheme != KvQuant::none;
    const std::uint64_t sq = new_seq;
    const std::uint64_t total = past_len + new_seq;
    const std::uint64_t tp = s.pad_tile ? (total + s.pad_tile - 1) / s.pad_tile * s.pad_tile : total;
    const std::uint64_t nh = s.num_heads;
    const bool mla = s.mechanism == AttnKind::MLA;

    auto lin = [&](std::uint64_t m, std::uint64_t kk, std::uint64_t n) {
        return block_linear(m, kk, n, p, f).total();
    };

    OpCost c;
    std::uint64_t dqk, dv;     // per-head widths of the two BMMs
    DataType operand;          // dtype K and V arrive in at the BMMs
    Bytes kv_read = kv_bytes(s, act, total);
    const std::uint64_t kv_el_read = kv_layout(s).first * total;

    if (!mla) {
        const std::uint64_t kvh = s.num_kv_heads, d = s.head_dim;
        dqk = dv = d;
        operand = kvt;
        c.add("q_proj", OpClass::gemm, lin(sq, s.hidden, nh * d));
        c.add("k_proj", OpClass::gemm, lin(sq, s.hidden, kvh * d));
        c.add("v_proj", OpClass::gemm, lin(sq, s.hidden, kvh * d));
        c.append(rope(sq, nh, d, s.rope_table_size, act, Fusion::fused, k), "q.");
        c.append(rope(sq, kvh, d, s.rope_table_size, act, Fusion::fused, k), "k.");
    } else {
        const MlaDims& m = *s.mla_dims;
        dqk = m.qk_nope_head_dim + m.qk_rope_head_dim;
        dv = m.v_head_dim;
        operand = act;  // rebuilt from the latent
        c.add("q_a", OpClass::gemm, lin(sq, s.hidden, m.q_lora_rank));
        c.append(rmsnorm(sq, m.q_lora_rank, act, Fusion::fused, k), "q_a.");
        c.add("q_b", OpClass::gemm, lin(sq, m.q_lora_rank, nh * dqk));
        c.add("kv_a", OpClass::gemm, lin(sq, s.hidden, m.kv_lora_rank + m.qk_rope_head_dim));
        c.append(rmsnorm(sq, m.kv_lora_rank, act, Fusion::fused, k), "kv_a.");
        c.append(rope(sq, nh, m.qk_rope_head_dim, s.rope_table_size, act, Fusion::fused, k), "q.");
        c.append(rope(sq, 1, m.qk_rope_head_dim, s.rope_table_size, act, Fusion::fused, k), "k.");
    }

    StatsDelta upd;
    upd.kv_wr = kv_bytes(s, act, sq);
    if (quant) upd.opcount = k.kv_quant * kv_layout(s).first * sq;
    upd.dispatches = 1;
    c.add("kv_update", OpClass::other, upd);

    if (quant) c.add("kv_dequant", OpClass::other, ops_only(k.kv_quant * kv_el_read));

    StatsDelta qk = bmm(nh, sq, dqk, tp, act, operand, act);
    StatsDelta pv = bmm(nh, sq, tp, dv, act, operand, act);
    OpCost sm = softmax(nh * sq, tp, act, s.softmax_exp, Fusion::fused, k);
    StatsDelta smd = sm.total();

    if (mla) {
        // Re-expand the whole cached latent into per-head K (nope part) and V.
        StatsDelta kvb = lin(total, s.mla_dims->kv_lora_rank,
                             nh * (s.mla_dims->qk_nope_head_dim + dv));
        kvb.kv_rd = kv_read;
        c.add("kv_b", OpClass::gemm, kvb);
    } else {
        const Bytes half = Bytes::from_nibbles(kv_read.nibbles() / 2);
        qk.kv_rd = half;
        pv.kv_rd = kv_read - half;
    }

    if (f == Fusion::fused) {
        // One kernel: scores and probabilities never leave the chip, and V is
        // consumed straight from the cache read.
        qk.mem_wr = Bytes();
        qk.dispatches = 1;
        smd.mem_rd = Bytes::of(exp_table(s.softmax_exp), act);
        smd.mem_wr = Bytes();
        smd.dispatches = 0;
        pv.mem_rd = Bytes();
        pv.dispatches = 0;
    }
    c.add("attn.qk", OpClass::bmm, qk);
    // The 1/sqrt(d) scale rides in the QK^T epilogue.
    c.add("attn.scale", OpClass::elementwise, ops_only(nh * sq * tp));
    c.add("attn.softmax", OpClass::softmax, smd);
    c.add("attn.pv", OpClass::bmm, pv);

    if (s.hadamard) {
        StatsDelta h = hadamard(sq, nh * dv, act);
        if (f == Fusion::fused) h = ops_only(h.opcount);
        c.add("o.hadamard", OpClass::other, h);
    }
    c.add("o_proj", OpClass::gemm, lin(sq, nh * dv, s.hidden));

    if (f == Fusion::fused) {
        AttentionSpec e = s;
        e.fused = false;
        c.elided = attention(e, new_seq, past_len, p, k).total().traffic() - c.total().traffic();
    }
    return c;
}

std::uint64_t lora_merge_ops(std::uint64_t k, std::uint64_t n, std::uint64_t r) {
    return 2 * k * r * n + 2 * k * n;
}

std::vector<ProjectionShape> lora_projections(const ModelConfig& cfg) {
    const std::uint64_t h = cfg.hidden_size, i = cfg.intermediate_size;
    const std::uint64_t q = cfg.num_heads * cfg.head_dim();
    const std::uint64_t kv = cfg.num_kv_heads * cfg.head_dim();
    return {{"q_proj", h, q},    {"k_proj", h, kv},  {"v_proj", h, kv},  {"o_proj", q, h},
            {"gate_proj", h, i}, {"up_proj", h, i},  {"down_proj", i, h}};
}

StatsDelta lora_merge_total(const ModelConfig& cfg, std::optional<std::uint64_t> rank) {
    const auto r = rank ? rank : cfg.lora_rank;
    StatsDelta d;
    if (!r || *r == 0) return d;
    for (const auto& pr : lora_projections(cfg)) {
        d.opcount += lora_merge_ops(pr.k, pr.n, *r);
        d.mem_rd += Bytes::of(pr.k * pr.n, cfg.dtype_wts) + Bytes::of(pr.k * *r + *r * pr.n, cfg.dtype_lora);
        d.mem_wr += Bytes::of(pr.k * pr.n, cfg.dtype_wts);
        d.dispatches += 1;
    }
    return d * cfg.num_decoder_layers;
}

}  // namespace life
