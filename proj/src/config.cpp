// SPDX-License-Identifier: Apache-2.0
#include "life/config.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "json.hpp"

#include "life/error.hpp"

namespace life {

using json = nlohmann::ordered_json;

std::string_view to_string(ExecMode m) { return m == ExecMode::eager ? "eager" : "fused"; }

std::string_view to_string(KvQuant q) {
    switch (q) {
    case KvQuant::none: return "none";
    case KvQuant::int8: return "int8";
    case KvQuant::int4: return "int4";
    }
    return "?";
}

std::string_view to_string(LoraPolicy p) {
    switch (p) {
    case LoraPolicy::none: return "none";
    case LoraPolicy::inline_merge: return "inline";
    case LoraPolicy::ahead_of_time: return "ahead_of_time";
    }
    return "?";
}

std::string_view to_string(Phase p) {
    switch (p) {
    case Phase::prefill: return "prefill";
    case Phase::decode: return "decode";
    case Phase::chunked_prefill: return "chunked_prefill";
    case Phase::timeline: return "timeline";
    }
    return "?";
}

Phase parse_phase(std::string_view s) {
    for (Phase p : {Phase::prefill, Phase::decode, Phase::chunked_prefill, Phase::timeline})
        if (to_string(p) == s) return p;
    throw ConfigError("unknown phase '" + std::string(s) + "'");
}

DataType ModelConfig::kv_dtype() const {
    switch (kv_qscheme) {
    case KvQuant::int8: return DataType::int8;
    case KvQuant::int4: return DataType::int4;
    case KvQuant::none: break;
    }
    return dtype_in;
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("constraint violated: " + what);
}

template <class E>
E parse_enum(const std::string& key, const std::string& v,
             std::initializer_list<std::pair<std::string_view, E>> opts) {
    for (const auto& [name, e] : opts)
        if (name == v) return e;
    throw ConfigError("invalid value '" + v + "' for " + key);
}

// The published listing ends its object with "...,\n}". Blank out commas that
// precede a closing bracket so offsets in error messages stay valid.
std::string blank_trailing_commas(std::string_view text) {
    std::string out(text);
    bool in_str = false;
    for (std::size_t i = 0; i < out.size(); ++i) {
        char c = out[i];
        if (in_str) {
            if (c == '\\') ++i;
            else if (c == '"') in_str = false;
            continue;
        }
        if (c == '"') {
            in_str = true;
        } else if (c == ',') {
            std::size_t j = i + 1;
            while (j < out.size() && std::isspace(static_cast<unsigned char>(out[j]))) ++j;
            if (j < out.size() && (out[j] == '}' || out[j] == ']')) out[i] = ' ';
        }
    }
    return out;
}

json parse_json(std::string_view text) {
    try {
        return json::parse(blank_trailing_commas(text));
    } catch (const json::parse_error& e) {
        throw ConfigError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

std::uint64_t get_count(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(key + " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::string get_str(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_string()) throw ConfigError(key + " must be a string");
    return v.get<std::string>();
}

bool get_bool(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_boolean()) throw ConfigError(key + " must be true or false");
    return v.get<bool>();
}

const std::set<std::string> kRequired{
    "mode", "dtype_in", "hidden_size", "vocab_size", "intermediate_size", "actfn_algo",
    "actfn_table_size", "dtype_wts", "gemm_quant_scheme", "gemm_grpsize", "bias",
    "rope_table_size", "num_heads", "num_kv_heads", "num_decoder_layers", "kv_qscheme",
    "max_position_embeddings", "mla"};
const std::set<std::string> kMlaKeys{"q_lora_rank", "kv_lora_rank", "qk_nope_head_dim",
                                     "qk_rope_head_dim", "v_head_dim"};
const std::set<std::string> kOptional{"poly_degree", "lora_rank", "dtype_lora",
                                      "lora_merge_policy", "online_hadamard"};

}  // namespace

void validate(const ModelConfig& c) {
    require(c.hidden_size > 0, "hidden_size > 0");
    require(c.vocab_size > 0, "vocab_size > 0");
    require(c.intermediate_size > 0, "intermediate_size > 0");
    require(c.num_heads > 0, "num_heads > 0");
    require(c.num_kv_heads > 0, "num_kv_heads > 0");
    require(c.num_decoder_layers > 0, "num_decoder_layers > 0");
    require(c.max_position_embeddings > 0, "max_position_embeddings > 0");
    require(c.rope_table_size > 0, "rope_table_size > 0");
    require(c.actfn_table_size > 0, "actfn_table_size > 0");
    require(c.hidden_size % c.num_heads == 0,
            "hidden_size divisible by num_heads (" + std::to_string(c.hidden_size) + " % " +
                std::to_string(c.num_heads) + ")");
    require(c.num_heads % c.num_kv_heads == 0,
            "num_heads divisible by num_kv_heads (" + std::to_string(c.num_heads) + " % " +
                std::to_string(c.num_kv_heads) + ")");
    if (c.gemm_quant_scheme == QuantScheme::pergrp) {
        require(c.gemm_grpsize > 0, "gemm_grpsize > 0");
        require(c.hidden_size % c.gemm_grpsize == 0 && c.intermediate_size % c.gemm_grpsize == 0,
                "gemm_grpsize divides hidden_size and intermediate_size");
    }
    if (c.actfn_algo == ActAlgo::poly)
        require(c.poly_degree && *c.poly_degree > 0, "poly_degree present and positive for poly");
    if (c.mla) {
        require(c.mla_dims.has_value(), "mla requires q_lora_rank, kv_lora_rank, "
                                        "qk_nope_head_dim, qk_rope_head_dim, v_head_dim");
        const auto& d = *c.mla_dims;
        require(d.q_lora_rank > 0 && d.kv_lora_rank > 0 && d.qk_nope_head_dim > 0 &&
                    d.qk_rope_head_dim > 0 && d.v_head_dim > 0,
                "mla dimensions positive");
    }
    if (c.lora_merge_policy != LoraPolicy::none)
        require(c.lora_rank && *c.lora_rank > 0, "lora_rank present and positive for LoRA");
}

ModelConfig parse_model_config(std::string_view text) {
    json j = parse_json(text);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    std::vector<std::string> unknown;
    for (const auto& [key, _] : j.items())
        if (!kRequired.count(key) && !kMlaKeys.count(key) && !kOptional.count(key))
            unknown.push_back(key);
    if (!unknown.empty()) {
        std::string msg = "unknown keys:";
        for (const auto& k : unknown) msg += " " + k;
        throw ConfigError(msg);
    }
    for (const auto& k : kRequired)
        if (!j.contains(k)) throw ConfigError("missing key: " + k);

    ModelConfig c;
    c.mode = parse_enum<ExecMode>("mode", get_str(j, "mode"),
                                  {{"eager", ExecMode::eager}, {"fused", ExecMode::fused}});
    c.dtype_in = parse_dtype(get_str(j, "dtype_in"));
    c.dtype_wts = parse_dtype(get_str(j, "dtype_wts"));
    c.hidden_size = get_count(j, "hidden_size");
    c.vocab_size = get_count(j, "vocab_size");
    c.intermediate_size = get_count(j, "intermediate_size");
    c.actfn_algo = parse_enum<ActAlgo>("actfn_algo", get_str(j, "actfn_algo"),
                                       {{"pwl", ActAlgo::pwl}, {"poly", ActAlgo::poly}});
    c.actfn_table_size = get_count(j, "actfn_table_size");
    if (j.contains("poly_degree")) c.poly_degree = get_count(j, "poly_degree");
    c.gemm_quant_scheme =
        parse_enum<QuantScheme>("gemm_quant_scheme", get_str(j, "gemm_quant_scheme"),
                                {{"none", QuantScheme::none}, {"pergrp", QuantScheme::pergrp}});
    c.gemm_grpsize = get_count(j, "gemm_grpsize");
    c.bias = get_bool(j, "bias");
    c.rope_table_size = get_count(j, "rope_table_size");
    c.num_heads = get_count(j, "num_heads");
    c.num_kv_heads = get_count(j, "num_kv_heads");
    c.num_decoder_layers = get_count(j, "num_decoder_layers");
    c.kv_qscheme = parse_enum<KvQuant>(
        "kv_qscheme", get_str(j, "kv_qscheme"),
        {{"none", KvQuant::none}, {"int8", KvQuant::int8}, {"int4", KvQuant::int4}});
    c.max_position_embeddings = get_count(j, "max_position_embeddings");
    c.mla = get_bool(j, "mla");

    std::size_t mla_present = 0;
    for (const auto& k : kMlaKeys) mla_present += j.contains(k);
    if (mla_present == kMlaKeys.size()) {
        c.mla_dims = MlaDims{get_count(j, "q_lora_rank"), get_count(j, "kv_lora_rank"),
                             get_count(j, "qk_nope_head_dim"), get_count(j, "qk_rope_head_dim"),
                             get_count(j, "v_head_dim")};
    } else if (mla_present != 0) {
        throw ConfigError("constraint violated: MLA dimension fields must be given together");
    }

    if (j.contains("lora_rank")) c.lora_rank = get_count(j, "lora_rank");
    if (j.contains("dtype_lora")) c.dtype_lora = parse_dtype(get_str(j, "dtype_lora"));
    if (j.contains("lora_merge_policy"))
        c.lora_merge_policy = parse_enum<LoraPolicy>(
            "lora_merge_policy", get_str(j, "lora_merge_policy"),
            {{"none", LoraPolicy::none},
             {"inline", LoraPolicy::inline_merge},
             {"ahead_of_time", LoraPolicy::ahead_of_time}});
    if (j.contains("online_hadamard")) c.online_hadamard = get_bool(j, "online_hadamard");

    validate(c);
    return c;
}

std::string to_json(const ModelConfig& c) {
    json j;
    j["mode"] = to_string(c.mode);
    j["dtype_in"] = to_string(c.dtype_in);
    j["hidden_size"] = c.hidden_size;
    j["vocab_size"] = c.vocab_size;
    j["intermediate_size"] = c.intermediate_size;
    j["actfn_algo"] = c.actfn_algo == ActAlgo::pwl ? "pwl" : "poly";
    j["actfn_table_size"] = c.actfn_table_size;
    if (c.poly_degree) j["poly_degree"] = *c.poly_degree;
    j["dtype_wts"] = to_string(c.dtype_wts);
    j["gemm_quant_scheme"] = c.gemm_quant_scheme == QuantScheme::pergrp ? "pergrp" : "none";
    j["gemm_grpsize"] = c.gemm_grpsize;
    j["bias"] = c.bias;
    j["rope_table_size"] = c.rope_table_size;
    j["num_heads"] = c.num_heads;
    j["num_kv_heads"] = c.num_kv_heads;
    j["num_decoder_layers"] = c.num_decoder_layers;
    j["kv_qscheme"] = to_string(c.kv_qscheme);
    j["max_position_embeddings"] = c.max_position_embeddings;
    j["mla"] = c.mla;
    if (c.mla_dims) {
        j["q_lora_rank"] = c.mla_dims->q_lora_rank;
        j["kv_lora_rank"] = c.mla_dims->kv_lora_rank;
        j["qk_nope_head_dim"] = c.mla_dims->qk_nope_head_dim;
        j["qk_rope_head_dim"] = c.mla_dims->qk_rope_head_dim;
        j["v_head_dim"] = c.mla_dims->v_head_dim;
    }
    if (c.lora_rank) j["lora_rank"] = *c.lora_rank;
    j["dtype_lora"] = to_string(c.dtype_lora);
    j["lora_merge_policy"] = to_string(c.lora_merge_policy);
    j["online_hadamard"] = c.online_hadamard;
    return j.dump(4) + "\n";
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{
        "bf16-bf16",      "bf16-int4",      "bf16-int4-fused", "bf16-int4-kv4",
        "bf16-int4-mla",  "bf16-int4-lora", "quarot-w4a4kv4",  "fp16-fp16"};
    return names;
}

ModelConfig preset_variant(std::string_view name) {
    ModelConfig c;  // Llama2-7B, bf16, eager
    auto int4 = [&c] {
        c.dtype_wts = DataType::int4;
        c.gemm_quant_scheme = QuantScheme::pergrp;
        c.gemm_grpsize = 128;
    };
    if (name == "bf16-bf16") {
    } else if (name == "bf16-int4") {
        int4();
    } else if (name == "bf16-int4-fused") {
        int4();
        c.mode = ExecMode::fused;
    } else if (name == "bf16-int4-kv4") {
        int4();
        c.mode = ExecMode::fused;
        c.kv_qscheme = KvQuant::int4;
    } else if (name == "bf16-int4-mla") {
        int4();
        c.mode = ExecMode::fused;
        c.mla = true;
        c.mla_dims = MlaDims{128, 128, 128, 64, 128};
    } else if (name == "bf16-int4-lora") {
        int4();
        c.mode = ExecMode::fused;
        c.lora_rank = 128;
        c.lora_merge_policy = LoraPolicy::inline_merge;
    } else if (name == "quarot-w4a4kv4") {
        int4();
        c.mode = ExecMode::fused;
        c.dtype_in = DataType::int8;
        c.kv_qscheme = KvQuant::int4;
        c.online_hadamard = true;
    } else if (name == "fp16-fp16") {
        c.dtype_in = DataType::fp16;
        c.dtype_wts = DataType::fp16;
    } else {
        throw ConfigError("unknown variant '" + std::string(name) + "'");
    }
    // Same validator as user documents.
    return parse_model_config(to_json(c));
}

double EfficiencyProfile::compute(OpClass c) const {
    return ec[static_cast<int>(c)].value_or(1.0);
}

double EfficiencyProfile::memory(OpClass c) const {
    return em[static_cast<int>(c)].value_or(em_avg.value_or(1.0));
}

EfficiencyProfile EfficiencyProfile::uniform(double ec_v, double em_v) {
    EfficiencyProfile e;
    e.ec.fill(ec_v);
    e.em.fill(em_v);
    e.em_avg = em_v;
    return e;
}

void validate(const HardwareSpec& hw) {
    require(hw.peak_tops > 0, "peak_tops > 0");
    require(hw.peak_bw > 0, "peak_bw > 0");
    require(hw.dispatch_latency >= 0, "dispatch_latency >= 0");
    if (hw.onchip_bytes) require(*hw.onchip_bytes > 0, "onchip_bytes > 0");
}

void validate(const EfficiencyProfile& e) {
    auto ok = [](const std::optional<double>& v) { return !v || (*v > 0 && *v <= 1); };
    for (int i = 0; i < kNumOpClasses; ++i) {
        require(ok(e.ec[i]), "ec in (0, 1]");
        require(ok(e.em[i]), "em in (0, 1]");
    }
    require(ok(e.em_avg), "em_avg in (0, 1]");
}

std::pair<HardwareSpec, EfficiencyProfile> parse_hardware(std::string_view text) {
    json j = parse_json(text);
    if (!j.is_object()) throw ConfigError("hardware spec must be a JSON object");
    static const std::set<std::string> keys{"peak_tops", "peak_bw", "dispatch_latency",
                                            "onchip_bytes", "ec", "em", "em_avg"};
    for (const auto& [key, _] : j.items())
        if (!keys.count(key)) throw ConfigError("unknown keys: " + key);
    HardwareSpec hw;
    EfficiencyProfile eff;
    auto num = [&j](const char* k) {
        if (!j.at(k).is_number()) throw ConfigError(std::string(k) + " must be a number");
        return j.at(k).get<double>();
    };
    if (!j.contains("peak_tops") || !j.contains("peak_bw"))
        throw ConfigError("hardware spec needs peak_tops and peak_bw");
    hw.peak_tops = num("peak_tops");
    hw.peak_bw = num("peak_bw");
    if (j.contains("dispatch_latency")) hw.dispatch_latency = num("dispatch_latency");
    if (j.contains("onchip_bytes")) hw.onchip_bytes = get_count(j, "onchip_bytes");
    auto fill = [&j](const char* key, std::array<std::optional<double>, kNumOpClasses>& dst) {
        if (!j.contains(key)) return;
        const auto& v = j.at(key);
        if (v.is_number()) {
            dst.fill(v.get<double>());
        } else if (v.is_object()) {
            for (const auto& [cls, f] : v.items()) {
                if (!f.is_number()) throw ConfigError(std::string(key) + "." + cls + " must be a number");
                dst[static_cast<int>(parse_op_class(cls))] = f.get<double>();
            }
        } else {
            throw ConfigError(std::string(key) + " must be a number or an object");
        }
    };
    fill("ec", eff.ec);
    fill("em", eff.em);
    if (j.contains("em_avg")) eff.em_avg = num("em_avg");
    validate(hw);
    validate(eff);
    return {hw, eff};
}

void validate(const ScenarioConfig& sc) {
    require(sc.prompt_len >= 1, "prompt_len >= 1");
    if (sc.phase == Phase::chunked_prefill)
        require(sc.chunk_size >= 1 && sc.chunk_size <= sc.prompt_len,
                "1 <= chunk_size <= prompt_len");
    if (sc.phase == Phase::timeline || sc.phase == Phase::decode)
        require(sc.gen_len >= 1, "gen_len >= 1");
}

}  // namespace life
