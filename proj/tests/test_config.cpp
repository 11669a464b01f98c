// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "life/config.hpp"
#include "life/error.hpp"

using namespace life;

namespace {

// Llama2-7B int4 with MLA, trailing comma and all.
const char* kLlamaDoc = R"({
    "mode": "eager",
    "dtype_in": "bf16",
    "hidden_size": 4096,
    "vocab_size": 32000,
    "intermediate_size": 11008,
    "actfn_algo": "pwl",
    "actfn_table_size": 256,
    "dtype_wts": "int4",
    "gemm_quant_scheme": "pergrp",
    "gemm_grpsize": 128,
    "bias": false,
    "rope_table_size": 4096,
    "num_heads": 32,
    "num_kv_heads": 32,
    "num_decoder_layers": 32,
    "kv_qscheme": "none",
    "max_position_embeddings": 4096,
    "mla": true,
    "q_lora_rank": 128,
    "kv_lora_rank": 128,
    "qk_nope_head_dim": 128,
    "qk_rope_head_dim": 64,
    "v_head_dim": 128,
}
)";

std::string replace(std::string s, const std::string& from, const std::string& to) {
    auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
}

std::string drop_mla(std::string s) {
    s = replace(s, "\"mla\": true", "\"mla\": false");
    for (const char* key : {"q_lora_rank", "kv_lora_rank", "qk_nope_head_dim", "qk_rope_head_dim",
                            "v_head_dim"}) {
        const auto pos = s.find(std::string("\"") + key);
        REQUIRE(pos != std::string::npos);
        const auto end = s.find('\n', pos);
        s.erase(pos, end - pos + 1);
    }
    return s;
}

}  // namespace

TEST_CASE("llama config with MLA block parses") {
    const auto cfg = parse_model_config(kLlamaDoc);
    CHECK(cfg.hidden_size == 4096);
    CHECK(cfg.num_decoder_layers == 32);
    CHECK(cfg.mla);
    REQUIRE(cfg.mla_dims);
    CHECK(cfg.mla_dims->kv_lora_rank == 128);
    CHECK(cfg.mla_dims->qk_rope_head_dim == 64);
    CHECK(cfg.dtype_wts == DataType::int4);
    CHECK(cfg.group_size() == 128);
    CHECK(cfg.head_dim() == 128);
}

TEST_CASE("mla off with dims removed is plain llama") {
    const auto cfg = parse_model_config(drop_mla(kLlamaDoc));
    CHECK_FALSE(cfg.mla);
    CHECK_FALSE(cfg.mla_dims);
    CHECK(cfg.num_kv_heads == 32);
}

TEST_CASE("bad documents") {
    SUBCASE("kv heads must divide heads") {
        CHECK_THROWS_AS(parse_model_config(replace(kLlamaDoc, "\"num_kv_heads\": 32", "\"num_kv_heads\": 5")),
                        ConfigError);
    }
    SUBCASE("unknown key named") {
        try {
            parse_model_config(replace(kLlamaDoc, "\"bias\"", "\"biass\""));
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("biass") != std::string::npos);
        }
    }
    SUBCASE("missing key") {
        CHECK_THROWS_AS(parse_model_config(drop_mla(replace(kLlamaDoc, "\"vocab_size\": 32000,", ""))),
                        ConfigError);
    }
    SUBCASE("partial mla dims") {
        CHECK_THROWS_AS(parse_model_config(replace(kLlamaDoc, "\"v_head_dim\": 128,", "")), ConfigError);
    }
    SUBCASE("bad dtype") {
        CHECK_THROWS_AS(parse_model_config(replace(kLlamaDoc, "\"dtype_in\": \"bf16\"", "\"dtype_in\": \"bf17\"")),
                        ConfigError);
    }
    SUBCASE("syntax error") { CHECK_THROWS_AS(parse_model_config("{\"mode\": }"), ConfigError); }
    SUBCASE("group must divide hidden") {
        CHECK_THROWS_AS(parse_model_config(replace(kLlamaDoc, "\"gemm_grpsize\": 128", "\"gemm_grpsize\": 100")),
                        ConfigError);
    }
    SUBCASE("comma inside string untouched") {
        CHECK_THROWS_AS(parse_model_config(replace(kLlamaDoc, "\"eager\"", "\"eager,}\"")), ConfigError);
    }
}

TEST_CASE("presets") {
    const auto kv4 = preset_variant("bf16-int4-kv4");
    CHECK(kv4.dtype_wts == DataType::int4);
    CHECK(kv4.dtype_in == DataType::bf16);
    CHECK(kv4.kv_qscheme == KvQuant::int4);
    CHECK(kv4.mode == ExecMode::fused);

    const auto base = preset_variant("bf16-bf16");
    CHECK(base.dtype_wts == DataType::bf16);
    CHECK(base.kv_qscheme == KvQuant::none);
    CHECK(base.mode == ExecMode::eager);

    const auto mla = preset_variant("bf16-int4-mla");
    CHECK(mla.mla);
    CHECK(mla.mla_dims->q_lora_rank == 128);
    CHECK(mla.mla_dims->kv_lora_rank == 128);

    CHECK(preset_names().size() == 8);
    CHECK_THROWS_AS(preset_variant("bf16-int3"), ConfigError);
}

TEST_CASE("json round trip for every preset") {
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        const auto cfg = preset_variant(name);
        CHECK(parse_model_config(to_json(cfg)) == cfg);
    }
}

TEST_CASE("hardware documents") {
    auto [hw, eff] = parse_hardware(R"({"peak_tops": 50, "peak_bw": 30, "dispatch_latency": 1e-5,
        "ec": {"gemm": 0.5, "bmm": 0.25}, "em": 0.8, "em_avg": 0.1})");
    CHECK(hw.peak_tops == 50);
    CHECK(hw.peak_bw == 30);
    CHECK(hw.dispatch_latency == doctest::Approx(1e-5));
    CHECK(eff.compute(OpClass::gemm) == 0.5);
    CHECK(eff.compute(OpClass::bmm) == 0.25);
    CHECK(eff.compute(OpClass::softmax) == 1.0);
    CHECK(eff.memory(OpClass::rope) == 0.8);
    CHECK(eff.memory_avg() == 0.1);

    CHECK_THROWS_AS(parse_hardware(R"({"peak_tops": 0, "peak_bw": 30})"), ConfigError);
    CHECK_THROWS_AS(parse_hardware(R"({"peak_tops": 1, "peak_bw": 30, "ec": 1.5})"), ConfigError);
    CHECK_THROWS_AS(parse_hardware(R"({"peak_tops": 1, "peak_bw": 30, "ec": {"gemmm": 0.5}})"), ConfigError);
}

TEST_CASE("em falls back to em_avg") {
    EfficiencyProfile e;
    CHECK(e.memory(OpClass::gemm) == 1.0);
    e.em_avg = 0.3;
    CHECK(e.memory(OpClass::gemm) == 0.3);
    e.em[static_cast<int>(OpClass::gemm)] = 0.7;
    CHECK(e.memory(OpClass::gemm) == 0.7);
}

TEST_CASE("scenario rules") {
    ScenarioConfig sc;
    sc.prompt_len = 0;
    CHECK_THROWS_AS(validate(sc), ConfigError);
    sc.prompt_len = 64;
    sc.phase = Phase::chunked_prefill;
    sc.chunk_size = 65;
    CHECK_THROWS_AS(validate(sc), ConfigError);
    sc.chunk_size = 64;
    CHECK_NOTHROW(validate(sc));
    sc.phase = Phase::timeline;
    sc.gen_len = 0;
    CHECK_THROWS_AS(validate(sc), ConfigError);
    CHECK(parse_phase("chunked_prefill") == Phase::chunked_prefill);
    CHECK_THROWS_AS(parse_phase("warmup"), ConfigError);
}
