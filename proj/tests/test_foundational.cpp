// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "life/error.hpp"
#include "life/foundational_ops.hpp"

using namespace life;

namespace {

// Multiply-accumulate by loop nest: first product is a mul, the rest mul+add.
std::uint64_t loop_gemm(std::uint64_t m, std::uint64_t k, std::uint64_t n) {
    std::uint64_t ops = 0;
    for (std::uint64_t i = 0; i < m; ++i)
        for (std::uint64_t j = 0; j < n; ++j)
            for (std::uint64_t x = 0; x < k; ++x) ops += x ? 2 : 1;
    return ops;
}

double bytes(const Bytes& b) { return b.value(); }

}  // namespace

TEST_CASE("bytes keep half bytes") {
    CHECK(Bytes::of(3, DataType::int4).str() == "1.5");
    CHECK(Bytes::of(4, DataType::int4).str() == "2");
    CHECK(Bytes::of(3, DataType::bf16).value() == 6);
    CHECK(Bytes::parse("10.5") == Bytes::from_nibbles(21));
    CHECK(Bytes::parse(Bytes::of(12345, DataType::int4).str()) == Bytes::of(12345, DataType::int4));
    CHECK_THROWS(Bytes::parse("1.25"));
}

TEST_CASE("dtype sizes") {
    CHECK(nbytes(DataType::bf16) == 2);
    CHECK(nbytes(DataType::fp32) == 4);
    CHECK(nbytes(DataType::int8) == 1);
    CHECK(nbytes(DataType::int4) == 0.5);
    CHECK(parse_dtype("mxfp8") == DataType::mxfp8);
    CHECK_THROWS_AS(parse_dtype("int3"), ConfigError);
}

TEST_CASE("linear q_proj decode shape") {
    LinearArgs a;
    a.m = 1;
    a.k = a.n = 4096;
    const auto c = linear_parts(a);
    CHECK(c.compute.opcount == 33550336);
    CHECK(bytes(c.compute.mem_rd) == 8192);
    CHECK(bytes(c.params.mem_rd) == 33554432);
    CHECK(bytes(c.compute.mem_wr) == 8192);
    CHECK(c.compute.dispatches == 1);
    CHECK(c.params.opcount == 0);
}

TEST_CASE("linear int4 per group") {
    LinearArgs a;
    a.m = 1;
    a.k = a.n = 4096;
    a.dtype_b = DataType::int4;
    a.grpsize = 128;
    const auto c = linear_parts(a);
    CHECK(c.compute.opcount == 67104768);
    // half a byte per weight, bf16 scale and int4 zero per group
    CHECK(bytes(c.params.mem_rd) == 4096.0 * 4096 / 2 + 262144 + 65536);
    a.grpsize = 100;
    CHECK_THROWS_AS(linear(a), ShapeError);
    a.grpsize = 0;  // one group per column
    CHECK(bytes(linear_parts(a).params.mem_rd) == 4096.0 * 4096 / 2 + 4096 * 2 + 4096 * 0.5);
}

TEST_CASE("linear mx weights have no zero points") {
    LinearArgs a;
    a.k = 64;
    a.n = 8;
    a.dtype_b = DataType::mxint8;
    a.grpsize = 32;
    CHECK(bytes(linear_parts(a).params.mem_rd) == 64 * 8 + 2 * 8 * 2);
}

TEST_CASE("linear lora inline") {
    LinearArgs a;
    a.m = 1;
    a.k = a.n = 4096;
    const auto plain = linear(a).opcount;
    a.lora_rank = 128;
    CHECK(linear(a).opcount - plain == 4311744512ull);
    a.lora_rank = 16;
    CHECK(linear(a).opcount - plain == 553648128ull);
    a.n = 11008;
    a.lora_rank.reset();
    const auto gate = linear(a).opcount;
    a.lora_rank = 128;
    CHECK(linear(a).opcount - gate == 11587813376ull);
}

TEST_CASE("linear and bmm match the loop nest for dims up to 8") {
    for (std::uint64_t m = 1; m <= 8; ++m)
        for (std::uint64_t k = 1; k <= 8; ++k)
            for (std::uint64_t n = 1; n <= 8; ++n) {
                LinearArgs a;
                a.m = m;
                a.k = k;
                a.n = n;
                REQUIRE(linear(a).opcount == loop_gemm(m, k, n));
                a.bias = true;
                REQUIRE(linear(a).opcount == loop_gemm(m, k, n) + m * n);
                for (std::uint64_t b = 1; b <= 8; ++b)
                    REQUIRE(bmm(b, m, k, n, DataType::bf16).opcount == b * loop_gemm(m, k, n));
            }
}

TEST_CASE("bmm shapes") {
    const auto qk = bmm(32, 2048, 128, 2048, DataType::bf16);
    CHECK(qk.opcount == 2ull * 32 * 2048 * 128 * 2048 - 32ull * 2048 * 2048);
    CHECK(bytes(qk.mem_rd) == 33554432);
    CHECK(bytes(qk.mem_wr) == 268435456);
    CHECK(bmm(1, 1, 1, 1, DataType::bf16).opcount == 1);
    CHECK(bmm(32, 1, 128, 2049, DataType::bf16).opcount == 2ull * 32 * 128 * 2049 - 32 * 2049);
    // K held as int4 in the cache
    const auto mixed = bmm(2, 3, 4, 5, DataType::bf16, DataType::int4, DataType::fp32);
    CHECK(bytes(mixed.mem_rd) == 2 * 3 * 4 * 2 + 2 * 4 * 5 * 0.5);
    CHECK(bytes(mixed.mem_wr) == 2 * 3 * 5 * 4);
}

TEST_CASE("quantize / dequantize") {
    const auto d = quantize_dequantize(128, 1, DataType::bf16, DataType::int4);
    CHECK(d.opcount == 256);
    CHECK(bytes(d.traffic()) == 322);
    CHECK(quantize_dequantize(1, 1, DataType::bf16, DataType::int4).opcount == 2);
    CHECK(quantize_dequantize(4096 * 4096, 131072, DataType::bf16, DataType::int4).opcount == 33554432);
    const auto q = quantize_dequantize(128, 1, DataType::bf16, DataType::int4, QuantDir::quantize);
    CHECK(bytes(q.mem_wr) == 64);
    CHECK(bytes(q.mem_rd) == 258);
}

TEST_CASE("elementwise") {
    const auto e = elementwise(2, 3, DataType::bf16, 2);
    CHECK(e.opcount == 6);
    CHECK(bytes(e.mem_rd) == 24);
    CHECK(bytes(e.mem_wr) == 12);
    CHECK(elementwise(1, 1, DataType::bf16).opcount == 1);
    CHECK(elementwise(2048, 4096, DataType::bf16).opcount == 8388608);
    CHECK(bytes(elementwise(2, 3, DataType::bf16, 1).mem_rd) == 12);
}

TEST_CASE("nonlinear") {
    CHECK(nonlinear_pwl(2048 * 11008, 256, DataType::bf16).opcount == 45088768);
    const auto one = nonlinear_pwl(1, 256, DataType::bf16);
    CHECK(one.opcount == 2);
    CHECK(bytes(one.mem_rd) == 514);
    CHECK(bytes(nonlinear_pwl(256, 256, DataType::bf16).mem_rd) == 1024);
    CHECK(nonlinear_poly(10, 2, DataType::bf16).opcount == 50);
    CHECK(nonlinear_poly(1, 1, DataType::bf16).opcount == 2);
    CHECK(nonlinear_poly(100, 4, DataType::bf16).opcount == 1400);
}

TEST_CASE("embedding") {
    const auto e = embedding(32000, 4096, DataType::bf16);
    CHECK(bytes(e.mem_rd) == 262144000);
    CHECK(bytes(e.mem_wr) == 8192);
    CHECK(e.opcount == 1);
    CHECK(bytes(embedding(1, 1, DataType::bf16).mem_rd) == 2);
    CHECK(bytes(embedding(32000, 4096, DataType::int4).mem_rd) == 65536000);
    // more tokens: same table read, more rows out
    const auto e7 = embedding(32000, 4096, DataType::bf16, 7);
    CHECK(e7.mem_rd == e.mem_rd);
    CHECK(bytes(e7.mem_wr) == 7 * 8192);
}

TEST_CASE("tiling splits large kernels") {
    auto d = elementwise(1024, 1024, DataType::bf16);  // 6 MiB
    apply_tiling(d, 1 << 20);
    CHECK(d.dispatches == 6);
    auto small = elementwise(1, 8, DataType::bf16);
    apply_tiling(small, 1 << 20);
    CHECK(small.dispatches == 1);
    StatsDelta free_op;
    free_op.opcount = 10;
    apply_tiling(free_op, 1);
    CHECK(free_op.dispatches == 0);
    auto untouched = elementwise(1024, 1024, DataType::bf16);
    apply_tiling(untouched, std::nullopt);
    CHECK(untouched.dispatches == 1);
}

TEST_CASE("zero dims rejected") {
    LinearArgs a;
    a.k = 0;
    CHECK_THROWS_AS(linear(a), ShapeError);
    CHECK_THROWS_AS(bmm(0, 1, 1, 1, DataType::bf16), ShapeError);
    CHECK_THROWS_AS(elementwise(1, 0, DataType::bf16), ShapeError);
}
