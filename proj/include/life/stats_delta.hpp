// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "life/dtype.hpp"

namespace life {

// Byte count kept in half-byte units. int4 tensors stay exact; rendering
// divides by two at the edge.
class Bytes {
public:
    constexpr Bytes() = default;
    static constexpr Bytes from_nibbles(std::uint64_t n) { return Bytes(n); }
    static constexpr Bytes whole(std::uint64_t b) { return Bytes(2 * b); }
    static Bytes of(std::uint64_t elements, DataType t) {
        return Bytes(elements * static_cast<std::uint64_t>(life::nibbles(t)));
    }

    constexpr std::uint64_t nibbles() const { return n_; }
    constexpr bool integral() const { return n_ % 2 == 0; }
    constexpr double value() const { return static_cast<double>(n_) / 2.0; }
    // "123" or "123.5"
    std::string str() const;
    static Bytes parse(std::string_view text);

    constexpr Bytes& operator+=(Bytes o) { n_ += o.n_; return *this; }
    constexpr Bytes& operator-=(Bytes o) { n_ -= o.n_; return *this; }
    friend constexpr Bytes operator+(Bytes a, Bytes b) { return a += b; }
    friend constexpr Bytes operator-(Bytes a, Bytes b) { return a -= b; }
    friend constexpr Bytes operator*(Bytes a, std::uint64_t k) { return Bytes(a.n_ * k); }
    friend constexpr auto operator<=>(Bytes, Bytes) = default;

private:
    constexpr explicit Bytes(std::uint64_t n) : n_(n) {}
    std::uint64_t n_ = 0;
};

enum class OpClass { gemm, bmm, softmax, elementwise, nonlinear, embedding, norm, rope, other };
inline constexpr int kNumOpClasses = 9;

std::string_view to_string(OpClass c);
OpClass parse_op_class(std::string_view name);

struct StatsDelta {
    std::uint64_t opcount = 0;
    Bytes mem_rd;
    Bytes mem_wr;
    Bytes kv_rd;
    Bytes kv_wr;
    std::uint64_t dispatches = 0;

    Bytes traffic() const { return mem_rd + mem_wr + kv_rd + kv_wr; }

    StatsDelta& operator+=(const StatsDelta& o);
    friend StatsDelta operator+(StatsDelta a, const StatsDelta& b) { return a += b; }
    friend StatsDelta operator*(StatsDelta a, std::uint64_t k);
    friend bool operator==(const StatsDelta&, const StatsDelta&) = default;
};

}  // namespace life
