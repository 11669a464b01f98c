// SPDX-License-Identifier: Apache-2.0
#include "life/stats_delta.hpp"

#include <array>
#include <charconv>

#include "life/error.hpp"

namespace life {
namespace {

constexpr std::array<std::string_view, kNumOpClasses> kClassNames{
    "gemm", "bmm", "softmax", "elementwise", "nonlinear", "embedding", "norm", "rope", "other"};

}  // namespace

std::string Bytes::str() const {
    std::string s = std::to_string(n_ / 2);
    if (n_ % 2) s += ".5";
    return s;
}

Bytes Bytes::parse(std::string_view text) {
    bool half = false;
    if (text.size() > 2 && text.substr(text.size() - 2) == ".5") {
        half = true;
        text.remove_suffix(2);
    }
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size())
        throw ConfigError("bad byte count '" + std::string(text) + "'");
    return Bytes(2 * v + (half ? 1 : 0));
}

std::string_view to_string(OpClass c) { return kClassNames[static_cast<int>(c)]; }

OpClass parse_op_class(std::string_view name) {
    for (int i = 0; i < kNumOpClasses; ++i)
        if (kClassNames[i] == name) return static_cast<OpClass>(i);
    throw ConfigError("unknown operator class '" + std::string(name) + "'");
}

StatsDelta& StatsDelta::operator+=(const StatsDelta& o) {
    opcount += o.opcount;
    mem_rd += o.mem_rd;
    mem_wr += o.mem_wr;
    kv_rd += o.kv_rd;
    kv_wr += o.kv_wr;
    dispatches += o.dispatches;
    return *this;
}

StatsDelta operator*(StatsDelta a, std::uint64_t k) {
    a.opcount *= k;
    a.mem_rd = a.mem_rd * k;
    a.mem_wr = a.mem_wr * k;
    a.kv_rd = a.kv_rd * k;
    a.kv_wr = a.kv_wr * k;
    a.dispatches *= k;
    return a;
}

}  // namespace life
