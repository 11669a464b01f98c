// SPDX-License-Identifier: Apache-2.0
#include "life/dtype.hpp"

#include <array>
#include <utility>

#include "life/error.hpp"

namespace life {
namespace {

constexpr std::array<std::pair<DataType, std::string_view>, 8> kNames{{
    {DataType::bf16, "bf16"},
    {DataType::fp16, "fp16"},
    {DataType::fp32, "fp32"},
    {DataType::int16, "int16"},
    {DataType::int8, "int8"},
    {DataType::int4, "int4"},
    {DataType::mxfp8, "mxfp8"},
    {DataType::mxint8, "mxint8"},
}};

}  // namespace

int nibbles(DataType t) {
    switch (t) {
    case DataType::fp32: return 8;
    case DataType::bf16:
    case DataType::fp16:
    case DataType::int16: return 4;
    case DataType::int8:
    case DataType::mxfp8:
    case DataType::mxint8: return 2;
    case DataType::int4: return 1;
    }
    return 0;
}

double nbytes(DataType t) { return nibbles(t) / 2.0; }

bool is_quantized(DataType t) {
    return t == DataType::int4 || t == DataType::int8 || t == DataType::int16 || is_mx(t);
}

bool is_mx(DataType t) { return t == DataType::mxfp8 || t == DataType::mxint8; }

std::string_view to_string(DataType t) {
    for (const auto& [dt, name] : kNames)
        if (dt == t) return name;
    return "?";
}

DataType parse_dtype(std::string_view name) {
    for (const auto& [dt, n] : kNames)
        if (n == name) return dt;
    throw ConfigError("unknown datatype '" + std::string(name) + "'");
}

}  // namespace life
