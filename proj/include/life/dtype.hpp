// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace life {

enum class DataType { bf16, fp16, fp32, int16, int8, int4, mxfp8, mxint8 };

// Element size in half-bytes, so int4 stays exact.
int nibbles(DataType t);
double nbytes(DataType t);
bool is_quantized(DataType t);  // int4/int8/int16 and mx formats used as weights
bool is_mx(DataType t);

std::string_view to_string(DataType t);
// Throws ConfigError on an unknown name.
DataType parse_dtype(std::string_view name);

}  // namespace life
