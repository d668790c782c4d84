#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "chipvec/errors.hpp"

namespace chipvec {

enum class NpyDtype { Float32, Float64 };

// NPY format v1.0: \x93NUMPY magic, version 1.0, little-endian header length,
// python-dict header text space-padded so the total header is a multiple of
// 64 bytes, then raw little-endian values in C order.
std::string write_npy(const std::vector<double>& values, const std::vector<std::size_t>& shape,
                      NpyDtype dtype = NpyDtype::Float32);

void write_npy_file(const std::string& path, const std::vector<double>& values,
                    const std::vector<std::size_t>& shape, NpyDtype dtype = NpyDtype::Float32);

}  // namespace chipvec
