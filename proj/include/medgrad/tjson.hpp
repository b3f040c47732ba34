#pragma once

#include <iosfwd>
#include <string>

#include "medgrad/tensor.hpp"

namespace medgrad {

/// "tjson" tensor documents: a JSON object with an integer array `shape`
/// and a flat row-major number array `data`.
std::string to_tjson(const Tensor& t);
Tensor from_tjson(const std::string& text);

void write_tjson(const std::string& path, const Tensor& t);
Tensor read_tjson(const std::string& path);

}  // namespace medgrad
