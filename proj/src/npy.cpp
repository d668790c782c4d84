#include "chipvec/npy.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace chipvec {

namespace {

void append_le(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::string shape_tuple(const std::vector<std::size_t>& shape) {
  if (shape.empty()) return "()";
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    s += std::to_string(shape[i]);
    if (shape.size() == 1 || i + 1 < shape.size()) s += ",";
    if (i + 1 < shape.size()) s += " ";
  }
  s += ")";
  return s;
}

}  // namespace

std::string write_npy(const std::vector<double>& values, const std::vector<std::size_t>& shape,
                      NpyDtype dtype) {
  std::size_t count = 1;
  for (std::size_t d : shape) count *= d;
  if (count != values.size())
    throw ShapeError("shape product " + std::to_string(count) + " != value count " +
                     std::to_string(values.size()));

  const char* descr = dtype == NpyDtype::Float32 ? "<f4" : "<f8";
  std::string header = "{'descr': '";
  header += descr;
  header += "', 'fortran_order': False, 'shape': ";
  header += shape_tuple(shape);
  header += ", }";
  // magic(6) + version(2) + headerlen(2) + header, padded to a 64 multiple
  const std::size_t prefix = 10;
  std::size_t total = prefix + header.size() + 1;  // trailing '\n'
  const std::size_t pad = (64 - total % 64) % 64;
  header.append(pad, ' ');
  header.push_back('\n');

  std::string out;
  out.reserve(prefix + header.size() + values.size() * (dtype == NpyDtype::Float32 ? 4 : 8));
  out += "\x93NUMPY";
  out.push_back('\x01');
  out.push_back('\x00');
  append_le(out, header.size(), 2);
  out += header;

  if (dtype == NpyDtype::Float32) {
    for (double v : values) {
      const float f = static_cast<float>(v);
      std::uint32_t bits;
      std::memcpy(&bits, &f, 4);
      append_le(out, bits, 4);
    }
  } else {
    for (double v : values) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, 8);
      append_le(out, bits, 8);
    }
  }
  return out;
}

void write_npy_file(const std::string& path, const std::vector<double>& values,
                    const std::vector<std::size_t>& shape, NpyDtype dtype) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  const std::string bytes = write_npy(values, shape, dtype);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("short write to " + path);
}

}  // namespace chipvec
