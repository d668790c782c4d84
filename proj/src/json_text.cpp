#include "chipvec/json_text.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "chipvec/csv.hpp"
#include "chipvec/errors.hpp"

namespace chipvec {

using nlohmann::json;

namespace {

void escape_string(std::string& out, const std::string& s) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

void dump(std::string& out, const json& j, int depth) {
  const std::string indent(static_cast<std::size_t>(depth) + 1, ' ');
  const std::string closing(static_cast<std::size_t>(depth), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += indent;
        escape_string(out, it.key());
        out += ": ";
        dump(out, it.value(), depth + 1);
      }
      out += "\n" + closing + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += indent;
        dump(out, v, depth + 1);
      }
      out += "\n" + closing + "]";
      return;
    }
    case json::value_t::string:
      escape_string(out, j.get_ref<const std::string&>());
      return;
    case json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      return;
    case json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      return;
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) throw Error("non-finite number in JSON output");
      out += format_double(v);
      return;
    }
    case json::value_t::null:
      out += "null";
      return;
    default:
      throw Error("unsupported JSON value type");
  }
}

}  // namespace

std::string json_text(const json& j) {
  std::string out;
  dump(out, j, 0);
  out.push_back('\n');
  return out;
}

json parse_json_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw CorruptBundle(path + " (" + e.what() + ")");
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw IoError("short write to " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace chipvec
