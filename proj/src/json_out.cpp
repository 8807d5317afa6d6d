#include "sgbench/json_out.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sgbench/fmt.hpp"

namespace sgbench {

namespace {

void escape_into(std::string& out, const std::string& s) {
  out.push_back('"');
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
  out.push_back('"');
}

void dump_into(std::string& out, const ordered_json& v, int indent,
               int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1),
                           ' ');
  switch (v.type()) {
    case ordered_json::value_t::null: out += "null"; break;
    case ordered_json::value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      break;
    case ordered_json::value_t::number_integer:
      out += std::to_string(v.get<std::int64_t>());
      break;
    case ordered_json::value_t::number_unsigned:
      out += std::to_string(v.get<std::uint64_t>());
      break;
    case ordered_json::value_t::number_float:
      out += format_double(v.get<double>());
      break;
    case ordered_json::value_t::string:
      escape_into(out, v.get<std::string>());
      break;
    case ordered_json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        out += pad_in;
        dump_into(out, v[i], indent, depth + 1);
        if (i + 1 < v.size()) out += ",";
        out += "\n";
      }
      out += pad + "]";
      break;
    }
    case ordered_json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = v.begin(); it != v.end(); ++it, ++i) {
        out += pad_in;
        escape_into(out, it.key());
        out += ": ";
        dump_into(out, it.value(), indent, depth + 1);
        if (i + 1 < v.size()) out += ",";
        out += "\n";
      }
      out += pad + "}";
      break;
    }
    default:
      throw std::invalid_argument("unsupported JSON value type");
  }
}

}  // namespace

std::string dump_json(const ordered_json& value, int indent) {
  std::string out;
  dump_into(out, value, indent, 0);
  out += "\n";
  return out;
}

void write_json(const std::string& path, const ordered_json& value) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << dump_json(value);
}

ordered_json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw std::runtime_error("'" + path + "': " + e.what());
  }
}

}  // namespace sgbench
