#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

#include "hgconc/error.hpp"

namespace hgconc {

using Json = nlohmann::ordered_json;

namespace detail {

inline void dump_value(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        dump_value(it.value(), out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        dump_value(v, out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      const double d = j.get<double>();
      if (!std::isfinite(d)) {
        out += "null";
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", d);
        out += buf;
      }
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// One JSON-lines record. Floats are printed with 17 significant digits so
/// that a record parses back to the same doubles; NaN and infinities become
/// null.
inline std::string format_record(const Json& record) {
  for (const char* key : {"cmd", "params", "result"})
    if (!record.contains(key)) throw InvalidArgument(std::string("record lacks key ") + key);
  std::string out;
  detail::dump_value(record, out);
  out += '\n';
  return out;
}

inline Json make_record(const std::string& cmd, Json params, Json result) {
  Json r;
  r["cmd"] = cmd;
  r["params"] = std::move(params);
  r["result"] = std::move(result);
  return r;
}

}  // namespace hgconc
