#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hgconc/core.hpp"
#include "hgconc/error.hpp"

namespace hgconc {

// HGR text format: first line "k n m", then one sorted edge per line, edges
// in lexicographic order, LF endings, no trailing whitespace.

inline std::string to_hgr(const Hypergraph& h) {
  std::string out = std::to_string(h.uniformity()) + ' ' + std::to_string(h.num_vertices()) + ' ' +
                    std::to_string(h.num_edges()) + '\n';
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    bool first = true;
    for (VertexId v : h.edge(e)) {
      if (!first) out += ' ';
      out += std::to_string(v);
      first = false;
    }
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::vector<std::uint64_t> parse_hgr_line(std::string_view line, std::size_t lineno) {
  auto fail = [&](const std::string& why) {
    throw InvalidArgument("HGR line " + std::to_string(lineno) + ": " + why);
  };
  if (!line.empty() && line.back() == '\r') fail("CR line ending");
  std::vector<std::uint64_t> vals;
  std::size_t i = 0;
  while (i < line.size()) {
    if (i > 0) {
      if (line[i] != ' ') fail("expected single space separator");
      ++i;
      if (i == line.size()) fail("trailing whitespace");
    }
    std::uint64_t v = 0;
    const char* b = line.data() + i;
    const char* e = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr == b) fail("expected a non-negative decimal integer");
    i = static_cast<std::size_t>(ptr - line.data());
    vals.push_back(v);
  }
  return vals;
}

}  // namespace detail

inline Hypergraph parse_hgr(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) throw InvalidArgument("HGR: last line lacks LF");
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (lines.empty()) throw InvalidArgument("HGR: empty file");
  const auto header = detail::parse_hgr_line(lines[0], 1);
  if (header.size() != 3) throw InvalidArgument("HGR line 1: header must be \"k n m\"");
  const std::uint64_t k = header[0], n = header[1], m = header[2];
  if (n > UINT32_MAX || m > UINT32_MAX) throw InvalidArgument("HGR: n or m too large");
  if (lines.size() - 1 != m) {
    throw InvalidArgument("HGR: header promises " + std::to_string(m) + " edges, found " +
                          std::to_string(lines.size() - 1));
  }
  std::vector<std::vector<VertexId>> edges;
  edges.reserve(m);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto vals = detail::parse_hgr_line(lines[i], i + 1);
    if (vals.size() != k) throw InvalidArgument("HGR line " + std::to_string(i + 1) + ": edge size differs from k");
    std::vector<VertexId> edge;
    for (auto v : vals) {
      if (v >= n) throw InvalidArgument("HGR line " + std::to_string(i + 1) + ": vertex id out of range");
      edge.push_back(static_cast<VertexId>(v));
    }
    for (std::size_t j = 1; j < edge.size(); ++j)
      if (edge[j - 1] >= edge[j]) throw InvalidArgument("HGR line " + std::to_string(i + 1) + ": edge not sorted ascending");
    if (!edges.empty() && !(edges.back() < edge))
      throw InvalidArgument("HGR line " + std::to_string(i + 1) + ": edges not in lexicographic order");
    edges.push_back(std::move(edge));
  }
  return Hypergraph::validate(std::move(edges), static_cast<VertexId>(n), static_cast<std::uint32_t>(k));
}

inline Hypergraph read_hgr(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_hgr(ss.str());
}

inline void write_hgr(const Hypergraph& h, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << to_hgr(h);
}

}  // namespace hgconc
