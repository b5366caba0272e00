#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hgconc/error.hpp"

namespace hgconc {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Immutable k-uniform hypergraph on vertices 0..n-1.
///
/// Edges are stored sorted (each edge ascending, edge list lexicographic) in a
/// flat pin array; the vertex->edge incidence is a CSR index whose per-vertex
/// lists are ascending edge ids.
class Hypergraph {
 public:
  Hypergraph() = default;

  /// Checks and canonicalizes a raw edge list. Throws InvalidArgument on an
  /// edge of the wrong size, a repeated vertex inside an edge, an id outside
  /// [0, n), k < 1, or a duplicate edge (duplicates are rejected, not merged).
  static Hypergraph validate(std::vector<std::vector<VertexId>> edges,
                             std::size_t n, std::size_t k) {
    if (k < 1) throw InvalidArgument("uniformity k must be >= 1");
    if (n > std::size_t{UINT32_MAX}) throw InvalidArgument("too many vertices");
    for (std::size_t e = 0; e < edges.size(); ++e) {
      auto& edge = edges[e];
      if (edge.size() != k) {
        throw InvalidArgument("edge " + std::to_string(e) + " has " +
                              std::to_string(edge.size()) + " vertices, expected " +
                              std::to_string(k));
      }
      std::sort(edge.begin(), edge.end());
      if (edge.back() >= n) {
        throw InvalidArgument("edge " + std::to_string(e) + ": vertex id " +
                              std::to_string(edge.back()) + " out of range [0, " +
                              std::to_string(n) + ")");
      }
      if (std::adjacent_find(edge.begin(), edge.end()) != edge.end()) {
        throw InvalidArgument("edge " + std::to_string(e) + " repeats a vertex");
      }
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end());
        dup != edges.end()) {
      std::string s;
      for (auto v : *dup) s += (s.empty() ? "" : ",") + std::to_string(v);
      throw InvalidArgument("duplicate edge {" + s + "}");
    }

    Hypergraph h;
    h.n_ = n;
    h.k_ = k;
    h.pins_.reserve(edges.size() * k);
    for (const auto& edge : edges) h.pins_.insert(h.pins_.end(), edge.begin(), edge.end());
    h.build_incidence();
    return h;
  }

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return k_ == 0 ? 0 : pins_.size() / k_; }
  std::size_t uniformity() const { return k_; }

  std::span<const VertexId> edge(EdgeId e) const {
    return {pins_.data() + std::size_t{e} * k_, k_};
  }

  std::span<const EdgeId> incident(VertexId v) const {
    return {inc_edges_.data() + inc_offsets_[v],
            inc_offsets_[v + 1] - inc_offsets_[v]};
  }

  std::size_t degree(VertexId v) const {
    return inc_offsets_[v + 1] - inc_offsets_[v];
  }

  /// Number of edges containing both u and v (u != v): intersection of the
  /// two sorted incidence lists.
  std::size_t codegree(VertexId u, VertexId v) const {
    if (u == v) throw InvalidArgument("co-degree needs two distinct vertices");
    auto a = incident(u);
    auto b = incident(v);
    std::size_t count = 0;
    for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
      if (a[i] < b[j]) {
        ++i;
      } else if (b[j] < a[i]) {
        ++j;
      } else {
        ++count;
        ++i;
        ++j;
      }
    }
    return count;
  }

  std::vector<std::vector<VertexId>> edge_list() const {
    std::vector<std::vector<VertexId>> out;
    out.reserve(num_edges());
    for (EdgeId e = 0; e < num_edges(); ++e) {
      auto s = edge(e);
      out.emplace_back(s.begin(), s.end());
    }
    return out;
  }

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.pins_ == b.pins_;
  }

 private:
  void build_incidence() {
    inc_offsets_.assign(n_ + 1, 0);
    for (auto v : pins_) ++inc_offsets_[v + 1];
    for (std::size_t v = 0; v < n_; ++v) inc_offsets_[v + 1] += inc_offsets_[v];
    inc_edges_.resize(pins_.size());
    std::vector<std::size_t> fill(inc_offsets_.begin(), inc_offsets_.end() - 1);
    const std::size_t m = num_edges();
    for (std::size_t e = 0; e < m; ++e) {
      for (std::size_t j = 0; j < k_; ++j) {
        inc_edges_[fill[pins_[e * k_ + j]]++] = static_cast<EdgeId>(e);
      }
    }
  }

  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::vector<VertexId> pins_;
  std::vector<std::size_t> inc_offsets_{0};
  std::vector<EdgeId> inc_edges_;
};

struct DegreeProfile {
  std::vector<std::size_t> deg;
  std::size_t max_deg = 0;
  std::size_t min_deg = 0;
  std::size_t max_codeg = 0;
  // A pair attaining max_codeg (u < v); meaningless when max_codeg == 0.
  std::pair<VertexId, VertexId> max_codeg_pair{0, 0};

  friend bool operator==(const DegreeProfile&, const DegreeProfile&) = default;
};

/// Degrees over all vertices; the maximum co-degree is found by scanning, for
/// each vertex u, the vertices that share an edge with it (only those can
/// have positive co-degree), so no n x n table is ever built.
inline DegreeProfile degree_profile(const Hypergraph& h) {
  DegreeProfile p;
  const std::size_t n = h.num_vertices();
  p.deg.resize(n);
  for (VertexId v = 0; v < n; ++v) p.deg[v] = h.degree(v);
  if (n > 0) {
    auto [lo, hi] = std::minmax_element(p.deg.begin(), p.deg.end());
    p.min_deg = *lo;
    p.max_deg = *hi;
  }

  std::vector<std::uint32_t> count(n, 0);
  std::vector<VertexId> touched;
  for (VertexId u = 0; u < n; ++u) {
    for (EdgeId e : h.incident(u)) {
      for (VertexId w : h.edge(e)) {
        if (w <= u) continue;
        if (count[w]++ == 0) touched.push_back(w);
      }
    }
    for (VertexId w : touched) {
      if (count[w] > p.max_codeg) {
        p.max_codeg = count[w];
        p.max_codeg_pair = {u, w};
      }
      count[w] = 0;
    }
    touched.clear();
  }
  return p;
}

// Scalar summary consumed by the analytic bounds. Can be built from a
// hypergraph or filled in by hand for instances too large to materialize.
struct HypergraphSummary {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  std::size_t max_deg = 0;
  std::size_t min_deg = 0;
  std::size_t max_codeg = 0;
};

inline HypergraphSummary summarize(const Hypergraph& h, const DegreeProfile& p) {
  return {h.num_vertices(), h.num_edges(), h.uniformity(),
          p.max_deg,        p.min_deg,     p.max_codeg};
}

inline HypergraphSummary summarize(const Hypergraph& h) {
  return summarize(h, degree_profile(h));
}

}  // namespace hgconc
