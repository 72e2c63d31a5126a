#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phylonet/graph.hpp"
#include "phylonet/network.hpp"

namespace phylonet {

// Label-respecting canonical form: two graphs get equal keys iff a
// label-preserving isomorphism maps one onto the other (with edge
// multiplicities).
struct CanonicalKey {
  std::string bytes;

  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
      out.push_back(digits[c >> 4]);
      out.push_back(digits[c & 15]);
    }
    return out;
  }
  friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
};

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const noexcept { return std::hash<std::string>{}(k.bytes); }
};

struct CanonicalForm {
  CanonicalKey key;
  std::vector<VertexId> order;  // order[i] = vertex placed at canonical position i
};

namespace detail {

class Canonicalizer {
 public:
  explicit Canonicalizer(const LabelledGraph& g) : g_(g), n_(g.vertex_count()) {
    adj_.resize(n_);
    for (VertexId v = 0; v < n_; ++v)
      for (EdgeId e : g.incident(v)) adj_[v].push_back(g.edge(e).other(v));
  }

  CanonicalForm run() {
    std::vector<int> col(n_);
    for (VertexId v = 0; v < n_; ++v) col[v] = g_.label(v) == 0 ? 0 : g_.label(v);
    compress(col);
    refine(col);
    search(col);
    return CanonicalForm{CanonicalKey{best_}, best_order_};
  }

 private:
  static void compress(std::vector<int>& col) {
    std::vector<int> vals = col;
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (int& c : col) c = static_cast<int>(std::lower_bound(vals.begin(), vals.end(), c) - vals.begin());
  }

  static int distinct(const std::vector<int>& col) {
    std::vector<char> seen(col.size() + 1, 0);
    int d = 0;
    for (int c : col)
      if (!seen[c]) seen[c] = 1, ++d;
    return d;
  }

  // Colour refinement until the partition is equitable. New colours are ranks
  // of (old colour, sorted neighbour colours), so they refine the old order.
  void refine(std::vector<int>& col) const {
    int classes = distinct(col);
    std::vector<std::vector<int>> sig(n_);
    std::vector<int> idx(n_);
    while (true) {
      for (VertexId v = 0; v < n_; ++v) {
        auto& s = sig[v];
        s.clear();
        s.push_back(col[v]);
        for (VertexId w : adj_[v]) s.push_back(col[w]);
        std::sort(s.begin() + 1, s.end());
      }
      for (int i = 0; i < n_; ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(), [&](int a, int b) { return sig[a] < sig[b]; });
      std::vector<int> next(n_);
      int c = 0;
      for (int i = 0; i < n_; ++i) {
        if (i > 0 && sig[idx[i]] != sig[idx[i - 1]]) ++c;
        next[idx[i]] = c;
      }
      int now = c + 1;
      col.swap(next);
      if (now == classes) break;
      classes = now;
    }
  }

  std::string encode(const std::vector<int>& col, std::vector<VertexId>& order) const {
    order.assign(n_, -1);
    for (VertexId v = 0; v < n_; ++v) order[col[v]] = v;
    std::vector<std::pair<int, int>> es;
    es.reserve(g_.edge_count());
    for (const Edge& e : g_.edges()) {
      int a = col[e.u], b = col[e.v];
      if (a > b) std::swap(a, b);
      es.emplace_back(a, b);
    }
    std::sort(es.begin(), es.end());
    std::string out;
    auto put = [&](int x) {
      out.push_back(static_cast<char>((x >> 8) & 0xff));
      out.push_back(static_cast<char>(x & 0xff));
    };
    put(n_);
    put(static_cast<int>(es.size()));
    for (int p = 0; p < n_; ++p) put(g_.label(order[p]));
    for (auto [a, b] : es) {
      put(a);
      put(b);
    }
    return out;
  }

  void search(const std::vector<int>& col) {
    // First non-singleton cell in colour order.
    std::vector<int> size(n_, 0);
    for (int c : col) ++size[c];
    int target = -1;
    for (int c = 0; c < n_; ++c)
      if (size[c] > 1) {
        target = c;
        break;
      }
    if (target == -1) {
      std::vector<VertexId> order;
      std::string enc = encode(col, order);
      if (!have_best_ || enc < best_) {
        best_ = std::move(enc);
        best_order_ = std::move(order);
        have_best_ = true;
      }
      return;
    }
    for (VertexId v = 0; v < n_; ++v) {
      if (col[v] != target) continue;
      std::vector<int> child(n_);
      for (VertexId w = 0; w < n_; ++w) child[w] = 2 * col[w] + 1;
      child[v] = 2 * col[v];
      compress(child);
      refine(child);
      search(child);
    }
  }

  const LabelledGraph& g_;
  int n_;
  std::vector<std::vector<VertexId>> adj_;
  std::string best_;
  std::vector<VertexId> best_order_;
  bool have_best_ = false;
};

}  // namespace detail

inline CanonicalForm canonical_form(const LabelledGraph& g) { return detail::Canonicalizer(g).run(); }
inline CanonicalKey canonical_key(const LabelledGraph& g) { return canonical_form(g).key; }
inline CanonicalKey canonical_key(const Network& n) { return canonical_key(n.graph()); }

inline bool isomorphic(const Network& a, const Network& b) { return canonical_key(a) == canonical_key(b); }

// Label-preserving isomorphism between two graphs, as vertex and edge maps.
struct Isomorphism {
  std::vector<VertexId> vertex;
  std::vector<EdgeId> edge;
};

inline std::optional<Isomorphism> find_isomorphism(const LabelledGraph& a, const LabelledGraph& b) {
  CanonicalForm fa = canonical_form(a), fb = canonical_form(b);
  if (fa.key != fb.key) return std::nullopt;
  Isomorphism iso;
  iso.vertex.assign(a.vertex_count(), -1);
  for (std::size_t i = 0; i < fa.order.size(); ++i) iso.vertex[fa.order[i]] = fb.order[i];
  // Parallel edges are interchangeable; match them in id order.
  std::map<std::pair<VertexId, VertexId>, std::vector<EdgeId>> pool;
  for (EdgeId e = b.edge_count() - 1; e >= 0; --e)
    pool[std::minmax(b.edge(e).u, b.edge(e).v)].push_back(e);
  iso.edge.assign(a.edge_count(), -1);
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    auto& bucket = pool[std::minmax(iso.vertex[a.edge(e).u], iso.vertex[a.edge(e).v])];
    iso.edge[e] = bucket.back();
    bucket.pop_back();
  }
  return iso;
}

inline std::optional<Isomorphism> find_isomorphism(const Network& a, const Network& b) {
  return find_isomorphism(a.graph(), b.graph());
}

}  // namespace phylonet
