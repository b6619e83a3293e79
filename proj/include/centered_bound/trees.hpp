#pragma once

#include <algorithm>
#include <compare>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "centered_bound/errors.hpp"

namespace centered_bound {

/// Encoding of a rooted tree with k edges as the tuple (n_0,...,n_{k-1}):
/// vertex v_i has parent v_{n_i}, the root is v_k, and every entry satisfies
/// i < n_i <= k (so ancestors always carry higher indices than descendants).
using TreeCode = std::vector<int>;

/// A rooted tree whose vertices all have degree <= 3, i.e. trivalent once
/// each vertex is topped up with frontier edges. With k edges it has k+1
/// vertices, n = k+3 frontier slots, and slot counts 3 - deg(v) per vertex.
class RootedTree {
public:
  /// Decodes and validates a TreeCode. Throws InvalidTreeCode on the first
  /// out-of-range entry or on a vertex of degree > 3.
  explicit RootedTree(const TreeCode& code) : code_(code) {
    const int k = static_cast<int>(code.size());
    children_.assign(k + 1, {});
    for (int i = 0; i < k; ++i) {
      if (code[i] <= i || code[i] > k)
        throw InvalidTreeCode("tree code entry " + std::to_string(i) + " = " +
                                  std::to_string(code[i]) + " outside (" + std::to_string(i) +
                                  ", " + std::to_string(k) + "]",
                              i);
      children_[code[i]].push_back(i);
    }
    degree_.assign(k + 1, 0);
    for (int v = 0; v <= k; ++v) {
      degree_[v] = static_cast<int>(children_[v].size()) + (v == k ? 0 : 1);
      if (degree_[v] > 3)
        throw InvalidTreeCode("vertex " + std::to_string(v) + " has degree " +
                                  std::to_string(degree_[v]) + " > 3",
                              v);
    }
    depth_.assign(k + 1, 0);
    for (int v = k - 1; v >= 0; --v) depth_[v] = depth_[code[v]] + 1;
    // Slot positions run root-first: vertex v_k takes the first 3 - deg slots,
    // then v_{k-1}, and so on down to v_0.
    slot_offset_.assign(k + 1, 0);
    int pos = 0;
    for (int v = k; v >= 0; --v) {
      slot_offset_[v] = pos;
      pos += 3 - degree_[v];
    }
  }

  static RootedTree decode(const TreeCode& code) { return RootedTree(code); }

  const TreeCode& code() const { return code_; }
  int edge_count() const { return static_cast<int>(code_.size()); }
  int vertex_count() const { return edge_count() + 1; }
  int root() const { return edge_count(); }
  int frontier_size() const { return edge_count() + 3; }

  int parent(int v) const { return code_[v]; }
  const std::vector<int>& children(int v) const { return children_[v]; }
  int degree(int v) const { return degree_[v]; }
  int frontier_slots(int v) const { return 3 - degree_[v]; }
  int depth(int v) const { return depth_[v]; }
  int slot_offset(int v) const { return slot_offset_[v]; }

private:
  TreeCode code_;
  std::vector<std::vector<int>> children_;
  std::vector<int> degree_;
  std::vector<int> depth_;
  std::vector<int> slot_offset_;
};

/// The lexicographically least TreeCode among all valid encodings of one
/// rooted-isomorphism class. Two trees compare equal here iff they are
/// isomorphic as rooted trees.
struct CanonicalCode {
  TreeCode entries;
  auto operator<=>(const CanonicalCode&) const = default;
};

namespace detail {

// Walks every admissible vertex enumeration (each vertex placed only after
// all of its children) and keeps the lexicographically least resulting code.
// Trees here never exceed a dozen vertices, so exhaustive search is cheap and
// gives the canonical form its literal definition.
class LexLeastCode {
public:
  explicit LexLeastCode(const RootedTree& t) : t_(t) {
    const int k = t.edge_count();
    unplaced_children_.resize(k + 1);
    for (int v = 0; v <= k; ++v)
      unplaced_children_[v] = static_cast<int>(t.children(v).size());
    index_of_.assign(k + 1, -1);
    index_of_[k] = k;
    order_.reserve(k);
  }

  TreeCode run() {
    if (t_.edge_count() == 0) return {};
    recurse();
    return best_;
  }

private:
  void recurse() {
    const int k = t_.edge_count();
    if (static_cast<int>(order_.size()) == k) {
      TreeCode code(k);
      for (int i = 0; i < k; ++i) code[i] = index_of_[t_.parent(order_[i])];
      if (best_.empty() || code < best_) best_ = code;
      return;
    }
    for (int v = 0; v < k; ++v) {
      if (index_of_[v] >= 0 || unplaced_children_[v] != 0) continue;
      index_of_[v] = static_cast<int>(order_.size());
      order_.push_back(v);
      --unplaced_children_[t_.parent(v)];
      recurse();
      ++unplaced_children_[t_.parent(v)];
      order_.pop_back();
      index_of_[v] = -1;
    }
  }

  const RootedTree& t_;
  std::vector<int> unplaced_children_;
  std::vector<int> index_of_;
  std::vector<int> order_;
  TreeCode best_;
};

}  // namespace detail

inline CanonicalCode canonicalize(const RootedTree& t) {
  return CanonicalCode{detail::LexLeastCode(t).run()};
}

/// Builds a valid TreeCode from an arbitrary parent relation: parent[v] names
/// the parent of vertex v, and parent[root] = -1 for exactly one root.
/// Vertices are re-enumerated by nonincreasing depth, which satisfies the
/// code's ancestor-monotonicity requirement.
inline TreeCode code_from_parent_map(const std::vector<int>& parent) {
  const int m = static_cast<int>(parent.size());
  int root = -1;
  for (int v = 0; v < m; ++v) {
    if (parent[v] == -1) {
      if (root != -1) throw InvalidTreeCode("two roots in parent map", v);
      root = v;
    } else if (parent[v] < 0 || parent[v] >= m) {
      throw InvalidTreeCode("parent out of range", v);
    }
  }
  if (root == -1) throw InvalidTreeCode("no root in parent map", 0);
  std::vector<int> depth(m, -1);
  for (int v = 0; v < m; ++v) {
    // follow to a vertex of known depth; bounded by m steps on a valid tree
    int u = v, steps = 0;
    while (u != -1 && depth[u] == -1) {
      u = parent[u];
      if (++steps > m) throw InvalidTreeCode("cycle in parent map", v);
    }
    int d = (u == -1) ? -1 : depth[u];
    u = v;
    std::vector<int> chain;
    while (depth[u] == -1) {
      chain.push_back(u);
      u = parent[u];
      if (u == -1) break;
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) depth[*it] = ++d;
  }
  std::vector<int> verts;
  verts.reserve(m - 1);
  for (int v = 0; v < m; ++v)
    if (v != root) verts.push_back(v);
  std::stable_sort(verts.begin(), verts.end(),
                   [&](int a, int b) { return depth[a] > depth[b]; });
  std::vector<int> index(m);
  index[root] = m - 1;
  for (int i = 0; i < m - 1; ++i) index[verts[i]] = i;
  TreeCode code(m - 1);
  for (int i = 0; i < m - 1; ++i) code[i] = index[parent[verts[i]]];
  return code;
}

/// All rooted trees with n frontier slots (n - 3 edges, every degree <= 3),
/// one canonical code per rooted-isomorphism class, lexicographically sorted.
/// Grown level by level: every (k-1)-edge tree sprouts a leaf at each vertex
/// of degree < 3, and duplicates collapse through canonicalize().
inline std::vector<CanonicalCode> enumerate_trees(int n) {
  if (n < 3) throw InvalidArity("tree catalogs need n >= 3, got " + std::to_string(n));
  const int k = n - 3;
  std::vector<CanonicalCode> level = {CanonicalCode{{}}};
  for (int kk = 1; kk <= k; ++kk) {
    std::set<CanonicalCode> grown;
    for (const CanonicalCode& code : level) {
      RootedTree t(code.entries);
      const int old_k = t.edge_count();
      for (int host = 0; host <= old_k; ++host) {
        if (t.degree(host) >= 3) continue;
        // vertices keep their names, the new leaf is vertex old_k + 1,
        // and the old root old_k stays the root
        std::vector<int> parent(old_k + 2);
        for (int v = 0; v < old_k; ++v) parent[v] = t.parent(v);
        parent[old_k] = -1;
        parent[old_k + 1] = host;
        grown.insert(canonicalize(RootedTree(code_from_parent_map(parent))));
      }
    }
    level.assign(grown.begin(), grown.end());
  }
  return level;
}

/// Frontier-slot symmetry data for one tree: the per-vertex slot blocks
/// (whose internal swaps never change the area bound), the full group of
/// root-preserving tree automorphisms acting on slot positions, and the
/// resulting partition of slot positions into interchangeable classes.
struct SlotSymmetry {
  std::vector<std::pair<int, int>> vertex_blocks;        ///< [begin, end) per slotted vertex, root-first
  std::vector<std::vector<int>> automorphism_slot_maps;  ///< whole group, identity included
  std::vector<std::vector<int>> slot_orbits;             ///< partition of 0..n-1 under both actions
};

namespace detail {

inline std::string ahu_form(const RootedTree& t, int v) {
  std::vector<std::string> parts;
  for (int c : t.children(v)) parts.push_back(ahu_form(t, c));
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  for (const auto& p : parts) out += p;
  out += ")";
  return out;
}

// subtree listing with children ordered by (form, vertex); aligning two such
// listings of equal-form subtrees yields an isomorphism between them
inline void canonical_listing(const RootedTree& t, int v, const std::vector<std::string>& form,
                              std::vector<int>& out) {
  out.push_back(v);
  std::vector<int> kids = t.children(v);
  std::sort(kids.begin(), kids.end(),
            [&](int a, int b) { return form[a] != form[b] ? form[a] < form[b] : a < b; });
  for (int c : kids) canonical_listing(t, c, form, out);
}

/// Root-preserving automorphism group as vertex permutations (identity first).
inline std::vector<std::vector<int>> vertex_automorphisms(const RootedTree& t) {
  const int m = t.vertex_count();
  std::vector<std::string> form(m);
  for (int v = 0; v < m; ++v) form[v] = ahu_form(t, v);

  std::vector<std::vector<int>> gens;
  for (int v = 0; v < m; ++v) {
    const auto& kids = t.children(v);
    for (std::size_t i = 0; i < kids.size(); ++i)
      for (std::size_t j = i + 1; j < kids.size(); ++j) {
        if (form[kids[i]] != form[kids[j]]) continue;
        std::vector<int> la, lb;
        canonical_listing(t, kids[i], form, la);
        canonical_listing(t, kids[j], form, lb);
        std::vector<int> perm(m);
        for (int u = 0; u < m; ++u) perm[u] = u;
        for (std::size_t p = 0; p < la.size(); ++p) {
          perm[la[p]] = lb[p];
          perm[lb[p]] = la[p];
        }
        gens.push_back(std::move(perm));
      }
  }

  std::vector<int> identity(m);
  for (int u = 0; u < m; ++u) identity[u] = u;
  std::set<std::vector<int>> group = {identity};
  std::vector<std::vector<int>> frontier = {identity};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& g : frontier)
      for (const auto& h : gens) {
        std::vector<int> comp(m);
        for (int u = 0; u < m; ++u) comp[u] = g[h[u]];
        if (group.insert(comp).second) next.push_back(std::move(comp));
      }
    frontier = std::move(next);
  }
  return {group.begin(), group.end()};
}

}  // namespace detail

inline SlotSymmetry automorphism_orbits(const RootedTree& t) {
  SlotSymmetry sym;
  const int k = t.edge_count();
  const int n = t.frontier_size();

  for (int v = k; v >= 0; --v)
    if (t.frontier_slots(v) > 0)
      sym.vertex_blocks.emplace_back(t.slot_offset(v), t.slot_offset(v) + t.frontier_slots(v));

  for (const auto& g : detail::vertex_automorphisms(t)) {
    std::vector<int> rho(n);
    for (int v = 0; v <= k; ++v)
      for (int i = 0; i < t.frontier_slots(v); ++i)
        rho[t.slot_offset(v) + i] = t.slot_offset(g[v]) + i;
    sym.automorphism_slot_maps.push_back(std::move(rho));
  }

  // orbits of slot positions under vertex-block swaps plus automorphisms
  std::vector<int> owner(n);
  for (int p = 0; p < n; ++p) owner[p] = p;
  auto find = [&](int p) {
    while (owner[p] != p) p = owner[p] = owner[owner[p]];
    return p;
  };
  auto unite = [&](int a, int b) { owner[find(a)] = find(b); };
  for (auto [b, e] : sym.vertex_blocks)
    for (int p = b + 1; p < e; ++p) unite(b, p);
  for (const auto& rho : sym.automorphism_slot_maps)
    for (int p = 0; p < n; ++p) unite(p, rho[p]);
  std::vector<std::vector<int>> classes(n);
  for (int p = 0; p < n; ++p) classes[find(p)].push_back(p);
  for (auto& c : classes)
    if (!c.empty()) sym.slot_orbits.push_back(std::move(c));
  return sym;
}

}  // namespace centered_bound
