#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "centered_bound/errors.hpp"
#include "centered_bound/forest_io.hpp"
#include "centered_bound/hypgeom.hpp"
#include "centered_bound/trees.hpp"

namespace centered_bound {

/// Slot assignment: entry p is the index of the bound handed to frontier
/// slot p, slots listed root-first (nonincreasing host-vertex index).
using SlotAssignment = std::vector<int>;

struct BoundQuery {
  std::vector<HalfSinhLength> bounds;
  bool reduce_symmetry = true;
  const ForestLibrary* forest = nullptr;  ///< nullptr: native enumeration
  int jobs = 0;                           ///< worker cap; 0 = hardware concurrency
};

struct BoundResult {
  double value = 0.0;
  CanonicalCode witness_code;
  int witness_tree_index = -1;        ///< position in the tree source's order
  SlotAssignment witness_assignment;  ///< lex-least among assignments within 1e-12 of value
  std::uint64_t evaluations = 0;      ///< area-bound evaluations in the search pass
};

namespace detail {

/// Ties closer than this are broken lexicographically by (canonical code,
/// assignment); symmetric assignments produce bitwise-equal values, so the
/// tolerance only has to absorb genuine cross-tree coincidences.
inline constexpr double kTieTolerance = 1e-12;

struct CrawlScratch {
  std::vector<double> edge_s;
  std::vector<double> terms;
  std::vector<double> slot_s;
};

// Bottom-up evaluation of the per-tree area bound. Non-root vertices are
// processed in increasing index order; each sees exactly two lower values
// (frontier bounds or already-computed internal edges), contributes the
// semicyclic-triangle area of the pair, and propagates the semicyclic radius
// up its parent edge. The root sees three values, each clamped to
// min(own, radius of the other two), and contributes their triangle area.
// Terms are summed smallest-first so the total is bitwise independent of
// slot relabeling.
inline double crawl(const RootedTree& t, const double* slot_s, CrawlScratch& sc) {
  const int k = t.edge_count();
  sc.edge_s.resize(k);
  sc.terms.clear();
  double v[3];
  for (int i = 0; i < k; ++i) {
    int cnt = 0;
    for (int s = 0; s < t.frontier_slots(i); ++s) v[cnt++] = slot_s[t.slot_offset(i) + s];
    for (int c : t.children(i)) v[cnt++] = sc.edge_s[c];
    sc.edge_s[i] = semicyclic_radius_s(v[0], v[1]);
    sc.terms.push_back(semicyclic_area_s(v[0], v[1]));
  }
  int cnt = 0;
  for (int s = 0; s < t.frontier_slots(k); ++s) v[cnt++] = slot_s[t.slot_offset(k) + s];
  for (int c : t.children(k)) v[cnt++] = sc.edge_s[c];
  const double m0 = std::min(v[0], semicyclic_radius_s(v[1], v[2]));
  const double m1 = std::min(v[1], semicyclic_radius_s(v[2], v[0]));
  const double m2 = std::min(v[2], semicyclic_radius_s(v[0], v[1]));
  sc.terms.push_back(triangle_area_s(m0, m1, m2));
  std::sort(sc.terms.begin(), sc.terms.end());
  double total = 0.0;
  for (double x : sc.terms) total += x;
  return total;
}

inline std::uint64_t factorial(int n) {
  if (n > 20) throw std::overflow_error("factorial(" + std::to_string(n) + ") exceeds 64 bits");
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

inline SlotAssignment nth_permutation(int n, std::uint64_t rank) {
  std::vector<int> avail(n);
  std::iota(avail.begin(), avail.end(), 0);
  SlotAssignment out(n);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t f = factorial(n - 1 - i);
    const auto q = static_cast<std::size_t>(rank / f);
    rank %= f;
    out[i] = avail[q];
    avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(q));
  }
  return out;
}

// Assignments with ascending entries inside every vertex block, one per left
// coset of the per-vertex swap group, visited in lex order and filtered down
// to one representative per automorphism orbit: a coset representative
// survives iff no automorphism image block-sorts to something lex-smaller,
// which makes each survivor the lex-least member of its whole orbit.
// Streaming visitor, so nothing factorial is ever materialized.
class RepGenerator {
public:
  RepGenerator(const RootedTree& t, const SlotSymmetry& sym) : n_(t.frontier_size()), sym_(sym) {
    block_begin_.assign(n_, 0);
    for (auto [b, e] : sym.vertex_blocks)
      for (int p = b; p < e; ++p) block_begin_[p] = b;
  }

  /// Calls visit(rep) for each representative; stop early by returning false.
  template <class Visitor>
  void for_each(Visitor&& visit) {
    cur_.assign(n_, -1);
    used_.assign(n_, false);
    scratch_.assign(n_, 0);
    emit(0, visit);
  }

private:
  template <class Visitor>
  bool emit(int pos, Visitor& visit) {
    if (pos == n_) return !is_orbit_least() || visit(cur_);
    const int lo = (pos > block_begin_[pos]) ? cur_[pos - 1] + 1 : 0;
    for (int v = lo; v < n_; ++v) {
      if (used_[v]) continue;
      used_[v] = true;
      cur_[pos] = v;
      const bool go_on = emit(pos + 1, visit);
      used_[v] = false;
      if (!go_on) return false;
    }
    return true;
  }

  bool is_orbit_least() {
    if (sym_.automorphism_slot_maps.size() <= 1) return true;
    for (const auto& rho : sym_.automorphism_slot_maps) {
      for (int p = 0; p < n_; ++p) scratch_[p] = cur_[rho[p]];
      for (auto [b, e] : sym_.vertex_blocks)
        std::sort(scratch_.begin() + b, scratch_.begin() + e);
      if (std::lexicographical_compare(scratch_.begin(), scratch_.end(), cur_.begin(), cur_.end()))
        return false;
    }
    return true;
  }

  int n_;
  const SlotSymmetry& sym_;
  std::vector<int> block_begin_;
  std::vector<int> cur_;
  std::vector<bool> used_;
  std::vector<int> scratch_;
};

}  // namespace detail

/// The per-tree area lower bound for one assignment of bounds to frontier
/// slots (slot_values pre-permuted, root-first slot order).
inline double tree_area_bound(const RootedTree& t, std::span<const HalfSinhLength> slot_values) {
  if (static_cast<int>(slot_values.size()) != t.frontier_size())
    throw InvalidArity("tree with " + std::to_string(t.edge_count()) + " edges takes " +
                       std::to_string(t.frontier_size()) + " bounds, got " +
                       std::to_string(slot_values.size()));
  detail::CrawlScratch sc;
  sc.slot_s.resize(slot_values.size());
  for (std::size_t i = 0; i < slot_values.size(); ++i) sc.slot_s[i] = slot_values[i].sinh_half();
  return detail::crawl(t, sc.slot_s.data(), sc);
}

/// One assignment per orbit of root-preserving automorphisms acting on the
/// per-vertex-swap cosets, in lex order; each is the lex-least assignment of
/// its orbit, and the area bound is constant (bitwise) on every orbit.
inline std::vector<SlotAssignment> reduced_assignments(const RootedTree& t) {
  auto sym = automorphism_orbits(t);
  std::vector<SlotAssignment> out;
  detail::RepGenerator(t, sym).for_each([&](const SlotAssignment& rep) {
    out.push_back(rep);
    return true;
  });
  return out;
}

struct AssignmentOrbit {
  SlotAssignment representative;
  std::uint64_t orbit_size;  ///< number of full assignments it stands for
};

/// Representatives together with their orbit sizes; sizes sum to n!.
inline std::vector<AssignmentOrbit> assignment_orbits(const RootedTree& t) {
  auto sym = automorphism_orbits(t);
  const int n = t.frontier_size();
  std::uint64_t swap_group = 1;
  for (auto [b, e] : sym.vertex_blocks) swap_group *= detail::factorial(e - b);
  std::vector<AssignmentOrbit> out;
  for (auto& rep : reduced_assignments(t)) {
    std::set<std::vector<int>> images;
    for (const auto& rho : sym.automorphism_slot_maps) {
      std::vector<int> img(n);
      for (int p = 0; p < n; ++p) img[p] = rep[rho[p]];
      for (auto [b, e] : sym.vertex_blocks) std::sort(img.begin() + b, img.begin() + e);
      images.insert(std::move(img));
    }
    out.push_back({std::move(rep), swap_group * images.size()});
  }
  return out;
}

/// The older uniform bound: (n-2) times the area of the semicyclic triangle
/// with two sides d.
inline double flat_bound(int n, HalfSinhLength d) {
  if (n < 3) throw InvalidArity("flat bound needs n >= 3, got " + std::to_string(n));
  return (n - 2) * semicyclic_area(d);
}

namespace detail {

struct TreeEntry {
  RootedTree tree;
  CanonicalCode canon;
};

struct WorkItem {
  int tree = 0;
  std::uint64_t begin = 0;  // permutation rank range (full mode only)
  std::uint64_t end = 0;
};

}  // namespace detail

/// Exact minimum of the per-tree area bound over every tree in the catalog
/// and every assignment of bounds to slots. With reduce_symmetry the search
/// visits one representative per symmetry orbit and returns the identical
/// value and witness (orbit members tie bitwise). Work may run on several
/// threads; results do not depend on scheduling or worker count.
inline BoundResult minimize(const BoundQuery& q) {
  const int n = static_cast<int>(q.bounds.size());
  if (n < 3) throw InvalidArity("need at least 3 bounds, got " + std::to_string(n));

  std::vector<double> bound_s(n);
  for (int i = 0; i < n; ++i) bound_s[i] = q.bounds[i].sinh_half();

  std::vector<detail::TreeEntry> entries;
  if (q.forest) {
    for (const TreeCode& code : q.forest->trees_for_n(n)) {
      RootedTree t(code);
      CanonicalCode canon = canonicalize(t);
      entries.push_back({std::move(t), std::move(canon)});
    }
  } else {
    for (CanonicalCode& code : enumerate_trees(n)) {
      RootedTree t(code.entries);
      entries.push_back({std::move(t), std::move(code)});
    }
  }
  if (entries.empty())
    throw MissingCatalog("catalog section for n = " + std::to_string(n) + " is empty", n);

  // Search pass: per-tree minima, split into deterministic work items.
  std::vector<detail::WorkItem> items;
  const std::uint64_t full_count = q.reduce_symmetry ? 0 : detail::factorial(n);
  constexpr std::uint64_t kChunk = 40320;
  for (int ti = 0; ti < static_cast<int>(entries.size()); ++ti) {
    if (q.reduce_symmetry) {
      items.push_back({ti, 0, 0});
    } else {
      for (std::uint64_t b = 0; b < full_count; b += kChunk)
        items.push_back({ti, b, std::min(full_count, b + kChunk)});
    }
  }

  std::vector<double> item_min(items.size(), std::numeric_limits<double>::infinity());
  std::vector<std::uint64_t> item_evals(items.size(), 0);

  auto run_item = [&](std::size_t wi) {
    const auto& item = items[wi];
    const RootedTree& t = entries[item.tree].tree;
    detail::CrawlScratch sc;
    std::vector<double> slot_s(n);
    double local = std::numeric_limits<double>::infinity();
    std::uint64_t count = 0;
    if (q.reduce_symmetry) {
      auto sym = automorphism_orbits(t);
      detail::RepGenerator(t, sym).for_each([&](const SlotAssignment& rep) {
        for (int p = 0; p < n; ++p) slot_s[p] = bound_s[rep[p]];
        local = std::min(local, detail::crawl(t, slot_s.data(), sc));
        ++count;
        return true;
      });
    } else {
      SlotAssignment perm = detail::nth_permutation(n, item.begin);
      for (std::uint64_t r = item.begin; r < item.end; ++r) {
        for (int p = 0; p < n; ++p) slot_s[p] = bound_s[perm[p]];
        local = std::min(local, detail::crawl(t, slot_s.data(), sc));
        ++count;
        std::next_permutation(perm.begin(), perm.end());
      }
    }
    item_min[wi] = local;
    item_evals[wi] = count;
  };

  int jobs = q.jobs > 0 ? q.jobs : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::clamp(jobs, 1, static_cast<int>(items.size()));
  if (jobs <= 1) {
    for (std::size_t wi = 0; wi < items.size(); ++wi) run_item(wi);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int w = 0; w < jobs; ++w)
      pool.emplace_back([&] {
        for (std::size_t wi = next.fetch_add(1); wi < items.size(); wi = next.fetch_add(1))
          run_item(wi);
      });
    for (auto& th : pool) th.join();
  }

  BoundResult result;
  std::vector<double> tree_min(entries.size(), std::numeric_limits<double>::infinity());
  for (std::size_t wi = 0; wi < items.size(); ++wi) {
    tree_min[items[wi].tree] = std::min(tree_min[items[wi].tree], item_min[wi]);
    result.evaluations += item_evals[wi];
  }
  result.value = *std::min_element(tree_min.begin(), tree_min.end());

  // Witness pass: rescan every near-minimal tree in assignment lex order and
  // stop at its first qualifying assignment; that is the tree's lex-least
  // qualifying assignment in both modes, because reduced representatives are
  // the lex-least members of value-constant orbits.
  const double threshold = result.value + detail::kTieTolerance;
  bool have_witness = false;
  for (int ti = 0; ti < static_cast<int>(entries.size()); ++ti) {
    if (!(tree_min[ti] <= threshold)) continue;
    const RootedTree& t = entries[ti].tree;
    detail::CrawlScratch sc;
    std::vector<double> slot_s(n);
    SlotAssignment found;
    if (q.reduce_symmetry) {
      auto sym = automorphism_orbits(t);
      detail::RepGenerator(t, sym).for_each([&](const SlotAssignment& rep) {
        for (int p = 0; p < n; ++p) slot_s[p] = bound_s[rep[p]];
        if (detail::crawl(t, slot_s.data(), sc) > threshold) return true;
        found = rep;
        return false;
      });
    } else {
      SlotAssignment perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        for (int p = 0; p < n; ++p) slot_s[p] = bound_s[perm[p]];
        if (detail::crawl(t, slot_s.data(), sc) <= threshold) {
          found = perm;
          break;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    if (found.empty()) continue;  // unreachable: the rescan re-hits tree_min bitwise
    const bool better =
        !have_witness ||
        std::tie(entries[ti].canon, found) <
            std::tie(entries[result.witness_tree_index].canon, result.witness_assignment);
    if (better) {
      result.witness_code = entries[ti].canon;
      result.witness_tree_index = ti;
      result.witness_assignment = std::move(found);
      have_witness = true;
    }
  }
  return result;
}

}  // namespace centered_bound
