#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "centered_bound/trees.hpp"
#include "oracle.hpp"

using namespace centered_bound;

namespace {

// test-local brute force: every valid encoding of a tree (each vertex placed
// only after all of its children), written independently of canonicalize()
void all_codes_rec(const RootedTree& t, std::vector<int>& order, std::vector<bool>& placed,
                   std::vector<int>& pending, std::set<TreeCode>& out) {
  const int k = t.edge_count();
  if (static_cast<int>(order.size()) == k) {
    std::vector<int> index(k + 1);
    index[t.root()] = k;
    for (int i = 0; i < k; ++i) index[order[i]] = i;
    TreeCode code(k);
    for (int i = 0; i < k; ++i) code[i] = index[t.parent(order[i])];
    out.insert(code);
    return;
  }
  for (int v = 0; v < k; ++v) {
    if (placed[v] || pending[v] != 0) continue;
    placed[v] = true;
    order.push_back(v);
    --pending[t.parent(v)];
    all_codes_rec(t, order, placed, pending, out);
    ++pending[t.parent(v)];
    order.pop_back();
    placed[v] = false;
  }
}

std::set<TreeCode> all_valid_codes(const RootedTree& t) {
  std::vector<int> order, pending(t.vertex_count());
  std::vector<bool> placed(t.vertex_count(), false);
  for (int v = 0; v < t.vertex_count(); ++v)
    pending[v] = static_cast<int>(t.children(v).size());
  std::set<TreeCode> out;
  all_codes_rec(t, order, placed, pending, out);
  return out;
}

}  // namespace

TEST_CASE("decode: one-edge tree") {
  RootedTree t(TreeCode{1});
  CHECK(t.edge_count() == 1);
  CHECK(t.root() == 1);
  CHECK(t.frontier_size() == 4);
  CHECK(t.frontier_slots(0) == 2);
  CHECK(t.frontier_slots(1) == 2);
  CHECK(t.parent(0) == 1);
  CHECK(t.depth(0) == 1);
  CHECK(t.depth(1) == 0);
}

TEST_CASE("decode: two-edge path rooted at its middle") {
  RootedTree t(TreeCode{2, 2});
  CHECK(t.root() == 2);
  CHECK(t.frontier_size() == 5);
  CHECK(t.frontier_slots(0) == 2);
  CHECK(t.frontier_slots(1) == 2);
  CHECK(t.frontier_slots(2) == 1);
  CHECK(t.children(2) == std::vector<int>{0, 1});
}

TEST_CASE("decode: single vertex") {
  RootedTree t{TreeCode{}};
  CHECK(t.edge_count() == 0);
  CHECK(t.vertex_count() == 1);
  CHECK(t.frontier_size() == 3);
  CHECK(t.frontier_slots(0) == 3);
}

TEST_CASE("decode rejects bad codes with the offending index") {
  // entry must exceed its own index
  try {
    RootedTree t(TreeCode{1, 1});
    FAIL("expected InvalidTreeCode");
  } catch (const InvalidTreeCode& e) {
    CHECK(e.index == 1);
  }
  // entry beyond the root
  try {
    RootedTree t(TreeCode{3, 2});
    FAIL("expected InvalidTreeCode");
  } catch (const InvalidTreeCode& e) {
    CHECK(e.index == 0);
  }
  // degree > 3 at the root
  try {
    RootedTree t(TreeCode{4, 4, 4, 4});
    FAIL("expected InvalidTreeCode");
  } catch (const InvalidTreeCode& e) {
    CHECK(e.index == 4);
  }
  // degree > 3 at an inner vertex
  CHECK_THROWS_AS(RootedTree(TreeCode{4, 4, 4, 4, 5}), InvalidTreeCode);
}

TEST_CASE("canonicalize: equivalent encodings collapse") {
  const CanonicalCode a = canonicalize(RootedTree(TreeCode{2, 2, 5, 5, 5}));
  const CanonicalCode b = canonicalize(RootedTree(TreeCode{3, 3, 5, 5, 5}));
  const CanonicalCode c = canonicalize(RootedTree(TreeCode{4, 4, 5, 5, 5}));
  CHECK(a == b);
  CHECK(b == c);
  CHECK(a.entries == TreeCode{2, 2, 5, 5, 5});
  CHECK(canonicalize(RootedTree(TreeCode{})).entries.empty());
}

TEST_CASE("canonicalize: identical on every valid encoding, and lex-least") {
  for (int n = 3; n <= 8; ++n) {  // k <= 5
    for (const CanonicalCode& code : enumerate_trees(n)) {
      RootedTree t(code.entries);
      const auto codes = all_valid_codes(t);
      CHECK(code.entries == *codes.begin());  // canonical form is the least valid code
      for (const TreeCode& variant : codes)
        CHECK(canonicalize(RootedTree(variant)) == code);
    }
  }
}

TEST_CASE("enumerate_trees: catalog sizes") {
  CHECK_THROWS_AS(enumerate_trees(2), InvalidArity);
  const std::vector<std::size_t> expected = {1, 1, 2, 4, 7, 14, 29};
  for (int n = 3; n <= 9; ++n) CHECK(enumerate_trees(n).size() == expected[n - 3]);
  CHECK(enumerate_trees(5)[0].entries == TreeCode{1, 2});
  CHECK(enumerate_trees(5)[1].entries == TreeCode{2, 2});
}

TEST_CASE("enumerate_trees agrees with the parent-sequence oracle up to n = 10") {
  for (int n = 3; n <= 10; ++n)
    CHECK(enumerate_trees(n).size() == oracle::naive_tree_count(n - 3));
  CHECK(oracle::naive_tree_count(0) == 1);
  CHECK(oracle::naive_tree_count(3) == 4);
  CHECK(oracle::naive_tree_count(6) == 29);
  CHECK_THROWS_AS(oracle::naive_tree_count(8), CostGuard);
}

TEST_CASE("counting recurrence matches both enumerations") {
  for (int k = 0; k <= 7; ++k)
    CHECK(oracle::counted_tree_total(k) == oracle::naive_tree_count(k));
  for (int n = 3; n <= 12; ++n)
    CHECK(oracle::counted_tree_total(n - 3) == enumerate_trees(n).size());
}

TEST_CASE("enumerated trees: slot law, degree law, canonical identity") {
  for (int n = 3; n <= 9; ++n) {
    auto catalog = enumerate_trees(n);
    CHECK(std::is_sorted(catalog.begin(), catalog.end()));
    for (const CanonicalCode& code : catalog) {
      RootedTree t(code.entries);
      CHECK(t.vertex_count() == n - 2);
      int slots = 0;
      for (int v = 0; v < t.vertex_count(); ++v) {
        slots += t.frontier_slots(v);
        CHECK(t.degree(v) <= 3);
        CHECK(t.frontier_slots(v) >= 0);
      }
      CHECK(slots == n);
      if (t.edge_count() >= 1) {
        CHECK(t.degree(t.root()) >= 1);
        CHECK(t.degree(t.root()) <= 3);
      }
      CHECK(canonicalize(t) == code);  // decode-encode identity
    }
  }
}

TEST_CASE("code_from_parent_map builds valid codes") {
  // star: root 0 with children 1, 2, 3
  TreeCode star = code_from_parent_map({-1, 0, 0, 0});
  CHECK(canonicalize(RootedTree(star)).entries == TreeCode{3, 3, 3});
  // path rooted at one end: 2 - 0 - 1
  TreeCode path = code_from_parent_map({2, 0, -1});
  CHECK(canonicalize(RootedTree(path)).entries == TreeCode{1, 2});
  CHECK_THROWS_AS(code_from_parent_map({-1, -1}), InvalidTreeCode);
  CHECK_THROWS_AS(code_from_parent_map({1, 0}), InvalidTreeCode);
}

TEST_CASE("automorphism_orbits: slot blocks and automorphism action") {
  SECTION("one-edge tree: two blocks of two, only the identity automorphism") {
    RootedTree t(TreeCode{1});
    auto sym = automorphism_orbits(t);
    REQUIRE(sym.vertex_blocks.size() == 2);
    CHECK(sym.vertex_blocks[0] == std::pair{0, 2});  // root block first
    CHECK(sym.vertex_blocks[1] == std::pair{2, 4});
    CHECK(sym.automorphism_slot_maps.size() == 1);  // swapping endpoints moves the root
    REQUIRE(sym.slot_orbits.size() == 2);
    CHECK(sym.slot_orbits[0] == std::vector<int>{0, 1});
    CHECK(sym.slot_orbits[1] == std::vector<int>{2, 3});
  }
  SECTION("single vertex: one block of three") {
    auto sym = automorphism_orbits(RootedTree(TreeCode{}));
    REQUIRE(sym.vertex_blocks.size() == 1);
    CHECK(sym.vertex_blocks[0] == std::pair{0, 3});
    CHECK(sym.slot_orbits.size() == 1);
  }
  SECTION("mid-rooted path: the arm swap is an automorphism") {
    auto sym = automorphism_orbits(RootedTree(TreeCode{2, 2}));
    CHECK(sym.automorphism_slot_maps.size() == 2);
    // the two leaf blocks fuse into one orbit of four slot positions
    bool fused = false;
    for (const auto& orbit : sym.slot_orbits) fused |= orbit.size() == 4;
    CHECK(fused);
  }
  SECTION("center-rooted star: all six leaf slots interchangeable") {
    auto sym = automorphism_orbits(RootedTree(TreeCode{3, 3, 3}));
    CHECK(sym.automorphism_slot_maps.size() == 6);
    REQUIRE(sym.slot_orbits.size() == 1);
    CHECK(sym.slot_orbits[0].size() == 6);
  }
}

TEST_CASE("automorphism maps are slot bijections") {
  std::mt19937_64 rng(23);
  for (int n = 4; n <= 9; ++n) {
    auto catalog = enumerate_trees(n);
    const auto& code =
        catalog[std::uniform_int_distribution<std::size_t>(0, catalog.size() - 1)(rng)];
    RootedTree t(code.entries);
    auto sym = automorphism_orbits(t);
    for (const auto& rho : sym.automorphism_slot_maps) {
      std::vector<int> seen(t.frontier_size(), 0);
      for (int p : rho) ++seen[p];
      CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
    }
  }
}
