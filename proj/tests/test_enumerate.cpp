#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "lattenum/enumerate.hpp"
#include "lattenum/oracle.hpp"

using namespace lattenum;

namespace {

const std::vector<std::uint64_t> kAll{1, 1, 1, 2, 5, 15, 53, 222, 1078, 5994, 37622};
const std::vector<std::uint64_t> kIndecomposable{1, 1, 0, 1, 2, 7, 27, 126, 664, 3954, 26190};

std::vector<std::string> serialized(const std::vector<SearchNode>& nodes) {
  std::vector<std::string> out;
  for (const auto& n : nodes) out.push_back(serialize(n.lattice));
  std::sort(out.begin(), out.end());
  return out;
}

SearchNode node_of(const LevelledLattice& l) {
  // Stabiliser via exhaustive relabelling; fine for fixtures.
  SearchNode node{l, {}};
  oracle::for_each_level_preserving(l, [&](const LabelPermutation& p) {
    if (!p.is_identity() && oracle::relabel(l, p) == l) node.stabiliser.push_back(p);
  });
  return node;
}

CountTable run(int max_n, Mode mode, int threads = 1, int seed = 0, SearchOptions options = {}) {
  EnumConfig config;
  config.max_n = max_n;
  config.mode = mode;
  config.threads = threads;
  config.seed_size = seed;
  config.options = options;
  return enumerate(config);
}

}  // namespace

TEST(Modes, ParseAndPrint) {
  for (Mode m : {Mode::all, Mode::vi, Mode::graded, Mode::vi_graded}) EXPECT_EQ(parse_mode(to_string(m)), m);
  EXPECT_FALSE(parse_mode("VI").has_value());
  EXPECT_FALSE(parse_mode("").has_value());
  EXPECT_TRUE(wants_vi(Mode::vi_graded));
  EXPECT_TRUE(wants_graded(Mode::vi_graded));
  EXPECT_FALSE(wants_graded(Mode::vi));
}

TEST(Children, Examples) {
  const auto d4 = node_of(fixtures::D4());
  EXPECT_EQ(serialized(children(d4, 1, Mode::all)),
            (std::vector<std::string>{serialize(fixtures::N5()), serialize(fixtures::D4b())}));
  EXPECT_EQ(serialized(children(d4, 1, Mode::vi)), (std::vector<std::string>{serialize(fixtures::N5())}));
  const auto from_root = children(SearchNode{}, 2, Mode::all);
  ASSERT_EQ(from_root.size(), 1u);
  EXPECT_EQ(from_root[0].lattice, fixtures::D4());
  EXPECT_EQ(oracle::group_closure(from_root[0].stabiliser).size(), 2u);
}

TEST(Children, DiamondTwoAtoms) {
  const auto d4 = node_of(fixtures::D4());
  const auto found = serialized(children(d4, 2));
  EXPECT_NE(std::find(found.begin(), found.end(), serialize(fixtures::H6())), found.end());
  for (const auto& s : found) EXPECT_TRUE(oracle::is_canonical_exhaustive(deserialize(s))) << s;
}

TEST(Children, RootChildren) {
  std::size_t factorial = 1;
  for (int m = 1; m <= 5; ++m) {
    factorial *= m;
    const auto all = children(SearchNode{}, m, Mode::all);
    ASSERT_EQ(all.size(), 1u);
    EXPECT_EQ(all[0].lattice.size(), 2 + m);
    EXPECT_EQ(oracle::group_closure(all[0].stabiliser).size(), factorial);
    EXPECT_EQ(children(SearchNode{}, m, Mode::vi).size(), m == 1 ? 0u : 1u);
  }
  EXPECT_THROW(children(SearchNode{}, 0), std::invalid_argument);
  EXPECT_THROW(children(SearchNode{}, kMaxSize), std::invalid_argument);
}

TEST(Children, StabilisersAreAutomorphismGroups) {
  for (const auto& node : fixtures::canonical_nodes(7)) {
    std::size_t automorphisms = 0;
    oracle::for_each_level_preserving(node.lattice, [&](const LabelPermutation& p) {
      if (oracle::relabel(node.lattice, p) == node.lattice) ++automorphisms;
    });
    for (const auto& g : node.stabiliser) EXPECT_EQ(oracle::relabel(node.lattice, g), node.lattice);
    EXPECT_EQ(oracle::group_closure(node.stabiliser).size(), automorphisms) << serialize(node.lattice);
  }
}

TEST(Enumerate, Examples) {
  const auto all = run(6, Mode::all);
  EXPECT_EQ(all.counts, (std::vector<std::uint64_t>{0, 0, 1, 1, 2, 5, 15}));
  const auto vi = run(6, Mode::vi);
  EXPECT_EQ(vi.counts, (std::vector<std::uint64_t>{0, 0, 1, 0, 1, 2, 7}));
  for (Mode m : {Mode::all, Mode::vi, Mode::graded, Mode::vi_graded}) {
    const auto t = run(2, m);
    EXPECT_EQ(t.counts, (std::vector<std::uint64_t>{0, 0, 1}));
    EXPECT_EQ(t.at(1), 1u);
    EXPECT_EQ(t.at(2), 1u);
    EXPECT_EQ(t.mode, m);
  }
  EXPECT_THROW(all.at(7), std::out_of_range);
  EXPECT_THROW(all.at(0), std::out_of_range);
}

TEST(Enumerate, TableValuesUpToTen) {
  const auto all = run(10, Mode::all);
  const auto vi = run(10, Mode::vi);
  for (int n = 1; n <= 10; ++n) {
    EXPECT_EQ(all.at(n), kAll[n - 1]) << n;
    EXPECT_EQ(vi.at(n), kIndecomposable[n - 1]) << n;
  }
}

TEST(Enumerate, RejectsBadConfig) {
  EXPECT_THROW(run(1, Mode::all), std::out_of_range);
  EXPECT_THROW(run(kMaxSize + 1, Mode::all), std::out_of_range);
  EXPECT_THROW(run(5, Mode::all, 0), std::out_of_range);
}

TEST(Enumerate, ThreadsAndSeedSizeDoNotChangeCounts) {
  for (Mode mode : {Mode::all, Mode::vi, Mode::graded, Mode::vi_graded}) {
    const auto reference = run(10, mode, 1, 0);
    for (int threads : {1, 2, 8}) {
      for (int seed : {2, 4, 7, 10}) EXPECT_EQ(run(10, mode, threads, seed), reference) << threads << " " << seed;
    }
  }
}

TEST(Enumerate, SearchOptionsDoNotChangeResults) {
  for (Mode mode : {Mode::all, Mode::vi, Mode::graded, Mode::vi_graded}) {
    const auto reference = run(9, mode);
    for (bool early : {false, true}) {
      for (bool shortcut : {false, true}) {
        EXPECT_EQ(run(9, mode, 1, 0, SearchOptions{early, shortcut}), reference);
      }
    }
  }
  // Emitted sets too, not only the counts.
  for (bool early : {false, true}) {
    for (bool shortcut : {false, true}) {
      std::multiset<std::string> a, b;
      EnumConfig config;
      config.max_n = 8;
      config.sink = [&](const LevelledLattice& l) { a.insert(serialize(l)); };
      enumerate(config);
      config.options = SearchOptions{early, shortcut};
      config.sink = [&](const LevelledLattice& l) { b.insert(serialize(l)); };
      enumerate(config);
      EXPECT_EQ(a, b);
    }
  }
}

TEST(Enumerate, SinkReceivesEveryLatticeOnce) {
  for (int threads : {1, 3}) {
    std::multiset<std::string> seen;
    EnumConfig config;
    config.max_n = 9;
    config.threads = threads;
    config.seed_size = 5;
    config.sink = [&](const LevelledLattice& l) { seen.insert(serialize(l)); };
    const auto table = enumerate(config);
    EXPECT_EQ(seen.size(), table.total());
    EXPECT_EQ(std::set<std::string>(seen.begin(), seen.end()).size(), seen.size());
    for (const auto& s : seen) EXPECT_FALSE(validate(deserialize(s)).has_value());
  }
}

TEST(Enumerate, ModeSubsetsAreConsistent) {
  std::set<std::string> all, vi, graded, both;
  const auto collect = [](Mode mode, std::set<std::string>& into) {
    EnumConfig config;
    config.max_n = 9;
    config.mode = mode;
    config.sink = [&](const LevelledLattice& l) { into.insert(serialize(l)); };
    enumerate(config);
  };
  collect(Mode::all, all);
  collect(Mode::vi, vi);
  collect(Mode::graded, graded);
  collect(Mode::vi_graded, both);
  for (const auto& s : all) {
    const auto l = deserialize(s);
    EXPECT_EQ(vi.count(s) == 1, oracle::is_vertically_indecomposable(l)) << s;
    EXPECT_EQ(graded.count(s) == 1, oracle::is_graded(l)) << s;
    EXPECT_EQ(both.count(s) == 1, vi.count(s) == 1 && graded.count(s) == 1) << s;
  }
}

TEST(Enumerate, StatsAreFilled) {
  EnumConfig config;
  config.max_n = 10;
  config.seed_size = 6;
  EnumStats stats;
  const auto table = enumerate(config, &stats);
  EXPECT_GT(stats.orbit_scans, 0u);
  EXPECT_GT(stats.tasks, 0u);
  EXPECT_GE(stats.wall_seconds, 0.0);
  EXPECT_GE(stats.cycles_per_lattice(table.total()), 0.0);
  EXPECT_EQ(stats.cycles_per_lattice(0), 0.0);
}

TEST(ComposeCounts, Examples) {
  EXPECT_EQ(compose_counts(std::vector<std::uint64_t>{1, 1, 0, 1, 2, 7}).back(), 15u);
  const auto u8 = compose_counts(std::vector<std::uint64_t>{1, 1, 0, 1, 2, 7, 27, 126});
  EXPECT_EQ(u8[6], 53u);
  EXPECT_EQ(u8[7], 222u);
  EXPECT_EQ(compose_counts(std::vector<std::uint64_t>{1, 1, 0, 1})[3], 2u);
  EXPECT_TRUE(compose_counts(std::vector<std::uint64_t>{}).empty());
  EXPECT_EQ(compose_counts(std::vector<std::uint64_t>{1}), (std::vector<std::uint64_t>{1}));
  EXPECT_THROW(compose_counts(std::vector<std::uint64_t>{2, 1}), std::invalid_argument);
}

TEST(ComposeCounts, TwentyRows) {
  const std::vector<std::uint64_t> i{1,          1,           0,            1,             2,
                                     7,          27,          126,          664,           3954,
                                     26190,      190754,      1514332,      12998035,      119803771,
                                     1178740932, 12316480222, 136060611189, 1582930919092, 19328253734491};
  const std::vector<std::uint64_t> u{1,          1,           1,            2,             5,            15,
                                     53,         222,         1078,         5994,          37622,
                                     262776,     2018305,     16873364,     152233518,     1471613387,
                                     15150569446, 165269824761, 1901910625578, 23003059864006};
  EXPECT_EQ(compose_counts(i), u);
}

TEST(ComposeCounts, DetectsOverflow) {
  std::vector<std::uint64_t> huge(12, 1ULL << 40);
  huge[0] = 1;
  EXPECT_THROW(compose_counts(huge), std::overflow_error);
}

TEST(ComposeCounts, MatchesEnumeration) {
  const auto vi = run(10, Mode::vi);
  const auto all = run(10, Mode::all);
  std::vector<std::uint64_t> i;
  for (int n = 1; n <= 10; ++n) i.push_back(vi.at(n));
  const auto u = compose_counts(i);
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(u[n - 1], all.at(n)) << n;
}
