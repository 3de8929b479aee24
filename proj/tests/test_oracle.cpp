#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "lattenum/enumerate.hpp"
#include "lattenum/oracle.hpp"

using namespace lattenum;
using fixtures::set_of;

namespace {

std::set<std::string> emitted(int max_n, Mode mode, int size) {
  std::set<std::string> out;
  EnumConfig config;
  config.max_n = max_n;
  config.mode = mode;
  config.sink = [&](const LevelledLattice& l) {
    if (l.size() == size) {
      EXPECT_TRUE(out.insert(serialize(l)).second) << serialize(l);
    }
  };
  enumerate(config);
  return out;
}

}  // namespace

TEST(Oracle, NaiveLatticeCheck) {
  EXPECT_TRUE(oracle::is_lattice_naive(oracle::Poset::of(fixtures::H6())));
  EXPECT_TRUE(oracle::is_lattice_naive(oracle::Poset::of(fixtures::C4())));
  const auto bowtie = oracle::Poset::from_covers(6, {set_of({1}), set_of({1}), set_of({2, 3}), set_of({2, 3})});
  EXPECT_FALSE(oracle::is_lattice_naive(bowtie));
  EXPECT_TRUE(bowtie.antisymmetric());
}

TEST(Oracle, PropertyChecks) {
  EXPECT_TRUE(oracle::is_vertically_indecomposable(fixtures::N5()));
  EXPECT_TRUE(oracle::is_vertically_indecomposable(fixtures::M3()));
  EXPECT_FALSE(oracle::is_vertically_indecomposable(fixtures::C3()));
  EXPECT_FALSE(oracle::is_vertically_indecomposable(fixtures::D4b()));
  EXPECT_TRUE(oracle::is_vertically_indecomposable(fixtures::L2()));
  EXPECT_TRUE(oracle::is_graded(fixtures::H6()));
  EXPECT_TRUE(oracle::is_graded(fixtures::D4b()));
  EXPECT_FALSE(oracle::is_graded(fixtures::N5()));
}

TEST(Oracle, CanonicalExhaustiveExamples) {
  EXPECT_TRUE(oracle::is_canonical_exhaustive(fixtures::N5()));
  EXPECT_FALSE(oracle::is_canonical_exhaustive(fixtures::N5_swapped()));
  EXPECT_TRUE(oracle::is_canonical_exhaustive(fixtures::D4()));
  EXPECT_EQ(oracle::canonical_form(fixtures::N5_swapped()), fixtures::N5());
  EXPECT_EQ(oracle::canonical_form(fixtures::H6_swapped()), oracle::canonical_form(fixtures::H6()));
}

TEST(Oracle, BruteExamples) {
  const auto all5 = oracle::brute(5, Mode::all);
  EXPECT_EQ(all5.counts.at(5), 5u);
  EXPECT_EQ(all5.counts.at(4), 2u);
  const auto vi5 = oracle::brute(5, Mode::vi);
  EXPECT_EQ(vi5.counts.at(5), 2u);
  std::set<std::string> reps;
  for (const auto& l : vi5.representatives[5]) reps.insert(serialize(l));
  EXPECT_EQ(reps, (std::set<std::string>{serialize(fixtures::N5()), serialize(fixtures::M3())}));
  EXPECT_THROW(oracle::brute(9, Mode::all), std::length_error);
  EXPECT_THROW(oracle::brute(1, Mode::all), std::length_error);
}

TEST(Oracle, BruteEightElements) {
  EXPECT_EQ(oracle::brute(8, Mode::all).counts.at(8), 222u);
  EXPECT_EQ(oracle::brute(8, Mode::vi).counts.at(8), 126u);
}

TEST(Oracle, AgreesWithEnumerationInEveryMode) {
  for (Mode mode : {Mode::all, Mode::vi, Mode::graded, Mode::vi_graded}) {
    const int max_n = 8;
    const auto brute = oracle::brute(max_n, mode);
    EnumConfig config;
    config.max_n = max_n;
    config.mode = mode;
    EXPECT_EQ(enumerate(config), brute.counts) << to_string(mode);
    for (int n = 2; n <= 7; ++n) {
      std::set<std::string> expected;
      for (const auto& l : brute.representatives[n]) expected.insert(serialize(l));
      // Same classes: emitted lattices are canonical, hence equal to the
      // oracle's canonical forms.
      EXPECT_EQ(emitted(7, mode, n), expected) << to_string(mode) << " n=" << n;
    }
  }
}

TEST(Oracle, EmittedLatticesAreCanonicalAndDistinct) {
  for (Mode mode : {Mode::all, Mode::vi, Mode::graded, Mode::vi_graded}) {
    for (int n = 2; n <= 7; ++n) {
      std::set<std::string> forms;
      for (const auto& s : emitted(7, mode, n)) {
        const auto l = deserialize(s);
        EXPECT_TRUE(oracle::is_canonical_exhaustive(l)) << s;
        EXPECT_TRUE(oracle::in_mode(l, mode)) << s;
        EXPECT_TRUE(forms.insert(serialize(oracle::canonical_form(l))).second) << s;
      }
    }
  }
}

TEST(Oracle, GroupClosure) {
  const auto s3 = oracle::group_closure({LabelPermutation::transposition(5, 2, 3), LabelPermutation::transposition(5, 3, 4)});
  EXPECT_EQ(s3.size(), 6u);
  EXPECT_EQ(oracle::group_closure({}).size(), 1u);
  std::vector<LabelPermutation> big;
  for (int i = 2; i + 1 < 12; ++i) big.push_back(LabelPermutation::transposition(12, i, i + 1));
  EXPECT_TRUE(oracle::group_closure(big, 1000).empty());
}
