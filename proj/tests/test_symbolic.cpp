#include <doctest.h>

#include <random>

#include "hyptile/errors.hpp"
#include "hyptile/symbolic.hpp"
#include "oracles.hpp"

using namespace hyptile;

namespace {

Word w(std::initializer_list<int> l) { return Word(l); }

std::vector<BigInt> big(std::initializer_list<long> l) {
  std::vector<BigInt> out;
  for (long v : l) out.emplace_back(v);
  return out;
}

}  // namespace

TEST_CASE("toeplitz periods follow the recurrence") {
  ToeplitzSpec spec{2, 8};
  CHECK(toeplitz_periods(spec, 0) == 3);
  CHECK(toeplitz_periods(spec, 1) == 3);
  CHECK(toeplitz_periods(spec, 2) == 9);
  CHECK(toeplitz_periods(spec, 3) == 81);
  CHECK(toeplitz_periods(spec, 4) == 2187);
  CHECK_THROWS_AS(toeplitz_periods(ToeplitzSpec{2, 3}, 4), CapError);
}

TEST_CASE("toeplitz letters and defining steps") {
  ToeplitzSpec spec{2, 8};
  CHECK(toeplitz_letter(spec, 0).letter == 1);
  CHECK(toeplitz_letter(spec, 0).step == 1);
  CHECK(toeplitz_letter(spec, 1).letter == 2);
  CHECK(toeplitz_letter(spec, 1).step == 2);
  CHECK(toeplitz_letter(spec, 4).letter == 1);
  CHECK(toeplitz_letter(spec, 4).step == 3);
  CHECK(toeplitz_color(2, 2) == 2);
  CHECK(toeplitz_color(3, 3) == 3);
  CHECK(toeplitz_color(3, 4) == 1);
}

TEST_CASE("toeplitz windows") {
  CHECK(toeplitz_window(ToeplitzSpec{2, 8}, 0, 9) == w({1, 2, 1, 1, 1, 1, 1, 2, 1}));
  CHECK(toeplitz_window(ToeplitzSpec{2, 8}, -1, 0) == w({1}));
  CHECK(toeplitz_window(ToeplitzSpec{1, 8}, 0, 3) == w({1, 1, 1}));
  CHECK_THROWS_AS(toeplitz_window(ToeplitzSpec{2, 8}, 3, 3), DomainError);
  CHECK_THROWS_AS(toeplitz_window(ToeplitzSpec{2, 8}, 0, 2'000'000), BudgetError);
}

TEST_CASE("toeplitz cap error names the first undefined step") {
  // Position 4 is defined at step 3.
  try {
    toeplitz_letter(ToeplitzSpec{2, 2}, 4);
    FAIL("expected cap error");
  } catch (const CapError& e) {
    CHECK(e.position() == 4);
    CHECK(e.first_undefined_step() == 3);
  }
}

TEST_CASE("toeplitz construction agrees with literal array filling") {
  for (int r : {1, 2, 3, 5}) {
    const std::int64_t from = -3 * 2187, to = 3 * 2187;
    auto ref = oracle::toeplitz_fill(r, from, to, 7);
    ToeplitzSpec spec{r, 7};
    for (std::int64_t q = from; q < to; ++q) {
      const auto& cell = ref[static_cast<std::size_t>(q - from)];
      if (!cell) {
        CHECK_THROWS_AS(toeplitz_letter(spec, q), CapError);
        continue;
      }
      auto got = toeplitz_letter(spec, q);
      REQUIRE(got.letter == cell->letter);
      REQUIRE(got.step == cell->step);
    }
  }
}

TEST_CASE("every position within p_5 is defined by step 6") {
  ToeplitzSpec spec{3, 6};
  const std::int64_t p5 = toeplitz_periods(ToeplitzSpec{3, 6}, 5).convert_to<std::int64_t>();
  int worst = 0;
  for (std::int64_t q = -p5; q <= p5; ++q) worst = std::max(worst, toeplitz_letter(spec, q).step);
  CHECK(worst <= 6);
}

TEST_CASE("substitution images") {
  const auto rule = SubstitutionRule::standard();
  CHECK(substitution_image(rule, w({1}), 1) == w({1, 1, 2}));
  CHECK(substitution_image(rule, w({1}), 2) == w({1, 1, 2, 1, 1, 2, 1, 2, 2}));
  CHECK(substitution_image(rule, w({2}), 0) == w({2}));
  CHECK_THROWS_AS(substitution_image(rule, w({1}), 20), BudgetError);
  CHECK_THROWS_AS(substitution_image(SubstitutionRule{{{1, 2}, {1}}}, w({1}), 1), ModelError);
}

TEST_CASE("substitution fixed-point windows") {
  const auto rule = SubstitutionRule::standard();
  CHECK(substitution_fixed_window(rule, -3, 3) == w({1, 2, 2, 1, 1, 2}));
  CHECK(substitution_fixed_window(rule, 0, 1) == w({1}));
  CHECK(substitution_fixed_window(rule, -1, 0) == w({2}));
  CHECK_THROWS_AS(substitution_fixed_window(SubstitutionRule{{{2, 1, 1}, {1, 2, 2}}}, 0, 3), ModelError);
  CHECK_THROWS_AS(substitution_fixed_window(SubstitutionRule{{{1, 1, 2}, {2, 2, 1}}}, 0, 3), ModelError);
}

TEST_CASE("fixed point is reproduced by one more substitution") {
  const auto rule = SubstitutionRule::standard();
  for (std::int64_t n : {1, 5, 40, 300}) {
    Word base = substitution_fixed_window(rule, -n, n);
    Word grown = substitution_image(rule, base, 1);
    // The dot sits between positions -1 and 0 both before and after.
    CHECK(grown == substitution_fixed_window(rule, -3 * n, 3 * n));
  }
  // Materialized prefixes and suffixes of S^n agree with the window.
  auto s7_1 = oracle::iterate({{1, 1, 2}, {1, 2, 2}}, {1}, 7);
  auto s7_2 = oracle::iterate({{1, 1, 2}, {1, 2, 2}}, {2}, 7);
  Word right = substitution_fixed_window(rule, 0, static_cast<std::int64_t>(s7_1.size()));
  Word left = substitution_fixed_window(rule, -static_cast<std::int64_t>(s7_2.size()), 0);
  CHECK(right == s7_1);
  CHECK(left == s7_2);
}

TEST_CASE("atlas words") {
  const Model t2 = ToeplitzSpec{2, 8};
  auto a1 = atlas_words(t2, 1);
  CHECK(a1.length == 3);
  CHECK(a1.words[0] == w({1, 1, 1}));
  CHECK(a1.words[1] == w({1, 2, 1}));
  auto a2 = atlas_words(t2, 2);
  CHECK(a2.words[0] == w({1, 2, 1, 1, 1, 1, 1, 2, 1}));
  CHECK(a2.words[1] == w({1, 2, 1, 1, 2, 1, 1, 2, 1}));

  const Model sub = SubstitutionRule::standard();
  auto s1 = atlas_words(sub, 1);
  CHECK(s1.words[0] == w({1, 1, 2}));
  CHECK(s1.words[1] == w({1, 2, 2}));
  // S^{q-1}(1) S^{q-1}(i) S^{q-1}(2) for this rule.
  const std::vector<std::vector<int>> img{{1, 1, 2}, {1, 2, 2}};
  for (int q = 1; q <= 6; ++q) {
    auto a = atlas_words(sub, q);
    for (int i = 1; i <= 2; ++i) {
      auto expect = oracle::iterate(img, {1, i, 2}, q - 1);
      CHECK(a.words[static_cast<std::size_t>(i - 1)] == expect);
    }
  }
  CHECK_THROWS_AS(atlas_words(t2, 6), BudgetError);
}

TEST_CASE("atlas_letter reads words lazily") {
  for (const Model& m : {Model{ToeplitzSpec{3, 8}}, Model{SubstitutionRule::standard()}}) {
    for (int q = 0; q <= 4; ++q) {
      auto a = atlas_words(m, q);
      for (int i = 1; i <= alphabet_size(m); ++i)
        for (std::size_t k = 0; k < a.words[static_cast<std::size_t>(i - 1)].size(); ++k)
          REQUIRE(atlas_letter(m, q, i, BigInt(k)) == a.words[static_cast<std::size_t>(i - 1)][k]);
    }
  }
}

TEST_CASE("block decompositions") {
  const Model t2 = ToeplitzSpec{2, 8};
  auto d1 = block_decompose(t2, 0, 9, 1);
  CHECK(d1.blocks == std::vector<Block>{{0, 2}, {3, 1}, {6, 2}});
  auto d2 = block_decompose(t2, 0, 9, 2);
  CHECK(d2.blocks == std::vector<Block>{{0, 1}});
  auto ds = block_decompose(SubstitutionRule::standard(), 0, 3, 1);
  CHECK(ds.blocks == std::vector<Block>{{0, 1}});
  CHECK_THROWS_AS(block_decompose(t2, 1, 9, 1), AlignmentError);
}

TEST_CASE("aligned windows always decompose and agree with block_letter") {
  for (const Model& m : {Model{ToeplitzSpec{2, 9}}, Model{ToeplitzSpec{3, 9}}, Model{SubstitutionRule::standard()}}) {
    for (int q = 0; q <= 3; ++q) {
      const auto len = level_length(m, q).convert_to<std::int64_t>();
      const std::int64_t from = -20 * len, to = 20 * len;
      auto dec = block_decompose(m, from, to, q);
      CHECK(dec.blocks.size() == 40);
      auto atlas = atlas_words(m, q);
      Word rebuilt;
      for (const auto& b : dec.blocks) {
        const auto& word = atlas.words[static_cast<std::size_t>(b.index - 1)];
        rebuilt.insert(rebuilt.end(), word.begin(), word.end());
        CHECK(block_letter(m, q, floor_div(b.offset, len)) == b.index);
      }
      CHECK(rebuilt == sequence_window(m, from, to));
    }
  }
}

TEST_CASE("letter counts") {
  const Model sub = SubstitutionRule::standard();
  CHECK(letter_counts(sub, 1, 1) == big({2, 1}));
  CHECK(letter_counts(sub, 2, 1) == big({5, 4}));
  CHECK(letter_counts(ToeplitzSpec{2, 8}, 1, 2) == big({2, 1}));
}

TEST_CASE("letter counts match brute force on materialized words") {
  for (int r : {1, 2, 3, 4}) {
    const Model m = ToeplitzSpec{r, 12};
    for (int q = 0; level_length(m, q) <= 100000; ++q) {
      auto a = atlas_words(m, q);
      for (int i = 1; i <= r; ++i) {
        auto brute = oracle::count_letters(a.words[static_cast<std::size_t>(i - 1)], r);
        auto rec = letter_counts(m, q, i);
        for (int k = 0; k < r; ++k) REQUIRE(rec[static_cast<std::size_t>(k)] == brute[static_cast<std::size_t>(k)]);
      }
    }
  }
  const Model sub = SubstitutionRule::standard();
  for (int q = 0; level_length(sub, q) <= 100000; ++q) {
    for (int i = 1; i <= 2; ++i) {
      auto brute = oracle::count_letters(oracle::iterate({{1, 1, 2}, {1, 2, 2}}, {i}, q), 2);
      auto rec = letter_counts(sub, q, i);
      REQUIRE(rec[0] == brute[0]);
      REQUIRE(rec[1] == brute[1]);
    }
  }
}

TEST_CASE("level lengths") {
  CHECK(level_length(ToeplitzSpec{2, 8}, 0) == 1);
  CHECK(level_length(ToeplitzSpec{2, 8}, 1) == 3);
  CHECK(level_length(ToeplitzSpec{2, 8}, 3) == 81);
  CHECK(level_length(SubstitutionRule::standard(), 4) == 81);
}

TEST_CASE("word formatting") {
  CHECK(format_word(w({1, 2, 1}), 2) == "121");
  CHECK(format_word(w({10, 2}), 12) == "10,2");
}

TEST_CASE("determinism") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> pos(-100000, 100000);
  const ToeplitzSpec spec{3, 10};
  for (int k = 0; k < 200; ++k) {
    auto q = pos(rng);
    CHECK(toeplitz_letter(spec, q).letter == toeplitz_letter(spec, q).letter);
    CHECK(substitution_letter(SubstitutionRule::standard(), q) == substitution_letter(SubstitutionRule::standard(), q));
  }
}
