#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <regex>
#include <set>

#include "hyptile/errors.hpp"
#include "hyptile/geometry.hpp"
#include "oracles.hpp"

using namespace hyptile;

namespace {

const AffineMap R = AffineMap::dilation();
const AffineMap S = AffineMap::translation();

ExactPoint pt(Rational x, Rational y) { return ExactPoint{std::move(x), std::move(y)}; }

}  // namespace

TEST_CASE("affine composition and alpha") {
  CHECK(R * S == AffineMap{2, 2});
  CHECK(S * R == AffineMap{2, 1});
  CHECK(R * AffineMap::identity() == R);
  CHECK(alpha(R) == 2);
  CHECK(alpha(S) == 1);
  CHECK(alpha(R.inverse() * R) == 1);
  CHECK(affine_power(R, -3) == AffineMap{Rational(1, 8), 0});
  CHECK(affine_power(S, 5) == AffineMap{1, 5});
}

TEST_CASE("alpha is multiplicative on random dyadic maps") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> e(-20, 20);
  std::uniform_int_distribution<long> m(-1000, 1000);
  for (int k = 0; k < 500; ++k) {
    AffineMap f{pow2_rational(e(rng)), Rational(m(rng)) * pow2_rational(e(rng))};
    AffineMap g{pow2_rational(e(rng)), Rational(m(rng)) * pow2_rational(e(rng))};
    AffineMap h{pow2_rational(e(rng)), Rational(m(rng)) * pow2_rational(e(rng))};
    CHECK(alpha(f * g) == alpha(f) * alpha(g));
    CHECK((f * g) * h == f * (g * h));
    CHECK(f * f.inverse() == AffineMap::identity());
  }
}

TEST_CASE("tile regions") {
  auto base = tile_region(TileAddress{0, 0});
  CHECK(base[0] == pt(0, 1));
  CHECK(base[1] == pt(Rational(1, 2), 1));
  CHECK(base[2] == pt(1, 1));
  CHECK(base[3] == pt(1, 2));
  CHECK(base[4] == pt(0, 2));

  auto doubled = tile_region(TileAddress{1, 0});
  CHECK(doubled[0] == pt(0, 2));
  CHECK(doubled[1] == pt(1, 2));
  CHECK(doubled[2] == pt(2, 2));
  CHECK(doubled[3] == pt(2, 4));
  CHECK(doubled[4] == pt(0, 4));

  auto shifted = tile_region(TileAddress{0, 1});
  for (std::size_t k = 0; k < 5; ++k) CHECK(shifted[k] == pt(base[k].x + 1, base[k].y));
}

TEST_CASE("tile containing a point") {
  CHECK(tile_containing_point(0.5, 1.5) == TileAddress{0, 0});
  CHECK(tile_containing_point(3.0, 1.0) == TileAddress{0, 3});
  CHECK(tile_containing_point(0.3, 0.6) == TileAddress{-1, 0});
  CHECK(tile_containing_point(-0.1, 2.0) == TileAddress{1, -1});
  CHECK_THROWS_AS(tile_containing_point(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(tile_containing_point(0.0, -1.0), DomainError);
}

TEST_CASE("interior samples of a tile map back to the tile") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> rows(-30, 30);
  std::uniform_int_distribution<long> cols(-100000, 100000);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int k = 0; k < 2000; ++k) {
    TileAddress t{rows(rng), BigInt(cols(rng))};
    auto v = tile_region(t);
    // Box corners A_1 (lower left) and A_4 (upper right).
    const double x0 = to_double(v[0].x), y0 = to_double(v[0].y);
    const double x1 = to_double(v[3].x), y1 = to_double(v[3].y);
    const double x = x0 + u(rng) * (x1 - x0), y = y0 + u(rng) * (y1 - y0);
    CHECK(tile_containing_point(x, y) == t);
  }
}

TEST_CASE("triangle patches") {
  Patch p{{1, 2, 1}, PatchShape::Triangle, TileAddress{5, 3}};
  auto tiles = patch_tiles(p);
  REQUIRE(tiles.size() == 7);
  CHECK(tiles[0].tile == TileAddress{5, 3});
  CHECK(tiles[1].tile == TileAddress{4, 6});
  CHECK(tiles[2].tile == TileAddress{4, 7});
  CHECK(tiles[1].color == 2);
  CHECK(tiles[6].tile == TileAddress{3, 15});
  CHECK(tiles[6].color == 1);
  // every tile lies under the apex's x-extent [96, 128)
  for (const auto& t : tiles) {
    auto v = tile_region(t.tile);
    CHECK(v[0].x >= 96);
    CHECK(v[2].x <= 128);
  }
  Patch big{Word(30, 1), PatchShape::Triangle, TileAddress{0, 0}};
  CHECK_THROWS_AS(patch_tiles(big), BudgetError);
}

TEST_CASE("block patch words read the block from the top row down") {
  Model m = ToeplitzSpec{2, 12};
  for (std::int64_t k = -3; k < 3; ++k) {
    auto patch = block_patch(m, 2, k, BigInt(0));
    CHECK(patch.apex.row == 9 * k + 8);
    auto block = sequence_window(m, 9 * k, 9 * k + 9);
    std::reverse(block.begin(), block.end());
    CHECK(patch.word == block);
  }
}

TEST_CASE("slab partition by triangle patches") {
  for (int height = 1; height <= 12; ++height) {
    for (std::int64_t bottom : {-7, 0, 4}) {
      auto rep = check_slab_partition(bottom, height, -2, 3);
      CHECK(rep.tiles == 5 * ((std::uint64_t{1} << height) - 1));
      CHECK(rep.uncovered == 0);
      CHECK(rep.multiply_covered == 0);
    }
  }
}

namespace {

// Child classes read straight off the parent word: reverse it so the apex row
// comes first, cut into blocks of length len, and look each block up.
std::vector<std::pair<long long, int>> oracle_classes(const std::vector<int>& parent_word,
                                                      const std::vector<std::vector<int>>& atlas, std::size_t len) {
  std::vector<int> apex_first(parent_word.rbegin(), parent_word.rend());
  std::vector<std::pair<long long, int>> out;
  for (std::size_t off = 0; off < apex_first.size(); off += len) {
    std::vector<int> block(apex_first.begin() + off, apex_first.begin() + off + len);
    std::reverse(block.begin(), block.end());
    auto it = std::find(atlas.begin(), atlas.end(), block);
    REQUIRE(it != atlas.end());
    out.emplace_back(static_cast<long long>(off), static_cast<int>(it - atlas.begin()) + 1);
  }
  return out;
}

void check_table(const OccurrenceTable& table, const std::vector<std::pair<long long, int>>& expected) {
  REQUIRE(table.classes.size() == expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) {
    CHECK(table.classes[k].depth == expected[k].first);
    CHECK(table.classes[k].child == expected[k].second);
    CHECK(table.classes[k].count() == pow2(static_cast<std::uint64_t>(expected[k].first)));
  }
}

}  // namespace

TEST_CASE("occurrences, Toeplitz r = 2") {
  Model m = ToeplitzSpec{2, 12};
  auto table = enumerate_occurrences(m, 1, 1);
  // parent word 121 111 121
  check_table(table, {{0, 2}, {3, 1}, {6, 2}});
  REQUIRE(table.explicit_items);
  CHECK(table.explicit_items->size() == 1 + 8 + 64);
  for (const auto& occ : *table.explicit_items) {
    CHECK(occ.horizontal < pow2(occ.depth.convert_to<std::uint64_t>()));
    CHECK(alpha(occ.placement()) == pow2_rational(-occ.depth.convert_to<std::int64_t>()));
  }

  // level 2 -> 3: parent words of length 81, blocks of 9
  auto atlas2 = atlas_words(m, 2);
  auto atlas3 = atlas_words(m, 3);
  std::vector<std::vector<int>> children(atlas2.words.begin(), atlas2.words.end());
  for (int j = 1; j <= 2; ++j) {
    auto t = enumerate_occurrences(m, 2, j);
    check_table(t, oracle_classes(atlas3.words[static_cast<std::size_t>(j - 1)], children, 9));
    CHECK_FALSE(t.explicit_items);  // 2^72 placements
  }
}

TEST_CASE("occurrences, substitution 1 -> 112, 2 -> 122") {
  Model m = SubstitutionRule::standard();
  const std::vector<std::vector<int>> images{{1, 1, 2}, {1, 2, 2}};
  for (int q = 0; q <= 2; ++q) {
    std::vector<std::vector<int>> children;
    for (int i = 1; i <= 2; ++i) children.push_back(oracle::iterate(images, {i}, q));
    const std::size_t len = children[0].size();
    for (int j = 1; j <= 2; ++j) {
      auto parent = oracle::iterate(images, {j}, q + 1);
      check_table(enumerate_occurrences(m, q, j), oracle_classes(parent, children, len));
    }
  }
  // 112 read apex-first is 2, 1, 1
  check_table(enumerate_occurrences(m, 1, 1), {{0, 2}, {3, 1}, {6, 1}});
}

TEST_CASE("occurrence class invariants") {
  for (Model m : {Model{ToeplitzSpec{3, 12}}, Model{SubstitutionRule::standard()}}) {
    for (int q = 0; q <= 4; ++q) {
      for (int j = 1; j <= alphabet_size(m); ++j) {
        auto table = enumerate_occurrences(m, q, j);
        REQUIRE_FALSE(table.classes.empty());
        CHECK(table.classes.front().depth == 0);
        CHECK(table.classes.front().count() == 1);
        const BigInt parent_len = level_length(m, q + 1);
        for (const auto& c : table.classes) {
          CHECK(c.depth < parent_len);
          CHECK(c.alpha() == pow2_rational(-c.depth.convert_to<std::int64_t>()));
          CHECK(c.weight() == 1);
        }
      }
    }
  }
}

TEST_CASE("occurrence runs stay available at deep levels") {
  Model m = ToeplitzSpec{2, 12};
  auto runs = occurrence_runs(m, 8, 1);
  BigInt blocks = 0;
  for (const auto& run : runs) {
    blocks += run.blocks;
    CHECK(run.stride == level_length(m, 8));
  }
  CHECK(blocks == pow3(8));
  CHECK_THROWS_AS(enumerate_occurrences(m, 14, 1), BudgetError);
}

TEST_CASE("occurrence tiles add up to the parent patch") {
  for (Model m : {Model{ToeplitzSpec{2, 12}}, Model{ToeplitzSpec{3, 12}}, Model{SubstitutionRule::standard()}}) {
    for (int q = 0; q <= 2; ++q) {
      for (int j = 1; j <= alphabet_size(m); ++j) {
        auto rec = reconcile_occurrence_tiles(m, q, j);
        CHECK(rec.parent_tiles == rec.child_tiles);
        CHECK(rec.parent_tiles == pow2(level_length(m, q + 1).convert_to<std::uint64_t>()) - 1);
      }
    }
  }
}

TEST_CASE("explicit placements tile the parent patch once") {
  Model m = ToeplitzSpec{2, 12};
  auto table = enumerate_occurrences(m, 1, 1);
  std::set<TileAddress> seen;
  std::size_t total = 0;
  const Patch parent{Word(9, 1), PatchShape::Triangle, TileAddress{0, 0}};
  for (const auto& occ : *table.explicit_items) {
    Patch child{Word(3, occ.child), PatchShape::Triangle,
                TileAddress{-occ.depth.convert_to<std::int64_t>(), occ.horizontal}};
    for (const auto& t : patch_tiles(child)) {
      seen.insert(t.tile);
      ++total;
    }
  }
  std::set<TileAddress> expected;
  for (const auto& t : patch_tiles(parent)) expected.insert(t.tile);
  CHECK(total == expected.size());
  CHECK(seen == expected);
}

TEST_CASE("suspension projection") {
  Model m = ToeplitzSpec{2, 12};
  auto id = suspension_project(AffineMap::identity(), m);
  CHECK(id.fractional == 0.0);
  CHECK(id.shift == 0);
  CHECK(id.origin_letter == sequence_letter(m, 0));
  auto r = suspension_project(R, m);
  CHECK(r.fractional == 0.0);
  CHECK(r.shift == 1);
  auto three = suspension_project(AffineMap{3, 0}, m);
  CHECK(three.shift == 1);
  CHECK(three.fractional == doctest::Approx(std::log2(3.0) - 1.0).epsilon(1e-12));
  CHECK(three.fractional == doctest::Approx(0.58496).epsilon(1e-5));
  auto small = suspension_project(AffineMap{Rational(3, 16), 5}, m);
  CHECK(small.shift == -3);
  CHECK(small.fractional == doctest::Approx(std::log2(3.0) - 1.0).epsilon(1e-12));
}

TEST_CASE("agreement radius") {
  Model m = ToeplitzSpec{2, 12};
  auto a = decorated(m);
  auto b = decorated(m);
  auto same = agreement_radius(a, b);
  CHECK(std::isinf(same.radius));
  CHECK(same.distance() == 0.0);

  auto base = [m](std::int64_t k) { return sequence_letter(m, k); };
  auto flip_row = [&](std::int64_t row) {
    return DecoratedTiling{[base, row](std::int64_t k) { return k == row ? 3 - base(k) : base(k); },
                           AffineMap::identity(), "flipped"};
  };
  auto five = agreement_radius(a, flip_row(5));
  CHECK(five.radius == doctest::Approx(std::log(32.0)));
  CHECK_FALSE(five.lower_bound);
  auto zero = agreement_radius(a, flip_row(0));
  CHECK(zero.radius == 0.0);
  CHECK(zero.distance() == 1.0);
  auto below = agreement_radius(a, flip_row(-4));
  CHECK(below.radius == doctest::Approx(3 * std::log(2.0)));

  // Translating by 1 keeps the tile edges of rows k <= 0; row 1 (width 2) moves.
  auto shifted = DecoratedTiling{base, S, "shifted"};
  auto sh = agreement_radius(a, shifted);
  CHECK(sh.radius == doctest::Approx(std::log(2.0)));

  // Shifting by R moves row k colours onto row k + 1.
  auto lifted = decorated(m, R);
  auto lf = agreement_radius(a, lifted);
  CHECK_FALSE(std::isinf(lf.radius));

  // Never-differing colourings under different names hit the scan cap.
  auto copy = DecoratedTiling{base, AffineMap::identity(), "copy"};
  auto capped = agreement_radius(a, copy, 64);
  CHECK(capped.lower_bound);
  CHECK(capped.radius == doctest::Approx(64 * std::log(2.0)));

  CHECK_THROWS_AS(agreement_radius(a, DecoratedTiling{base, AffineMap{3, 0}, "x"}), DomainError);
}

TEST_CASE("geodesic polylines stay within tolerance") {
  const double scale = 100.0, tol = 1e-3;
  auto pts = geodesic_polyline(0.0, 1.0, 1.0, 1.0, scale, tol);
  // circle centred at x = 1/2, radius sqrt(5)/2
  const double c = 0.5, radius = std::sqrt(5.0) / 2.0;
  REQUIRE(pts.size() >= 3);
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double mx = (pts[k][0] + pts[k + 1][0]) / 2, my = (pts[k][1] + pts[k + 1][1]) / 2;
    const double gap = (radius - std::hypot(mx - c, my)) * scale;
    CHECK(gap >= 0.0);
    CHECK(gap <= tol * (1 + 1e-9));
    CHECK(std::hypot(pts[k][0] - c, pts[k][1]) == doctest::Approx(radius));
  }
  auto vertical = geodesic_polyline(1.0, 1.0, 1.0, 2.0, scale, tol);
  CHECK(vertical.size() == 2);
}

TEST_CASE("svg output") {
  auto proto = render_prototile_svg();
  CHECK(proto.find("<svg") != std::string::npos);
  CHECK(proto.find("version=\"1.1\"") != std::string::npos);
  std::regex poly("<polygon ");
  CHECK(std::distance(std::sregex_iterator(proto.begin(), proto.end(), poly), std::sregex_iterator()) == 1);

  Model m = ToeplitzSpec{2, 12};
  RenderOptions empty;
  empty.row_min = 2;
  empty.row_max = 1;
  auto e = render_svg(m, empty);
  CHECK(e.find("<svg") != std::string::npos);
  CHECK(e.find("</svg>") != std::string::npos);
  CHECK(e.find("<polygon") == std::string::npos);

  // Three rows over x in [0, 4): 8 + 4 + 2 tiles; each tile sits above two.
  RenderOptions three;
  three.row_min = -1;
  three.row_max = 1;
  three.x_min = 0;
  three.x_max = 4;
  three.y_min = 0.5;
  three.y_max = 4;
  three.undecorated = true;
  three.overlay_levels = {1};
  auto doc = render_svg(m, three);
  auto count_row = [&](int row) {
    std::regex r("data-row=\"" + std::to_string(row) + "\"");
    return std::distance(std::sregex_iterator(doc.begin(), doc.end(), r), std::sregex_iterator());
  };
  CHECK(count_row(-1) == 8);
  CHECK(count_row(0) == 4);
  CHECK(count_row(1) == 2);
  CHECK(doc.find("data-level=\"1\"") != std::string::npos);
}
