#include "hyptile/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hyptile/errors.hpp"

namespace hyptile {

namespace mp = boost::multiprecision;

// -- affine maps ------------------------------------------------------------

AffineMap AffineMap::inverse() const {
  if (a <= 0) throw DomainError("affine map must have a > 0");
  return AffineMap{Rational(1) / a, -b / a};
}

AffineMap affine_compose(const AffineMap& f, const AffineMap& g) {
  // f(g(z)) = a_f (a_g z + b_g) + b_f
  return AffineMap{f.a * g.a, f.a * g.b + f.b};
}

AffineMap affine_power(const AffineMap& f, std::int64_t n) {
  AffineMap base = n >= 0 ? f : f.inverse();
  AffineMap out = AffineMap::identity();
  for (std::int64_t k = 0; k < (n >= 0 ? n : -n); ++k) out = affine_compose(base, out);
  return out;
}

ExactPoint apply(const AffineMap& g, const ExactPoint& p) { return ExactPoint{g.a * p.x + g.b, g.a * p.y}; }

// -- tiles ------------------------------------------------------------------

AffineMap tile_map(const TileAddress& t) {
  const Rational scale = pow2_rational(t.row);
  return AffineMap{scale, scale * Rational(t.col)};
}

std::array<ExactPoint, 5> tile_region(const TileAddress& t) {
  static const std::array<ExactPoint, 5> prototile{
      ExactPoint{Rational(0), Rational(1)}, ExactPoint{Rational(1, 2), Rational(1)},
      ExactPoint{Rational(1), Rational(1)}, ExactPoint{Rational(1), Rational(2)},
      ExactPoint{Rational(0), Rational(2)}};
  const AffineMap g = tile_map(t);
  std::array<ExactPoint, 5> out;
  for (std::size_t k = 0; k < 5; ++k) out[k] = apply(g, prototile[k]);
  return out;
}

TileAddress tile_containing_point(double x, double y) {
  if (!(y > 0.0) || !std::isfinite(y) || !std::isfinite(x))
    throw DomainError("point must lie in the open upper half-plane");
  int e = 0;
  std::frexp(y, &e);  // y = m 2^e, m in [0.5, 1)
  const std::int64_t row = e - 1;
  const double scaled = std::ldexp(x, static_cast<int>(-row));
  return TileAddress{row, floor_to_bigint(scaled)};
}

// -- patches ----------------------------------------------------------------

std::vector<PatchTile> patch_tiles(const Patch& patch, std::uint64_t budget) {
  const auto depth = patch.word.size();
  if (depth >= 63 || ((std::uint64_t{1} << depth) - 1) > budget)
    throw BudgetError("patch has more than " + std::to_string(budget) + " tiles");
  std::vector<PatchTile> tiles;
  tiles.reserve((std::size_t{1} << depth) - 1);
  for (std::size_t j = 0; j < depth; ++j) {
    const BigInt first = patch.apex.col << j;
    const std::uint64_t width = std::uint64_t{1} << j;
    for (std::uint64_t h = 0; h < width; ++h)
      tiles.push_back(PatchTile{TileAddress{patch.apex.row - static_cast<std::int64_t>(j), first + h}, patch.word[j]});
  }
  return tiles;
}

Patch block_patch(const Model& model, int q, std::int64_t k, const BigInt& apex_col) {
  const BigInt len = level_length(model, q);
  if (len > kMaterializeLimit) throw BudgetError("level-q patch word too long to materialize");
  const auto l = len.convert_to<std::int64_t>();
  const std::int64_t top = (k + 1) * l - 1;
  Patch patch;
  patch.apex = TileAddress{top, apex_col};
  patch.word.reserve(static_cast<std::size_t>(l));
  for (std::int64_t j = 0; j < l; ++j) patch.word.push_back(sequence_letter(model, top - j));
  return patch;
}

// -- occurrences ------------------------------------------------------------

AffineMap Occurrence::placement() const {
  const Rational scale = pow2_rational(-depth.convert_to<std::int64_t>());
  return AffineMap{scale, scale * Rational(horizontal)};
}

Rational OccurrenceClass::alpha() const { return pow2_rational(-depth.convert_to<std::int64_t>()); }

Rational OccurrenceClass::weight() const {
  const BigInt e = count_log2 - depth;
  return pow2_rational(e.convert_to<std::int64_t>());
}

std::vector<OccurrenceRun> occurrence_runs(const Model& model, int q, Letter parent) {
  const BigInt stride = level_length(model, q);
  const auto blocks = parent_blocks(model, q, parent);
  BigInt total = 0;
  for (const auto& run : blocks) total += run.count;
  // Block b of the parent word spans rows whose top lies (total - 1 - b) blocks
  // below the parent apex, so apex-first order reverses the word.
  std::vector<OccurrenceRun> runs;
  for (const auto& run : blocks) {
    const BigInt last_block = run.first + run.count - 1;
    runs.push_back(OccurrenceRun{(total - 1 - last_block) * stride, stride, run.count, run.child});
  }
  std::sort(runs.begin(), runs.end(),
            [](const OccurrenceRun& a, const OccurrenceRun& b) { return a.first_depth < b.first_depth; });
  return runs;
}

OccurrenceTable enumerate_occurrences(const Model& model, int q, Letter parent, std::uint64_t class_budget) {
  const auto runs = occurrence_runs(model, q, parent);
  BigInt total_blocks = 0;
  for (const auto& run : runs) total_blocks += run.blocks;
  if (total_blocks > class_budget)
    throw BudgetError("parent word has " + total_blocks.str() + " child blocks, above the class budget");

  OccurrenceTable table;
  table.q = q;
  table.parent = parent;
  for (const auto& run : runs) {
    const auto n = run.blocks.convert_to<std::uint64_t>();
    for (std::uint64_t k = 0; k < n; ++k) {
      const BigInt d = run.first_depth + run.stride * k;
      // A Triangle has 2^d tiles d rows below its apex, each one an apex position.
      table.classes.push_back(OccurrenceClass{d, run.child, d});
    }
  }

  BigInt placements = 0;
  for (const auto& c : table.classes) {
    if (c.count_log2 > 20) {
      placements = BigInt(1) << 21;
      break;
    }
    placements += c.count();
  }
  if (placements <= (BigInt(1) << 20)) {
    std::vector<Occurrence> items;
    for (const auto& c : table.classes) {
      const auto n = c.count().convert_to<std::uint64_t>();
      for (std::uint64_t h = 0; h < n; ++h) items.push_back(Occurrence{q + 1, parent, c.child, c.depth, BigInt(h)});
    }
    table.explicit_items = std::move(items);
  }
  return table;
}

TileReconciliation reconcile_occurrence_tiles(const Model& model, int q, Letter parent) {
  const BigInt parent_len = level_length(model, q + 1);
  const BigInt child_len = level_length(model, q);
  if (parent_len > 100000) throw BudgetError("tile reconciliation limited to parent words of 1e5 letters");
  const auto table = enumerate_occurrences(model, q, parent);
  TileReconciliation out;
  out.parent_tiles = pow2(parent_len.convert_to<std::uint64_t>()) - 1;
  const BigInt child_tiles = pow2(child_len.convert_to<std::uint64_t>()) - 1;
  out.child_tiles = 0;
  for (const auto& c : table.classes) out.child_tiles += c.count() * child_tiles;
  return out;
}

SlabPartitionReport check_slab_partition(std::int64_t bottom, int height, std::int64_t col_begin,
                                         std::int64_t col_end) {
  if (height < 1 || height > 24) throw DomainError("slab height must be in [1, 24]");
  if (col_end <= col_begin) throw DomainError("empty column range");
  const std::int64_t top = bottom + height - 1;
  const auto width = static_cast<std::uint64_t>(col_end - col_begin);

  // coverage[j][h]: tile at row top - j, column col_begin 2^j + h
  std::vector<std::vector<std::uint8_t>> coverage(static_cast<std::size_t>(height));
  for (int j = 0; j < height; ++j) coverage[static_cast<std::size_t>(j)].assign(width << j, 0);

  SlabPartitionReport report;
  for (std::int64_t c = col_begin; c < col_end; ++c) {
    Patch patch{Word(static_cast<std::size_t>(height), 1), PatchShape::Triangle, TileAddress{top, BigInt(c)}};
    for (const auto& t : patch_tiles(patch, std::uint64_t{1} << 26)) {
      const std::int64_t j = top - t.tile.row;
      if (j < 0 || j >= height) {
        ++report.multiply_covered;  // outside the slab: never expected
        continue;
      }
      const BigInt offset = t.tile.col - (BigInt(col_begin) << static_cast<unsigned>(j));
      if (offset < 0 || offset >= BigInt(width << j)) {
        ++report.multiply_covered;
        continue;
      }
      auto& cell = coverage[static_cast<std::size_t>(j)][offset.convert_to<std::size_t>()];
      if (cell < 255) ++cell;
    }
  }
  for (const auto& row : coverage) {
    for (auto cell : row) {
      ++report.tiles;
      if (cell == 0) ++report.uncovered;
      if (cell > 1) ++report.multiply_covered;
    }
  }
  return report;
}

// -- suspension and hull metric ---------------------------------------------

SuspensionPoint suspension_project(const AffineMap& g, const Model& model) {
  if (g.a <= 0) throw DomainError("affine map must have a > 0");
  std::int64_t shift = 0;
  double frac = 0.0;
  if (auto d = dyadic_form(g.a); d && d->mantissa == 1) {
    shift = d->exp2;
  } else {
    const double l = log_of(g.a) / std::numbers::ln2;
    shift = static_cast<std::int64_t>(std::floor(l));
    frac = l - static_cast<double>(shift);
    if (frac >= 1.0) {
      frac -= 1.0;
      ++shift;
    }
  }
  return SuspensionPoint{frac, shift, sequence_letter(model, shift)};
}

DecoratedTiling decorated(const Model& model, AffineMap anchor) {
  std::ostringstream source;
  source << model_name(model);
  if (const auto* rule = std::get_if<SubstitutionRule>(&model))
    for (const auto& img : rule->images) source << ':' << format_word(img, rule->alphabet_size());
  return DecoratedTiling{[model](std::int64_t row) { return sequence_letter(model, row); }, std::move(anchor),
                         source.str()};
}

double distance_to_row(std::int64_t row) {
  // Row k is the band [2^k, 2^(k+1)); the geodesic x = 0 realizes the distance.
  if (row >= 0) return static_cast<double>(row) * std::numbers::ln2;
  return static_cast<double>(-row - 1) * std::numbers::ln2;
}

double AgreementRadius::distance() const {
  if (std::isinf(radius)) return 0.0;
  if (radius <= 1.0) return 1.0;
  return 1.0 / radius;
}

AgreementRadius agreement_radius(const DecoratedTiling& first, const DecoratedTiling& second, int scan_rows) {
  auto power_of_two = [](const AffineMap& g) {
    auto d = dyadic_form(g.a);
    if (!d || d->mantissa != 1) throw DomainError("anchor dilation must be a power of two");
    if (!is_dyadic(g.b)) throw DomainError("anchor translation must be dyadic");
    return d->exp2;
  };
  const std::int64_t n1 = power_of_two(first.anchor);
  const std::int64_t n2 = power_of_two(second.anchor);
  if (!first.source.empty() && first.source == second.source && first.anchor == second.anchor)
    return AgreementRadius{std::numeric_limits<double>::infinity(), false};

  // Left tile edges of row k sit at -b / 2^n modulo 2^k.
  const Rational offset = first.anchor.b / pow2_rational(n1) - second.anchor.b / pow2_rational(n2);
  auto row_differs = [&](std::int64_t k) {
    if (offset != 0) {
      const Rational ratio = offset / pow2_rational(k);
      if (mp::denominator(ratio) != 1) return true;
    }
    return first.color(k + n1) != second.color(k + n2);
  };

  // Rows in order of distance from O: 0, -1, 1, -2, 2, ...
  for (int step = 0; step < 2 * scan_rows; ++step) {
    const std::int64_t k = (step % 2 == 0) ? step / 2 : -(step + 1) / 2;
    if (row_differs(k)) return AgreementRadius{distance_to_row(k), false};
  }
  return AgreementRadius{distance_to_row(scan_rows), true};
}

}  // namespace hyptile
