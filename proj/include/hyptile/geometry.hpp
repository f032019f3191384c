// The decorated half-plane tiling {R^q S^n (P_{w_q})}.
//
// Row q of the tiling is the band 2^q <= y < 2^(q+1); its tiles have width
// 2^q and carry the colour w_q. A level-q patch is a Triangle: an apex tile
// plus the 2^j tiles j rows below it that lie under the apex's x-extent.
#ifndef HYPTILE_GEOMETRY_HPP
#define HYPTILE_GEOMETRY_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hyptile/exact.hpp"
#include "hyptile/symbolic.hpp"

namespace hyptile {

/// z -> a z + b with a > 0.
struct AffineMap {
  Rational a = 1;
  Rational b = 0;

  static AffineMap identity() { return {}; }
  /// z -> 2z
  static AffineMap dilation() { return {Rational(2), Rational(0)}; }
  /// z -> z + 1
  static AffineMap translation() { return {Rational(1), Rational(1)}; }

  AffineMap inverse() const;
  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

/// f o g.
AffineMap affine_compose(const AffineMap& f, const AffineMap& g);
inline AffineMap operator*(const AffineMap& f, const AffineMap& g) { return affine_compose(f, g); }
AffineMap affine_power(const AffineMap& f, std::int64_t n);

/// The modular weight alpha(z -> az + b) = a.
inline const Rational& alpha(const AffineMap& g) { return g.a; }

struct ExactPoint {
  Rational x;
  Rational y;
  friend bool operator==(const ExactPoint&, const ExactPoint&) = default;
};

ExactPoint apply(const AffineMap& g, const ExactPoint& p);

/// Tile R^row S^col (P).
struct TileAddress {
  std::int64_t row = 0;
  BigInt col = 0;
  friend bool operator==(const TileAddress&, const TileAddress&) = default;
  friend bool operator<(const TileAddress& l, const TileAddress& r) {
    return l.row != r.row ? l.row < r.row : l.col < r.col;
  }
};

/// The map z -> 2^row (z + col) carrying the prototile onto the tile.
AffineMap tile_map(const TileAddress& t);

/// Vertices A_1..A_5 of the tile: i, 1/2 + i, 1 + i, 1 + 2i, 2i mapped by tile_map.
std::array<ExactPoint, 5> tile_region(const TileAddress& t);

/// Tile whose half-open box [n 2^k, (n+1) 2^k) x [2^k, 2^(k+1)) contains (x, y).
TileAddress tile_containing_point(double x, double y);

enum class PatchShape { Triangle };

struct Patch {
  /// Colours listed apex-first, i.e. from the top row downwards.
  Word word;
  PatchShape shape = PatchShape::Triangle;
  TileAddress apex;
};

struct PatchTile {
  TileAddress tile;
  Letter color;
};

/// Explicit tiles of a Triangle patch: 2^j tiles at depth j. BudgetError above `budget` tiles.
std::vector<PatchTile> patch_tiles(const Patch& patch, std::uint64_t budget = 1u << 20);

/// The patch covering the level-q block [k L_q, (k+1) L_q) of rows, with apex
/// at column `apex_col` of the block's top row. Its word is the block read
/// from the top row down, i.e. the atlas word reversed.
Patch block_patch(const Model& model, int q, std::int64_t k, const BigInt& apex_col);

/// A single placement of a level-q patch inside a level-(q+1) patch.
struct Occurrence {
  int parent_level = 1;  ///< q + 1
  Letter parent = 1;
  Letter child = 1;
  BigInt depth;       ///< rows below the parent apex
  BigInt horizontal;  ///< 0 <= h < 2^depth

  /// Placement map z -> 2^-depth (z + horizontal) in the parent apex frame.
  AffineMap placement() const;
};

/// All placements at one depth: 2^d copies of the same child patch.
struct OccurrenceClass {
  BigInt depth;
  Letter child = 1;
  /// log2 of the number of placements (apex positions at this depth).
  BigInt count_log2;

  BigInt count() const { return pow2(count_log2.convert_to<std::uint64_t>()); }
  /// alpha of every placement map in the class, 2^-depth.
  Rational alpha() const;
  /// count() * alpha(), computed on the exponents so 2^depth is never formed.
  Rational weight() const;
};

/// Run of consecutive classes: `blocks` child patches stacked every `stride` rows.
struct OccurrenceRun {
  BigInt first_depth;
  BigInt stride;
  BigInt blocks;
  Letter child = 1;
};

struct OccurrenceTable {
  int q = 0;  ///< child level
  Letter parent = 1;
  std::vector<OccurrenceClass> classes;
  /// Filled only when the total number of placements is at most 2^20.
  std::optional<std::vector<Occurrence>> explicit_items;
};

/// Run-length form; always available, whatever the level.
std::vector<OccurrenceRun> occurrence_runs(const Model& model, int q, Letter parent);

/// Classes ordered by depth from the parent apex. BudgetError when the parent
/// has more than `class_budget` child blocks.
OccurrenceTable enumerate_occurrences(const Model& model, int q, Letter parent,
                                      std::uint64_t class_budget = 1u << 20);

/// Tiles in a parent patch versus the tiles contributed by its occurrence classes.
struct TileReconciliation {
  BigInt parent_tiles;
  BigInt child_tiles;
};
TileReconciliation reconcile_occurrence_tiles(const Model& model, int q, Letter parent);

/// Outcome of covering the slab of rows [bottom, bottom + height) under top-row
/// columns [col_begin, col_end) by Triangle patches with apexes in the top row.
struct SlabPartitionReport {
  std::uint64_t tiles = 0;
  std::uint64_t uncovered = 0;
  std::uint64_t multiply_covered = 0;
};
SlabPartitionReport check_slab_partition(std::int64_t bottom, int height, std::int64_t col_begin,
                                         std::int64_t col_end);

struct SuspensionPoint {
  double fractional;   ///< frac(log2 a)
  std::int64_t shift;  ///< floor(log2 a)
  Letter origin_letter;  ///< w_shift, the letter at the origin of the shifted sequence
};

SuspensionPoint suspension_project(const AffineMap& g, const Model& model);

/// A decorated tiling g^-1(T(w)) given by its row colouring w and an anchor
/// g with a = 2^n and dyadic b.
struct DecoratedTiling {
  std::function<Letter(std::int64_t)> color;
  AffineMap anchor;
  /// Names the colouring; equal non-empty sources denote equal colourings.
  std::string source;
};

DecoratedTiling decorated(const Model& model, AffineMap anchor = AffineMap::identity());

struct AgreementRadius {
  double radius;  ///< +inf when the inputs are the same tiling
  /// True when no disagreement was found within the scanned rows.
  bool lower_bound = false;
  double distance() const;  ///< min(1, 1/radius)
};

/// Largest hyperbolic radius around O = (0, 1) on which both tilings carry the
/// same tiles with the same colours. Only g = Id is tried in the hull metric.
AgreementRadius agreement_radius(const DecoratedTiling& first, const DecoratedTiling& second,
                                 int scan_rows = 4096);

/// Hyperbolic distance from (0, 1) to the band of row k.
double distance_to_row(std::int64_t row);

struct RenderOptions {
  std::int64_t row_min = -1;
  std::int64_t row_max = 1;
  double x_min = 0.0;
  double x_max = 4.0;
  double y_min = 0.25;
  double y_max = 4.0;
  double scale = 100.0;  ///< screen units per half-plane unit
  double tolerance = 1e-3;
  std::vector<int> overlay_levels;
  bool undecorated = false;
};

/// SVG 1.1 document of the tiles of `model` in the given window.
std::string render_svg(const Model& model, const RenderOptions& options);
/// SVG of the single prototile.
std::string render_prototile_svg(double scale = 100.0, double tolerance = 1e-3);
void write_svg(const std::string& path, const std::string& document);

/// Screen polyline approximating the geodesic from p to q within `tolerance`.
std::vector<std::array<double, 2>> geodesic_polyline(double px, double py, double qx, double qy, double scale,
                                                     double tolerance);

}  // namespace hyptile

#endif  // HYPTILE_GEOMETRY_HPP
