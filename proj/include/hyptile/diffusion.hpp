// Brownian motion on a leaf of the tiling space, i.e. on the half-plane with
// generator (y^2 / 2)(d_xx + d_yy), and the time it spends on each colour.
//
// u = ln y is advanced by its exact Gaussian law, x by Euler-Maruyama with the
// step's midpoint height. Positions are kept tile-relative (row, column,
// fraction across the tile) so that far excursions lose no precision.
#ifndef HYPTILE_DIFFUSION_HPP
#define HYPTILE_DIFFUSION_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyptile/exact.hpp"
#include "hyptile/geometry.hpp"
#include "hyptile/symbolic.hpp"

namespace hyptile {

/// Philox4x32-10 (Salmon et al., SC'11): a keyed bijection on 128-bit counters.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Independent stream for one path: key = seed, counter = (step, path).
class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t path) : seed_(seed), path_(path) {}
  /// Two independent standard normals for `step` (Box-Muller on 53-bit uniforms).
  std::array<double, 2> normals(std::uint64_t step) const;
  /// Only the second of the two normals(step) values, computed more cheaply.
  double second_normal(std::uint64_t step) const;

 private:
  std::array<std::uint32_t, 4> block(std::uint64_t step) const;
  std::uint64_t seed_;
  std::uint64_t path_;
};

struct DiffusionConfig {
  Model model = SubstitutionRule::standard();
  double dt = 1e-3;
  double horizon = 2000.0;
  std::uint64_t paths = 50;
  std::uint64_t seed = 1;
  double x0 = 0.5;  ///< start point, the marked point of the base tile
  double y0 = 1.5;
  int block_level = 1;   ///< level whose block types are tracked as well
  unsigned threads = 0;  ///< 0: hardware concurrency

  /// ceil(horizon / dt), ignoring rounding noise in the ratio.
  std::uint64_t steps() const;
  /// DomainError unless dt > 0, horizon >= 0, paths >= 1, y0 > 0.
  void validate() const;
};

struct LeafState {
  double u = 0.0;  ///< ln y
  std::int64_t row = 0;
  BigInt col = 0;
  double x_frac = 0.0;  ///< in [0, 1)

  static LeafState at(double x, double y);
  TileAddress tile() const { return TileAddress{row, col}; }
  double x() const;
  double y() const;
};

/// One exact step of u = ln y.
inline double log_height_step(double u, double xi, double sqrt_dt, double dt) { return u + sqrt_dt * xi - 0.5 * dt; }

struct OccupancyStats {
  /// Steps spent on each letter; time = steps * dt.
  std::vector<std::uint64_t> steps_per_letter;
  /// Steps spent in each level-q block type.
  std::vector<std::uint64_t> steps_per_block;
  std::uint64_t row_crossings = 0;
  std::uint64_t total_steps = 0;
  double dt = 0.0;

  double time(Letter letter) const { return static_cast<double>(steps_per_letter[static_cast<std::size_t>(letter - 1)]) * dt; }
  double total_time() const { return static_cast<double>(total_steps) * dt; }
  std::vector<double> letter_fractions() const;
  std::vector<double> block_fractions() const;
};

struct PathSummary {
  std::uint64_t path = 0;
  OccupancyStats stats;
  LeafState start;
  LeafState end;
  bool terminated_early = false;
  std::optional<std::int64_t> cap_row;  ///< row whose letter or block type was undefined
};

PathSummary simulate_path(const DiffusionConfig& config, std::uint64_t path, const LeafState& start);

struct MeanBand {
  std::vector<double> mean;
  std::vector<double> stddev;  ///< across paths
  std::vector<double> band;    ///< 3 stddev / sqrt(paths)
};

struct DiffusionReport {
  DiffusionConfig config;
  std::vector<PathSummary> paths;
  MeanBand letters;
  MeanBand blocks;
  double log_height_mean = 0.0;  ///< of u_T - u_0 over completed paths
  double log_height_variance = 0.0;
  std::uint64_t early_terminations = 0;
};

/// All paths, split over threads; identical to the sequential run for a given seed.
DiffusionReport simulate(const DiffusionConfig& config);

struct LogHeightStats {
  double mean = 0.0;
  double variance = 0.0;
  std::vector<double> samples;  ///< u_T - u_0 per path
};

/// Runs only the u-coordinate of every path; same random stream as simulate_path.
LogHeightStats log_height_stats(const DiffusionConfig& config);

struct KsResult {
  double statistic = 0.0;
  double critical = 0.0;  ///< at the 1% level
  bool pass = false;
};

/// One-sample Kolmogorov-Smirnov test against Normal(mean, sd^2).
KsResult ks_test_normal(std::vector<double> samples, double mean, double sd);

struct GarnettReport {
  bool uniquely_ergodic = false;
  std::string flag;  ///< set when no single expectation exists
  int level = 0;
  std::vector<double> observed_letters;
  std::vector<double> observed_blocks;
  std::vector<double> band_letters;
  std::vector<double> band_blocks;
  /// Empty when the model is not uniquely ergodic.
  std::vector<double> expected_letters;
  std::vector<double> expected_blocks;
  std::vector<double> deviation_letters;
  std::vector<double> deviation_blocks;
  std::uint64_t early_terminations = 0;
};

/// Occupancy fractions against the frequencies of the unique invariant measure.
GarnettReport garnett_compare(const DiffusionConfig& config, int q);
GarnettReport garnett_compare(const DiffusionReport& run, int q);

}  // namespace hyptile

#endif  // HYPTILE_DIFFUSION_HPP
