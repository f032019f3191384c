#include "hyptile/diffusion.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numbers>
#include <thread>
#include <unordered_map>

#include "hyptile/errors.hpp"
#include "hyptile/measures.hpp"

namespace hyptile {

// -- random numbers ---------------------------------------------------------

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  constexpr std::uint64_t m0 = 0xD2511F53, m1 = 0xCD9E8D57;
  constexpr std::uint32_t w0 = 0x9E3779B9, w1 = 0xBB67AE85;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += w0;
      k[1] += w1;
    }
    const std::uint64_t p0 = m0 * c[0];
    const std::uint64_t p1 = m1 * c[2];
    c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
  }
  return c;
}

namespace {

// 53-bit uniform in the open interval (0, 1).
double open_uniform(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 21) ^ (lo >> 11);
  return (static_cast<double>(bits) + 0.5) * 0x1p-53;
}

}  // namespace

std::array<std::uint32_t, 4> PathRng::block(std::uint64_t step) const {
  return philox4x32_10({static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32),
                        static_cast<std::uint32_t>(path_), static_cast<std::uint32_t>(path_ >> 32)},
                       {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
}

std::array<double, 2> PathRng::normals(std::uint64_t step) const {
  const auto b = block(step);
  const double radius = std::sqrt(-2.0 * std::log(open_uniform(b[0], b[1])));
  const double angle = 2.0 * std::numbers::pi * open_uniform(b[2], b[3]);
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

double PathRng::second_normal(std::uint64_t step) const {
  const auto b = block(step);
  const double radius = std::sqrt(-2.0 * std::log(open_uniform(b[0], b[1])));
  return radius * std::sin(2.0 * std::numbers::pi * open_uniform(b[2], b[3]));
}

// -- configuration and state ------------------------------------------------

std::uint64_t DiffusionConfig::steps() const {
  const double ratio = horizon / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::uint64_t>(nearest);
  return static_cast<std::uint64_t>(std::ceil(ratio));
}

void DiffusionConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be nonnegative");
  if (paths < 1) throw DomainError("at least one path is needed");
  if (!(y0 > 0.0) || !std::isfinite(x0)) throw DomainError("start point must lie in the upper half-plane");
  if (block_level < 0) throw DomainError("block level must be nonnegative");
  if (level_length(model, block_level) > (BigInt(1) << 62)) throw BudgetError("block level too deep to track");
}

LeafState LeafState::at(double x, double y) {
  const TileAddress t = tile_containing_point(x, y);
  LeafState s;
  s.u = std::log(y);
  s.row = t.row;
  s.col = t.col;
  s.x_frac = std::ldexp(x, static_cast<int>(-t.row)) - t.col.convert_to<double>();
  s.x_frac = std::clamp(s.x_frac, 0.0, std::nextafter(1.0, 0.0));
  // keep row tied to u rather than to the binary exponent of y
  const auto row_of_u = static_cast<std::int64_t>(std::floor(s.u / std::numbers::ln2));
  while (s.row > row_of_u) {
    s.x_frac *= 2.0;
    const double carry = std::floor(s.x_frac);
    s.col = 2 * s.col + static_cast<long>(carry);
    s.x_frac -= carry;
    --s.row;
  }
  while (s.row < row_of_u) {
    const long parity = static_cast<long>(floor_mod(s.col, BigInt(2)).convert_to<long>());
    s.x_frac = (s.x_frac + static_cast<double>(parity)) / 2.0;
    s.col = floor_div(s.col, BigInt(2));
    ++s.row;
  }
  return s;
}

double LeafState::x() const { return std::ldexp(col.convert_to<double>() + x_frac, static_cast<int>(row)); }
double LeafState::y() const { return std::exp(u); }

std::vector<double> OccupancyStats::letter_fractions() const {
  std::vector<double> out;
  for (auto s : steps_per_letter)
    out.push_back(total_steps ? static_cast<double>(s) / static_cast<double>(total_steps) : 0.0);
  return out;
}

std::vector<double> OccupancyStats::block_fractions() const {
  std::vector<double> out;
  for (auto s : steps_per_block)
    out.push_back(total_steps ? static_cast<double>(s) / static_cast<double>(total_steps) : 0.0);
  return out;
}

// -- paths ------------------------------------------------------------------

namespace {

// Letter and level-q block type of every row a path visits.
class RowColors {
 public:
  RowColors(const Model& model, int level)
      : model_(model), level_(level), block_len_(level_length(model, level).convert_to<std::int64_t>()) {}

  std::pair<Letter, Letter> operator()(std::int64_t row) {
    auto it = cache_.find(row);
    if (it != cache_.end()) return it->second;
    const Letter letter = sequence_letter(model_, row);
    const Letter block = block_letter(model_, level_, floor_div(row, block_len_));
    return cache_.emplace(row, std::pair{letter, block}).first->second;
  }

 private:
  const Model& model_;
  int level_;
  std::int64_t block_len_;
  std::unordered_map<std::int64_t, std::pair<Letter, Letter>> cache_;
};

template <class Fn>
void for_each_path(std::uint64_t paths, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, paths));
  if (threads <= 1) {
    for (std::uint64_t p = 0; p < paths; ++p) fn(p);
    return;
  }
  // Paths are striped over workers; each writes only its own slots.
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::uint64_t p = t; p < paths; p += threads) fn(p);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

MeanBand mean_band(const std::vector<std::vector<double>>& rows, std::size_t width) {
  MeanBand out{std::vector<double>(width, 0.0), std::vector<double>(width, 0.0), std::vector<double>(width, 0.0)};
  if (rows.empty()) return out;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows)
    for (std::size_t i = 0; i < width; ++i) out.mean[i] += r[i] / n;
  if (rows.size() > 1) {
    for (const auto& r : rows)
      for (std::size_t i = 0; i < width; ++i) out.stddev[i] += (r[i] - out.mean[i]) * (r[i] - out.mean[i]);
    for (std::size_t i = 0; i < width; ++i) out.stddev[i] = std::sqrt(out.stddev[i] / (n - 1.0));
  }
  for (std::size_t i = 0; i < width; ++i) out.band[i] = 3.0 * out.stddev[i] / std::sqrt(n);
  return out;
}

}  // namespace

PathSummary simulate_path(const DiffusionConfig& config, std::uint64_t path, const LeafState& start) {
  config.validate();
  const int r = alphabet_size(config.model);
  PathSummary out;
  out.path = path;
  out.start = start;
  out.stats.dt = config.dt;
  out.stats.steps_per_letter.assign(static_cast<std::size_t>(r), 0);
  out.stats.steps_per_block.assign(static_cast<std::size_t>(r), 0);

  const PathRng rng(config.seed, path);
  const double dt = config.dt, sqrt_dt = std::sqrt(dt);
  const std::uint64_t steps = config.steps();
  RowColors colors(config.model, config.block_level);
  LeafState s = start;

  for (std::uint64_t k = 0; k < steps; ++k) {
    std::pair<Letter, Letter> here;
    try {
      here = colors(s.row);
    } catch (const CapError&) {
      out.terminated_early = true;
      out.cap_row = s.row;
      break;
    }
    ++out.stats.steps_per_letter[static_cast<std::size_t>(here.first - 1)];
    ++out.stats.steps_per_block[static_cast<std::size_t>(here.second - 1)];
    ++out.stats.total_steps;

    const auto xi = rng.normals(k);
    const double u_next = log_height_step(s.u, xi[1], sqrt_dt, dt);
    const double y_mid = std::exp(0.5 * (s.u + u_next));
    s.x_frac += std::ldexp(y_mid * sqrt_dt * xi[0], static_cast<int>(-s.row));
    if (s.x_frac < 0.0 || s.x_frac >= 1.0) {
      const double carry = std::floor(s.x_frac);
      s.col += static_cast<long>(carry);
      s.x_frac -= carry;
      if (s.x_frac >= 1.0) s.x_frac = std::nextafter(1.0, 0.0);
    }
    s.u = u_next;
    const auto row = static_cast<std::int64_t>(std::floor(s.u / std::numbers::ln2));
    while (s.row > row) {  // down: the tile splits in two
      s.x_frac *= 2.0;
      const double carry = std::floor(s.x_frac);
      s.col = 2 * s.col + static_cast<long>(carry);
      s.x_frac -= carry;
      --s.row;
      ++out.stats.row_crossings;
    }
    while (s.row < row) {  // up: two tiles merge
      const long parity = floor_mod(s.col, BigInt(2)).convert_to<long>();
      s.x_frac = (s.x_frac + static_cast<double>(parity)) / 2.0;
      s.col = floor_div(s.col, BigInt(2));
      ++s.row;
      ++out.stats.row_crossings;
    }
  }
  out.end = s;
  return out;
}

DiffusionReport simulate(const DiffusionConfig& config) {
  config.validate();
  DiffusionReport report;
  report.config = config;
  report.paths.resize(config.paths);
  const LeafState start = LeafState::at(config.x0, config.y0);
  for_each_path(config.paths, config.threads,
                [&](std::uint64_t p) { report.paths[p] = simulate_path(config, p, start); });

  const auto r = static_cast<std::size_t>(alphabet_size(config.model));
  std::vector<std::vector<double>> letters, blocks;
  std::vector<double> du;
  for (const auto& p : report.paths) {
    if (p.terminated_early) {
      ++report.early_terminations;
      continue;
    }
    letters.push_back(p.stats.letter_fractions());
    blocks.push_back(p.stats.block_fractions());
    du.push_back(p.end.u - p.start.u);
  }
  report.letters = mean_band(letters, r);
  report.blocks = mean_band(blocks, r);
  if (!du.empty()) {
    const double n = static_cast<double>(du.size());
    for (double v : du) report.log_height_mean += v / n;
    if (du.size() > 1) {
      for (double v : du) report.log_height_variance += (v - report.log_height_mean) * (v - report.log_height_mean);
      report.log_height_variance /= n - 1.0;
    }
  }
  return report;
}

LogHeightStats log_height_stats(const DiffusionConfig& config) {
  config.validate();
  LogHeightStats out;
  out.samples.assign(config.paths, 0.0);
  const std::uint64_t steps = config.steps();
  const double dt = config.dt, sqrt_dt = std::sqrt(dt);
  for_each_path(config.paths, config.threads, [&](std::uint64_t p) {
    const PathRng rng(config.seed, p);
    double u = 0.0;
    for (std::uint64_t k = 0; k < steps; ++k) u = log_height_step(u, rng.second_normal(k), sqrt_dt, dt);
    out.samples[p] = u;
  });
  const double n = static_cast<double>(out.samples.size());
  for (double v : out.samples) out.mean += v / n;
  if (out.samples.size() > 1) {
    for (double v : out.samples) out.variance += (v - out.mean) * (v - out.mean);
    out.variance /= n - 1.0;
  }
  return out;
}

KsResult ks_test_normal(std::vector<double> samples, double mean, double sd) {
  if (samples.empty()) throw DomainError("KS test needs samples");
  if (!(sd > 0.0)) throw DomainError("KS test needs a positive standard deviation");
  std::sort(samples.begin(), samples.end());
  const boost::math::normal_distribution<double> law(mean, sd);
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = boost::math::cdf(law, samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  // Stephens' finite-sample form of the asymptotic 1% point 1.628.
  const double root = std::sqrt(n);
  const double critical = 1.628 / (root + 0.12 + 0.11 / root);
  return KsResult{d, critical, d < critical};
}

GarnettReport garnett_compare(const DiffusionConfig& config, int q) {
  DiffusionConfig c = config;
  c.block_level = q;
  return garnett_compare(simulate(c), q);
}

GarnettReport garnett_compare(const DiffusionReport& run, int q) {
  if (q != run.config.block_level) throw DomainError("run tracked a different block level");
  const Model& model = run.config.model;
  GarnettReport out;
  out.level = q;
  out.observed_letters = run.letters.mean;
  out.observed_blocks = run.blocks.mean;
  out.band_letters = run.letters.band;
  out.band_blocks = run.blocks.band;
  out.early_terminations = run.early_terminations;

  const auto count = ergodic_measure_count(model, Scheme::TriangleDerived);
  out.uniquely_ergodic = count.status == ErgodicCountReport::Status::Stabilized && count.count == 1;
  if (!out.uniquely_ergodic) {
    out.flag = "non-uniquely-ergodic: no single expectation";
    return out;
  }
  // Frequencies of the unique measure: any deep column, normalized.
  const int deep = std::max(q, count.depth) + 8;
  auto limit = [&](int from) {
    const auto column = normalized_column(compose_range(model, Scheme::TriangleDerived, from, deep), 0);
    std::vector<double> v;
    for (Eigen::Index i = 0; i < column->size(); ++i) v.push_back(to_double((*column)(i)));
    return v;
  };
  out.expected_letters = limit(0);
  out.expected_blocks = limit(q);
  for (std::size_t i = 0; i < out.expected_letters.size(); ++i) {
    out.deviation_letters.push_back(std::abs(out.observed_letters[i] - out.expected_letters[i]));
    out.deviation_blocks.push_back(std::abs(out.observed_blocks[i] - out.expected_blocks[i]));
  }
  return out;
}

}  // namespace hyptile
