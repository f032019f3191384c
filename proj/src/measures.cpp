#include "hyptile/measures.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "hyptile/errors.hpp"
#include "hyptile/geometry.hpp"

namespace hyptile {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest n for which the printed entries (denominators 2^(2*3^n - 2)) are built.
constexpr int kPrintedLevelLimit = 14;

bool is_standard_substitution(const Model& model) {
  const auto* rule = std::get_if<SubstitutionRule>(&model);
  return rule && rule->images == SubstitutionRule::standard().images;
}

ExactMatrix printed_matrix(int n) {
  if (n < 1) throw DomainError("the printed matrices start at n = 1");
  if (n > kPrintedLevelLimit) throw BudgetError("printed matrix entries exceed the size budget beyond n = 14");
  const auto e = static_cast<std::int64_t>(pow3(static_cast<std::uint64_t>(n)).convert_to<std::uint64_t>());
  const Rational small = pow2_rational(-e + 1);
  const Rational tiny = pow2_rational(-2 * e + 2);
  ExactMatrix m(2, 2);
  m(0, 0) = 1 + small;
  m(0, 1) = 1;
  m(1, 0) = tiny;
  m(1, 1) = small + tiny;
  return m;
}

ExactMatrix multiply(const ExactMatrix& a, const ExactMatrix& b) {
  ExactMatrix c(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      Rational s = 0;
      for (Eigen::Index k = 0; k < a.cols(); ++k)
        if (a(i, k) != 0 && b(k, j) != 0) s += a(i, k) * b(k, j);
      c(i, j) = std::move(s);
    }
  return c;
}

ExactMatrix identity(int r) {
  ExactMatrix m(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) m(i, j) = i == j ? 1 : 0;
  return m;
}

std::vector<ExactVector> normalized_columns(const ExactMatrix& m) {
  std::vector<ExactVector> out;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    auto v = normalized_column(m, j);
    if (!v) throw DegeneracyError("zero column " + std::to_string(j + 1) + " in a transition product");
    out.push_back(std::move(*v));
  }
  return out;
}

template <class Scalar>
void check_cone_point(const Vector<Scalar>& x) {
  bool nonzero = false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) < 0) throw DomainError("Hilbert distance needs nonnegative coordinates");
    if (x(i) != 0) nonzero = true;
  }
  if (!nonzero) throw DomainError("Hilbert distance is undefined at the zero vector");
}

// Union-find single-linkage clustering of the vertices within tolerance.
std::vector<int> cluster(const std::vector<ExactVector>& vertices, double tolerance) {
  const auto n = vertices.size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)];
    return a;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (hilbert_distance(vertices[i], vertices[j]) <= tolerance) {
        int a = find(static_cast<int>(i)), b = find(static_cast<int>(j));
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
  // Relabel roots as 0, 1, ... in order of first appearance.
  std::vector<int> label(n, -1), out(n);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto root = static_cast<std::size_t>(find(static_cast<int>(i)));
    if (label[root] < 0) label[root] = next++;
    out[i] = label[root];
  }
  return out;
}

int cluster_count(const std::vector<int>& labels) {
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

}  // namespace

std::string scheme_name(Scheme scheme) {
  return scheme == Scheme::TriangleDerived ? "triangle" : "paper";
}

std::optional<Scheme> parse_scheme(const std::string& name) {
  if (name == "triangle" || name == "TriangleDerived") return Scheme::TriangleDerived;
  if (name == "paper" || name == "PaperPrinted") return Scheme::PaperPrinted;
  return std::nullopt;
}

TransitionMatrix transition_matrix(const Model& model, int q, Scheme scheme) {
  if (q < 0) throw DomainError("level must be nonnegative");
  if (scheme == Scheme::PaperPrinted) {
    if (!is_standard_substitution(model))
      throw UnsupportedScheme("the printed matrices exist only for the substitution 1 -> 112, 2 -> 122");
    return TransitionMatrix{q, scheme, printed_matrix(q)};
  }
  const int r = alphabet_size(model);
  ExactMatrix m = ExactMatrix::Constant(r, r, Rational(0));
  // Each occurrence class holds 2^d placements of alpha 2^-d, so a run of
  // stacked child blocks contributes one unit per block.
  for (Letter j = 1; j <= r; ++j) {
    for (const auto& run : occurrence_runs(model, q, j)) {
      OccurrenceClass first{run.first_depth, run.child, run.first_depth};
      m(run.child - 1, j - 1) += Rational(run.blocks) * first.weight();
    }
  }
  return TransitionMatrix{q, scheme, std::move(m)};
}

ExactMatrix compose_range(const Model& model, Scheme scheme, int from, int to) {
  if (from > to) throw DomainError("compose_range needs from <= to");
  ExactMatrix out = identity(alphabet_size(model));
  for (int q = from; q < to; ++q) out = multiply(out, transition_matrix(model, q, scheme).entries);
  return out;
}

SimplexVertices nested_simplex(const Model& model, Scheme scheme, int level, int depth) {
  if (depth <= level) throw DomainError("nested simplex needs depth > level");
  return SimplexVertices{level, depth, normalized_columns(compose_range(model, scheme, level, depth))};
}

std::optional<ExactVector> barycentric(const std::vector<ExactVector>& vertices, const ExactVector& point) {
  const auto n = static_cast<Eigen::Index>(vertices.size());
  if (point.size() != n) throw DomainError("barycentric coordinates need as many vertices as coordinates");
  ExactMatrix m(n, n + 1);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (vertices[static_cast<std::size_t>(j)].size() != n) throw DomainError("vertex of the wrong dimension");
    m.col(j) = vertices[static_cast<std::size_t>(j)];
  }
  m.col(n) = point;
  // Gauss-Jordan with exact pivots
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return std::nullopt;
    if (p != c) m.row(c).swap(m.row(p));
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == c || m(i, c) == 0) continue;
      const Rational f = m(i, c) / m(c, c);
      for (Eigen::Index k = c; k <= n; ++k) m(i, k) -= f * m(c, k);
    }
  }
  ExactVector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = m(i, n) / m(i, i);
  return out;
}

double hilbert_distance(const Vector<double>& x, const Vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("Hilbert distance between vectors of different sizes");
  check_cone_point(x);
  check_cone_point(y);
  double hi = -kInf, lo = kInf;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if ((x(i) == 0) != (y(i) == 0)) return kInf;
    if (x(i) == 0) continue;
    const double l = std::log(x(i)) - std::log(y(i));
    hi = std::max(hi, l);
    lo = std::min(lo, l);
  }
  return hi - lo;
}

double hilbert_distance(const ExactVector& x, const ExactVector& y) {
  if (x.size() != y.size()) throw DomainError("Hilbert distance between vectors of different sizes");
  check_cone_point(x);
  check_cone_point(y);
  std::optional<Rational> hi, lo;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if ((x(i) == 0) != (y(i) == 0)) return kInf;
    if (x(i) == 0) continue;
    Rational ratio = x(i) / y(i);
    if (!hi || ratio > *hi) hi = ratio;
    if (!lo || ratio < *lo) lo = ratio;
  }
  return log_of(Rational(*hi / *lo));
}

double hilbert_distance_segment(const Vector<double>& x, const Vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("Hilbert distance between vectors of different sizes");
  check_cone_point(x);
  check_cone_point(y);
  const Vector<double> a = x / x.sum();
  const Vector<double> b = y / y.sum();
  // Along a + t (b - a) the coordinates stay nonnegative for t in [t_min, t_max].
  double t_min = -kInf, t_max = kInf;
  bool moved = false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if ((a(i) == 0) != (b(i) == 0)) return kInf;
    const double d = b(i) - a(i);
    if (d == 0.0 || a(i) == 0) continue;
    moved = true;
    const double t = -a(i) / d;
    if (d > 0) t_min = std::max(t_min, t);
    else t_max = std::min(t_max, t);
  }
  if (!moved) return 0.0;
  // With |ab| = 1 in parameter units: l = -t_min, m = 1, r = t_max - 1.
  const double l = -t_min, r = t_max - 1.0;
  return std::abs(std::log((1.0 + l) * (1.0 + r) / (l * r)));
}

ErgodicCountReport ergodic_measure_count(const Model& model, Scheme scheme, const ErgodicCountOptions& options) {
  if (!(options.tolerance > 0.0)) throw DomainError("tolerance must be positive");
  if (options.max_depth <= options.level) throw DomainError("max depth must exceed the level");
  ErgodicCountReport report;
  report.options = options;
  const int min_depth = std::max(options.min_depth, options.level + 1);

  ExactMatrix product = identity(alphabet_size(model));
  std::vector<ExactVector> previous;
  std::vector<int> previous_labels;
  for (int depth = options.level + 1; depth <= options.max_depth; ++depth) {
    try {
      product = multiply(product, transition_matrix(model, depth - 1, scheme).entries);
    } catch (const BudgetError&) {
      break;  // deeper printed matrices are out of reach; report what we have
    }
    auto vertices = normalized_columns(product);
    auto labels = cluster(vertices, options.tolerance);
    report.depth = depth;
    report.count = cluster_count(labels);
    report.cluster_of = labels;
    report.witnesses.clear();
    for (int c = 0; c < report.count; ++c)
      for (std::size_t v = 0; v < labels.size(); ++v)
        if (labels[v] == c) {
          report.witnesses.push_back(vertices[v]);
          break;
        }
    if (depth == min_depth) report.count_at_min_depth = report.count;

    if (depth > min_depth && !previous.empty() && cluster_count(previous_labels) == report.count) {
      double worst = 0.0;
      for (std::size_t v = 0; v < vertices.size(); ++v)
        worst = std::max(worst, hilbert_distance(previous[v], vertices[v]));
      if (worst <= options.tolerance) {
        report.status = ErgodicCountReport::Status::Stabilized;
        report.certified_depth = depth;
        report.match_distance = worst;
        return report;
      }
    }
    if (depth >= min_depth) {
      previous = std::move(vertices);
      previous_labels = std::move(labels);
    }
  }
  return report;
}

ContractionReport contraction_certificate(const Model& model, Scheme scheme, int from, int to) {
  if (from >= to) throw DomainError("contraction certificate needs a nonempty level range");
  ContractionReport report{scheme, from, to, {}, "", 0.0, 1.0};
  bool withheld = false;
  for (int q = from; q < to; ++q) {
    const auto m = transition_matrix(model, q, scheme).entries;
    ContractionLevel lvl;
    lvl.level = q;
    lvl.positive = true;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (m(i, j) == 0) lvl.positive = false;
    const auto cols = normalized_columns(m);
    double diameter = 0.0;
    for (std::size_t i = 0; i < cols.size(); ++i)
      for (std::size_t j = i + 1; j < cols.size(); ++j) diameter = std::max(diameter, hilbert_distance(cols[i], cols[j]));
    lvl.diameter = diameter;
    if (std::isinf(diameter)) {
      lvl.factor = 1.0;
      lvl.gap = 0.0;
      lvl.note = "zero entry: image diameter is infinite, no contraction bound at this level";
      withheld = true;
    } else {
      lvl.factor = std::tanh(diameter / 4.0);
      lvl.gap = 2.0 / (1.0 + std::exp(diameter / 2.0));
      if (diameter == 0.0) {
        lvl.degenerate = true;
        lvl.note = "degenerate image: all columns are proportional";
      }
    }
    report.max_factor = std::max(report.max_factor, lvl.factor);
    report.min_gap = std::min(report.min_gap, lvl.gap);
    report.levels.push_back(std::move(lvl));
  }
  if (withheld) {
    report.verdict = "withheld";
  } else {
    // Diameters that keep growing across the range point to factors tending to 1.
    bool growing = report.levels.size() > 1;
    for (std::size_t k = 1; k < report.levels.size(); ++k)
      if (!(report.levels[k].diameter > report.levels[k - 1].diameter)) growing = false;
    report.verdict = growing ? "contracting_nonuniform" : "uniformly_contracting";
  }
  return report;
}

std::vector<Rational> mass_conservation_check(const Model& model, Scheme scheme, int q) {
  const auto m = transition_matrix(model, q, scheme).entries;
  const Rational child = Rational(level_length(model, q));
  const Rational parent = Rational(level_length(model, q + 1));
  std::vector<Rational> residual;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Rational sum = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) sum += child * m(i, j);
    residual.push_back(parent - sum);
  }
  return residual;
}

FrequencyResult measure_frequencies(const Model& model, Scheme scheme, Letter measure, int q) {
  const int r = alphabet_size(model);
  if (measure < 1 || measure > r) throw DomainError("measure index outside the alphabet");
  if (q < 0) throw DomainError("level must be nonnegative");
  ExactMatrix counts;
  if (scheme == Scheme::TriangleDerived) {
    counts = compose_range(model, scheme, 0, q);
  } else {
    if (q < 1) throw DomainError("printed-matrix frequencies start at level 1");
    ExactMatrix letters(r, r);
    for (Letter k = 1; k <= r; ++k) {
      const auto c = letter_counts(model, 1, k);
      for (int i = 0; i < r; ++i) letters(i, k - 1) = Rational(c[static_cast<std::size_t>(i)]);
    }
    counts = multiply(letters, compose_range(model, scheme, 1, q));
  }
  FrequencyResult out;
  out.level = q;
  out.measure = measure;
  out.scheme = scheme;
  out.counts = counts.col(measure - 1);
  auto freq = normalized_column(counts, measure - 1);
  if (!freq) throw DegeneracyError("zero letter counts");
  out.frequencies = std::move(*freq);
  return out;
}

std::string frequencies_csv(const std::vector<FrequencyResult>& rows) {
  std::ostringstream out;
  out << "level,measure,letter,num,den,value\n";
  out << std::setprecision(17);
  for (const auto& row : rows)
    for (Eigen::Index i = 0; i < row.frequencies.size(); ++i) {
      const Rational& f = row.frequencies(i);
      out << row.level << ',' << row.measure << ',' << (i + 1) << ',' << to_string(numerator(f)) << ','
          << to_string(denominator(f)) << ',' << to_double(f) << '\n';
    }
  return out.str();
}

}  // namespace hyptile
