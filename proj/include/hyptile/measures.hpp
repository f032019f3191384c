// Transition matrices between patch levels and the invariant measures they
// determine: the cone of measures is the projective limit of the positive
// cones under A_n, read off here at finite depth.
#ifndef HYPTILE_MEASURES_HPP
#define HYPTILE_MEASURES_HPP

#include <optional>
#include <string>
#include <vector>

#include "hyptile/exact.hpp"
#include "hyptile/symbolic.hpp"

namespace hyptile {

enum class Scheme {
  /// Entries counted from the Triangle-patch occurrence classes.
  TriangleDerived,
  /// The closed form 1 + 2^(-3^n+1), 1 / 2^(-2*3^n+2), 2^(-3^n+1) + 2^(-2*3^n+2)
  /// quoted for the 112/122 substitution; kept for comparison only.
  PaperPrinted,
};

std::string scheme_name(Scheme scheme);
std::optional<Scheme> parse_scheme(const std::string& name);

struct TransitionMatrix {
  int level = 0;
  Scheme scheme = Scheme::TriangleDerived;
  /// entry(i, j): weight of child word i inside parent word j.
  ExactMatrix entries;
};

/// A_q, mapping level-(q+1) chain coefficients to level-q ones.
/// PaperPrinted needs the 112/122 substitution and q >= 1.
TransitionMatrix transition_matrix(const Model& model, int q, Scheme scheme);

/// A_from * A_(from+1) * ... * A_(to-1); identity when from == to.
ExactMatrix compose_range(const Model& model, Scheme scheme, int from, int to);

struct SimplexVertices {
  int level = 0;
  int depth = 0;
  /// One vertex per letter, each with coordinates summing to 1.
  std::vector<ExactVector> vertices;
};

/// Normalized columns of compose_range(level, depth). DegeneracyError on a zero column.
SimplexVertices nested_simplex(const Model& model, Scheme scheme, int level, int depth);

/// Coordinates of `point` in the affine frame spanned by `vertices` (r
/// linearly independent vectors in dimension r), exactly; nullopt when the
/// vertices are dependent. The point lies in their hull iff all are >= 0.
std::optional<ExactVector> barycentric(const std::vector<ExactVector>& vertices, const ExactVector& point);

/// Hilbert projective distance between nonnegative, nonzero vectors (taken
/// projectively). +inf when the supports differ. DomainError on negative or
/// zero input, or on a size mismatch.
double hilbert_distance(const Vector<double>& x, const Vector<double>& y);
double hilbert_distance(const ExactVector& x, const ExactVector& y);

/// The same distance from the cross ratio along the segment through x and y:
/// |ln((m + l)(m + r) / (l r))|. Used to cross-check hilbert_distance.
double hilbert_distance_segment(const Vector<double>& x, const Vector<double>& y);

struct ErgodicCountOptions {
  double tolerance = 1e-6;
  int level = 1;      ///< level whose simplex is examined
  int min_depth = 5;  ///< first depth at which stabilization may be certified
  int max_depth = 64;
};

struct ErgodicCountReport {
  enum class Status { Stabilized, Inconclusive };
  Status status = Status::Inconclusive;
  int count = 0;               ///< clusters at the deepest depth computed
  int count_at_min_depth = 0;  ///< clusters at min_depth
  int depth = 0;               ///< deepest depth computed
  /// Depth m + 1 at which depths m and m + 1 first matched, when stabilized.
  std::optional<int> certified_depth;
  double match_distance = 0.0;  ///< max Hilbert distance between matched vertices
  std::vector<int> cluster_of;  ///< cluster index per vertex
  std::vector<ExactVector> witnesses;  ///< one vertex per cluster
  ErgodicCountOptions options;
};

/// Counts extreme points of the limiting simplex by clustering its vertices
/// within `tolerance`, deepening until two consecutive depths agree.
ErgodicCountReport ergodic_measure_count(const Model& model, Scheme scheme, const ErgodicCountOptions& options = {});

struct ContractionLevel {
  int level = 0;
  double diameter = 0.0;  ///< +inf when the matrix has a zero entry
  double factor = 0.0;    ///< tanh(diameter / 4)
  double gap = 1.0;       ///< 1 - factor, computed without cancellation
  bool positive = false;
  bool degenerate = false;  ///< image set is a single point
  std::string note;
};

struct ContractionReport {
  Scheme scheme = Scheme::TriangleDerived;
  int from = 0;
  int to = 0;  ///< exclusive
  std::vector<ContractionLevel> levels;
  /// "uniformly_contracting", "contracting_nonuniform" or "withheld".
  std::string verdict;
  double max_factor = 0.0;
  double min_gap = 1.0;
};

/// Birkhoff contraction of A_q on the simplex for q in [from, to).
ContractionReport contraction_certificate(const Model& model, Scheme scheme, int from, int to);

/// Residual L_{q+1} - sum_i L_q * entry(i, j) per parent j; zero for
/// matrices consistent with patch lengths.
std::vector<Rational> mass_conservation_check(const Model& model, Scheme scheme, int q);

struct FrequencyResult {
  int level = 0;
  Letter measure = 1;
  Scheme scheme = Scheme::TriangleDerived;
  /// Letter weights inside the chain image of word `measure` (integers for TriangleDerived).
  ExactVector counts;
  ExactVector frequencies;
};

/// Letter frequencies carried by extreme measure `measure`, read at level q.
/// TriangleDerived: column `measure` of A_0 ... A_(q-1), normalized.
/// PaperPrinted: the level-1 letter counts pushed through A_1 ... A_(q-1).
FrequencyResult measure_frequencies(const Model& model, Scheme scheme, Letter measure, int q);

/// level,measure,letter,num,den,value rows.
std::string frequencies_csv(const std::vector<FrequencyResult>& rows);

}  // namespace hyptile

#endif  // HYPTILE_MEASURES_HPP
