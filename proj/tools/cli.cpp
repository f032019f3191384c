#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "hyptile/diffusion.hpp"
#include "hyptile/errors.hpp"
#include "hyptile/geometry.hpp"
#include "hyptile/harmonic.hpp"
#include "hyptile/measures.hpp"
#include "hyptile/serialize.hpp"
#include "hyptile/symbolic.hpp"

namespace hyptile::cli {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string output;
  std::string format;

  std::string model = "toeplitz";
  int r = 2;
  int max_steps = 12;
  std::string images;
  std::string scheme;

  std::int64_t from = 0;
  std::int64_t to = 9;
  int level = 1;
  int level_to = -1;
  bool occurrences = false;

  int depth = 5;
  int max_depth = 64;
  double tolerance = 1e-6;
  int measure = 0;

  double dt = 1e-3;
  double horizon = 2000.0;
  std::uint64_t paths = 50;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  int block_level = 1;
  bool garnett = false;
  bool log_height = false;

  std::int64_t row_min = -1;
  std::int64_t row_max = 1;
  double x_min = 0.0, x_max = 4.0, y_min = 0.25, y_max = 4.0;
  double scale = 100.0;
  double render_tolerance = 1e-3;
  std::vector<int> overlay;
  bool undecorated = false;
  bool prototile = false;
};

Word parse_word(const std::string& text) {
  Word w;
  for (char ch : text) {
    if (ch < '1' || ch > '9') throw DomainError("substitution images are written with the digits 1-9");
    w.push_back(ch - '0');
  }
  return w;
}

Model make_model(const Options& o) {
  if (o.model == "toeplitz") {
    if (o.r < 1) throw DomainError("toeplitz needs r >= 1");
    if (o.max_steps < 1) throw DomainError("max-steps must be positive");
    return ToeplitzSpec{o.r, o.max_steps};
  }
  if (o.images.empty()) return SubstitutionRule::standard();
  SubstitutionRule rule;
  std::stringstream ss(o.images);
  std::string part;
  while (std::getline(ss, part, ',')) rule.images.push_back(parse_word(part));
  rule.validate_fixed_point();
  return rule;
}

std::vector<Scheme> schemes_for(const Options& o, const Model& model, const std::string& fallback) {
  const std::string name = o.scheme.empty() ? fallback : o.scheme;
  if (name == "both") {
    std::vector<Scheme> out{Scheme::TriangleDerived};
    if (std::holds_alternative<SubstitutionRule>(model) &&
        std::get<SubstitutionRule>(model).images == SubstitutionRule::standard().images)
      out.push_back(Scheme::PaperPrinted);
    return out;
  }
  auto s = parse_scheme(name);
  if (!s) throw UsageError("unknown scheme '" + name + "'");
  return {*s};
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.output.empty() || o.output == "-") {
    out << text;
    return;
  }
  std::ofstream file(o.output, std::ios::out | std::ios::trunc);
  if (!file) throw IoError("cannot open " + o.output + " for writing");
  file << text;
  if (!file.flush()) throw IoError("write failed for " + o.output);
}

void emit_json(const Options& o, std::ostream& out, const Json& j) { emit(o, out, j.dump(2) + "\n"); }

// Key = value lines; '#' starts a comment. Keys are long option names.
void apply_config(const std::string& path, CLI::App& app, CLI::App& sub) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot read config file " + path);
  std::string line;
  int number = 0;
  while (std::getline(file, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (!opt) opt = app.get_option_no_throw("--" + key);
    if (!opt || key == "config" || key == "help")
      throw UsageError(path + ":" + std::to_string(number) + ": unknown key '" + key + "'");
    if (opt->count() > 0) continue;  // the command line wins
    opt->add_result(value);
    opt->run_callback();
  }
}

void add_model_options(CLI::App* sub, Options& o) {
  sub->add_option("--model", o.model, "toeplitz or substitution")->check(CLI::IsMember({"toeplitz", "substitution"}));
  sub->add_option("--r", o.r, "Toeplitz alphabet size");
  sub->add_option("--max-steps", o.max_steps, "Toeplitz construction steps allowed per position");
  sub->add_option("--images", o.images, "substitution images, e.g. 112,122");
}

void add_output(CLI::App* sub, Options& o) { sub->add_option("--output,-o", o.output, "output file (default stdout)"); }

// -- subcommands ------------------------------------------------------------

int cmd_gen(const Options& o, std::ostream& out) {
  const Model model = make_model(o);
  if (o.to < o.from) throw DomainError("window needs from <= to");
  if (static_cast<std::uint64_t>(o.to - o.from) > kMaterializeLimit) throw BudgetError("window too long");
  const Word w = sequence_window(model, o.from, o.to);
  if (o.format == "text") {
    std::string s;
    for (std::size_t k = 0; k < w.size(); ++k) s += (k ? "," : "") + std::to_string(w[k]);
    emit(o, out, s + "\n");
  } else {
    Json j = window_json(o.from, o.to, w);
    j["model"] = model_json(model);
    emit_json(o, out, j);
  }
  return kOk;
}

int cmd_atlas(const Options& o, std::ostream& out) {
  const Model model = make_model(o);
  emit_json(o, out, atlas_json(model, atlas_words(model, o.level)));
  return kOk;
}

int cmd_matrices(const Options& o, std::ostream& out) {
  const Model model = make_model(o);
  const auto schemes = schemes_for(o, model, "both");
  const int last = o.level_to < 0 ? o.level + 1 : o.level_to;
  if (last <= o.level) throw DomainError("--to must exceed --level");
  Json levels = Json::array();
  for (int q = o.level; q < last; ++q) {
    Json entry{{"level", q}};
    std::vector<ExactMatrix> seen;
    for (Scheme s : schemes) {
      const auto m = transition_matrix(model, q, s);
      Json residual = Json::array();
      for (const auto& v : mass_conservation_check(model, s, q)) residual.push_back(exact_json(v));
      entry[scheme_name(s)] = Json{{"entries", matrix_json(m.entries)}, {"mass_residual", residual}};
      seen.push_back(m.entries);
    }
    if (seen.size() == 2) entry["schemes_agree"] = seen[0] == seen[1];
    if (o.occurrences) {
      Json tables = Json::array();
      for (Letter j = 1; j <= alphabet_size(model); ++j) tables.push_back(occurrence_json(enumerate_occurrences(model, q, j)));
      entry["occurrences"] = tables;
    }
    levels.push_back(std::move(entry));
  }
  Json j{{"model", model_json(model)}, {"levels", levels}};
  if (last > o.level + 1) {
    Json products;
    for (Scheme s : schemes) products[scheme_name(s)] = matrix_json(compose_range(model, s, o.level, last));
    j["product"] = products;
  }
  if (schemes.size() == 1 && o.scheme.empty() && std::holds_alternative<ToeplitzSpec>(model))
    j["note"] = "printed matrices exist only for the 112/122 substitution";
  emit_json(o, out, j);
  return kOk;
}

ErgodicCountOptions ergodic_options(const Options& o) {
  ErgodicCountOptions e;
  e.tolerance = o.tolerance;
  e.level = o.level;
  e.min_depth = o.depth;
  e.max_depth = o.max_depth;
  return e;
}

int cmd_measures(const Options& o, std::ostream& out) {
  const Model model = make_model(o);
  const auto schemes = schemes_for(o, model, "triangle");
  bool inconclusive = false;
  Json j;
  if (schemes.size() == 1) {
    const auto rep = ergodic_measure_count(model, schemes[0], ergodic_options(o));
    j = ergodic_json(rep);
    j["scheme"] = scheme_name(schemes[0]);
    inconclusive = rep.status != ErgodicCountReport::Status::Stabilized;
  } else {
    for (Scheme s : schemes) {
      const auto rep = ergodic_measure_count(model, s, ergodic_options(o));
      j[scheme_name(s)] = ergodic_json(rep);
      inconclusive = inconclusive || rep.status != ErgodicCountReport::Status::Stabilized;
    }
  }
  j["model"] = model_json(model);
  emit_json(o, out, j);
  return inconclusive ? kInconclusive : kOk;
}

int cmd_certify(const Options& o, std::ostream& out) {
  const Model model = make_model(o);
  const int last = o.level_to < 0 ? o.level + 6 : o.level_to;
  Json reports = Json::array();
  for (Scheme s : schemes_for(o, model, "both")) reports.push_back(contraction_json(contraction_certificate(model, s, o.level, last)));
  emit_json(o, out, Json{{"model", model_json(model)}, {"reports", reports}});
  return kOk;
}

int cmd_frequencies(const Options& o, std::ostream& out, std::ostream& err) {
  const Model model = make_model(o);
  const auto schemes = schemes_for(o, model, "triangle");
  std::vector<FrequencyResult> rows;
  for (Scheme s : schemes) {
    const auto count = ergodic_measure_count(model, s, ergodic_options(o));
    if (count.status != ErgodicCountReport::Status::Stabilized) {
      err << "ergodic count did not stabilize by depth " << count.depth << "; frequencies withheld\n";
      return kInconclusive;
    }
    // extreme measure m is represented by the first letter of cluster m
    for (int m = 1; m <= count.count; ++m) {
      if (o.measure != 0 && o.measure != m) continue;
      Letter j = 1;
      while (count.cluster_of[static_cast<std::size_t>(j - 1)] != m - 1) ++j;
      auto f = measure_frequencies(model, s, j, o.level);
      f.measure = m;
      rows.push_back(std::move(f));
    }
    if (o.measure > count.count) throw DomainError("measure index above the ergodic count");
  }
  if (o.format == "json") {
    Json arr = Json::array();
    for (const auto& f : rows) arr.push_back(frequency_json(f));
    emit_json(o, out, Json{{"model", model_json(model)}, {"frequencies", arr}});
  } else {
    emit(o, out, frequencies_csv(rows));
  }
  return kOk;
}

DiffusionConfig diffusion_config(const Options& o) {
  DiffusionConfig c;
  c.model = make_model(o);
  c.dt = o.dt;
  c.horizon = o.horizon;
  c.paths = o.paths;
  c.seed = o.seed;
  c.threads = o.threads;
  c.block_level = o.block_level;
  c.validate();
  return c;
}

int cmd_diffuse(const Options& o, std::ostream& out) {
  const DiffusionConfig c = diffusion_config(o);
  if (o.log_height) {
    const auto st = log_height_stats(c);
    const auto ks = ks_test_normal(st.samples, -c.horizon / 2, std::sqrt(c.horizon));
    emit_json(o, out,
              Json{{"paths", c.paths},
                   {"horizon", c.horizon},
                   {"dt", c.dt},
                   {"seed", c.seed},
                   {"mean", st.mean},
                   {"variance", st.variance},
                   {"expected_mean", -c.horizon / 2},
                   {"expected_variance", c.horizon},
                   {"ks", {{"statistic", ks.statistic}, {"critical_1pct", ks.critical}, {"pass", ks.pass}}}});
    return kOk;
  }
  const auto rep = simulate(c);
  Json j = diffusion_json(rep);
  if (o.garnett) j["garnett"] = garnett_json(garnett_compare(rep, c.block_level));
  emit_json(o, out, j);
  return kOk;
}

int cmd_render(const Options& o, std::ostream& out) {
  if (o.prototile) {
    emit(o, out, render_prototile_svg(o.scale, o.render_tolerance));
    return kOk;
  }
  RenderOptions r;
  r.row_min = o.row_min;
  r.row_max = o.row_max;
  r.x_min = o.x_min;
  r.x_max = o.x_max;
  r.y_min = o.y_min;
  r.y_max = o.y_max;
  r.scale = o.scale;
  r.tolerance = o.render_tolerance;
  r.overlay_levels = o.overlay;
  r.undecorated = o.undecorated;
  emit(o, out, render_svg(make_model(o), r));
  return kOk;
}

// -- verify -----------------------------------------------------------------

struct Check {
  std::string name;
  std::function<std::string()> run;  // returns detail; throws or reports failure via a "FAIL" prefix
};

std::vector<Model> verify_models() {
  return {Model{ToeplitzSpec{1, 12}}, Model{ToeplitzSpec{2, 12}}, Model{ToeplitzSpec{3, 12}},
          Model{ToeplitzSpec{5, 12}}, Model{SubstitutionRule::standard()}};
}

std::string check_counting() {
  std::size_t compared = 0;
  for (const auto& model : verify_models()) {
    const int r = alphabet_size(model);
    const int top = is_toeplitz(model) ? 4 : 8;
    for (int q = 0; q <= top; ++q) {
      const auto atlas = atlas_words(model, q);
      for (Letter j = 1; j <= r; ++j) {
        std::vector<BigInt> direct(static_cast<std::size_t>(r), 0);
        for (Letter c : atlas.words[static_cast<std::size_t>(j - 1)]) ++direct[static_cast<std::size_t>(c - 1)];
        const auto counted = letter_counts(model, q, j);
        const auto freq = measure_frequencies(model, Scheme::TriangleDerived, j, q);
        for (int i = 0; i < r; ++i)
          if (counted[static_cast<std::size_t>(i)] != direct[static_cast<std::size_t>(i)] ||
              freq.counts(i) != Rational(direct[static_cast<std::size_t>(i)]))
            return "FAIL " + model_name(model) + " level " + std::to_string(q) + " word " + std::to_string(j);
        ++compared;
      }
    }
  }
  return std::to_string(compared) + " atlas words counted";
}

std::string check_mass() {
  for (const auto& model : verify_models())
    for (int q = 0; q <= 6; ++q)
      for (const auto& v : mass_conservation_check(model, Scheme::TriangleDerived, q))
        if (v != 0) return "FAIL " + model_name(model) + " level " + std::to_string(q);
  const auto printed = mass_conservation_check(Model{SubstitutionRule::standard()}, Scheme::PaperPrinted, 1);
  return "triangle residuals zero for q <= 6; printed scheme residual at n = 1: " + to_string(printed[0]);
}

std::string check_nesting() {
  std::size_t tested = 0;
  for (const auto& model : verify_models()) {
    for (int m = 2; m <= 5; ++m) {
      const auto outer = nested_simplex(model, Scheme::TriangleDerived, 1, m);
      const auto inner = nested_simplex(model, Scheme::TriangleDerived, 1, m + 1);
      for (const auto& v : inner.vertices) {
        const auto lambda = barycentric(outer.vertices, v);
        if (!lambda) return "FAIL degenerate simplex for " + model_name(model);
        for (Eigen::Index k = 0; k < lambda->size(); ++k)
          if ((*lambda)(k) < 0) return "FAIL " + model_name(model) + " depth " + std::to_string(m + 1);
        ++tested;
      }
    }
  }
  return std::to_string(tested) + " vertices inside the shallower simplex";
}

std::string check_contraction() {
  const Model sub = SubstitutionRule::standard();
  const auto tri = contraction_certificate(sub, Scheme::TriangleDerived, 1, 7);
  if (tri.verdict != "uniformly_contracting" || tri.max_factor > std::tanh(std::log(4.0) / 4) + 1e-12)
    return "FAIL triangle verdict " + tri.verdict;
  const auto printed = contraction_certificate(sub, Scheme::PaperPrinted, 1, 7);
  if (!(printed.min_gap > 0.0)) return "FAIL printed scheme has a factor of 1";
  return "triangle factor " + std::to_string(tri.max_factor) + "; printed scheme " + printed.verdict;
}

std::string check_ergodic() {
  for (int r : {1, 2, 3}) {
    const auto rep = ergodic_measure_count(Model{ToeplitzSpec{r, 12}}, Scheme::TriangleDerived);
    if (rep.status != ErgodicCountReport::Status::Stabilized || rep.count != r)
      return "FAIL toeplitz r = " + std::to_string(r) + " gave " + std::to_string(rep.count);
  }
  for (Scheme s : {Scheme::TriangleDerived, Scheme::PaperPrinted}) {
    const auto rep = ergodic_measure_count(Model{SubstitutionRule::standard()}, s);
    if (rep.status != ErgodicCountReport::Status::Stabilized || rep.count != 1)
      return "FAIL substitution " + scheme_name(s);
  }
  return "toeplitz r = 1, 2, 3 and the substitution (both schemes) as expected";
}

std::string check_u_law() {
  DiffusionConfig c;
  c.dt = 1e-2;
  c.horizon = 4;
  c.paths = 2000;
  c.seed = 2024;
  const auto st = log_height_stats(c);
  const auto ks = ks_test_normal(st.samples, -2.0, 2.0);
  if (!ks.pass) return "FAIL KS statistic " + std::to_string(ks.statistic);
  if (std::abs(st.mean + 2.0) > 3.0 * 2.0 / std::sqrt(2000.0)) return "FAIL mean " + std::to_string(st.mean);
  return "KS " + std::to_string(ks.statistic) + " < " + std::to_string(ks.critical);
}

std::string check_partition() {
  for (int h = 1; h <= 10; ++h) {
    const auto rep = check_slab_partition(-3, h, -2, 3);
    if (rep.uncovered || rep.multiply_covered) return "FAIL slab height " + std::to_string(h);
  }
  for (const auto& model : verify_models())
    for (int q = 0; q <= 2; ++q)
      for (Letter j = 1; j <= alphabet_size(model); ++j) {
        const auto rec = reconcile_occurrence_tiles(model, q, j);
        if (rec.parent_tiles != rec.child_tiles) return "FAIL tile reconciliation " + model_name(model);
      }
  return "slabs partitioned; occurrence tiles reconcile for q <= 2";
}

std::string check_transport() {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> e(-10, 10);
  std::uniform_int_distribution<long> m(1, 512);
  for (int k = 0; k < 50; ++k) {
    const AffineMap g{pow2_rational(e(rng)), Rational(m(rng) - 256) * pow2_rational(e(rng))};
    const Rational y0 = Rational(m(rng)) * pow2_rational(-6);
    const Rect rect{0, Rational(m(rng)) * pow2_rational(-4), y0, y0 + Rational(m(rng)) * pow2_rational(-5)};
    const auto c = transport_scaling_check(1, rect, g);
    if (!c.equal || c.scale != alpha(g)) return "FAIL transport check " + std::to_string(k);
  }
  return "50 dyadic maps scale masses by alpha(g)";
}

int cmd_verify(const Options& o, std::ostream& out) {
  const std::vector<Check> checks{{"counting_equivalence", check_counting}, {"mass_conservation", check_mass},
                                  {"nesting", check_nesting},              {"contraction", check_contraction},
                                  {"ergodic_counts", check_ergodic},       {"u_law", check_u_law},
                                  {"partition", check_partition},          {"transport_scaling", check_transport}};
  Json results = Json::array();
  bool all = true;
  for (const auto& c : checks) {
    bool pass = true;
    std::string detail;
    try {
      detail = c.run();
      pass = detail.rfind("FAIL", 0) != 0;
    } catch (const std::exception& e) {
      pass = false;
      detail = std::string("exception: ") + e.what();
    }
    all = all && pass;
    results.push_back(Json{{"name", c.name}, {"pass", pass}, {"detail", detail}});
  }
  emit_json(o, out, Json{{"pass", all}, {"checks", results}});
  return all ? kOk : kVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Decorated hyperbolic tilings: sequences, patches, transition matrices, measures, diffusion"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", o.config, "key = value file supplying defaults")->configurable(false);

  auto* gen = app.add_subcommand("gen", "letters of the sequence on [from, to)");
  add_model_options(gen, o);
  gen->add_option("--from", o.from);
  gen->add_option("--to", o.to);
  gen->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  add_output(gen, o);

  auto* atlas = app.add_subcommand("atlas", "level-q atlas words");
  add_model_options(atlas, o);
  atlas->add_option("--level", o.level);
  add_output(atlas, o);

  auto* matrices = app.add_subcommand("matrices", "transition matrices A_q");
  add_model_options(matrices, o);
  matrices->add_option("--level", o.level);
  matrices->add_option("--to", o.level_to, "exclusive end of a level range; adds the product");
  matrices->add_option("--scheme", o.scheme, "triangle, paper or both");
  matrices->add_flag("--occurrences", o.occurrences, "include occurrence classes");
  add_output(matrices, o);

  auto* measures = app.add_subcommand("measures", "number of ergodic invariant measures");
  add_model_options(measures, o);
  measures->add_option("--scheme", o.scheme, "triangle, paper or both");
  measures->add_option("--level", o.level, "level whose simplex is examined");
  measures->add_option("--depth", o.depth, "first depth at which stabilization may be certified");
  measures->add_option("--max-depth", o.max_depth);
  measures->add_option("--tolerance", o.tolerance, "Hilbert-distance clustering tolerance");
  add_output(measures, o);

  auto* certify = app.add_subcommand("certify", "Birkhoff contraction certificates");
  add_model_options(certify, o);
  certify->add_option("--scheme", o.scheme, "triangle, paper or both");
  certify->add_option("--level", o.level, "first level");
  certify->add_option("--to", o.level_to, "exclusive last level");
  add_output(certify, o);

  auto* freq = app.add_subcommand("frequencies", "letter frequencies of each extreme measure");
  add_model_options(freq, o);
  freq->add_option("--scheme", o.scheme, "triangle, paper or both");
  freq->add_option("--level", o.level);
  freq->add_option("--measure", o.measure, "1-based measure index, 0 for all");
  freq->add_option("--depth", o.depth);
  freq->add_option("--max-depth", o.max_depth);
  freq->add_option("--tolerance", o.tolerance);
  freq->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  add_output(freq, o);

  auto* diffuse = app.add_subcommand("diffuse", "leafwise Brownian motion and colour occupancy");
  add_model_options(diffuse, o);
  diffuse->add_option("--dt", o.dt);
  diffuse->add_option("--horizon", o.horizon);
  diffuse->add_option("--paths", o.paths);
  diffuse->add_option("--seed", o.seed);
  diffuse->add_option("--threads", o.threads, "0 uses every core");
  diffuse->add_option("--block-level", o.block_level);
  diffuse->add_flag("--garnett", o.garnett, "compare with the invariant-measure frequencies");
  diffuse->add_flag("--log-height", o.log_height, "only the law of ln y, with a KS test");
  add_output(diffuse, o);

  auto* render = app.add_subcommand("render", "SVG picture of the tiling");
  add_model_options(render, o);
  render->add_option("--row-min", o.row_min);
  render->add_option("--row-max", o.row_max);
  render->add_option("--x-min", o.x_min);
  render->add_option("--x-max", o.x_max);
  render->add_option("--y-min", o.y_min);
  render->add_option("--y-max", o.y_max);
  render->add_option("--scale", o.scale);
  render->add_option("--tolerance", o.render_tolerance, "chord error in screen units");
  render->add_option("--overlay", o.overlay, "patch levels to outline")->delimiter(',');
  render->add_flag("--undecorated", o.undecorated);
  render->add_flag("--prototile", o.prototile, "draw the prototile alone");
  add_output(render, o);

  auto* verify = app.add_subcommand("verify", "run every cross-check");
  add_output(verify, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!o.config.empty()) apply_config(o.config, app, *sub);
    const std::string name = sub->get_name();
    if (name == "gen") return cmd_gen(o, out);
    if (name == "atlas") return cmd_atlas(o, out);
    if (name == "matrices") return cmd_matrices(o, out);
    if (name == "measures") return cmd_measures(o, out);
    if (name == "certify") return cmd_certify(o, out);
    if (name == "frequencies") return cmd_frequencies(o, out, err);
    if (name == "diffuse") return cmd_diffuse(o, out);
    if (name == "render") return cmd_render(o, out);
    if (name == "verify") return cmd_verify(o, out);
    err << "unknown subcommand\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const CapError& e) {
    err << "cap: " << e.what() << "\n";
    return kCap;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return kModel;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << " (residual " << e.residual() << ")\n";
    return kModel;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kModel;
  }
}

}  // namespace hyptile::cli
