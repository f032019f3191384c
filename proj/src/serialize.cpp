#include "hyptile/serialize.hpp"

#include <cmath>

#include "hyptile/errors.hpp"

namespace hyptile {

Json exact_json(const Rational& q) {
  return Json{{"num", to_string(numerator(q))}, {"den", to_string(denominator(q))}};
}

Rational exact_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den") || !j["num"].is_string() || !j["den"].is_string())
    throw DomainError("exact scalar must be {\"num\": string, \"den\": string}");
  try {
    const BigInt num(j["num"].get<std::string>());
    const BigInt den(j["den"].get<std::string>());
    if (den == 0) throw DomainError("exact scalar with zero denominator");
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    throw DomainError(std::string("malformed exact scalar: ") + e.what());
  }
}

Json vector_json(const ExactVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(exact_json(v(i)));
  return out;
}

Json matrix_json(const ExactMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(exact_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ExactMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw DomainError("matrix must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ExactMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw DomainError("ragged matrix rows");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = exact_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

Json real_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

Json model_json(const Model& model) {
  if (const auto* t = std::get_if<ToeplitzSpec>(&model))
    return Json{{"name", "toeplitz"}, {"r", t->r}, {"max_depth", t->max_depth}};
  const auto& rule = std::get<SubstitutionRule>(model);
  Json images = Json::array();
  for (const auto& img : rule.images) images.push_back(format_word(img, rule.alphabet_size()));
  return Json{{"name", "substitution"}, {"images", images}};
}

Json window_json(std::int64_t from, std::int64_t to, const Word& letters) {
  return Json{{"from", from}, {"to", to}, {"letters", letters}};
}

Json atlas_json(const Model& model, const AtlasLevel& atlas) {
  Json words = Json::array();
  for (const auto& w : atlas.words) words.push_back(format_word(w, alphabet_size(model)));
  return Json{{"model", model_json(model)}, {"q", atlas.q}, {"length", to_string(atlas.length)}, {"words", words}};
}

Json occurrence_json(const OccurrenceTable& table) {
  Json classes = Json::array();
  for (const auto& c : table.classes)
    classes.push_back(Json{{"d", c.depth.convert_to<std::int64_t>()}, {"count", to_string(c.count())}, {"child", c.child}});
  return Json{{"q", table.q}, {"parent", table.parent}, {"classes", classes}};
}

Json transition_json(const TransitionMatrix& m) {
  return Json{{"level", m.level}, {"scheme", scheme_name(m.scheme)}, {"entries", matrix_json(m.entries)}};
}

Json ergodic_json(const ErgodicCountReport& r) {
  Json witnesses = Json::array();
  for (const auto& w : r.witnesses) witnesses.push_back(vector_json(w));
  return Json{{"ergodic_count", r.count},
              {"status", r.status == ErgodicCountReport::Status::Stabilized ? "stabilized" : "inconclusive"},
              {"count_at_min_depth", r.count_at_min_depth},
              {"min_depth", r.options.min_depth},
              {"depth", r.depth},
              {"certified_depth", r.certified_depth ? Json(*r.certified_depth) : Json(nullptr)},
              {"tolerance", r.options.tolerance},
              {"level", r.options.level},
              {"match_distance", real_json(r.match_distance)},
              {"cluster_of", r.cluster_of},
              {"witnesses", witnesses}};
}

Json contraction_json(const ContractionReport& r) {
  Json levels = Json::array();
  for (const auto& l : r.levels)
    levels.push_back(Json{{"level", l.level},
                          {"diameter", real_json(l.diameter)},
                          {"factor", real_json(l.factor)},
                          {"gap", real_json(l.gap)},
                          {"positive", l.positive},
                          {"degenerate", l.degenerate},
                          {"note", l.note}});
  return Json{{"scheme", scheme_name(r.scheme)}, {"from", r.from},           {"to", r.to},
              {"verdict", r.verdict},          {"max_factor", r.max_factor}, {"min_gap", r.min_gap},
              {"levels", levels}};
}

Json frequency_json(const FrequencyResult& f) {
  Json approx = Json::array();
  for (Eigen::Index i = 0; i < f.frequencies.size(); ++i) approx.push_back(to_double(f.frequencies(i)));
  return Json{{"level", f.level},
              {"measure", f.measure},
              {"scheme", scheme_name(f.scheme)},
              {"counts", vector_json(f.counts)},
              {"frequencies", vector_json(f.frequencies)},
              {"approx", approx}};
}

Json diffusion_json(const DiffusionReport& r) {
  const auto& c = r.config;
  Json early = Json::array();
  for (const auto& p : r.paths)
    if (p.terminated_early) early.push_back(Json{{"path", p.path}, {"cap_row", p.cap_row.value_or(0)}});
  return Json{{"config",
               {{"model", model_json(c.model)},
                {"dt", c.dt},
                {"horizon", c.horizon},
                {"steps", c.steps()},
                {"paths", c.paths},
                {"seed", c.seed},
                {"start", {c.x0, c.y0}},
                {"block_level", c.block_level}}},
              {"letter_fractions", r.letters.mean},
              {"letter_stddev", r.letters.stddev},
              {"letter_band", r.letters.band},
              {"block_fractions", r.blocks.mean},
              {"block_band", r.blocks.band},
              {"log_height", {{"mean", r.log_height_mean}, {"variance", r.log_height_variance},
                              {"expected_mean", -c.horizon / 2}, {"expected_variance", c.horizon}}},
              {"early_terminations", r.early_terminations},
              {"terminated_paths", early}};
}

Json garnett_json(const GarnettReport& g) {
  Json out{{"uniquely_ergodic", g.uniquely_ergodic},
           {"level", g.level},
           {"observed_letters", g.observed_letters},
           {"observed_blocks", g.observed_blocks},
           {"band_letters", g.band_letters},
           {"band_blocks", g.band_blocks},
           {"early_terminations", g.early_terminations}};
  if (!g.flag.empty()) out["flag"] = g.flag;
  if (g.uniquely_ergodic) {
    out["expected_letters"] = g.expected_letters;
    out["expected_blocks"] = g.expected_blocks;
    out["deviation_letters"] = g.deviation_letters;
    out["deviation_blocks"] = g.deviation_blocks;
  }
  return out;
}

}  // namespace hyptile
