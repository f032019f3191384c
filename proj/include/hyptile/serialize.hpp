// JSON forms of the library's values. Exact scalars are written as decimal
// strings {"num": "...", "den": "..."} so they survive any JSON reader.
#ifndef HYPTILE_SERIALIZE_HPP
#define HYPTILE_SERIALIZE_HPP

#include <json.hpp>

#include "hyptile/diffusion.hpp"
#include "hyptile/exact.hpp"
#include "hyptile/geometry.hpp"
#include "hyptile/measures.hpp"
#include "hyptile/symbolic.hpp"

namespace hyptile {

using Json = nlohmann::ordered_json;

Json exact_json(const Rational& q);
/// Inverse of exact_json. DomainError on malformed input or a zero denominator.
Rational exact_from_json(const Json& j);
Json vector_json(const ExactVector& v);
/// Row-major array of rows.
Json matrix_json(const ExactMatrix& m);
ExactMatrix matrix_from_json(const Json& j);
/// Finite values as numbers, infinities as the strings "inf" / "-inf".
Json real_json(double x);

Json model_json(const Model& model);
Json window_json(std::int64_t from, std::int64_t to, const Word& letters);
Json atlas_json(const Model& model, const AtlasLevel& atlas);
Json occurrence_json(const OccurrenceTable& table);
Json transition_json(const TransitionMatrix& m);
Json ergodic_json(const ErgodicCountReport& report);
Json contraction_json(const ContractionReport& report);
Json frequency_json(const FrequencyResult& f);
Json diffusion_json(const DiffusionReport& report);
Json garnett_json(const GarnettReport& report);

}  // namespace hyptile

#endif  // HYPTILE_SERIALIZE_HPP
