#pragma once

#include "extpow/forms.hpp"
#include "extpow/normalizer.hpp"

#include "json.hpp"

namespace extpow {

using Json = nlohmann::ordered_json;

// {ring, n, m, index_order: "lex", entries: {triplets|dense}}; round trips
// bit-exactly through the canonical element printing.
Json repmatrix_to_json(const RepMatrix& g);
RepMatrix repmatrix_from_json(const Json& j);

// {n, m, k, V, coeffs: [{blocks, value}]}
Json form_to_json(const MultilinearForm& f);

// Generator-by-generator with normalized signs.
Json plucker_to_json(const PluckerSet& set);

Json ideal_witness_to_json(const Ring& ring, const IdealStabWitness& w);

Json normalizer_report_to_json(const NormalizerReport& rep);

const char* verdict_str(Verdict v);

}  // namespace extpow
