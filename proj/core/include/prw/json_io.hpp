#pragma once

#include <string>
#include <variant>

#include "prw/counterexample.hpp"
#include "prw/quadcomb.hpp"

namespace prw {

// JSON interchange. All functions work on JSON text so the JSON library
// stays an implementation detail of the core library.
//
// LatticePMF: {"offset": int, "masses": [double...], "defect": double}
// model: {"drrw": {"nu_h": pmf, "nu_v": pmf, "p_h": d, "p_v": d}}
//        or {"quadcomb": {"n_max": int, "tail": "const"|"absorb",
//                         "alpha": {config: [d...]},
//                         "turn": {config: [[d...],[d...],[d...]]}}}
// CexParams / CexSequence: field-per-field; every LogReal is carried as its
// str() form so tower-scale magnitudes survive the round trip exactly.

std::string pmf_to_json(const LatticePMF& pmf);
LatticePMF pmf_from_json(const std::string& text);

using ModelSpec = std::variant<DRRWSpec, QuadCombSpec>;

std::string model_to_json(const ModelSpec& model);
ModelSpec model_from_json(const std::string& text);

// any model as a QuadCombSpec; DRRW hazard tables are tabulated out to the
// waiting-time supports (finite by construction)
QuadCombSpec as_quadcomb(const ModelSpec& model);

std::string cex_params_to_json(const CexParams& params);
CexParams cex_params_from_json(const std::string& text);

std::string cex_sequence_to_json(const CexSequence& seq);
CexSequence cex_sequence_from_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace prw
