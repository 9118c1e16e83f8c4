#pragma once

// JSON descriptions of weights, families, functionals and words.
//
//   weight / atom : {"cosine": j} | {"constant": c} | {"csv": path}, optional "scale"
//                   (cosine atoms are L2-normalized before scaling)
//   functional    : {"family": [atom, ...], "f": fdesc, "label": str?}
//   fdesc         : {"pgp": {"factors": [{"coeffs": [[re, im], ...], "a": z, "b": z}, ...]}}
//                 | {"expi": {"w": [...]}} | {"cos": {"w": [...]}}
//                 | {"indicator": {"lo": [...], "hi": [...]}}
//                   black boxes accept an optional "box": {"half_width": L, "panels": M}
//   complex z     : number or [re, im]
//   word          : [{"sign": +-1, "class_ref": k}, ...]
//
// Unknown keys raise ConfigError.

#include <filesystem>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "gaussfft/algebra.hpp"
#include "gaussfft/cylinder.hpp"
#include "gaussfft/grid.hpp"

namespace gaussfft {

using json = nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where);

cplx parse_complex(const json& j);
json complex_to_json(cplx z);

GridFunction parse_weight(const json& j, const TimeGrid& grid, const std::filesystem::path& base = {});
HSeq parse_hseq(const json& j, const TimeGrid& grid, const std::filesystem::path& base = {});
OrthogonalFamily parse_family(const json& j, const TimeGrid& grid, const std::filesystem::path& base = {});
GaussPolyFactor parse_factor(const json& j);
CylinderFunctional parse_functional(const json& j, const TimeGrid& grid, const std::filesystem::path& base = {});

// Closed-form functionals only: {"f": {"pgp": ...}, "family_gram": [...]}.
json functional_to_json(const CylinderFunctional& F);

GroupWord parse_word(const json& j);
json word_to_json(const GroupWord& w);

}  // namespace gaussfft
