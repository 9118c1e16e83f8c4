#include "gaussfft/config_io.hpp"

#include <cmath>
#include <fstream>

#include "gaussfft/errors.hpp"

namespace gaussfft {
namespace {

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

std::vector<double> get_numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(get_number(x, where));
  return out;
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(where + ": missing \"" + key + "\"");
  return obj.at(key);
}

// Exactly one of `kinds` must be present.
std::string pick_kind(const json& obj, std::initializer_list<const char*> kinds, const std::string& where) {
  std::string found;
  for (const char* k : kinds) {
    if (obj.contains(k)) {
      if (!found.empty()) throw ConfigError(where + ": \"" + found + "\" and \"" + k + "\" are exclusive");
      found = k;
    }
  }
  if (found.empty()) throw ConfigError(where + ": no recognized kind");
  return found;
}

BlackBoxF black_box(const json& desc, const std::string& kind, std::size_t arity) {
  const std::string where = "f." + kind;
  BlackBoxF bb;
  bb.arity = arity;
  bb.label = kind;
  if (desc.contains("box")) {
    const json& box = desc.at("box");
    reject_unknown_keys(box, {"half_width", "panels"}, where + ".box");
    if (box.contains("half_width")) bb.half_width = get_number(box.at("half_width"), where + ".box.half_width");
    if (box.contains("panels")) {
      const double p = get_number(box.at("panels"), where + ".box.panels");
      if (!(p >= 1) || p != std::floor(p)) throw ConfigError(where + ".box.panels: positive integer required");
      bb.panels = static_cast<std::size_t>(p);
    }
  }
  auto check_len = [&](const std::vector<double>& v, const char* name) {
    if (v.size() != arity) throw ConfigError(where + "." + name + ": length must equal the family size");
  };
  if (kind == "expi" || kind == "cos") {
    reject_unknown_keys(desc, {"w", "box"}, where);
    auto w = get_numbers(require(desc, "w", where), where + ".w");
    check_len(w, "w");
    const bool is_cos = kind == "cos";
    bb.fn = [w, is_cos](std::span<const double> u) {
      double s = 0.0;
      for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * u[j];
      return is_cos ? cplx(std::cos(s), 0.0) : cplx(std::cos(s), std::sin(s));
    };
  } else {
    reject_unknown_keys(desc, {"lo", "hi", "box"}, where);
    auto lo = get_numbers(require(desc, "lo", where), where + ".lo");
    auto hi = get_numbers(require(desc, "hi", where), where + ".hi");
    check_len(lo, "lo");
    check_len(hi, "hi");
    for (std::size_t j = 0; j < arity; ++j) {
      if (!(lo[j] < hi[j])) throw ConfigError(where + ": lo < hi required");
    }
    bb.fn = [lo, hi](std::span<const double> u) {
      for (std::size_t j = 0; j < lo.size(); ++j) {
        if (u[j] < lo[j] || u[j] > hi[j]) return cplx{};
      }
      return cplx{1.0, 0.0};
    };
  }
  return bb;
}

}  // namespace

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key \"" + key + "\"");
  }
}

cplx parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError("complex value: expected a number or [re, im]");
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

GridFunction parse_weight(const json& j, const TimeGrid& grid, const std::filesystem::path& base) {
  reject_unknown_keys(j, {"cosine", "constant", "csv", "scale"}, "weight");
  const std::string kind = pick_kind(j, {"cosine", "constant", "csv"}, "weight");
  const double scale = j.contains("scale") ? get_number(j.at("scale"), "weight.scale") : 1.0;
  GridFunction g = GridFunction::zero(grid);
  if (kind == "cosine") {
    const double idx = get_number(j.at("cosine"), "weight.cosine");
    if (!(idx >= 1) || idx != std::floor(idx)) throw ConfigError("weight.cosine: index must be an integer >= 1");
    g = cosine_basis(static_cast<std::size_t>(idx), grid, true);
  } else if (kind == "constant") {
    g = GridFunction::constant(grid, get_number(j.at("constant"), "weight.constant"));
  } else {
    if (!j.at("csv").is_string()) throw ConfigError("weight.csv: expected a path");
    const std::filesystem::path p = base / j.at("csv").get<std::string>();
    std::ifstream in(p);
    if (!in) throw ConfigError("weight.csv: cannot open " + p.string());
    try {
      g = read_csv(in);
    } catch (const std::exception& e) {
      throw ConfigError("weight.csv: " + std::string(e.what()));
    }
    if (!(g.grid() == grid)) throw ConfigError("weight.csv: grid does not match the run grid");
  }
  return scale == 1.0 ? g : scale * g;
}

HSeq parse_hseq(const json& j, const TimeGrid& grid, const std::filesystem::path& base) {
  if (!j.is_array()) throw ConfigError("sequence: expected an array of weights");
  HSeq out;
  for (const auto& w : j) out.items.push_back(parse_weight(w, grid, base));
  return out;
}

OrthogonalFamily parse_family(const json& j, const TimeGrid& grid, const std::filesystem::path& base) {
  if (!j.is_array() || j.empty()) throw ConfigError("family: expected a nonempty array of atoms");
  std::vector<GridFunction> atoms;
  for (const auto& a : j) atoms.push_back(parse_weight(a, grid, base));
  try {
    return OrthogonalFamily(std::move(atoms));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("family: ") + e.what());
  }
}

GaussPolyFactor parse_factor(const json& j) {
  reject_unknown_keys(j, {"coeffs", "a", "b"}, "factor");
  GaussPolyFactor g;
  const json& c = require(j, "coeffs", "factor");
  if (!c.is_array() || c.empty()) throw ConfigError("factor.coeffs: expected a nonempty array");
  g.coeffs.clear();
  for (const auto& x : c) g.coeffs.push_back(parse_complex(x));
  g.a = parse_complex(require(j, "a", "factor"));
  if (j.contains("b")) g.b = parse_complex(j.at("b"));
  return g;
}

CylinderFunctional parse_functional(const json& j, const TimeGrid& grid, const std::filesystem::path& base) {
  reject_unknown_keys(j, {"family", "f", "label"}, "functional");
  OrthogonalFamily family = parse_family(require(j, "family", "functional"), grid, base);
  const json& fj = require(j, "f", "functional");
  if (!fj.is_object() || fj.size() != 1) throw ConfigError("functional.f: expected exactly one kind");
  const std::string kind = pick_kind(fj, {"pgp", "expi", "cos", "indicator"}, "functional.f");
  std::variant<ProductGaussPoly, BlackBoxF> f;
  if (kind == "pgp") {
    const json& desc = fj.at("pgp");
    reject_unknown_keys(desc, {"factors"}, "f.pgp");
    const json& factors = require(desc, "factors", "f.pgp");
    if (!factors.is_array()) throw ConfigError("f.pgp.factors: expected an array");
    ProductGaussPoly p;
    for (const auto& x : factors) p.factors.push_back(parse_factor(x));
    f = std::move(p);
  } else {
    f = black_box(fj.at(kind), kind, family.size());
  }
  try {
    return CylinderFunctional(std::move(family), std::move(f));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("functional: ") + e.what());
  }
}

json functional_to_json(const CylinderFunctional& F) {
  json factors = json::array();
  for (const auto& g : F.pgp().factors) {
    json coeffs = json::array();
    for (cplx c : g.coeffs) coeffs.push_back(complex_to_json(c));
    factors.push_back({{"coeffs", coeffs}, {"a", complex_to_json(g.a)}, {"b", complex_to_json(g.b)}});
  }
  json gram = json::array();
  for (double x : F.family.gram()) gram.push_back(x);
  return {{"f", {{"pgp", {{"factors", factors}}}}}, {"family_gram", gram}};
}

GroupWord parse_word(const json& j) {
  if (!j.is_array()) throw ConfigError("word: expected an array of letters");
  GroupWord w;
  for (const auto& l : j) {
    reject_unknown_keys(l, {"sign", "class_ref"}, "word letter");
    const double s = get_number(require(l, "sign", "word letter"), "word letter.sign");
    const double c = get_number(require(l, "class_ref", "word letter"), "word letter.class_ref");
    if (s != 1.0 && s != -1.0) throw ConfigError("word letter.sign: must be +1 or -1");
    if (!(c >= 0) || c != std::floor(c)) throw ConfigError("word letter.class_ref: nonnegative integer required");
    w.letters.push_back({static_cast<int>(s), static_cast<std::size_t>(c)});
  }
  return w;
}

json word_to_json(const GroupWord& w) {
  json out = json::array();
  for (const Letter& l : w.letters) out.push_back({{"sign", l.sign}, {"class_ref", l.cls}});
  return out;
}

}  // namespace gaussfft
