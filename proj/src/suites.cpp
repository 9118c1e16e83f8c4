#include "gaussfft/suites.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>

#include "gaussfft/algebra.hpp"
#include "gaussfft/errors.hpp"
#include "gaussfft/rotation.hpp"
#include "gaussfft/config_io.hpp"
#include "gaussfft/transform.hpp"

namespace gaussfft {
namespace {

constexpr double kZLimit = 3.0;

std::string str_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_string()) throw ConfigError(where + ": \"" + key + "\" must be a string");
  return j.at(key).get<std::string>();
}

double num_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number()) throw ConfigError(where + ": \"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

double num_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? num_field(j, key, where) : fallback;
}

std::size_t count_or(const json& j, const char* key, std::size_t fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ConfigError(where + ": \"" + key + "\" must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

double nonzero_q(const json& j, const std::string& where) {
  const double q = num_field(j, "q", where);
  if (q == 0.0 || !std::isfinite(q)) throw ConfigError(where + ": q must be nonzero and finite");
  return q;
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

std::string label_of(const json& fj, std::size_t index) {
  if (fj.is_object() && fj.contains("label") && fj.at("label").is_string()) return fj.at("label").get<std::string>();
  return "f" + std::to_string(index);
}

std::vector<CylinderFunctional> parse_functionals(const json& arr, const TimeGrid& grid,
                                                  const std::filesystem::path& base, std::vector<std::string>& labels,
                                                  const std::string& where) {
  if (!arr.is_array() || arr.empty()) throw ConfigError(where + ": \"functionals\" must be a nonempty array");
  std::vector<CylinderFunctional> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(parse_functional(arr[i], grid, base));
    labels.push_back(label_of(arr[i], i));
  }
  return out;
}

CylinderFunctional closed_form_functional(const json& j, const TimeGrid& grid, const std::filesystem::path& base,
                                          const std::string& where) {
  CylinderFunctional F = parse_functional(field(j, "functional", where), grid, base);
  if (!F.closed_form()) throw ConfigError(where + ": this check needs a pgp functional");
  return F;
}

void require_member(const CylinderFunctional& F, const GridFunction& h, bool normalized, const std::string& where) {
  const bool ok = normalized ? in_O_inf_n(F.family, h) : in_O_inf(F.family, h);
  if (!ok) throw ConfigError(where + (normalized ? ": weight is not in O_inf^n of the family"
                                                 : ": weight is not in O_inf of the family"));
}

struct Writer {
  std::vector<ReportRow> report;
  std::vector<std::string> rotation_csv;
  std::vector<std::string> transform_csv;
  std::vector<std::string> algebra_csv;
};

// Parsed case with its deferred computation.
struct Case {
  std::string suite;
  std::function<void(Writer&, unsigned workers)> exec;
};

std::string yes_no(bool b) { return b ? "true" : "false"; }

void add_rotation_row(Writer& w, const std::string& id, const MCEstimate& a, const MCEstimate& b) {
  const double z = zscore(a, b);
  const bool pass = std::fabs(z) <= kZLimit;
  w.rotation_csv.push_back(id + "," + format_number(a.mean) + "," + format_number(a.stderr_) + "," +
                           format_number(b.mean) + "," + format_number(b.stderr_) + "," + format_number(z) + "," +
                           yes_no(pass));
  w.report.push_back({"rotation", id, "abs_zscore", std::fabs(z), kZLimit, pass});
}

void add_transform_row(Writer& w, const std::string& id, const std::string& check, double residual, double tol) {
  const bool pass = residual <= tol;
  w.transform_csv.push_back(id + "," + check + "," + format_number(residual) + "," + format_number(tol) + "," +
                            yes_no(pass));
  w.report.push_back({"transform", id, check, residual, tol, pass});
}

void add_law_rows(Writer& w, const std::string& id, const std::vector<LawCheck>& rows) {
  // Per-sample rows go to algebra.csv; report.csv keeps the worst per law.
  std::map<std::string, std::pair<double, bool>> worst;
  std::vector<std::string> order;
  for (const auto& r : rows) {
    w.algebra_csv.push_back(id + "/" + r.law + "," + std::to_string(r.sample_id) + "," + format_number(r.residual) +
                            "," + yes_no(r.pass));
    auto it = worst.find(r.law);
    if (it == worst.end()) {
      worst[r.law] = {r.residual, r.pass};
      order.push_back(r.law);
    } else {
      it->second.first = std::max(it->second.first, r.residual);
      it->second.second = it->second.second && r.pass;
    }
  }
  for (const auto& law : order) {
    const auto& [res, pass] = worst[law];
    w.report.push_back({"algebra", id + "/" + law, "max_residual", res, std::numeric_limits<double>::quiet_NaN(), pass});
  }
}

Case rotation_case(const json& j, std::size_t index, const RunConfig& cfg, const TimeGrid& grid,
                   const RngStream& rng) {
  const std::string where = "rotation[" + std::to_string(index) + "]";
  reject_unknown_keys(j, {"id", "functionals", "h1", "h2", "H", "extra", "n"}, where);
  const std::string id = str_field(j, "id", where);
  auto labels = std::make_shared<std::vector<std::string>>();
  auto fs = std::make_shared<std::vector<CylinderFunctional>>(
      parse_functionals(field(j, "functionals", where), grid, cfg.base_dir, *labels, where));
  const std::size_t n = count_or(j, "n", cfg.n, where);
  if (n < 2) throw ConfigError(where + ": n must be at least 2");
  const RngStream stream = rng.child(index);
  if (j.contains("H")) {
    if (j.contains("h1") || j.contains("h2")) throw ConfigError(where + ": use either h1/h2 or H/extra");
    HSeq H = parse_hseq(j.at("H"), grid, cfg.base_dir);
    if (H.empty()) throw ConfigError(where + ": H must be nonempty");
    GridFunction extra = parse_weight(field(j, "extra", where), grid, cfg.base_dir);
    return {"rotation", [=](Writer& w, unsigned workers) {
              const auto r = verify_rotation_seq_batch(*fs, H, extra, n, stream, McOptions{workers, 4096});
              for (std::size_t i = 0; i < r.size(); ++i) {
                const std::string base = id + "/" + (*labels)[i];
                add_rotation_row(w, base + "/sum-vs-split", r[i].sum_paths, r[i].s_plus_extra);
                add_rotation_row(w, base + "/sum-vs-single", r[i].sum_paths, r[i].single);
                add_rotation_row(w, base + "/split-vs-single", r[i].s_plus_extra, r[i].single);
              }
            }};
  }
  GridFunction h1 = parse_weight(field(j, "h1", where), grid, cfg.base_dir);
  GridFunction h2 = parse_weight(field(j, "h2", where), grid, cfg.base_dir);
  return {"rotation", [=](Writer& w, unsigned workers) {
            const auto r = verify_rotation2_batch(*fs, h1, h2, n, stream, McOptions{workers, 4096});
            for (std::size_t i = 0; i < r.size(); ++i) {
              add_rotation_row(w, id + "/" + (*labels)[i], r[i].two_path, r[i].one_path);
            }
          }};
}

Case transform_case(const json& j, std::size_t index, const RunConfig& cfg, const TimeGrid& grid,
                    const RngStream& rng) {
  const std::string where = "transform[" + std::to_string(index) + "]";
  const std::string check = str_field(j, "check", where);
  const std::string id = str_field(j, "id", where);
  const auto& base = cfg.base_dir;
  auto tol_or = [&](double d) { return num_or(j, "tol", d, where); };

  if (check == "inverse") {
    reject_unknown_keys(j, {"id", "check", "functional", "q", "h", "tol"}, where);
    auto F = closed_form_functional(j, grid, base, where);
    const double q = nonzero_q(j, where);
    auto h = parse_weight(field(j, "h", where), grid, base);
    if (!h.is_zero()) require_member(F, h, false, where);
    const double tol = tol_or(1e-9);
    return {"transform", [=](Writer& w, unsigned) {
              const auto back = gfft(gfft(F, q, h), -q, h);
              add_transform_row(w, id, check, coefficient_distance(back.pgp(), F.pgp()), tol);
            }};
  }
  if (check == "compose" || check == "compose_seq" || check == "compose_wedge") {
    reject_unknown_keys(j, {"id", "check", "functional", "q", "h1", "h2", "H", "H1", "H2", "tol"}, where);
    auto F = closed_form_functional(j, grid, base, where);
    const double q = nonzero_q(j, where);
    const double tol = tol_or(1e-8);
    HSeq H1, H2;
    if (check == "compose") {
      H1.items.push_back(parse_weight(field(j, "h1", where), grid, base));
      H1.items.push_back(parse_weight(field(j, "h2", where), grid, base));
    } else if (check == "compose_seq") {
      H1 = parse_hseq(field(j, "H", where), grid, base);
      if (H1.empty()) throw ConfigError(where + ": H must be nonempty");
    } else {
      H1 = parse_hseq(field(j, "H1", where), grid, base);
      H2 = parse_hseq(field(j, "H2", where), grid, base);
      if (H1.empty() || H2.empty()) throw ConfigError(where + ": H1 and H2 must be nonempty");
    }
    for (const auto& h : wedge(H1, H2).items) require_member(F, h, false, where);
    require_member(F, s_combine_seq(wedge(H1, H2), grid), false, where);
    return {"transform", [=](Writer& w, unsigned) {
              double d = 0.0;
              if (check == "compose") {
                d = compose_check(F, q, H1.items[0], H1.items[1]);
              } else if (check == "compose_seq") {
                d = compose_check_seq(F, q, H1);
              } else {
                d = compose_check_wedge(F, q, H1, H2);
              }
              const double scale = a2_norm(gfft(F, q, s_combine_seq(wedge(H1, H2), grid)));
              add_transform_row(w, id, check, d / scale, tol);
            }};
  }
  if (check == "plancherel") {
    reject_unknown_keys(j, {"id", "check", "functional", "q", "h", "tol"}, where);
    auto F = closed_form_functional(j, grid, base, where);
    const double q = nonzero_q(j, where);
    auto h = parse_weight(field(j, "h", where), grid, base);
    require_member(F, h, true, where);
    const double tol = tol_or(1e-8);
    return {"transform", [=](Writer& w, unsigned) {
              const auto [nf, nt] = plancherel_check(F, q, h);
              add_transform_row(w, id, check, std::fabs(nt / nf - 1.0), tol);
            }};
  }
  if (check == "plancherel_quadrature") {
    reject_unknown_keys(j, {"id", "check", "functional", "q", "h", "tol", "eps", "r_half_width", "r_points"}, where);
    auto F = parse_functional(field(j, "functional", where), grid, base);
    const double q = nonzero_q(j, where);
    auto h = parse_weight(field(j, "h", where), grid, base);
    require_member(F, h, true, where);
    GeneralOptions go;
    if (j.contains("eps")) {
      go.eps.clear();
      for (const auto& e : j.at("eps")) {
        if (!e.is_number() || !(e.get<double>() > 0)) throw ConfigError(where + ": eps entries must be positive");
        go.eps.push_back(e.get<double>());
      }
      if (go.eps.size() < 2 || !std::is_sorted(go.eps.rbegin(), go.eps.rend())) {
        throw ConfigError(where + ": eps must hold at least two decreasing values");
      }
    }
    go.r_half_width = num_or(j, "r_half_width", go.r_half_width, where);
    go.r_points = count_or(j, "r_points", go.r_points, where);
    go.throw_on_failure = false;
    const double tol = tol_or(1e-2);
    return {"transform", [=](Writer& w, unsigned) {
              const SampledTransform s = gfft_general(F, q, h, go);
              const double ratio = s.l2_norm() / a2_norm(F);
              add_transform_row(w, id, check, std::fabs(ratio - 1.0), tol);
              const double last = s.l2_steps.empty() ? std::numeric_limits<double>::infinity() : s.l2_steps.back();
              add_transform_row(w, id, "eps_convergence", last, go.tol);
            }};
  }
  if (check == "mc") {
    reject_unknown_keys(j, {"id", "check", "functionals", "lambda", "h", "n", "path_slope"}, where);
    auto labels = std::make_shared<std::vector<std::string>>();
    auto fs = std::make_shared<std::vector<CylinderFunctional>>(
        parse_functionals(field(j, "functionals", where), grid, base, *labels, where));
    for (const auto& F : *fs) {
      if (!F.closed_form()) throw ConfigError(where + ": mc check needs pgp functionals");
    }
    const double lambda = num_field(j, "lambda", where);
    if (!(lambda > 0) || !std::isfinite(lambda)) throw ConfigError(where + ": lambda must be positive");
    auto h = parse_weight(field(j, "h", where), grid, base);
    for (const auto& F : *fs) require_member(F, h, false, where);
    const std::size_t n = count_or(j, "n", cfg.n, where);
    if (n < 2) throw ConfigError(where + ": n must be at least 2");
    const double slope = num_or(j, "path_slope", 0.0, where);
    const GridFunction line = GridFunction::sample(grid, [slope](double t) { return slope * t; });
    const WienerPath y(grid, std::vector<double>(line.values().begin(), line.values().end()));
    const RngStream stream = rng.child(index);
    return {"transform", [=](Writer& w, unsigned workers) {
              const auto est = t_lambda_mc_batch(*fs, lambda, h, y, n, stream, McOptions{workers, 4096});
              for (std::size_t i = 0; i < fs->size(); ++i) {
                const cplx exact = eval_cylinder(t_lambda((*fs)[i], lambda, h), y);
                const MCEstimate ex_re{exact.real(), 0.0, n};
                const MCEstimate ex_im{exact.imag(), 0.0, n};
                const double z = std::max(std::fabs(zscore(est[i].re, ex_re)), std::fabs(zscore(est[i].im, ex_im)));
                add_transform_row(w, id + "/" + (*labels)[i], "mc_abs_zscore", z, kZLimit);
              }
            }};
  }
  throw ConfigError(where + ": unknown check \"" + check + "\"");
}

Case algebra_case(const json& j, std::size_t index, const RunConfig& cfg, const TimeGrid& grid,
                  const RngStream& rng) {
  const std::string where = "algebra[" + std::to_string(index) + "]";
  const std::string law = str_field(j, "law", where);
  const std::string id = str_field(j, "id", where);
  const auto& base = cfg.base_dir;
  const RngStream stream = rng.child(index);

  if (law == "q_group") {
    reject_unknown_keys(j, {"id", "law", "samples", "functional", "h", "action_samples", "tol"}, where);
    const std::size_t samples = count_or(j, "samples", 1000, where);
    if (samples == 0) throw ConfigError(where + ": samples must be positive");
    std::shared_ptr<CylinderFunctional> F;
    std::shared_ptr<GridFunction> h;
    if (j.contains("functional")) {
      F = std::make_shared<CylinderFunctional>(closed_form_functional(j, grid, base, where));
      h = std::make_shared<GridFunction>(parse_weight(field(j, "h", where), grid, base));
      require_member(*F, *h, false, where);
    }
    const std::size_t action = std::min(count_or(j, "action_samples", 50, where), samples);
    const double tol = num_or(j, "tol", 1e-8, where);
    return {"algebra", [=](Writer& w, unsigned) {
              const auto sample = random_q_sample(samples, stream);
              add_law_rows(w, id, q_group_laws(sample));
              if (F) {
                add_law_rows(w, id, q_action_laws(std::span(sample).first(action), *F, *h, tol));
              }
            }};
  }
  if (law == "monoid") {
    reject_unknown_keys(j, {"id", "law", "generators", "q", "substitutions", "functional"}, where);
    const HSeq gens = parse_hseq(field(j, "generators", where), grid, base);
    if (gens.empty() || gens.size() > 8) throw ConfigError(where + ": between 1 and 8 generators");
    MonoidLawOptions mo;
    mo.q = j.contains("q") ? nonzero_q(j, where) : 1.0;
    mo.substitutions = count_or(j, "substitutions", mo.substitutions, where);
    std::shared_ptr<CylinderFunctional> F;
    if (j.contains("functional")) F = std::make_shared<CylinderFunctional>(closed_form_functional(j, grid, base, where));
    return {"algebra", [=](Writer& w, unsigned) { add_law_rows(w, id, monoid_laws(gens, stream, mo, F.get())); }};
  }
  if (law == "free_group") {
    reject_unknown_keys(j, {"id", "law", "generators", "q", "functional", "words", "max_length", "eval_words",
                            "eval_max_length"},
                        where);
    const HSeq gens = parse_hseq(field(j, "generators", where), grid, base);
    if (gens.empty()) throw ConfigError(where + ": generators must be nonempty");
    auto F = closed_form_functional(j, grid, base, where);
    for (const auto& g : gens.items) {
      if (!g.is_zero()) require_member(F, MonoidElem::of(g).rep, false, where);
    }
    FreeGroupOptions fo;
    fo.q = j.contains("q") ? nonzero_q(j, where) : 1.0;
    fo.words = count_or(j, "words", fo.words, where);
    fo.max_length = count_or(j, "max_length", fo.max_length, where);
    fo.eval_words = count_or(j, "eval_words", fo.eval_words, where);
    fo.eval_max_length = count_or(j, "eval_max_length", fo.eval_max_length, where);
    return {"algebra", [=](Writer& w, unsigned) { add_law_rows(w, id, free_group_laws(gens, F, stream, fo)); }};
  }
  throw ConfigError(where + ": unknown law \"" + law + "\"");
}

void write_lines(const std::filesystem::path& p, const std::string& header, const std::vector<std::string>& lines) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << header << '\n';
  for (const auto& l : lines) out << l << '\n';
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

RunConfig RunConfig::from_json(const json& j, const std::filesystem::path& base_dir) {
  reject_unknown_keys(j, {"suite", "T", "N", "n", "seed", "rotation", "transform", "algebra"}, "config");
  RunConfig c;
  c.base_dir = base_dir;
  if (j.contains("suite")) c.suite = str_field(j, "suite", "config");
  if (c.suite != "rotation" && c.suite != "transform" && c.suite != "algebra" && c.suite != "all") {
    throw ConfigError("config: suite must be rotation, transform, algebra or all");
  }
  c.T = num_or(j, "T", c.T, "config");
  if (!(c.T > 0) || !std::isfinite(c.T)) throw ConfigError("config: T must be positive");
  c.N = count_or(j, "N", c.N, "config");
  if (c.N < 2) throw ConfigError("config: N must be at least 2");
  c.n = count_or(j, "n", c.n, "config");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("config: seed must be an unsigned integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  for (const char* key : {"rotation", "transform", "algebra"}) {
    if (!j.contains(key)) continue;
    if (!j.at(key).is_array()) throw ConfigError(std::string("config: \"") + key + "\" must be an array");
  }
  if (j.contains("rotation")) c.rotation = j.at("rotation");
  if (j.contains("transform")) c.transform = j.at("transform");
  if (j.contains("algebra")) c.algebra = j.at("algebra");
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

RunResult run(const RunConfig& config, const RunOptions& opts) {
  const std::string suite = opts.suite.value_or(config.suite);
  if (suite != "rotation" && suite != "transform" && suite != "algebra" && suite != "all") {
    throw ConfigError("suite must be rotation, transform, algebra or all");
  }
  const std::uint64_t seed = opts.seed.value_or(config.seed);
  const TimeGrid grid(config.T, config.N);
  const RngStream root{seed, 0};

  // Parse and validate everything before computing.
  std::vector<Case> cases;
  auto selected = [&](const char* s) { return suite == "all" || suite == s; };
  try {
    if (selected("rotation")) {
      for (std::size_t i = 0; i < config.rotation.size(); ++i) {
        cases.push_back(rotation_case(config.rotation[i], i, config, grid, root.child(1)));
      }
    }
    if (selected("transform")) {
      for (std::size_t i = 0; i < config.transform.size(); ++i) {
        cases.push_back(transform_case(config.transform[i], i, config, grid, root.child(2)));
      }
    }
    if (selected("algebra")) {
      for (std::size_t i = 0; i < config.algebra.size(); ++i) {
        cases.push_back(algebra_case(config.algebra[i], i, config, grid, root.child(3)));
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  Writer w;
  for (const auto& c : cases) c.exec(w, std::max(1u, opts.workers));

  RunResult result;
  result.rows = w.report;
  result.status = std::all_of(w.report.begin(), w.report.end(), [](const ReportRow& r) { return r.pass; }) ? 0 : 1;

  if (!opts.out_dir.empty()) {
    std::filesystem::create_directories(opts.out_dir);
    std::vector<std::string> lines;
    for (const auto& r : w.report) {
      lines.push_back(r.suite + "," + r.case_id + "," + r.metric + "," + format_number(r.value) + "," +
                      format_number(r.tolerance) + "," + yes_no(r.pass));
    }
    write_lines(opts.out_dir / "report.csv", "suite,case,metric,value,tolerance,pass", lines);
    if (selected("rotation")) {
      write_lines(opts.out_dir / "rotation.csv", "case,estimate_a,stderr_a,estimate_b,stderr_b,zscore,pass",
                  w.rotation_csv);
    }
    if (selected("transform")) {
      write_lines(opts.out_dir / "transform.csv", "case,check,residual,tolerance,pass", w.transform_csv);
    }
    if (selected("algebra")) write_lines(opts.out_dir / "algebra.csv", "law,sample_id,residual,pass", w.algebra_csv);

    std::ofstream sum(opts.out_dir / "summary.txt", std::ios::binary);
    sum << "seed " << seed << ", suite " << suite << ", T " << format_number(config.T) << ", N " << config.N << '\n';
    for (const char* s : {"rotation", "transform", "algebra"}) {
      if (!selected(s)) continue;
      std::size_t total = 0, passed = 0;
      for (const auto& r : w.report) {
        if (r.suite != s) continue;
        ++total;
        passed += r.pass ? 1 : 0;
      }
      sum << s << ": " << passed << "/" << total << " rows pass\n";
    }
    for (const auto& r : w.report) {
      if (!r.pass) sum << "FAIL " << r.suite << " " << r.case_id << " " << r.metric << " = " << format_number(r.value)
                       << " (tolerance " << format_number(r.tolerance) << ")\n";
    }
    sum << (result.status == 0 ? "all rows pass\n" : "some rows fail\n");
  }
  return result;
}

}  // namespace gaussfft
