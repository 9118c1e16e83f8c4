// gaussfft: run verification suites and apply transforms from JSON configs.
//
//   gaussfft run --config default.json --out results
//   gaussfft verify rotation --config default.json --parallel 4
//   gaussfft transform apply --config apply.json --out psi.json

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gaussfft/errors.hpp"
#include "gaussfft/config_io.hpp"
#include "gaussfft/suites.hpp"
#include "gaussfft/transform.hpp"

namespace {

using gaussfft::ConfigError;
using gaussfft::json;

struct SuiteFlags {
  std::string config;
  std::string suite;
  std::optional<std::uint64_t> seed;
  std::string out = "gaussfft_out";
  unsigned parallel = 1;
};

void add_suite_flags(CLI::App* cmd, SuiteFlags& f, bool with_suite) {
  cmd->add_option("--config", f.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  if (with_suite) cmd->add_option("--suite", f.suite, "rotation, transform, algebra or all");
  cmd->add_option("--seed", f.seed, "Overrides the config seed and GFFT_SEED");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--parallel", f.parallel, "Monte Carlo worker threads")->check(CLI::PositiveNumber);
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("GFFT_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos, 10);
    if (pos != std::string(s).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("GFFT_SEED must be an unsigned integer");
  }
}

int run_suites(const SuiteFlags& f, const std::string& suite) {
  const auto cfg = gaussfft::RunConfig::load(f.config);
  gaussfft::RunOptions opts;
  opts.out_dir = f.out;
  opts.workers = f.parallel;
  if (!suite.empty()) opts.suite = suite;
  opts.seed = f.seed ? f.seed : env_seed();
  const auto result = gaussfft::run(cfg, opts);
  std::size_t failed = 0;
  for (const auto& r : result.rows) failed += r.pass ? 0 : 1;
  std::cout << result.rows.size() - failed << "/" << result.rows.size() << " rows pass; reports in " << f.out << "\n";
  return result.status;
}

int transform_apply(const std::string& path, const std::string& out_path) {
  std::ifstream in(path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  gaussfft::reject_unknown_keys(j,
                                {"T", "N", "functional", "q", "h", "mode", "lambda", "n", "seed", "eps",
                                 "r_half_width", "r_points"},
                                "transform apply");
  auto num = [&](const char* k, double d) {
    if (!j.contains(k)) return d;
    if (!j.at(k).is_number()) throw ConfigError(std::string("transform apply: ") + k + " must be a number");
    return j.at(k).get<double>();
  };
  const double T = num("T", 1.0);
  const double N = num("N", 1024);
  if (!(T > 0) || !(N >= 2) || N != static_cast<double>(static_cast<std::size_t>(N))) {
    throw ConfigError("transform apply: T > 0 and integer N >= 2 required");
  }
  const gaussfft::TimeGrid grid(T, static_cast<std::size_t>(N));
  const auto base = std::filesystem::path(path).parent_path();
  if (!j.contains("functional") || !j.contains("h")) throw ConfigError("transform apply: functional and h required");
  const auto F = gaussfft::parse_functional(j.at("functional"), grid, base);
  const auto h = gaussfft::parse_weight(j.at("h"), grid, base);
  const std::string mode = j.value("mode", std::string("closed"));

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + out_path);
  }
  std::ostream& out = out_path.empty() ? std::cout : file;

  if (mode == "mc") {
    const double lambda = num("lambda", 1.0);
    if (!(lambda > 0)) throw ConfigError("transform apply: lambda must be positive");
    const double n = num("n", 100000);
    if (!(n >= 2)) throw ConfigError("transform apply: n must be at least 2");
    if (j.contains("seed") && !j.at("seed").is_number_unsigned()) {
      throw ConfigError("transform apply: seed must be an unsigned integer");
    }
    const std::uint64_t seed = j.value("seed", std::uint64_t{0});
    const auto est = gaussfft::t_lambda_mc(F, lambda, h, gaussfft::WienerPath::zero(grid),
                                           static_cast<std::size_t>(n), gaussfft::RngStream{seed, 0});
    out << json{{"lambda", lambda},
                {"estimate", {est.re.mean, est.im.mean}},
                {"stderr", {est.re.stderr_, est.im.stderr_}},
                {"n", est.re.n}}
                   .dump(2)
        << "\n";
    return 0;
  }
  const double q = num("q", 0.0);
  if (q == 0.0) throw ConfigError("transform apply: nonzero q required");
  if (mode == "closed") {
    if (!F.closed_form()) throw ConfigError("transform apply: closed mode needs a pgp functional");
    out << gaussfft::functional_to_json(gaussfft::gfft(F, q, h)).dump(2) << "\n";
    return 0;
  }
  if (mode == "quadrature") {
    gaussfft::GeneralOptions go;
    if (j.contains("eps")) go.eps = j.at("eps").get<std::vector<double>>();
    go.r_half_width = num("r_half_width", go.r_half_width);
    go.r_points = static_cast<std::size_t>(num("r_points", static_cast<double>(go.r_points)));
    const auto s = gaussfft::gfft_general(F, q, h, go);
    for (std::size_t k = 0; k < s.arity; ++k) out << "r" << k + 1 << ",";
    out << "re,im\n";
    std::vector<std::size_t> idx(s.arity, 0);
    for (std::size_t flat = 0; flat < s.values.size(); ++flat) {
      std::size_t rest = flat;
      for (std::size_t k = s.arity; k-- > 0;) {
        idx[k] = rest % s.axis.size();
        rest /= s.axis.size();
      }
      for (std::size_t k = 0; k < s.arity; ++k) out << gaussfft::format_number(s.axis[idx[k]]) << ",";
      out << gaussfft::format_number(s.values[flat].real()) << "," << gaussfft::format_number(s.values[flat].imag())
          << "\n";
    }
    return 0;
  }
  throw ConfigError("transform apply: mode must be closed, quadrature or mc");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian Fourier-Feynman transform verification"};
  app.require_subcommand(1);

  SuiteFlags run_flags;
  auto* run = app.add_subcommand("run", "Run the configured suites");
  add_suite_flags(run, run_flags, true);

  SuiteFlags verify_flags;
  auto* verify = app.add_subcommand("verify", "Run one suite");
  verify->require_subcommand(1);
  std::string verify_suite;
  for (const char* s : {"rotation", "transform", "algebra"}) {
    auto* sub = verify->add_subcommand(s, std::string("Run the ") + s + " suite");
    add_suite_flags(sub, verify_flags, false);
    sub->callback([&verify_suite, s] { verify_suite = s; });
  }

  auto* transform = app.add_subcommand("transform", "Transform operations");
  transform->require_subcommand(1);
  auto* apply = transform->add_subcommand("apply", "Apply the transform to one functional");
  std::string apply_config, apply_out;
  apply->add_option("--config", apply_config, "JSON with functional, q, h, mode")->required()->check(CLI::ExistingFile);
  apply->add_option("--out", apply_out, "Output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*run) return run_suites(run_flags, run_flags.suite);
    if (*verify) return run_suites(verify_flags, verify_suite);
    return transform_apply(apply_config, apply_out);
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const gaussfft::MembershipError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
