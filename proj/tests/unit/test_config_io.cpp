#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "gaussfft/errors.hpp"
#include "gaussfft/config_io.hpp"

using namespace gaussfft;

namespace {
const TimeGrid grid(1.0, 64);
}

TEST_CASE("complex values and weights") {
  CHECK(parse_complex(json(2.5)) == cplx(2.5, 0.0));
  CHECK(parse_complex(json::parse("[1, -2]")) == cplx(1.0, -2.0));
  CHECK_THROWS_AS(parse_complex(json::parse("[1]")), ConfigError);
  CHECK_THROWS_AS(parse_complex(json("x")), ConfigError);
  CHECK(parse_complex(complex_to_json(cplx(0.1, 0.3))) == cplx(0.1, 0.3));

  const auto c = parse_weight(json::parse(R"({"constant": 2, "scale": -0.5})"), grid);
  CHECK(c[3] == -1.0);
  const auto e = parse_weight(json::parse(R"({"cosine": 2})"), grid);
  CHECK(max_abs_diff(e, cosine_basis(2, grid, true)) == 0.0);
  CHECK_THROWS_AS(parse_weight(json::parse(R"({"cosine": 0})"), grid), ConfigError);
  CHECK_THROWS_AS(parse_weight(json::parse(R"({"cosine": 1.5})"), grid), ConfigError);
  CHECK_THROWS_AS(parse_weight(json::parse(R"({"cosine": 1, "constant": 1})"), grid), ConfigError);
  CHECK_THROWS_AS(parse_weight(json::parse(R"({"constant": 1, "shift": 1})"), grid), ConfigError);
  CHECK_THROWS_AS(parse_weight(json::parse(R"({})"), grid), ConfigError);
  CHECK_THROWS_AS(parse_weight(json::parse(R"({"csv": "missing.csv"})"), grid), ConfigError);

  const auto H = parse_hseq(json::parse(R"([{"constant": 1}, {"cosine": 3}])"), grid);
  CHECK(H.size() == 2);
  CHECK_THROWS_AS(parse_hseq(json::parse(R"({"constant": 1})"), grid), ConfigError);
}

TEST_CASE("weights from CSV files") {
  const auto dir = std::filesystem::temp_directory_path() / "gaussfft_config_io";
  std::filesystem::create_directories(dir);
  const auto h = GridFunction::sample(grid, [](double t) { return std::exp(-t); });
  {
    std::ofstream out(dir / "h.csv");
    write_csv(out, h);
  }
  const auto back = parse_weight(json::parse(R"({"csv": "h.csv", "scale": 2})"), grid, dir);
  CHECK(max_abs_diff(back, 2.0 * h) == 0.0);
  CHECK_THROWS_AS(parse_weight(json::parse(R"({"csv": "h.csv"})"), TimeGrid(1.0, 32), dir), ConfigError);
  {
    std::ofstream out(dir / "bad.csv");
    out << "t,value\n0,1\nfoo\n";
  }
  CHECK_THROWS_AS(parse_weight(json::parse(R"({"csv": "bad.csv"})"), grid, dir), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("families and functionals") {
  CHECK(parse_family(json::parse(R"([{"cosine": 1}, {"cosine": 2}])"), grid).size() == 2);
  CHECK_THROWS_AS(parse_family(json::parse(R"([])"), grid), ConfigError);
  CHECK_THROWS_AS(parse_family(json::parse(R"([{"cosine": 1}, {"constant": 1}])"), grid), ConfigError);

  const auto F = parse_functional(json::parse(R"({
      "family": [{"cosine": 1}],
      "f": {"pgp": {"factors": [{"coeffs": [1, [0, 0.5]], "a": [1.2, 0.1], "b": 0.3}]}},
      "label": "g"})"),
                                  grid);
  REQUIRE(F.closed_form());
  const auto& g = F.pgp().factors.at(0);
  CHECK(g.coeffs.size() == 2);
  CHECK(g.coeffs[1] == cplx(0.0, 0.5));
  CHECK(g.a == cplx(1.2, 0.1));
  CHECK(g.b == cplx(0.3, 0.0));

  const auto out = functional_to_json(F);
  const auto again = parse_functional(json{{"family", json::parse(R"([{"cosine": 1}])")}, {"f", out.at("f")}}, grid);
  CHECK(coefficient_distance(again.pgp(), F.pgp()) == 0.0);
  CHECK(out.at("family_gram").size() == 1);

  const auto E = parse_functional(
      json::parse(R"({"family": [{"cosine": 1}, {"cosine": 2}], "f": {"expi": {"w": [1, -2]}}})"), grid);
  const std::vector<double> u{0.3, 0.1};
  CHECK(std::abs(E.eval_f(u) - std::exp(cplx(0.0, 0.1))) <= 1e-15);
  const auto C = parse_functional(json::parse(R"({"family": [{"cosine": 1}], "f": {"cos": {"w": [2],
      "box": {"half_width": 3}}}})"), grid);
  CHECK(std::get<BlackBoxF>(C.f).half_width == 3.0);
  CHECK(C.eval_f(std::vector<double>{0.5}) == cplx(std::cos(1.0)));
  const auto I = parse_functional(
      json::parse(R"({"family": [{"cosine": 1}], "f": {"indicator": {"lo": [-1], "hi": [1], "box": {"panels": 16}}}})"),
      grid);
  CHECK(I.eval_f(std::vector<double>{0.5}) == cplx(1.0));
  CHECK(I.eval_f(std::vector<double>{1.5}) == cplx(0.0));
  CHECK(std::get<BlackBoxF>(I.f).panels == 16);

  const char* bad[] = {
      R"({"family": [{"cosine": 1}]})",
      R"({"family": [{"cosine": 1}], "f": {"pgp": {"factors": []}}, "extra": 1})",
      R"({"family": [{"cosine": 1}], "f": {"expi": {"w": [1, 2]}}})",
      R"({"family": [{"cosine": 1}], "f": {"indicator": {"lo": [1], "hi": [0]}}})",
      R"({"family": [{"cosine": 1}], "f": {"pgp": {"factors": [{"coeffs": [1]}]}}})",
      R"({"family": [{"cosine": 1}], "f": {"pgp": {"factors": [{"coeffs": [1], "a": 1}, {"coeffs": [1], "a": 1}]}}})",
      R"({"family": [{"cosine": 1}], "f": {"pgp": {"factors": [{"coeffs": [1], "a": -1}]}}})",
      R"({"family": [{"cosine": 1}], "f": {"expi": {"w": [1]}, "cos": {"w": [1]}}})",
      R"({"family": [{"cosine": 1}], "f": {"expi": {"w": [1], "box": {"panels": 0}}}})",
  };
  for (const char* b : bad) CHECK_THROWS_AS(parse_functional(json::parse(b), grid), ConfigError);
}

TEST_CASE("words") {
  const auto w = parse_word(json::parse(R"([{"sign": 1, "class_ref": 0}, {"sign": -1, "class_ref": 2}])"));
  CHECK(w == GroupWord{{{1, 0}, {-1, 2}}});
  CHECK(parse_word(word_to_json(w)) == w);
  CHECK_THROWS_AS(parse_word(json::parse(R"([{"sign": 2, "class_ref": 0}])")), ConfigError);
  CHECK_THROWS_AS(parse_word(json::parse(R"([{"sign": 1, "class_ref": -1}])")), ConfigError);
  CHECK_THROWS_AS(parse_word(json::parse(R"([{"sign": 1}])")), ConfigError);
  CHECK_THROWS_AS(parse_word(json::parse(R"({"sign": 1})")), ConfigError);
}
