#include "gaussfft/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gaussfft/errors.hpp"
#include "gaussfft/simd.hpp"

namespace gaussfft {

TimeGrid::TimeGrid(double horizon, std::size_t intervals) : horizon_(horizon), intervals_(intervals) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("TimeGrid: horizon must be positive and finite");
  }
  if (intervals < 2) throw std::invalid_argument("TimeGrid: need at least 2 intervals");
}

void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* op) {
  if (!(a == b)) {
    std::ostringstream msg;
    msg << op << ": grid mismatch (T=" << a.horizon() << ", N=" << a.intervals() << " vs T=" << b.horizon()
        << ", N=" << b.intervals() << ")";
    throw GridMismatch(msg.str());
  }
}

GridFunction::GridFunction(TimeGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.nodes()) {
    throw std::invalid_argument("GridFunction: expected " + std::to_string(grid_.nodes()) + " values, got " +
                                std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite value");
  }
}

GridFunction GridFunction::constant(const TimeGrid& grid, double c) {
  return GridFunction(grid, std::vector<double>(grid.nodes(), c));
}

GridFunction GridFunction::sample(const TimeGrid& grid, const std::function<double(double)>& fn) {
  std::vector<double> v(grid.nodes());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(grid.node(k));
  return GridFunction(grid, std::move(v));
}

GridFunction GridFunction::operator-() const {
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), [](double x) { return -x; });
  return GridFunction(grid_, std::move(v));
}

GridFunction operator*(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f.grid_, g.grid_, "multiply");
  std::vector<double> v(f.size());
  simd::active().mul(v.data(), f.values_.data(), g.values_.data(), v.size());
  return GridFunction(f.grid_, std::move(v));
}

GridFunction operator*(double c, const GridFunction& f) {
  std::vector<double> v(f.size());
  simd::active().scale(v.data(), f.values_.data(), c, v.size());
  return GridFunction(f.grid_, std::move(v));
}

GridFunction operator+(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f.grid_, g.grid_, "add");
  std::vector<double> v(f.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = f.values_[k] + g.values_[k];
  return GridFunction(f.grid_, std::move(v));
}

GridFunction operator-(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f.grid_, g.grid_, "subtract");
  std::vector<double> v(f.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = f.values_[k] - g.values_[k];
  return GridFunction(f.grid_, std::move(v));
}

bool GridFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x == 0.0; });
}

double max_abs_diff(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f.grid(), g.grid(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) m = std::max(m, std::fabs(f[k] - g[k]));
  return m;
}

double inner_product(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f.grid(), g.grid(), "inner_product");
  const auto a = f.values();
  const auto b = g.values();
  const std::size_t last = a.size() - 1;
  const double interior = simd::active().dot(a.data(), b.data(), a.size());
  return f.grid().dt() * (interior - 0.5 * (a[0] * b[0] + a[last] * b[last]));
}

double l2_norm(const GridFunction& f) { return std::sqrt(std::max(0.0, inner_product(f, f))); }

std::vector<double> beta_nodes(const GridFunction& h) {
  const auto v = h.values();
  const double half_dt = 0.5 * h.grid().dt();
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t k = 1; k < v.size(); ++k) {
    out[k] = out[k - 1] + half_dt * (v[k - 1] * v[k - 1] + v[k] * v[k]);
  }
  return out;
}

double beta(const GridFunction& h, double t) {
  const TimeGrid& grid = h.grid();
  if (!(t >= 0.0 && t <= grid.horizon())) throw std::out_of_range("beta: t outside [0, T]");
  const std::vector<double> cum = beta_nodes(h);
  const double pos = t / grid.dt();
  std::size_t k = static_cast<std::size_t>(std::floor(pos));
  if (k >= grid.intervals()) return cum.back();
  const double theta = pos - static_cast<double>(k);
  if (theta == 0.0) return cum[k];
  const double g0 = h[k] * h[k];
  const double g1 = h[k + 1] * h[k + 1];
  const double gt = g0 + (g1 - g0) * theta;
  return cum[k] + 0.5 * theta * grid.dt() * (g0 + gt);
}

GridFunction s_combine(const GridFunction& h1, const GridFunction& h2) {
  require_same_grid(h1.grid(), h2.grid(), "s_combine");
  std::vector<double> v(h1.size());
  simd::active().hypot(v.data(), h1.values().data(), h2.values().data(), v.size());
  return GridFunction(h1.grid(), std::move(v));
}

std::vector<double> sum_of_squares(const HSeq& seq, const TimeGrid& grid) {
  std::vector<double> sum(grid.nodes(), 0.0);
  std::vector<double> comp(grid.nodes(), 0.0);
  for (const GridFunction& h : seq.items) {
    require_same_grid(grid, h.grid(), "s_combine_seq");
    simd::active().add_squares(sum.data(), comp.data(), h.values().data(), sum.size());
  }
  for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += comp[k];
  return sum;
}

GridFunction s_combine_seq(const HSeq& seq, const TimeGrid& grid) {
  std::vector<double> sq = sum_of_squares(seq, grid);
  for (double& x : sq) x = std::sqrt(x);
  return GridFunction(grid, std::move(sq));
}

GridFunction s_combine_seq(const HSeq& seq) {
  if (seq.empty()) throw std::invalid_argument("s_combine_seq: empty sequence needs an explicit grid");
  return s_combine_seq(seq, seq.items.front().grid());
}

HSeq wedge(const HSeq& a, const HSeq& b) {
  if (!a.empty() && !b.empty()) require_same_grid(a.items.front().grid(), b.items.front().grid(), "wedge");
  HSeq out;
  out.items.reserve(a.size() + b.size());
  out.items.insert(out.items.end(), a.items.begin(), a.items.end());
  out.items.insert(out.items.end(), b.items.begin(), b.items.end());
  return out;
}

bool s_equivalent(const HSeq& a, const HSeq& b, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("s_equivalent: tol must be positive");
  if (a.empty() && b.empty()) return true;
  const TimeGrid grid = a.empty() ? b.items.front().grid() : a.items.front().grid();
  const std::vector<double> sa = sum_of_squares(a, grid);
  const std::vector<double> sb = sum_of_squares(b, grid);
  for (std::size_t k = 0; k < sa.size(); ++k) {
    if (std::fabs(sa[k] - sb[k]) > tol) return false;
  }
  return true;
}

void write_csv(std::ostream& out, const GridFunction& f) {
  out << "t,value\n";
  out << std::setprecision(17);
  for (std::size_t k = 0; k < f.size(); ++k) out << f.grid().node(k) << ',' << f[k] << '\n';
}

namespace {

double parse_double(std::string_view s) {
  double v = 0.0;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("read_csv: bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

GridFunction read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("read_csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,value") throw std::invalid_argument("read_csv: expected header 't,value'");
  std::vector<double> ts, vs;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("read_csv: missing comma");
    ts.push_back(parse_double(std::string_view(line).substr(0, comma)));
    vs.push_back(parse_double(std::string_view(line).substr(comma + 1)));
  }
  if (ts.size() < 3) throw std::invalid_argument("read_csv: need at least 3 nodes");
  if (ts.front() != 0.0) throw std::invalid_argument("read_csv: first node must be t=0");
  const TimeGrid grid(ts.back(), ts.size() - 1);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (std::fabs(ts[k] - grid.node(k)) > 1e-9 * grid.horizon()) {
      throw std::invalid_argument("read_csv: nodes are not uniformly spaced");
    }
  }
  return GridFunction(grid, std::move(vs));
}

}  // namespace gaussfft
