#pragma once

// Deterministic calculus on uniformly sampled functions over [0, T]:
// trapezoid inner products, the variance function beta_h, the s-combinator
// and sequence wedge.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace gaussfft {

class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t intervals);

  double horizon() const { return horizon_; }
  std::size_t intervals() const { return intervals_; }
  std::size_t nodes() const { return intervals_ + 1; }
  double dt() const { return horizon_ / static_cast<double>(intervals_); }
  double node(std::size_t k) const { return horizon_ * static_cast<double>(k) / static_cast<double>(intervals_); }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double horizon_;
  std::size_t intervals_;
};

// Throws GridMismatch unless a == b.
void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* op);

class GridFunction {
 public:
  GridFunction(TimeGrid grid, std::vector<double> values);

  static GridFunction constant(const TimeGrid& grid, double c);
  static GridFunction zero(const TimeGrid& grid) { return constant(grid, 0.0); }
  static GridFunction sample(const TimeGrid& grid, const std::function<double(double)>& fn);

  const TimeGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::size_t size() const { return values_.size(); }

  GridFunction operator-() const;
  friend GridFunction operator*(const GridFunction& f, const GridFunction& g);
  friend GridFunction operator*(double c, const GridFunction& f);
  friend GridFunction operator+(const GridFunction& f, const GridFunction& g);
  friend GridFunction operator-(const GridFunction& f, const GridFunction& g);

  bool is_zero() const;

 private:
  TimeGrid grid_;
  std::vector<double> values_;
};

double max_abs_diff(const GridFunction& f, const GridFunction& g);

// Finite ordered list of weights on one grid; may be empty.
struct HSeq {
  std::vector<GridFunction> items;

  bool empty() const { return items.empty(); }
  std::size_t size() const { return items.size(); }
};

// Composite trapezoid approximation of the L2[0,T] inner product.
double inner_product(const GridFunction& f, const GridFunction& g);
double l2_norm(const GridFunction& f);

// beta_h(t) = int_0^t h(u)^2 du. Between nodes h^2 is interpolated linearly.
double beta(const GridFunction& h, double t);

// beta_h at every node, by cumulative trapezoid.
std::vector<double> beta_nodes(const GridFunction& h);

// Nonnegative root of h1^2 + h2^2, nodewise.
GridFunction s_combine(const GridFunction& h1, const GridFunction& h2);

// Nonnegative root of the compensated nodewise sum of squares. The empty
// sequence combines to the zero function on `grid`.
GridFunction s_combine_seq(const HSeq& seq, const TimeGrid& grid);
// Same, with the grid taken from the items; the sequence must be nonempty.
GridFunction s_combine_seq(const HSeq& seq);

// Compensated nodewise sum of squares (the square of s_combine_seq).
std::vector<double> sum_of_squares(const HSeq& seq, const TimeGrid& grid);

HSeq wedge(const HSeq& a, const HSeq& b);

inline constexpr double kSEquivalenceTol = 1e-9;

// Max-node distance between the sums of squares is at most tol.
bool s_equivalent(const HSeq& a, const HSeq& b, double tol = kSEquivalenceTol);

// CSV with header `t,value`, 17 significant digits.
void write_csv(std::ostream& out, const GridFunction& f);
GridFunction read_csv(std::istream& in);

}  // namespace gaussfft
