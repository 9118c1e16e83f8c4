#pragma once

// Brownian paths on a TimeGrid, Paley-Wiener-Zygmund integrals as
// left-endpoint Ito sums, the Gaussian processes Z_h, and a blocked,
// reproducible Monte Carlo driver.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gaussfft/grid.hpp"
#include "gaussfft/rng.hpp"

namespace gaussfft {

class WienerPath {
 public:
  // values[0] must be exactly 0.
  WienerPath(TimeGrid grid, std::vector<double> values);

  static WienerPath zero(const TimeGrid& grid);
  static WienerPath from_increments(const TimeGrid& grid, std::span<const double> increments);

  const TimeGrid& grid() const { return grid_; }
  std::span<const double> values() const { return x_; }
  double operator[](std::size_t k) const { return x_[k]; }
  std::vector<double> increments() const;

  friend WienerPath operator+(const WienerPath& a, const WienerPath& b);

 private:
  TimeGrid grid_;
  std::vector<double> x_;
};

struct MCEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;  // sample standard deviation / sqrt(n)
  std::size_t n = 0;
};

struct ComplexEstimate {
  MCEstimate re;
  MCEstimate im;
};

// Welford accumulator with Chan's pairwise merge.
class MomentAccumulator {
 public:
  void add(double x);
  void merge(const MomentAccumulator& other);
  MCEstimate estimate() const;
  std::size_t count() const { return n_; }
  double variance() const;  // unbiased sample variance

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// (a.mean - b.mean) / sqrt(a.stderr^2 + b.stderr^2); 0 when both are exact
// and equal, +-inf when exact and different.
double zscore(const MCEstimate& a, const MCEstimate& b);

// Fills `out` with independent N(0, dt) increments.
void sample_increments(CounterEngine& engine, double dt, std::span<double> out);

WienerPath sample_path(const TimeGrid& grid, const RngStream& rng);

// sum_k v(t_k) (x(t_{k+1}) - x(t_k))
double pwz(const GridFunction& v, const WienerPath& x);

// Same sum against raw increments (length N).
double pwz_increments(const GridFunction& v, std::span<const double> increments);

// Truncated expansion sum_{j<=m} (v, phi_j) pwz(phi_j, x) in the normalized
// cosine basis phi_j = sqrt(2/T) cos((j - 1/2) pi t / T).
double pwz_series(const GridFunction& v, const WienerPath& x, std::size_t m);

// Z_h(x, t_k) = sum_{i<k} h(t_i) (x(t_{i+1}) - x(t_i))
WienerPath z_process(const GridFunction& h, const WienerPath& x);

struct McOptions {
  unsigned workers = 1;
  std::size_t block_size = 4096;
};

// Per-sample callback: receives `paths_per_sample` independent increment
// vectors (each of length N) and writes one value per output.
using SampleFn = std::function<void(std::span<const std::span<const double>> increments, std::span<double> out)>;

// Blocked driver. Block b draws from rng.engine(b) and blocks are merged in
// index order, so results do not depend on the worker count.
std::vector<MCEstimate> run_monte_carlo(const TimeGrid& grid, std::size_t samples, std::size_t paths_per_sample,
                                        std::size_t outputs, const RngStream& rng, const SampleFn& fn,
                                        const McOptions& opts = {});

}  // namespace gaussfft
