#include "gaussfft/wiener.hpp"

#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "gaussfft/errors.hpp"
#include "gaussfft/simd.hpp"

namespace gaussfft {

WienerPath::WienerPath(TimeGrid grid, std::vector<double> values) : grid_(grid), x_(std::move(values)) {
  if (x_.size() != grid_.nodes()) throw std::invalid_argument("WienerPath: wrong number of nodes");
  if (x_[0] != 0.0) throw std::invalid_argument("WienerPath: x(0) must be 0");
}

WienerPath WienerPath::zero(const TimeGrid& grid) { return WienerPath(grid, std::vector<double>(grid.nodes(), 0.0)); }

WienerPath WienerPath::from_increments(const TimeGrid& grid, std::span<const double> increments) {
  if (increments.size() != grid.intervals()) throw std::invalid_argument("WienerPath: wrong number of increments");
  std::vector<double> x(grid.nodes(), 0.0);
  for (std::size_t k = 0; k < increments.size(); ++k) x[k + 1] = x[k] + increments[k];
  return WienerPath(grid, std::move(x));
}

std::vector<double> WienerPath::increments() const {
  std::vector<double> dx(grid_.intervals());
  for (std::size_t k = 0; k < dx.size(); ++k) dx[k] = x_[k + 1] - x_[k];
  return dx;
}

WienerPath operator+(const WienerPath& a, const WienerPath& b) {
  require_same_grid(a.grid_, b.grid_, "path add");
  std::vector<double> x(a.x_.size());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = a.x_[k] + b.x_[k];
  return WienerPath(a.grid_, std::move(x));
}

void MomentAccumulator::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
}

double MomentAccumulator::variance() const {
  return n_ < 2 ? 0.0 : std::max(0.0, m2_ / static_cast<double>(n_ - 1));
}

MCEstimate MomentAccumulator::estimate() const {
  return MCEstimate{mean_, n_ < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_)), n_};
}

double zscore(const MCEstimate& a, const MCEstimate& b) {
  const double se = std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
  const double diff = a.mean - b.mean;
  if (se == 0.0) {
    if (diff == 0.0) return 0.0;
    return diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  return diff / se;
}

void sample_increments(CounterEngine& engine, double dt, std::span<double> out) {
  boost::random::normal_distribution<double> normal;
  for (double& v : out) v = normal(engine);
  simd::active().scale(out.data(), out.data(), std::sqrt(dt), out.size());
}

WienerPath sample_path(const TimeGrid& grid, const RngStream& rng) {
  CounterEngine engine = rng.engine(0);
  std::vector<double> dx(grid.intervals());
  sample_increments(engine, grid.dt(), dx);
  return WienerPath::from_increments(grid, dx);
}

double pwz_increments(const GridFunction& v, std::span<const double> increments) {
  if (increments.size() != v.grid().intervals()) throw GridMismatch("pwz: increment count does not match grid");
  return simd::active().dot(v.values().data(), increments.data(), increments.size());
}

double pwz(const GridFunction& v, const WienerPath& x) {
  require_same_grid(v.grid(), x.grid(), "pwz");
  const std::vector<double> dx = x.increments();
  return pwz_increments(v, dx);
}

double pwz_series(const GridFunction& v, const WienerPath& x, std::size_t m) {
  if (m < 1) throw std::invalid_argument("pwz_series: m must be at least 1");
  require_same_grid(v.grid(), x.grid(), "pwz_series");
  const TimeGrid& grid = v.grid();
  const double T = grid.horizon();
  const double norm = std::sqrt(2.0 / T);
  const std::vector<double> dx = x.increments();
  double total = 0.0;
  for (std::size_t j = 1; j <= m; ++j) {
    const double freq = (static_cast<double>(j) - 0.5) * std::numbers::pi / T;
    const GridFunction phi = GridFunction::sample(grid, [&](double t) { return norm * std::cos(freq * t); });
    total += inner_product(v, phi) * pwz_increments(phi, dx);
  }
  return total;
}

WienerPath z_process(const GridFunction& h, const WienerPath& x) {
  require_same_grid(h.grid(), x.grid(), "z_process");
  const std::size_t n = h.grid().intervals();
  std::vector<double> dx = x.increments();
  simd::active().mul(dx.data(), h.values().data(), dx.data(), n);
  std::vector<double> z(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) z[k + 1] = z[k] + dx[k];
  return WienerPath(h.grid(), std::move(z));
}

std::vector<MCEstimate> run_monte_carlo(const TimeGrid& grid, std::size_t samples, std::size_t paths_per_sample,
                                        std::size_t outputs, const RngStream& rng, const SampleFn& fn,
                                        const McOptions& opts) {
  if (samples < 2) throw std::invalid_argument("run_monte_carlo: need at least 2 samples");
  if (opts.block_size == 0) throw std::invalid_argument("run_monte_carlo: block_size must be positive");
  const std::size_t blocks = (samples + opts.block_size - 1) / opts.block_size;
  std::vector<std::vector<MomentAccumulator>> per_block(blocks, std::vector<MomentAccumulator>(outputs));

  auto run_block = [&](std::size_t b) {
    CounterEngine engine = rng.engine(b);
    const std::size_t n = grid.intervals();
    std::vector<double> storage(paths_per_sample * n);
    std::vector<std::span<const double>> views;
    for (std::size_t p = 0; p < paths_per_sample; ++p) views.emplace_back(storage.data() + p * n, n);
    std::vector<double> out(outputs);
    const std::size_t begin = b * opts.block_size;
    const std::size_t end = std::min(samples, begin + opts.block_size);
    auto& acc = per_block[b];
    for (std::size_t s = begin; s < end; ++s) {
      sample_increments(engine, grid.dt(), storage);
      fn(views, out);
      for (std::size_t o = 0; o < outputs; ++o) acc[o].add(out[o]);
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(blocks)));
  if (workers == 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t b = w; b < blocks; b += workers) run_block(b);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<MCEstimate> result(outputs);
  for (std::size_t o = 0; o < outputs; ++o) {
    MomentAccumulator total;
    for (std::size_t b = 0; b < blocks; ++b) total.merge(per_block[b][o]);
    result[o] = total.estimate();
  }
  return result;
}

}  // namespace gaussfft
