#include "gaussfft/rotation.hpp"

#include <stdexcept>

#include "gaussfft/simd.hpp"

namespace gaussfft {
namespace {

// One weighted sum <alpha_j, sum_p Z_{w_p}(x_p)> = sum_p dot(alpha_j w_p, dx_p).
struct Estimator {
  std::vector<std::size_t> paths;        // which sampled path each weight acts on
  std::vector<GridFunction> weights;     // one per entry of `paths`
};

class RotationBatch {
 public:
  RotationBatch(std::span<const CylinderFunctional> Fs, std::vector<Estimator> estimators, std::size_t paths)
      : fs_(Fs), estimators_(std::move(estimators)), paths_(paths) {
    if (Fs.empty()) throw std::invalid_argument("rotation check: no functionals");
    grid_ = &Fs.front().family.grid();
    // rows_[p] collects every alpha_j * w that multiplies path p.
    rows_.resize(paths_);
    for (std::size_t e = 0; e < estimators_.size(); ++e) {
      const Estimator& est = estimators_[e];
      for (std::size_t t = 0; t < est.paths.size(); ++t) {
        for (std::size_t i = 0; i < fs_.size(); ++i) {
          require_same_grid(*grid_, fs_[i].family.grid(), "rotation check");
          for (std::size_t j = 0; j < fs_[i].arity(); ++j) {
            Slot slot{e, i, j, rows_[est.paths[t]].size()};
            rows_[est.paths[t]].push_back(fs_[i].family.atoms()[j] * est.weights[t]);
            slots_.push_back(slot);
            slot_path_.push_back(est.paths[t]);
          }
        }
      }
    }
    for (auto& per_path : rows_) {
      ptrs_.emplace_back();
      for (const auto& g : per_path) ptrs_.back().push_back(g.values().data());
    }
  }

  std::vector<MCEstimate> run(std::size_t n, const RngStream& rng, const McOptions& opts) const {
    const std::size_t outputs = estimators_.size() * fs_.size();
    const simd::Kernels& k = simd::active();
    auto per_sample = [&](std::span<const std::span<const double>> dx, std::span<double> out) {
      std::vector<std::vector<double>> dots(paths_);
      for (std::size_t p = 0; p < paths_; ++p) {
        dots[p].resize(ptrs_[p].size());
        k.dot_many(ptrs_[p].data(), ptrs_[p].size(), dx[p].data(), grid_->intervals(), dots[p].data());
      }
      // coords[e][i][j]
      std::vector<std::vector<std::vector<double>>> coords(
          estimators_.size(), std::vector<std::vector<double>>(fs_.size()));
      for (std::size_t e = 0; e < estimators_.size(); ++e) {
        for (std::size_t i = 0; i < fs_.size(); ++i) coords[e][i].assign(fs_[i].arity(), 0.0);
      }
      for (std::size_t s = 0; s < slots_.size(); ++s) {
        const Slot& sl = slots_[s];
        coords[sl.estimator][sl.functional][sl.coord] += dots[slot_path_[s]][sl.row];
      }
      for (std::size_t e = 0; e < estimators_.size(); ++e) {
        for (std::size_t i = 0; i < fs_.size(); ++i) out[e * fs_.size() + i] = fs_[i].eval_f(coords[e][i]).real();
      }
    };
    return run_monte_carlo(*grid_, n, paths_, outputs, rng, per_sample, opts);
  }

  std::size_t functionals() const { return fs_.size(); }

 private:
  struct Slot {
    std::size_t estimator, functional, coord, row;
  };
  std::span<const CylinderFunctional> fs_;
  std::vector<Estimator> estimators_;
  std::size_t paths_;
  const TimeGrid* grid_ = nullptr;
  std::vector<std::vector<GridFunction>> rows_;
  std::vector<std::vector<const double*>> ptrs_;
  std::vector<Slot> slots_;
  std::vector<std::size_t> slot_path_;
};

}  // namespace

std::vector<RotationPair> verify_rotation2_batch(std::span<const CylinderFunctional> Fs, const GridFunction& h1,
                                                 const GridFunction& h2, std::size_t n, const RngStream& rng,
                                                 const McOptions& opts) {
  // Paths 0 and 1 feed the two-path estimator, path 2 the one-path one.
  std::vector<Estimator> est;
  est.push_back(Estimator{{0, 1}, {h1, h2}});
  est.push_back(Estimator{{2}, {s_combine(h1, h2)}});
  const RotationBatch batch(Fs, std::move(est), 3);
  const auto r = batch.run(n, rng, opts);
  std::vector<RotationPair> out;
  for (std::size_t i = 0; i < Fs.size(); ++i) out.push_back(RotationPair{r[i], r[Fs.size() + i]});
  return out;
}

RotationPair verify_rotation2(const CylinderFunctional& F, const GridFunction& h1, const GridFunction& h2,
                              std::size_t n, const RngStream& rng, const McOptions& opts) {
  return verify_rotation2_batch(std::span<const CylinderFunctional>(&F, 1), h1, h2, n, rng, opts).front();
}

std::vector<RotationTriple> verify_rotation_seq_batch(std::span<const CylinderFunctional> Fs, const HSeq& H,
                                                      const GridFunction& h_extra, std::size_t n,
                                                      const RngStream& rng, const McOptions& opts) {
  if (H.empty()) throw std::invalid_argument("verify_rotation_seq: H must be nonempty");
  const std::size_t m = H.size();
  const TimeGrid& grid = h_extra.grid();
  HSeq extended = H;
  extended.items.push_back(h_extra);

  // Paths 0..m for the sum, m+1..m+2 for s(H) + extra, m+3 for the single path.
  Estimator sum;
  for (std::size_t j = 0; j <= m; ++j) {
    sum.paths.push_back(j);
    sum.weights.push_back(extended.items[j]);
  }
  std::vector<Estimator> est;
  est.push_back(std::move(sum));
  est.push_back(Estimator{{m + 1, m + 2}, {s_combine_seq(H, grid), h_extra}});
  est.push_back(Estimator{{m + 3}, {s_combine_seq(extended, grid)}});
  const RotationBatch batch(Fs, std::move(est), m + 4);
  const auto r = batch.run(n, rng, opts);
  const std::size_t k = Fs.size();
  std::vector<RotationTriple> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(RotationTriple{r[i], r[k + i], r[2 * k + i]});
  return out;
}

RotationTriple verify_rotation_seq(const CylinderFunctional& F, const HSeq& H, const GridFunction& h_extra,
                                   std::size_t n, const RngStream& rng, const McOptions& opts) {
  return verify_rotation_seq_batch(std::span<const CylinderFunctional>(&F, 1), H, h_extra, n, rng, opts).front();
}

}  // namespace gaussfft
