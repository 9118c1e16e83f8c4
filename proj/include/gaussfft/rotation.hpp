#pragma once

// Monte Carlo checks of the rotation identities for Gaussian processes:
// a sum of independent Z_{h_j} has the law of a single Z_{s(h_1,...)}.
// Functionals are evaluated through their real part.

#include <cstddef>
#include <span>
#include <vector>

#include "gaussfft/cylinder.hpp"
#include "gaussfft/wiener.hpp"

namespace gaussfft {

struct RotationPair {
  MCEstimate two_path;  // E F(Z_{h1}(x1) + Z_{h2}(x2))
  MCEstimate one_path;  // E F(Z_{s(h1,h2)}(x))
  double z() const { return zscore(two_path, one_path); }
};

struct RotationTriple {
  MCEstimate sum_paths;    // E F(sum_j Z_{h_j}(x_j) + Z_{h_extra}(x_{n+1}))
  MCEstimate s_plus_extra; // E F(Z_{s(H)}(x1) + Z_{h_extra}(x2))
  MCEstimate single;       // E F(Z_{s(H ^ (h_extra))}(x))
};

RotationPair verify_rotation2(const CylinderFunctional& F, const GridFunction& h1, const GridFunction& h2,
                              std::size_t n, const RngStream& rng, const McOptions& opts = {});

// All functionals share the sampled paths.
std::vector<RotationPair> verify_rotation2_batch(std::span<const CylinderFunctional> Fs, const GridFunction& h1,
                                                 const GridFunction& h2, std::size_t n, const RngStream& rng,
                                                 const McOptions& opts = {});

RotationTriple verify_rotation_seq(const CylinderFunctional& F, const HSeq& H, const GridFunction& h_extra,
                                   std::size_t n, const RngStream& rng, const McOptions& opts = {});

std::vector<RotationTriple> verify_rotation_seq_batch(std::span<const CylinderFunctional> Fs, const HSeq& H,
                                                      const GridFunction& h_extra, std::size_t n,
                                                      const RngStream& rng, const McOptions& opts = {});

}  // namespace gaussfft
