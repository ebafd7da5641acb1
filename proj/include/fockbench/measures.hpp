#pragma once

// Spectral measures of the two preset fields, their images under K⁺, and
// Monte Carlo estimators used to cross-check the operator calculus.
//
//   gaussian: ξ ~ N(0, I_d)
//   poisson:  ξ_i = (N_i - w_i) / sqrt(w_i), N_i ~ Poisson(w_i) independent

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fockbench/fock.hpp"
#include "fockbench/random.hpp"
#include "fockbench/transport.hpp"

namespace fockbench {

enum class MeasureKind { gaussian, poisson };

struct MeasureModel {
  MeasureKind kind = MeasureKind::gaussian;
  int dim = 1;
  /// Poisson intensities, one per coordinate (ignored for gaussian).
  std::vector<double> weights;
  std::uint64_t seed = 0;

  static MeasureModel gaussian(int dim, std::uint64_t seed);
  static MeasureModel poisson(std::vector<double> weights, std::uint64_t seed);
};

enum class Provenance { spectral, image };

struct SampleBatch {
  /// Rows are draws, columns are functional coordinates.
  Matrix samples;
  Provenance provenance = Provenance::spectral;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  Eigen::Index count() const { return samples.rows(); }
  int dim() const { return static_cast<int>(samples.cols()); }
};

/// Rows generated per RNG substream; chunk c of stream s uses
/// Xoshiro256::substream(seed, s, c).
inline constexpr Eigen::Index kSampleChunk = 1 << 16;

/// Draws `count` i.i.d. samples. The result depends only on (model, count,
/// stream), never on the number of worker threads.
SampleBatch sample(const MeasureModel& model, Eigen::Index count, std::uint64_t stream = 0);

/// One Poisson(mean) variate: inversion for mean ≤ 30, rejection above.
long poisson_variate(double mean, Xoshiro256& rng);

/// Rowwise ω = K⁺ξ.
SampleBatch pushforward(const Embedding& emb, const SampleBatch& batch);

/// ρ̂(φ) = ∫ exp(i⟨ξ, φ⟩) dρ(ξ) in closed form.
std::complex<double> charfun_closed(const MeasureModel& model, const Vector& phi);
/// ρ̂_K(f) = ρ̂(Kf).
std::complex<double> charfun_closed(const MeasureModel& model, const Embedding& emb, const Vector& f);
/// Image Gaussian with correlation operator K⁺K: exp(-½ f^T G_T f).
std::complex<double> gaussian_image_charfun(const Embedding& emb, const Vector& f);

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
};

struct MomentEstimates {
  /// moments[k-1] estimates ∫⟨ξ, f⟩^k, k = 1..max_order.
  std::vector<Estimate> moments;
  std::vector<std::string> warnings;
};

/// Plug-in moments of ⟨ξ, f⟩ with standard errors sqrt(sample variance / n).
/// Orders above 8 are computed but flagged.
MomentEstimates empirical_moments(const SampleBatch& batch, const Vector& f, int max_order);

/// ∫ Π_k ⟨ξ, f_k⟩ dρ. Throws std::invalid_argument on an empty list.
Estimate empirical_mixed_moment(const SampleBatch& batch, std::span<const Vector> fs);

struct CharfunEstimate {
  std::complex<double> value;
  double se_real = 0.0;
  double se_imag = 0.0;
};

CharfunEstimate empirical_charfun(const SampleBatch& batch, const Vector& f);

struct CovarianceEstimate {
  Matrix value;
  Matrix standard_error;
};

/// Uncentered second moments E[ω_i ω_j] (the measures are centered).
CovarianceEstimate empirical_covariance(const SampleBatch& batch);

}  // namespace fockbench
