#include "fockbench/measures.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

#include "fockbench/errors.hpp"
#include "fockbench/random.hpp"

namespace fockbench {

namespace {

constexpr double kInversionLimit = 30.0;

Estimate mean_and_error(const Vector& values) {
  const auto n = static_cast<double>(values.size());
  const double mean = values.mean();
  const double var = n > 1.0 ? (values.array() - mean).square().sum() / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

void require_nonempty(const SampleBatch& batch) {
  if (batch.count() < 1) {
    throw std::invalid_argument("empty sample batch");
  }
}

}  // namespace

MeasureModel MeasureModel::gaussian(int dim, std::uint64_t seed) {
  if (dim < 1) {
    throw DimensionError("MeasureModel: dim must be >= 1");
  }
  return {MeasureKind::gaussian, dim, {}, seed};
}

MeasureModel MeasureModel::poisson(std::vector<double> weights, std::uint64_t seed) {
  for (double w : weights) {
    if (!(w > 0.0)) {
      throw std::invalid_argument("MeasureModel: Poisson intensities must be positive");
    }
  }
  const int dim = static_cast<int>(weights.size());
  if (dim < 1) {
    throw DimensionError("MeasureModel: at least one intensity required");
  }
  return {MeasureKind::poisson, dim, std::move(weights), seed};
}

long poisson_variate(double mean, Xoshiro256& rng) {
  if (mean <= kInversionLimit) {
    // sequential search of the CDF
    const double u = rng.uniform();
    double p = std::exp(-mean);
    double cdf = p;
    long k = 0;
    while (u >= cdf && k < 1000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }
  std::poisson_distribution<long> dist(mean);
  return dist(rng);
}

SampleBatch sample(const MeasureModel& model, Eigen::Index count, std::uint64_t stream) {
  if (count < 1) {
    throw std::invalid_argument("sample: count must be >= 1");
  }
  if (model.kind == MeasureKind::poisson &&
      static_cast<int>(model.weights.size()) != model.dim) {
    throw DimensionError("sample: intensity count does not match the dimension");
  }
  SampleBatch batch;
  batch.samples.resize(count, model.dim);
  batch.seed = model.seed;
  batch.stream = stream;
  const Eigen::Index chunks = (count + kSampleChunk - 1) / kSampleChunk;

#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < chunks; ++c) {
    auto rng = Xoshiro256::substream(model.seed, stream, static_cast<std::uint64_t>(c));
    std::normal_distribution<double> normal;
    const Eigen::Index begin = c * kSampleChunk;
    const Eigen::Index end = std::min(count, begin + kSampleChunk);
    for (Eigen::Index r = begin; r < end; ++r) {
      for (int i = 0; i < model.dim; ++i) {
        if (model.kind == MeasureKind::gaussian) {
          batch.samples(r, i) = normal(rng);
        } else {
          const double w = model.weights[static_cast<std::size_t>(i)];
          batch.samples(r, i) = (static_cast<double>(poisson_variate(w, rng)) - w) / std::sqrt(w);
        }
      }
    }
  }
  return batch;
}

SampleBatch pushforward(const Embedding& emb, const SampleBatch& batch) {
  if (batch.dim() != emb.dim()) {
    throw DimensionError("pushforward: dimension mismatch");
  }
  SampleBatch out = batch;
  // rows ξ^T ↦ (K^T ξ)^T = ξ^T K
  out.samples = batch.samples * emb.matrix();
  out.provenance = Provenance::image;
  return out;
}

std::complex<double> charfun_closed(const MeasureModel& model, const Vector& phi) {
  if (phi.size() != model.dim) {
    throw DimensionError("charfun_closed: dimension mismatch");
  }
  if (model.kind == MeasureKind::gaussian) {
    return {std::exp(-0.5 * phi.squaredNorm()), 0.0};
  }
  using namespace std::complex_literals;
  std::complex<double> exponent = 0.0;
  for (int i = 0; i < model.dim; ++i) {
    const double w = model.weights[static_cast<std::size_t>(i)];
    const double x = phi[i] / std::sqrt(w);
    exponent += w * (std::exp(1i * x) - 1.0 - 1i * x);
  }
  return std::exp(exponent);
}

std::complex<double> charfun_closed(const MeasureModel& model, const Embedding& emb, const Vector& f) {
  return charfun_closed(model, emb.matrix() * f);
}

std::complex<double> gaussian_image_charfun(const Embedding& emb, const Vector& f) {
  return {std::exp(-0.5 * f.dot(emb.t_gram() * f)), 0.0};
}

MomentEstimates empirical_moments(const SampleBatch& batch, const Vector& f, int max_order) {
  require_nonempty(batch);
  if (f.size() != batch.dim()) {
    throw DimensionError("empirical_moments: dimension mismatch");
  }
  if (max_order < 1) {
    throw std::invalid_argument("empirical_moments: max_order must be >= 1");
  }
  MomentEstimates out;
  if (max_order > 8) {
    out.warnings.push_back("moment orders above 8 have unreliable plug-in standard errors");
  }
  const Vector projection = batch.samples * f;
  Vector power = Vector::Ones(projection.size());
  for (int k = 1; k <= max_order; ++k) {
    power = power.cwiseProduct(projection);
    out.moments.push_back(mean_and_error(power));
  }
  return out;
}

Estimate empirical_mixed_moment(const SampleBatch& batch, std::span<const Vector> fs) {
  require_nonempty(batch);
  if (fs.empty()) {
    throw std::invalid_argument("empirical_mixed_moment: empty f-list");
  }
  Vector product = Vector::Ones(batch.count());
  for (const auto& f : fs) {
    if (f.size() != batch.dim()) {
      throw DimensionError("empirical_mixed_moment: dimension mismatch");
    }
    product = product.cwiseProduct(batch.samples * f);
  }
  return mean_and_error(product);
}

CharfunEstimate empirical_charfun(const SampleBatch& batch, const Vector& f) {
  require_nonempty(batch);
  if (f.size() != batch.dim()) {
    throw DimensionError("empirical_charfun: dimension mismatch");
  }
  const Vector projection = batch.samples * f;
  const Estimate re = mean_and_error(projection.array().cos().matrix());
  const Estimate im = mean_and_error(projection.array().sin().matrix());
  return {{re.value, im.value}, re.standard_error, im.standard_error};
}

CovarianceEstimate empirical_covariance(const SampleBatch& batch) {
  require_nonempty(batch);
  const int d = batch.dim();
  CovarianceEstimate out{Matrix(d, d), Matrix(d, d)};
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const Estimate e = mean_and_error(batch.samples.col(i).cwiseProduct(batch.samples.col(j)));
      out.value(i, j) = out.value(j, i) = e.value;
      out.standard_error(i, j) = out.standard_error(j, i) = e.standard_error;
    }
  }
  return out;
}

}  // namespace fockbench
