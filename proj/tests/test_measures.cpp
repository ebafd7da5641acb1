#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <set>

#include "fockbench/errors.hpp"
#include "fockbench/fields.hpp"
#include "fockbench/measures.hpp"
#include "fockbench/transport.hpp"
#include "support.hpp"

using namespace fockbench;
using testing_support::Gen;

TEST_CASE("generator streams are reproducible and distinct") {
  Xoshiro256 a(7);
  Xoshiro256 b(7);
  for (int k = 0; k < 100; ++k) {
    CHECK(a() == b());
  }
  std::set<std::uint64_t> firsts;
  for (std::uint64_t stream = 0; stream < 4; ++stream) {
    for (std::uint64_t chunk = 0; chunk < 4; ++chunk) {
      auto rng = Xoshiro256::substream(7, stream, chunk);
      firsts.insert(rng());
    }
  }
  CHECK(firsts.size() == 16);
  Xoshiro256 j(7);
  j.jump();
  Xoshiro256 l(7);
  l.long_jump();
  CHECK(!(j == l));
  Xoshiro256 u(9);
  for (int k = 0; k < 1000; ++k) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("sampling is deterministic and chunk-stable") {
  const MeasureModel g = MeasureModel::gaussian(3, 123);
  const SampleBatch a = sample(g, 70000, 2);
  const SampleBatch b = sample(g, 70000, 2);
  CHECK((a.samples - b.samples).cwiseAbs().maxCoeff() == 0.0);
  const SampleBatch prefix = sample(g, 1000, 2);
  CHECK((a.samples.topRows(1000) - prefix.samples).cwiseAbs().maxCoeff() == 0.0);
  const SampleBatch other = sample(g, 1000, 3);
  CHECK((other.samples - prefix.samples).cwiseAbs().maxCoeff() > 0.0);
  CHECK(a.provenance == Provenance::spectral);
  CHECK(a.stream == 2);
  CHECK(a.seed == 123);
  CHECK(a.dim() == 3);
  CHECK_THROWS_AS(sample(g, 0), std::invalid_argument);
  CHECK_THROWS_AS(MeasureModel::gaussian(0, 1), DimensionError);
  CHECK_THROWS_AS(MeasureModel::poisson({1.0, 0.0}, 1), std::invalid_argument);
}

TEST_CASE("poisson variates have the right mean and variance on both branches") {
  for (double mean : {0.3, 4.0, 29.5, 31.0, 200.0}) {
    Xoshiro256 rng(static_cast<std::uint64_t>(mean * 1000));
    const int n = 200000;
    double s = 0.0;
    double s2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double x = static_cast<double>(poisson_variate(mean, rng));
      s += x;
      s2 += x * x;
    }
    const double m = s / n;
    const double var = s2 / n - m * m;
    CHECK(std::abs(m - mean) <= 5.0 * std::sqrt(mean / n));
    // Var of the sample variance ≈ (μ₄ - σ⁴)/n with μ₄ = λ + 3λ²
    CHECK(std::abs(var - mean) <= 5.0 * std::sqrt((mean + 2.0 * mean * mean) / n));
  }
}

TEST_CASE("closed-form characteristic functions") {
  const MeasureModel g = MeasureModel::gaussian(2, 1);
  const Vector phi{{0.3, -1.2}};
  CHECK(charfun_closed(g, phi).real() == doctest::Approx(std::exp(-0.5 * phi.squaredNorm())).epsilon(1e-15));
  CHECK(charfun_closed(g, phi).imag() == 0.0);
  CHECK(charfun_closed(g, Vector::Zero(2)) == std::complex<double>(1.0, 0.0));

  // poisson against pmf summation
  const double w = 1.7;
  const MeasureModel p = MeasureModel::poisson({w}, 1);
  for (double t : {-2.0, 0.4, 1.3}) {
    std::complex<double> oracle = 0.0;
    double log_pmf = -w;
    for (int k = 0; k < 200; ++k) {
      if (k > 0) {
        log_pmf += std::log(w) - std::log(static_cast<double>(k));
      }
      oracle += std::exp(log_pmf) * std::exp(std::complex<double>(0.0, t * (k - w) / std::sqrt(w)));
    }
    CHECK(std::abs(charfun_closed(p, Vector::Constant(1, t)) - oracle) <= 1e-13);
  }

  Gen gen(51);
  for (int trial = 0; trial < 10; ++trial) {
    const Embedding emb(gen.well_conditioned(3));
    const Vector f = gen.vector(3);
    for (const auto& model : {MeasureModel::gaussian(3, 1), MeasureModel::poisson(gen.weights(3), 1)}) {
      CHECK(charfun_closed(model, emb, f) == charfun_closed(model, Vector(emb.matrix() * f)));
    }
    const auto image = charfun_closed(MeasureModel::gaussian(3, 1), emb, f);
    CHECK(std::abs(gaussian_image_charfun(emb, f) - image) <= 1e-12);
  }
  // K = Id leaves the measure unchanged
  const Embedding id(Matrix::Identity(2, 2));
  CHECK(charfun_closed(g, id, phi) == charfun_closed(g, phi));
  const SampleBatch raw = sample(g, 100, 0);
  const SampleBatch pushed = pushforward(id, raw);
  CHECK(pushed.provenance == Provenance::image);
  CHECK((pushed.samples - raw.samples).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Monte Carlo estimates agree with exact values within five standard errors") {
  const MeasureModel g = MeasureModel::gaussian(2, 77);
  const MeasureModel p = MeasureModel::poisson({0.6, 2.2}, 78);
  const Vector f{{0.8, -0.5}};
  for (const auto& model : {g, p}) {
    const SampleBatch batch = sample(model, 200000, 0);
    const FieldSpec field = model.kind == MeasureKind::gaussian ? gaussian_field(2) : poisson_field(model.weights);
    const auto est = empirical_moments(batch, f, 4);
    REQUIRE(est.moments.size() == 4);
    CHECK(est.warnings.empty());
    for (int n = 1; n <= 4; ++n) {
      const auto& e = est.moments[static_cast<std::size_t>(n - 1)];
      CHECK(std::abs(e.value - power_moment(field, f, n, n)) <= 5.0 * e.standard_error);
    }
    const auto cf = empirical_charfun(batch, f);
    const auto exact = charfun_closed(model, f);
    CHECK(std::abs(cf.value.real() - exact.real()) <= 5.0 * cf.se_real);
    CHECK(std::abs(cf.value.imag() - exact.imag()) <= 5.0 * cf.se_imag);
    const Vector e0 = Vector::Unit(2, 0);
    const Vector e1 = Vector::Unit(2, 1);
    const std::vector<Vector> fs{e0, e0, e1, e1};
    const Estimate mixed = empirical_mixed_moment(batch, fs);
    CHECK(std::abs(mixed.value - vacuum_moment(field, fs, 4)) <= 5.0 * mixed.standard_error);
  }
}

TEST_CASE("pushforward second moment matches the transported operator") {
  const Embedding emb(Vector{{2.0, 1.0}}.asDiagonal().toDenseMatrix());
  const MeasureModel g = MeasureModel::gaussian(2, 5);
  const SampleBatch image = pushforward(emb, sample(g, 200000, 1));
  const Vector f = Vector::Unit(2, 0);
  const auto est = empirical_moments(image, f, 2);
  const double exact = power_moment(conjugated_field(gaussian_field(2), emb), f, 2, 2);
  CHECK(exact == doctest::Approx(4.0));
  CHECK(std::abs(est.moments[1].value - exact) <= 5.0 * est.moments[1].standard_error);

  const auto cov = empirical_covariance(image);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(cov.value(i, j) - emb.t_gram()(i, j)) <= 5.0 * cov.standard_error(i, j) + 1e-15);
    }
  }
}

TEST_CASE("estimator guards") {
  const SampleBatch batch = sample(MeasureModel::gaussian(2, 1), 1000, 0);
  CHECK_THROWS_AS(empirical_mixed_moment(batch, std::span<const Vector>{}), std::invalid_argument);
  CHECK_THROWS_AS(empirical_moments(batch, Vector::Ones(3), 2), DimensionError);
  CHECK_THROWS_AS(empirical_charfun(batch, Vector::Ones(3)), DimensionError);
  CHECK_THROWS_AS(pushforward(Embedding(Matrix::Identity(3, 3)), batch), DimensionError);
  CHECK(!empirical_moments(batch, Vector::Ones(2), 9).warnings.empty());
}
