#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "fockbench/errors.hpp"
#include "fockbench/fields.hpp"
#include "support.hpp"

using namespace fockbench;
using testing_support::Gen;

namespace {

std::vector<std::vector<double>> poisson_tables(const std::vector<double>& w, int n) {
  std::vector<std::vector<double>> tables;
  for (double wi : w) {
    std::vector<double> row;
    for (int j = 0; j <= n; ++j) {
      row.push_back(testing_support::poisson_pmf_moment(wi, j));
    }
    tables.push_back(row);
  }
  return tables;
}

}  // namespace

TEST_CASE("gaussian d=1 vacuum moments are double factorials") {
  const FieldSpec g = gaussian_field(1);
  const double expected[] = {0, 1, 0, 3, 0, 15, 0, 105, 0, 945};
  for (int n = 1; n <= 10; ++n) {
    CHECK(std::abs(power_moment(g, Vector::Ones(1), n, 10) - expected[n - 1]) <= 1e-10);
  }
}

TEST_CASE("gaussian moments of random directions match the normal oracle") {
  Gen gen(21);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = gen.integer(1, 3);
    const Vector phi = gen.vector(d);
    const FieldSpec g = gaussian_field(d);
    for (int n = 1; n <= 8; ++n) {
      const double oracle = testing_support::gaussian_moment(phi.norm(), n);
      CHECK(std::abs(power_moment(g, phi, n, 8) - oracle) <= 1e-10 * std::max(1.0, std::abs(oracle)));
    }
  }
}

TEST_CASE("poisson moments match pmf summation") {
  const FieldSpec p = poisson_field({1.0});
  const double expected[] = {0, 1, 1, 4, 11, 41};
  for (int n = 1; n <= 6; ++n) {
    CHECK(std::abs(power_moment(p, Vector::Ones(1), n, 6) - expected[n - 1]) <= 1e-10);
    CHECK(std::abs(testing_support::poisson_pmf_moment(1.0, n) - expected[n - 1]) <= 1e-10);
  }
  Gen gen(22);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = gen.integer(1, 3);
    const auto w = gen.weights(d);
    const Vector phi = gen.vector(d);
    const FieldSpec field = poisson_field(w);
    const auto tables = poisson_tables(w, 7);
    for (int n = 1; n <= 7; ++n) {
      const double oracle = testing_support::independent_sum_moment(tables, phi, n);
      CHECK(std::abs(power_moment(field, phi, n, 7) - oracle) <= 1e-10 * std::max(1.0, std::abs(oracle)));
    }
  }
}

TEST_CASE("first moments vanish and second moments are |phi|^2") {
  Gen gen(23);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = gen.integer(1, 4);
    const Vector phi = gen.vector(d);
    for (const auto& field : {gaussian_field(d), poisson_field(gen.weights(d))}) {
      CHECK(std::abs(power_moment(field, phi, 1, 3)) <= 1e-14);
      CHECK(std::abs(power_moment(field, phi, 2, 3) - phi.squaredNorm()) <= 1e-12 * phi.squaredNorm());
    }
  }
}

TEST_CASE("mixed vacuum moments are permutation invariant") {
  Gen gen(24);
  for (int trial = 0; trial < 6; ++trial) {
    const int d = gen.integer(1, 3);
    const int n = gen.integer(2, 5);
    for (const auto& field : {gaussian_field(d), poisson_field(gen.weights(d))}) {
      std::vector<Vector> phis;
      for (int k = 0; k < n; ++k) {
        phis.push_back(gen.vector(d));
      }
      const double reference = vacuum_moment(field, phis, n);
      std::vector<int> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), 0);
      do {
        std::vector<Vector> permuted;
        for (int k : order) {
          permuted.push_back(phis[static_cast<std::size_t>(k)]);
        }
        CHECK(std::abs(vacuum_moment(field, permuted, n) - reference) <= 1e-10 * std::max(1.0, std::abs(reference)));
      } while (std::next_permutation(order.begin(), order.end()));
    }
  }
}

TEST_CASE("moments are stable under raising the cutoff") {
  Gen gen(25);
  const int d = 2;
  const Vector phi = gen.vector(d);
  for (const auto& field : {gaussian_field(d), poisson_field(gen.weights(d))}) {
    for (int n = 1; n <= 6; ++n) {
      const double base = power_moment(field, phi, n, n);
      for (int extra = 1; extra <= 3; ++extra) {
        CHECK(std::abs(power_moment(field, phi, n, n + extra) - base) <= 1e-11 * std::max(1.0, std::abs(base)));
      }
    }
    CHECK_THROWS_AS(power_moment(field, phi, 5, 4), TruncationError);
  }
}

TEST_CASE("mixed products agree with direct vacuum moments") {
  Gen gen(26);
  const int d = 3;
  for (const auto& field : {gaussian_field(d), poisson_field(gen.weights(d))}) {
    MixedProducts products(field, 5);
    for (int trial = 0; trial < 10; ++trial) {
      const MultiIndex gamma = gen.multi_index(d, gen.integer(0, 5));
      std::vector<Vector> phis;
      for (int i = 0; i < d; ++i) {
        for (int k = 0; k < gamma[i]; ++k) {
          phis.push_back(Vector::Unit(d, i));
        }
      }
      const double direct = phis.empty() ? 1.0 : vacuum_moment(field, phis, 5);
      CHECK(std::abs(products.moment(gamma) - direct) <= 1e-11 * std::max(1.0, std::abs(direct)));
    }
    CHECK_THROWS_AS(products.moment(MultiIndex{{3, 3, 0}}), TruncationError);
  }
}

TEST_CASE("assembled operators are symmetric, linear and commute on the safe subspace") {
  Gen gen(27);
  for (int d = 1; d <= 3; ++d) {
    for (const auto& field : {gaussian_field(d), poisson_field(gen.weights(d))}) {
      const FieldReport report = validate_field(field, 6, 1e-12, 99, 10);
      CHECK(report.ok());
      CHECK(report.max_asymmetry <= 1e-12);
      CHECK(report.max_linearity_residual <= 1e-12);
      CHECK(report.commutator_norms.size() == 10);
      for (double c : report.commutator_norms) {
        CHECK(c <= 1e-12);
      }
      for (double c : report.v_condition_numbers) {
        CHECK(c == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("commutators are nonzero at the truncation boundary") {
  // the truncated matrices only commute away from the top levels
  const FieldSpec g = gaussian_field(2);
  const Matrix jp = assemble_operator(g, Vector::Unit(2, 0), 3).matrix();
  const Matrix jq = assemble_operator(g, Vector::Unit(2, 1), 3).matrix();
  const Matrix c = jp * jq - jq * jp;
  CHECK(c.cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("top regularity blocks are sqrt(n!) times the identity") {
  Gen gen(28);
  for (int d = 1; d <= 3; ++d) {
    for (const auto& field : {gaussian_field(d), poisson_field(gen.weights(d))}) {
      MixedProducts products(field, 8);
      for (int n = 1; n <= 8; ++n) {
        const Matrix top = regularity_top_block(products, n);
        const Matrix expected = std::sqrt(factorial(n)) * Matrix::Identity(top.rows(), top.cols());
        CHECK((top - expected).cwiseAbs().maxCoeff() <= 1e-10);
      }
    }
  }
}

TEST_CASE("field construction errors") {
  CHECK_THROWS_AS(gaussian_field(0), DimensionError);
  CHECK_THROWS_AS(poisson_field({}), DimensionError);
  CHECK_THROWS_AS(poisson_field({1.0, -2.0}), std::invalid_argument);
  const FieldSpec g = gaussian_field(2);
  CHECK_THROWS_AS(assemble_operator(g, Vector::Ones(2), -1), DimensionError);
  const AssembledOperator op = assemble_operator(g, Vector::Ones(2), 3);
  CHECK_THROWS_AS(op.apply(FockVector::vacuum(2, 2)), DimensionError);
  CHECK(op.block(1, 0).rows() == 2);
  CHECK(op.block(1, 0).cols() == 1);
}
