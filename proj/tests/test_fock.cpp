#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fockbench/errors.hpp"
#include "fockbench/fock.hpp"
#include "support.hpp"

using namespace fockbench;
using testing_support::Gen;

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("multi-index enumeration is graded-lex and complete") {
  const auto basis = enumerate_basis(2, 2);
  REQUIRE(basis.size() == 3);
  CHECK(basis[0].entries == std::vector<int>{2, 0});
  CHECK(basis[1].entries == std::vector<int>{1, 1});
  CHECK(basis[2].entries == std::vector<int>{0, 2});

  for (int d = 1; d <= 4; ++d) {
    for (int n = 0; n <= 6; ++n) {
      const auto level = enumerate_basis(d, n);
      CHECK(level.size() == level_dimension(d, n));
      CHECK(level_dimension(d, n) == binomial(n + d - 1, d - 1));
      std::set<MultiIndex> unique(level.begin(), level.end());
      CHECK(unique.size() == level.size());
      for (std::size_t k = 0; k < level.size(); ++k) {
        CHECK(level[k].degree() == n);
        CHECK(level_basis(d, n).index_of(level[k]) == k);
        if (k > 0) {
          CHECK(level[k - 1] > level[k]);
        }
      }
    }
    std::size_t total = 0;
    for (int n = 0; n <= 5; ++n) {
      CHECK(level_offset(d, n) == total);
      total += level_dimension(d, n);
    }
    CHECK(fock_dimension(d, 5) == total);
  }
  CHECK_THROWS_AS(level_dimension(0, 1), DimensionError);
  CHECK_THROWS_AS(level_basis(2, 2).index_of(MultiIndex{{1, 0}}), DimensionError);
}

TEST_CASE("ladder coordinates on basis tensors") {
  const SymTensor e11 = SymTensor::basis(MultiIndex{{1, 1}});
  const SymTensor up = create(Vector::Unit(2, 0), e11);
  CHECK(up.coeff(MultiIndex{{2, 1}}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(up.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  const SymTensor e2 = SymTensor::basis(MultiIndex{{2, 0}});
  const SymTensor down = annihilate(Vector::Unit(2, 0), e2);
  CHECK(down.coeff(MultiIndex{{1, 0}}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(down.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  CHECK_THROWS_AS(annihilate(Vector::Unit(2, 0), SymTensor::scalar(2, 1.0)), DimensionError);
  CHECK_THROWS_AS(create(Vector::Unit(3, 0), e11), DimensionError);
}

TEST_CASE("creation, annihilation, second quantization and tensor powers match the dense oracle") {
  Gen gen(11);
  for (int d = 1; d <= 3; ++d) {
    for (int n = 0; n <= 3; ++n) {
      for (int trial = 0; trial < 3; ++trial) {
        const Vector phi = gen.vector(d);
        const Matrix b = gen.matrix(d, d);
        const Matrix a = gen.matrix(d, d);
        const Matrix up = testing_support::dense_matrix(
            d, n, n + 1, [&](const auto& t) { return testing_support::dense_create(phi, t); });
        CHECK(max_abs(create_matrix(phi, n) - up) <= 1e-12);
        const Matrix down = testing_support::dense_matrix(
            d, n + 1, n, [&](const auto& t) { return testing_support::dense_annihilate(phi, t); });
        CHECK(max_abs(annihilate_matrix(phi, n) - down) <= 1e-12);
        const Matrix dgamma = testing_support::dense_matrix(
            d, n, n, [&](const auto& t) { return testing_support::dense_slotwise(b, t); });
        CHECK(max_abs(second_quantization(b, n) - dgamma) <= 1e-12);
        const Matrix power = testing_support::dense_matrix(
            d, n, n, [&](const auto& t) { return testing_support::dense_power(a, t); });
        CHECK(max_abs(tensor_power_map(a, n) - power) <= 1e-12 * std::max(1.0, max_abs(power)));
      }
    }
  }
}

TEST_CASE("annihilation is the adjoint of creation") {
  Gen gen(12);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = gen.integer(1, 4);
    const int n = gen.integer(0, 5);
    const Vector phi = gen.vector(d);
    CHECK(max_abs(annihilate_matrix(phi, n) - create_matrix(phi, n).transpose()) <= 1e-13);
    const SymTensor x(d, n, gen.vector(static_cast<int>(level_dimension(d, n))));
    const SymTensor y(d, n + 1, gen.vector(static_cast<int>(level_dimension(d, n + 1))));
    const double lhs = create(phi, x).coeffs().dot(y.coeffs());
    const double rhs = x.coeffs().dot(annihilate(phi, y).coeffs());
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("canonical commutation relations") {
  Gen gen(13);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = gen.integer(1, 4);
    const int n = gen.integer(1, 5);
    const Vector phi = gen.vector(d);
    const Vector psi = gen.vector(d);
    // [a(φ), a⁺(ψ)] = ⟨φ, ψ⟩ Id on level n
    const Matrix ccr = annihilate_matrix(phi, n) * create_matrix(psi, n) -
                       create_matrix(psi, n - 1) * annihilate_matrix(phi, n - 1);
    const Matrix expected = phi.dot(psi) * Matrix::Identity(ccr.rows(), ccr.cols());
    CHECK(max_abs(ccr - expected) <= 1e-12 * (1.0 + phi.norm() * psi.norm()));
    // creators commute
    const Matrix cc = create_matrix(phi, n + 1) * create_matrix(psi, n) -
                      create_matrix(psi, n + 1) * create_matrix(phi, n);
    CHECK(max_abs(cc) <= 1e-12 * (1.0 + phi.norm() * psi.norm()));
  }
}

TEST_CASE("tensor powers are multiplicative and respect transposes") {
  Gen gen(14);
  for (int trial = 0; trial < 15; ++trial) {
    const int d = gen.integer(1, 3);
    const int n = gen.integer(0, 4);
    const Matrix a = gen.matrix(d, d);
    const Matrix b = gen.matrix(d, d);
    const Matrix prod = tensor_power_map(a, n) * tensor_power_map(b, n);
    const Matrix direct = tensor_power_map(a * b, n);
    CHECK(max_abs(prod - direct) <= 1e-11 * std::max(1.0, max_abs(direct)));
    CHECK(max_abs(tensor_power_map(a.transpose(), n) - tensor_power_map(a, n).transpose()) <=
          1e-12 * std::max(1.0, max_abs(direct)));
    CHECK(max_abs(tensor_power_map(Matrix::Identity(d, d), n) -
                  Matrix::Identity(static_cast<Eigen::Index>(level_dimension(d, n)),
                                   static_cast<Eigen::Index>(level_dimension(d, n)))) == 0.0);
    // dΓ is the derivative of Γ at the identity, so dΓ(A + B) = dΓ(A) + dΓ(B)
    CHECK(max_abs(second_quantization(a + b, n) - second_quantization(a, n) - second_quantization(b, n)) <= 1e-12);
  }
}

TEST_CASE("Fock vectors: flattening round trip and inner products") {
  Gen gen(15);
  const int d = 3;
  const int cutoff = 4;
  const Vector flat = gen.vector(static_cast<int>(fock_dimension(d, cutoff)));
  const FockVector v = FockVector::from_flat(d, cutoff, flat);
  CHECK((v.flat() - flat).norm() == 0.0);
  CHECK(v.norm() == doctest::Approx(flat.norm()).epsilon(1e-14));
  CHECK(inner(v, v) == doctest::Approx(flat.squaredNorm()).epsilon(1e-14));
  const FockVector omega = FockVector::vacuum(d, cutoff);
  CHECK(omega.norm() == 1.0);
  CHECK(omega.top_degree() == 0);
  const FockVector e = FockVector::basis(MultiIndex{{1, 0, 2}}, cutoff);
  CHECK(e.top_degree() == 3);
  CHECK(inner(e, e) == 1.0);
  CHECK_THROWS_AS(FockVector::basis(MultiIndex{{5, 0, 0}}, cutoff), TruncationError);
  CHECK_THROWS_AS(FockVector::from_flat(d, cutoff, Vector::Zero(3)), DimensionError);
  CHECK_THROWS_AS(inner(v, FockVector::vacuum(2, cutoff)), DimensionError);
}
