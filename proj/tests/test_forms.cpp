#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "lckblow/complex.hpp"
#include "lckblow/forms.hpp"
#include "lckblow/jet.hpp"
#include "lckblow/lck_data.hpp"
#include "lckblow/linalg.hpp"
#include "support/oracles.hpp"

using namespace lckblow;
using J2 = Jet2<double>;

namespace {

std::vector<Jet1> seed1(const std::vector<double>& x) {
  std::vector<Jet1> v;
  for (std::size_t k = 0; k < x.size(); ++k) v.push_back(Jet1::variable(x[k], k, x.size()));
  return v;
}

std::vector<J2> seed2(const std::vector<double>& x) {
  std::vector<J2> v;
  for (std::size_t k = 0; k < x.size(); ++k) v.push_back(J2::variable(x[k], k, x.size()));
  return v;
}

Eigen::VectorXd basis(int m, int k) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
  e(k) = 1.0;
  return e;
}

// multiplication by i on interleaved real coordinates
Eigen::VectorXd apply_j(const Eigen::VectorXd& v) {
  Eigen::VectorXd w(v.size());
  for (Eigen::Index a = 0; a < v.size() / 2; ++a) {
    w(2 * a) = -v(2 * a + 1);
    w(2 * a + 1) = v(2 * a);
  }
  return w;
}

// d(alpha) as a form with jet coefficients, for a 1-form with second-order
// jet coefficients: (d alpha)_ij = d_i alpha_j - d_j alpha_i.
PForm<Jet1> d_of_one_form(const std::vector<J2>& alpha) {
  const std::size_t m = alpha.size();
  PForm<Jet1> r(m, 2);
  for (int i = 0; i < static_cast<int>(m); ++i)
    for (int j = i + 1; j < static_cast<int>(m); ++j) r.at({i, j}) = partial(alpha[j], i) - partial(alpha[i], j);
  return r;
}

}  // namespace

TEST(HermToReal, IdentityInOneDimension) {
  const RealPForm f = herm_to_real2form(HermitianMatrix::Identity(1, 1));
  EXPECT_EQ(f.get({0, 1}), 2.0);
  EXPECT_EQ(f.get({1, 0}), -2.0);
}

TEST(HermToReal, ZeroMatrix) {
  EXPECT_EQ(sup_norm(herm_to_real2form(HermitianMatrix::Zero(3, 3))), 0.0);
}

TEST(HermToReal, PairingOracle) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  const HermitianMatrix h = oracle::random_hermitian(rng, 3);
  const RealPForm f = herm_to_real2form(h);
  for (int s = 0; s < 20; ++s) {
    Eigen::VectorXd u(6), v(6);
    for (int k = 0; k < 6; ++k) {
      u(k) = g(rng);
      v(k) = g(rng);
    }
    const std::vector<Eigen::VectorXd> uv = {u, v};
    EXPECT_NEAR(evaluate(f, uv), oracle::two_form_value(h, u, v), 1e-12);
  }
}

TEST(HermToReal, RoundTripAndRejection) {
  std::mt19937_64 rng(8);
  const HermitianMatrix h = oracle::random_hermitian(rng, 3);
  EXPECT_LT((real2form_to_herm(herm_to_real2form(h)) - h).cwiseAbs().maxCoeff(), 1e-15);
  RealPForm f(4, 2);
  f.at({0, 2}) = 1.0;  // dx1 ^ dx2 alone is not of type (1,1)
  EXPECT_THROW(real2form_to_herm(f), std::invalid_argument);
  HermitianMatrix bad = h;
  bad(0, 1) += 0.1;
  EXPECT_THROW(herm_to_real2form(bad), std::invalid_argument);
}

TEST(HermToReal, PositivityBridge) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int s = 0; s < 200; ++s) {
    const HermitianMatrix h = oracle::random_hermitian(rng, 3);
    const RealPForm f = herm_to_real2form(h);
    Eigen::VectorXd v(6);
    for (int k = 0; k < 6; ++k) v(k) = g(rng);
    ComplexVector c(3);
    for (int a = 0; a < 3; ++a) c(a) = {v(2 * a), v(2 * a + 1)};
    const std::vector<Eigen::VectorXd> vj = {v, apply_j(v)};
    const double form_value = evaluate(f, vj);
    const double herm_value = pairing(h, c);
    EXPECT_NEAR(form_value, 2.0 * herm_value, 1e-12 * (1 + std::abs(form_value)));
    EXPECT_EQ(form_value > 0, herm_value > 0);
  }
}

TEST(ExteriorD, DdOfLogModulus) {
  const std::vector<double> x = {0.8, -0.3, 0.2, 1.1};
  const auto v = seed2(x);
  const J2 g = log(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
  std::vector<Jet1> dg;
  for (std::size_t k = 0; k < 4; ++k) dg.push_back(partial(g, k));
  EXPECT_LT(sup_norm(exterior_d(one_form<Jet1>(dg))), 1e-10);
}

TEST(ExteriorD, ConstantCoefficients) {
  PForm<Jet1> f(6, 2);
  f.at({0, 3}) = 2.5;
  f.at({1, 4}) = -1.0;
  EXPECT_EQ(sup_norm(exterior_d(f)), 0.0);
}

TEST(ExteriorD, XDyGivesDxDy) {
  const std::vector<double> x = {0.7, -0.4};
  const auto v = seed1(x);
  PForm<Jet1> alpha(2, 1);
  alpha.at({1}) = v[0];  // x1 dy1
  const RealPForm d = exterior_d(alpha);
  EXPECT_EQ(d.get({0, 1}), 1.0);
  // coefficient derivative by differences
  const auto g = oracle::gradient([](const std::vector<double>& p) { return p[0]; }, x);
  EXPECT_NEAR(d.get({0, 1}), g[0], 1e-10);
}

TEST(ExteriorD, DSquaredOnTestFields) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> pt(-1.0, 1.0);
  for (int s = 0; s < 20; ++s) {
    std::vector<double> x(4);
    for (auto& xi : x) xi = pt(rng);
    const auto v = seed2(x);
    // exact 1-form dg
    const auto g = oracle::random_expr(rng, 5, 4);
    const J2 gj = g->eval(v);
    std::vector<Jet1> dg;
    for (std::size_t k = 0; k < 4; ++k) dg.push_back(partial(gj, k));
    EXPECT_LT(sup_norm(exterior_d(one_form<Jet1>(dg))), 1e-9);
    // d(d alpha) for a general 1-form
    std::vector<J2> alpha;
    for (int k = 0; k < 4; ++k) alpha.push_back(oracle::random_expr(rng, 4, 4)->eval(v));
    EXPECT_LT(sup_norm(exterior_d(d_of_one_form(alpha))), 1e-9);
  }
}

TEST(ExteriorD, AgreesWithDifferencedCoefficients) {
  std::mt19937_64 rng(77);
  const std::vector<double> x = {0.3, 0.6, -0.2, 0.4};
  std::vector<std::shared_ptr<oracle::Expr>> es;
  for (int k = 0; k < 4; ++k) es.push_back(oracle::random_expr(rng, 4, 4));
  std::vector<Jet1> alpha;
  for (const auto& e : es) alpha.push_back(e->eval(seed1(x)));
  const RealPForm d = exterior_d(one_form<Jet1>(alpha));
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const auto gi = oracle::gradient([&](const std::vector<double>& p) { return es[i]->eval(p); }, x);
      const auto gj = oracle::gradient([&](const std::vector<double>& p) { return es[j]->eval(p); }, x);
      EXPECT_NEAR(d.get({i, j}), gj[i] - gi[j], 1e-8);
    }
  }
}

TEST(ExteriorD, Leibniz) {
  std::mt19937_64 rng(5);
  const std::vector<double> x = {0.3, -0.6, 0.2, 0.9};
  const auto v = seed1(x);
  const Jet1 f = oracle::random_expr(rng, 4, 4)->eval(v);
  PForm<Jet1> f0(4, 0);
  f0.at(std::span<const int>{}) = f;
  const RealPForm df = exterior_d(f0);
  for (std::size_t deg : {1u, 2u}) {
    PForm<Jet1> alpha(4, deg);
    for_each_combination(4, deg, [&](std::span<const int> I) {
      alpha.at(I) = oracle::random_expr(rng, 4, 4)->eval(v);
    });
    const RealPForm lhs = exterior_d(f * alpha);
    const RealPForm rhs = wedge(df, values(alpha)) + f.value() * exterior_d(alpha);
    EXPECT_LT(sup_norm(lhs - rhs), 1e-9) << "degree " << deg;
  }
}

TEST(Wedge, Basics) {
  RealPForm dx(2, 1), dy(2, 1);
  dx.at({0}) = 1.0;
  dy.at({1}) = 1.0;
  EXPECT_EQ(sup_norm(wedge(dx, dx)), 0.0);
  const std::vector<Eigen::VectorXd> e = {basis(2, 0), basis(2, 1)};
  EXPECT_EQ(evaluate(wedge(dx, dy), e), 1.0);
  EXPECT_EQ(evaluate(wedge(dy, dx), e), -1.0);
  EXPECT_THROW(wedge(wedge(dx, dy), dx), std::invalid_argument);
}

TEST(Wedge, LeeFormAgainstAntisymmetrizedSum) {
  const std::size_t n = 2;
  const HopfAnnulus hopf(n, 0.5, 3.0);
  const std::vector<std::complex<double>> z = {{0.9, -0.4}, {0.3, 1.2}};
  const auto zc = constant_coords<double>(z);
  const std::span<const Complex<double>> zs(zc);
  const HermitianMatrix h = values(hopf.omega<double>(zs));
  const std::vector<double> th = hopf.theta<double>(zs);
  const RealPForm w = wedge(one_form<double>(th), herm_to_real2form(h));
  const int m = 2 * n;
  auto om = [&](int i, int j) { return oracle::two_form_value(h, basis(m, i), basis(m, j)); };
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        const double expect = th[i] * om(j, k) - th[j] * om(i, k) + th[k] * om(i, j);
        const std::vector<Eigen::VectorXd> e = {basis(m, i), basis(m, j), basis(m, k)};
        EXPECT_NEAR(evaluate(w, e), expect, 1e-12);
      }
    }
  }
}

TEST(Eigen, MinEigenvalueExamples) {
  EXPECT_NEAR(min_eigenvalue(HermitianMatrix::Identity(3, 3)), 1.0, 1e-15);
  HermitianMatrix d = HermitianMatrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = -3.0;
  EXPECT_NEAR(min_eigenvalue(d), -3.0, 1e-15);
}

TEST(Eigen, FubiniStudyRootOracle) {
  // FS coefficients at u = (1, 0): ((1+|u|^2) I - conj(u) u^T) / (1+|u|^2)^2
  HermitianMatrix fs(2, 2);
  fs << 1.0 / 4.0, 0.0, 0.0, 2.0 / 4.0;
  EXPECT_NEAR(min_eigenvalue(fs), oracle::eig2(fs).first, 1e-10);
  std::mt19937_64 rng(3);
  for (int s = 0; s < 50; ++s) {
    const HermitianMatrix h2 = oracle::random_hermitian(rng, 2);
    EXPECT_NEAR(min_eigenvalue(h2), oracle::eig2(h2).first, 1e-10);
    EXPECT_NEAR(max_eigenvalue(h2), oracle::eig2(h2).second, 1e-10);
    const HermitianMatrix h3 = oracle::random_hermitian(rng, 3);
    EXPECT_NEAR(min_eigenvalue(h3), oracle::min_eig3(h3), 1e-10);
  }
}

TEST(Eigen, ShiftInvariance) {
  std::mt19937_64 rng(6);
  for (int s = 0; s < 50; ++s) {
    const HermitianMatrix h = oracle::random_hermitian(rng, 4);
    const double t = 0.37 * s - 5.0;
    EXPECT_NEAR(min_eigenvalue(h + t * HermitianMatrix::Identity(4, 4)), min_eigenvalue(h) + t, 1e-10);
  }
}

TEST(Combinatorics, RankAndSign) {
  std::size_t count = 0;
  for_each_combination(6, 3, [&](std::span<const int> I) {
    EXPECT_EQ(combination_rank(I), count);
    ++count;
  });
  EXPECT_EQ(count, binomial(6, 3));
  std::vector<int> idx = {2, 0, 1};
  EXPECT_EQ(sort_with_sign(idx), 1);
  idx = {1, 0, 2};
  EXPECT_EQ(sort_with_sign(idx), -1);
  idx = {1, 1};
  EXPECT_EQ(sort_with_sign(idx), 0);
}
