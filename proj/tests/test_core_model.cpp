#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ottoforge/generator.hpp"
#include "ottoforge/validate.hpp"

using namespace ottoforge;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Independent oracle: direct Boltzmann summation at extended precision.
std::vector<double> gibbs_long_double(double beta, const std::vector<long double>& e) {
  long double z = 0.0L;
  for (long double x : e) z += expl(-static_cast<long double>(beta) * x);
  std::vector<double> p;
  for (long double x : e) p.push_back(static_cast<double>(expl(-static_cast<long double>(beta) * x) / z));
  return p;
}

}  // namespace

TEST_CASE("gibbs_populations basics") {
  const Spectrum s3 = Spectrum::make(vec({0.0, 1.0, 2.0}));

  SUBCASE("beta = 0 gives the uniform vector") {
    const Vector p = gibbs_populations(0.0, s3);
    for (int i = 0; i < 3; ++i) CHECK(p[i] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  }

  SUBCASE("qubit with beta*eps = ln 2") {
    const Spectrum s2 = Spectrum::make(vec({0.0, std::log(2.0)}));
    const Vector p = gibbs_populations(1.0, s2);
    CHECK(p[0] == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  }

  SUBCASE("qutrit beta=2 against extended-precision summation") {
    const Vector p = gibbs_populations(2.0, s3);
    const auto q = gibbs_long_double(2.0, {0.0L, 1.0L, 2.0L});
    for (int i = 0; i < 3; ++i) CHECK(std::abs(p[i] - q[i]) < 1e-16);
  }

  SUBCASE("sum 1, strictly positive, overflow-safe") {
    const Spectrum big = Spectrum::make(vec({0.0, 500.0, 1200.0}));
    const Vector p = gibbs_populations(3.0, big);
    CHECK(std::abs(p.sum() - 1.0) < 1e-14);
    for (int i = 0; i < 3; ++i) CHECK(p[i] > 0.0);
  }

  SUBCASE("invalid inputs") {
    CHECK_THROWS_AS(gibbs_populations(std::nan(""), s3), InvalidInput);
    CHECK_THROWS_AS(Spectrum::make(vec({0.0, std::numeric_limits<double>::infinity()})), InvalidInput);
    CHECK_THROWS_AS(Spectrum::make(vec({0.1, 1.0})), InvalidInput);
    CHECK_THROWS_AS(Spectrum::make(vec({0.0})), InvalidInput);
  }
}

TEST_CASE("build_rate_matrix families") {
  const Spectrum s = Spectrum::make(vec({0.0, 1.0, 2.5}));

  SUBCASE("fermionic with equal energies gives gamma/2 both ways") {
    const Spectrum deg = Spectrum::make(vec({0.0, 1.3, 1.3}));
    BathModel b{0.7, BathFamily::FermionicFlat};
    b.gamma = 2.0;
    const RateMatrix rm = build_rate_matrix(deg, b);
    CHECK(rm.gamma(1, 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rm.gamma(2, 1) == doctest::Approx(1.0).epsilon(1e-15));
  }

  SUBCASE("detailed balance holds to 4 ulp for every family") {
    for (BathFamily fam : {BathFamily::FermionicFlat, BathFamily::BosonicOhmic}) {
      BathModel b{1.3, fam};
      b.gamma = 0.8;
      const RateMatrix rm = build_rate_matrix(s, b);
      for (int n = 0; n < 3; ++n) {
        for (int m = 0; m < 3; ++m) {
          if (n == m) {
            CHECK(rm.gamma(n, m) == 0.0);
            continue;
          }
          const double lhs = rm.gamma(n, m);
          const double rhs = std::exp(b.beta * (s.energies[n] - s.energies[m])) * rm.gamma(m, n);
          CHECK(std::abs(lhs - rhs) <= 4.0 * std::abs(lhs) * std::numeric_limits<double>::epsilon());
        }
      }
    }
  }

  SUBCASE("bosonic downhill rate against extended-precision x/(e^x - 1)") {
    const Spectrum s2 = Spectrum::make(vec({0.0, 1.0}));
    BathModel b{1.0, BathFamily::BosonicOhmic};
    b.gamma = 1.0;
    const RateMatrix rm = build_rate_matrix(s2, b);
    // downhill 1 -> 0: gamma * de * n(-beta de) = de / (1 - e^-de)
    const long double de = 1.0L;
    const long double oracle = de / (1.0L - expl(-de));
    CHECK(std::abs(rm.gamma(1, 0) - static_cast<double>(oracle)) < 1e-15);
    const long double up = de / (expl(de) - 1.0L);
    CHECK(std::abs(rm.gamma(0, 1) - static_cast<double>(up)) < 1e-15);
  }

  SUBCASE("bosonic degenerate gap limit gamma/beta") {
    const Spectrum deg = Spectrum::make(vec({0.0, 2.0, 2.0}));
    BathModel b{ 2.5, BathFamily::BosonicOhmic};
    b.gamma = 1.2;
    const RateMatrix rm = build_rate_matrix(deg, b);
    CHECK(rm.gamma(1, 2) == doctest::Approx(1.2 / 2.5).epsilon(1e-14));
    CHECK(rm.gamma(2, 1) == doctest::Approx(1.2 / 2.5).epsilon(1e-14));
  }

  SUBCASE("fixed-rate family has no rate matrix") {
    BathModel b{1.0, BathFamily::FixedRate};
    b.rate = 1.0;
    CHECK_THROWS_AS(build_rate_matrix(s, b), InvalidInput);
  }
}

TEST_CASE("peaked baths switch on only at the target point") {
  BathModel b{2.0, BathFamily::Peaked};
  b.targets = {1.0, 2.0};
  b.pair_rates = {{0, 1, 0.7}, {1, 2, 0.4}};
  b.match_tol = 1e-9;

  const Spectrum on = Spectrum::make(vec({0.0, 1.0, 2.0}));
  const RateMatrix rm_on = build_rate_matrix(on, b);
  CHECK(rm_on.gamma(0, 1) == 0.7);
  CHECK(rm_on.gamma(1, 0) == doctest::Approx(0.7 * std::exp(2.0 * 1.0)).epsilon(1e-15));
  CHECK(rm_on.gamma(1, 2) == 0.4);

  const Spectrum off = Spectrum::make(vec({0.0, 1.0 + 1e-6, 2.0}));
  const RateMatrix rm_off = build_rate_matrix(off, b);
  CHECK(rm_off.gamma.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("generator invariants") {
  Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + static_cast<int>(rng.uniform_int(5));  // up to 6
    ThermalModel m = testing::random_model(rng, d, 1);
    ControlVector u(d - 1);
    for (int k = 0; k < d - 1; ++k) u[k] = rng.uniform(0.0, m.domain.boxes[k].second);
    const PauliGenerator gen = m.leg_generator(u, 0);
    const double max_rate = gen.full.cwiseAbs().maxCoeff();

    // column sums vanish
    CHECK(gen.full.colwise().sum().cwiseAbs().maxCoeff() <= 1e-14 * std::max(max_rate, 1.0));
    // gibbs is in the kernel
    CHECK((gen.full * gen.gibbs).cwiseAbs().maxCoeff() <= 1e-12 * std::max(max_rate, 1.0));
    // off-diagonal entries nonnegative
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (i != j) CHECK(gen.full(i, j) >= 0.0);
      }
    }
    // reduced generator relaxes (eigenvalues with nonnegative real part)
    const Eigen::EigenSolver<Matrix> es(gen.reduced);
    for (int i = 0; i < d - 1; ++i) CHECK(es.eigenvalues()[i].real() >= -1e-10 * std::max(max_rate, 1.0));
  }
}

TEST_CASE("validate_model diagnostics") {
  SUBCASE("disconnected qubit") {
    ThermalModel m;
    m.dimension = 2;
    m.domain.boxes = {{0.0, 5.0}};
    BathModel b{1.0, BathFamily::Peaked};
    b.targets = {1.0};
    b.pair_rates = {{0, 1, 1.0}};
    m.baths = {b};
    Leg leg;
    leg.bath = 0;
    leg.control = vec({2.0});  // off target: all rates vanish
    const ModelDiagnostics diag = validate_model(m, {leg});
    CHECK_FALSE(diag.strongly_connected);
    CHECK(diag.unreachable_levels.size() == 1);
  }

  SUBCASE("fermionic qutrit is connected with tiny residuals") {
    ThermalModel m;
    m.dimension = 3;
    m.domain.boxes = {{0.0, 6.0}, {0.0, 6.0}};
    BathModel b{1.0, BathFamily::FermionicFlat};
    b.gamma = 1.0;
    m.baths = {b};
    Leg leg;
    leg.bath = 0;
    leg.control = vec({1.0, 2.0});
    const ModelDiagnostics diag = validate_model(m, {leg});
    CHECK(diag.strongly_connected);
    CHECK(diag.detailed_balance_residual < 1e-12);
    CHECK(diag.column_sum_residual < 1e-12);
  }

  SUBCASE("peaked three-bath scenario off target is disconnected") {
    BathModel b{2.0, BathFamily::Peaked};
    b.targets = {1.0, 2.0};
    b.pair_rates = {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}};
    ThermalModel m;
    m.dimension = 3;
    m.domain.boxes = {{0.0, 6.0}, {0.0, 6.0}};
    m.baths = {b};
    Leg leg;
    leg.bath = 0;
    leg.control = vec({3.0, 3.0});
    const ModelDiagnostics diag = validate_model(m, {leg});
    CHECK_FALSE(diag.strongly_connected);
    CHECK(diag.summary().find("NOT strongly connected") != std::string::npos);
  }
}
