#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ottoforge/dynamics.hpp"
#include "ottoforge/fast_driving.hpp"

using namespace ottoforge;

namespace {

ThermalModel fermionic_model(int d, std::vector<double> betas, double gamma = 1.0) {
  ThermalModel m;
  m.dimension = d;
  for (int i = 0; i < d - 1; ++i) m.domain.boxes.emplace_back(0.0, 12.0);
  for (double beta : betas) {
    BathModel b{beta, BathFamily::FermionicFlat};
    b.gamma = gamma;
    m.baths.push_back(b);
  }
  m.validate();
  return m;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("propagate") {
  const ThermalModel m = fermionic_model(2, {1.0});
  const PauliGenerator gen = m.leg_generator(vec({1.5}), 0);

  SUBCASE("tau = 0 is the identity") {
    const Vector p = vec({0.3, 0.7});
    CHECK((propagate(gen, p, 0.0) - p).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("matches the two-level closed form") {
    // p2(t) = p2_eq + (p2(0) - p2_eq) exp(-(G12+G21) t)
    const RateMatrix rm = build_rate_matrix(m.spectrum_for(vec({1.5})), m.baths[0]);
    const double rate = rm.gamma(0, 1) + rm.gamma(1, 0);
    const double p2eq = gen.gibbs[1];
    const Vector p0 = vec({0.9, 0.1});
    for (double t : {0.05, 0.3, 1.7, 6.0}) {
      const Vector pt = propagate(gen, p0, t);
      const double expect = p2eq + (p0[1] - p2eq) * std::exp(-rate * t);
      CHECK(std::abs(pt[1] - expect) < 1e-12);
    }
  }

  SUBCASE("long-time limit is gibbs") {
    const RateMatrix rm = build_rate_matrix(m.spectrum_for(vec({1.5})), m.baths[0]);
    const double rate = rm.gamma(0, 1) + rm.gamma(1, 0);
    const Vector p = propagate(gen, vec({1.0, 0.0}), 100.0 / rate);
    CHECK((p - gen.gibbs).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("invalid tau") {
    CHECK_THROWS_AS(propagate(gen, vec({0.5, 0.5}), std::nan("")), InvalidInput);
  }
}

TEST_CASE("limit_cycle") {
  const ThermalModel m = fermionic_model(2, {0.5, 1.0});

  SUBCASE("single constant leg sits at gibbs with zero heat") {
    GeneralizedOttoCycle c;
    c.legs = {Leg{vec({2.0}), 0, 1.0}};
    const PiecewiseProtocol proto{c, 0.7};
    const LimitCycleSolution sol = limit_cycle(m, proto);
    const PauliGenerator gen = m.leg_generator(vec({2.0}), 0);
    CHECK((sol.boundary_populations[0] - gen.gibbs).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(sol.leg_heat[0]) < 1e-13);
  }

  SUBCASE("two-leg qubit cycle equals 500-period forward integration") {
    GeneralizedOttoCycle c;
    c.legs = {Leg{vec({2.3}), 0, 0.45}, Leg{vec({0.9}), 1, 0.55}};
    const double eta = relaxation_rate_eta(m, c);
    const PiecewiseProtocol proto{c, 0.2 / eta};
    const LimitCycleSolution sol = limit_cycle(m, proto);
    Vector p = vec({0.83, 0.17});
    p = propagate_periods(m, proto, p, 500);
    CHECK((p - sol.boundary_populations[0]).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(sol.periodicity_residual < 1e-10);
  }

  SUBCASE("equal temperatures extract no work") {
    const ThermalModel meq = fermionic_model(2, {1.0, 1.0});
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
      GeneralizedOttoCycle c = testing::random_cycle(rng, meq, 2);
      const PiecewiseProtocol proto{c, rng.uniform(0.05, 3.0)};
      const double gap = average_gap_finite(limit_cycle(meq, proto), GapWeights::engine(2));
      CHECK(gap <= 1e-12);
    }
  }

  SUBCASE("fixed point independent of the replaced row; first law holds") {
    Rng rng(11);
    for (int trial = 0; trial < 8; ++trial) {
      const int d = 2 + static_cast<int>(rng.uniform_int(4));
      ThermalModel mm = testing::random_model(rng, d, 2);
      GeneralizedOttoCycle c = testing::random_cycle(rng, mm, 3);
      const PiecewiseProtocol proto{c, rng.uniform(0.1, 2.0)};
      const LimitCycleSolution ref = limit_cycle(mm, proto, 0);
      for (int row = 1; row < std::min(d, 5); ++row) {
        const LimitCycleSolution alt = limit_cycle(mm, proto, row);
        CHECK((alt.boundary_populations[0] - ref.boundary_populations[0]).cwiseAbs().maxCoeff() <
              1e-10);
      }
      double qsum = 0.0;
      for (double q : ref.leg_heat) qsum += std::abs(q);
      CHECK(ref.first_law_residual <= 1e-9 * std::max(qsum, 1e-30));
      for (const Vector& p : ref.boundary_populations) {
        CHECK(std::abs(p.sum() - 1.0) < 1e-10);
        CHECK(p.minCoeff() >= 0.0);
      }
    }
  }

  SUBCASE("engine weights sum to the extracted work rate") {
    GeneralizedOttoCycle c;
    c.legs = {Leg{vec({2.3}), 0, 0.45}, Leg{vec({0.9}), 1, 0.55}};
    const PiecewiseProtocol proto{c, 1.1};
    const LimitCycleSolution sol = limit_cycle(m, proto);
    double w_in = 0.0;
    for (double w : sol.quench_work_in) w_in += w;
    const double gap = average_gap_finite(sol, GapWeights::engine(2));
    CHECK(gap == doctest::Approx(-w_in / proto.period).epsilon(1e-10));
  }

  SUBCASE("weight length mismatch is rejected") {
    GeneralizedOttoCycle c;
    c.legs = {Leg{vec({2.0}), 0, 1.0}};
    const LimitCycleSolution sol = limit_cycle(m, PiecewiseProtocol{c, 1.0});
    CHECK_THROWS_AS(average_gap_finite(sol, GapWeights{{1.0}}), InvalidInput);
  }
}

TEST_CASE("fast-driving consistency of the finite-time GAP") {
  Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 12 && checked < 6; ++trial) {
    const int d = 2 + static_cast<int>(rng.uniform_int(4));  // up to 5
    const int L = 2 + static_cast<int>(rng.uniform_int(3));  // up to 4
    ThermalModel mm = testing::random_model(rng, d, 1 + static_cast<int>(rng.uniform_int(3)));
    GeneralizedOttoCycle c = testing::random_cycle(rng, mm, L);
    const GapWeights w = GapWeights::engine(mm.n_baths());
    const double gap_fast = fast_gap(mm, c, w);
    if (std::abs(gap_fast) < 1e-4) continue;  // avoid relative error on a near-zero GAP
    ++checked;
    const double eta = relaxation_rate_eta(mm, c);
    double prev_ratio = std::numeric_limits<double>::infinity();
    for (double etaT : {1e-1, 1e-2, 1e-3}) {
      const PiecewiseProtocol proto{c, etaT / eta};
      const double gap_T = average_gap_finite(limit_cycle(mm, proto), w);
      const double ratio = std::abs(gap_T - gap_fast) / std::abs(gap_fast);
      CHECK(ratio < prev_ratio + 1e-12);  // residual shrinks as T shrinks
      CHECK(ratio <= 50.0 * etaT);        // first-order consistency with a generous constant
      prev_ratio = ratio;
    }
  }
  CHECK(checked >= 4);
}

TEST_CASE("sweep_period") {
  const ThermalModel m = fermionic_model(3, {0.5, 1.0});
  GeneralizedOttoCycle c;
  c.legs = {Leg{vec({4.29, 4.29}), 0, 0.493}, Leg{vec({3.02, 3.02}), 1, 0.507}};

  SUBCASE("single period gives fast row plus one row") {
    const auto rows = sweep_period(m, c, GapWeights::engine(2), {1.0});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].period == 0.0);
    CHECK(rows[1].period == 1.0);
  }

  SUBCASE("monotone non-increasing over two decades; tiny T matches fast value") {
    std::vector<double> Ts;
    for (int i = 0; i < 25; ++i) Ts.push_back(0.01 * std::pow(10.0 / 0.01, i / 24.0));
    const auto rows = sweep_period(m, c, GapWeights::engine(2), Ts);
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
      CHECK(rows[i + 1].gap <= rows[i].gap + 1e-12);
    }
    CHECK(std::abs(rows[1].gap - rows[0].gap) / std::abs(rows[0].gap) < 1e-3);
  }

  SUBCASE("non-ascending periods are rejected") {
    CHECK_THROWS_AS(sweep_period(m, c, GapWeights::engine(2), {1.0, 0.5}), InvalidInput);
  }
}
