#include <catch2/catch_amalgamated.hpp>

#include "qjet/integrate.hpp"
#include "qjet/strategies.hpp"
#include "qjet/wavepacket.hpp"

using namespace qjet;
using Catch::Matchers::WithinAbs;

namespace {
const PhysicalConstants au{1.0, 1.0};

TrajectoryState scalar_state(cplx x0) {
  TrajectoryState st;
  st.x = x0;
  return st;
}

auto exponential_rhs = [](const TrajectoryState& s) {
  TrajectoryState d;
  d.x = s.x;
  return d;
};
}  // namespace

TEST_CASE("one RK4 step of the scalar exponential", "[integrate]") {
  const TrajectoryState out =
      rk4_step(scalar_state(cplx(1.0, 0.0)), exponential_rhs, 0.1);
  CHECK_THAT(out.x.real(), WithinAbs(1.105170918, 1e-7));
  CHECK(out.x.imag() == 0.0);
  CHECK(out.t == 0.1);
}

TEST_CASE("zero RHS leaves the state unchanged", "[integrate]") {
  TrajectoryState st;
  st.x = cplx(0.7, 0.2);
  st.v_aux = cplx(-1.3, 0.0);
  st.jet.order = 2;
  st.jet[0] = cplx(0.5, -0.25);
  st.jet[2] = cplx(0.0, 1.0);
  const auto zero_rhs = [](const TrajectoryState& s) {
    TrajectoryState d;
    d.v_aux = cplx{};
    d.jet.order = s.jet.order;
    return d;
  };
  const TrajectoryState out = rk4_step(st, zero_rhs, 0.05);
  CHECK(out.x == st.x);
  CHECK(*out.v_aux == *st.v_aux);
  for (int n = 0; n <= 2; ++n) CHECK(out.jet.s(n) == st.jet.s(n));
  CHECK(out.t == 0.05);
}

TEST_CASE("harmonic orbit closes after one period", "[integrate]") {
  TrajectoryState st;
  st.x = cplx(1.0, 0.0);
  st.v_aux = cplx{};
  const auto rhs = [](const TrajectoryState& s) {
    TrajectoryState d;
    d.x = *s.v_aux;
    d.v_aux = -s.x;
    return d;
  };
  const auto res = integrate(
      st, rhs, IntegrationConfig{1e-3, 2.0 * kPi,
                                 std::numeric_limits<std::int64_t>::max()});
  REQUIRE_FALSE(res.diverged);
  CHECK(std::abs(res.samples.back().x - st.x) < 1e-10);
  CHECK(std::abs(*res.samples.back().v_aux) < 1e-10);
}

TEST_CASE("t_final = 0 returns the initial state only", "[integrate]") {
  const auto res = integrate(scalar_state(cplx(2.0, -1.0)), exponential_rhs,
                             IntegrationConfig{1e-3, 0.0, 1});
  REQUIRE(res.samples.size() == 1);
  CHECK(res.samples[0].x == cplx(2.0, -1.0));
  CHECK(res.samples[0].t == 0.0);
  CHECK(res.max_halving_error == 0.0);
}

TEST_CASE("classical Morse bounce lands on the frozen endpoint",
          "[integrate]") {
  TrajectoryState st;
  st.x = cplx(9.342, 0.0);
  st.v_aux = cplx{};
  st.jet.order = 0;
  const Potential morse = Morse{10.25, 0.2209};
  const auto res = integrate(
      st,
      [&](const TrajectoryState& s) {
        return full_rhs(VelocityStrategy::RealClassical, s, morse, au);
      },
      IntegrationConfig{1e-3, 5.93,
                        std::numeric_limits<std::int64_t>::max()});
  REQUIRE_FALSE(res.diverged);
  CHECK_THAT(res.samples.back().x.real(), WithinAbs(-1.970168755, 1e-6));
  CHECK_THAT(res.samples.back().v_aux->real(),
             WithinAbs(-3.086836177, 1e-6));
  CHECK(res.max_halving_error < 1e-6);
}

TEST_CASE("ZEVCA positions are constant in every sample", "[integrate]") {
  const auto w = GaussianWavepacket::make(0.5, 9.342, 0.0, au);
  const cplx x0(8.0, 0.0);
  const TrajectoryState st0 =
      init_state(w, VelocityStrategy::Zevca, x0, 2, au);
  const Potential morse = Morse{10.25, 0.2209};
  const auto res = integrate(
      st0,
      [&](const TrajectoryState& s) {
        return full_rhs(VelocityStrategy::Zevca, s, morse, au);
      },
      IntegrationConfig{1e-3, 1.0, 37});
  for (const auto& s : res.samples) CHECK(s.x == x0);
}

TEST_CASE("global error scales as dt^4", "[integrate]") {
  const auto circle_rhs = [](const TrajectoryState& s) {
    TrajectoryState d;
    d.x = cplx(0.0, 1.0) * s.x;
    return d;
  };
  const auto err = [&](double dt) {
    const auto res = integrate(
        scalar_state(cplx(1.0, 0.0)), circle_rhs,
        IntegrationConfig{dt, 2.0, std::numeric_limits<std::int64_t>::max()});
    return std::abs(res.samples.back().x - std::exp(cplx(0.0, 2.0)));
  };
  const double ratio = err(2e-3) / err(1e-3);
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("sampling hits k store_every dt and t_final exactly",
          "[integrate]") {
  SECTION("non-divisor t_final gets a shortened last step") {
    const auto res = integrate(scalar_state(cplx(1.0, 0.0)), exponential_rhs,
                               IntegrationConfig{1e-3, 0.0123, 7});
    REQUIRE(res.samples.size() == 3);
    CHECK(res.samples[0].t == 0.0);
    CHECK(res.samples[1].t == 7.0 * 1e-3);
    CHECK(res.samples[2].t == 0.0123);
    CHECK_THAT(res.samples[2].x.real(), WithinAbs(std::exp(0.0123), 1e-12));
  }
  SECTION("exact divisor lands on t_final with no extra step") {
    const auto res = integrate(scalar_state(cplx(1.0, 0.0)), exponential_rhs,
                               IntegrationConfig{1e-3, 5e-3, 2});
    REQUIRE(res.samples.size() == 4);
    CHECK(res.samples[1].t == 2.0 * 1e-3);
    CHECK(res.samples[2].t == 4.0 * 1e-3);
    CHECK(res.samples[3].t == 5e-3);
  }
  SECTION("divisor aligned with store_every keeps one final sample") {
    const auto res = integrate(scalar_state(cplx(1.0, 0.0)), exponential_rhs,
                               IntegrationConfig{1e-3, 1e-2, 5});
    REQUIRE(res.samples.size() == 3);
    CHECK(res.samples[2].t == 1e-2);
    CHECK_THAT(res.samples[2].x.real(), WithinAbs(std::exp(1e-2), 1e-12));
  }
}

TEST_CASE("finite-time blow-up is flagged, not thrown", "[integrate]") {
  const auto riccati = [](const TrajectoryState& s) {
    TrajectoryState d;
    d.x = s.x * s.x;
    return d;
  };
  const auto res = integrate(scalar_state(cplx(10.0, 0.0)), riccati,
                             IntegrationConfig{1e-3, 1.0, 10});
  CHECK(res.diverged);
  CHECK(res.diverged_at > 0.05);
  CHECK(res.diverged_at < 0.2);
  for (const auto& s : res.samples) CHECK(is_finite(s.x));
  CHECK(res.samples.back().t < 0.2);
}

TEST_CASE("integration is bitwise deterministic", "[integrate]") {
  const auto w = GaussianWavepacket::make(0.5, 9.342, 0.0, au);
  const Potential morse = Morse{10.25, 0.2209};
  const TrajectoryState st0 =
      init_state(w, VelocityStrategy::Dpm, cplx(8.8, 0.0), 2, au);
  const auto rhs = [&](const TrajectoryState& s) {
    return full_rhs(VelocityStrategy::Dpm, s, morse, au);
  };
  const IntegrationConfig cfg{1e-3, 2.0, 100};
  const auto a = integrate(st0, rhs, cfg);
  const auto b = integrate(st0, rhs, cfg);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].x == b.samples[i].x);
    for (int n = 0; n <= 2; ++n)
      CHECK(a.samples[i].jet.s(n) == b.samples[i].jet.s(n));
  }
  CHECK(a.max_halving_error == b.max_halving_error);
}

TEST_CASE("halving error is reported for a stiff stretch", "[integrate]") {
  TrajectoryState st;
  st.x = cplx(9.342, 0.0);
  st.v_aux = cplx{};
  st.jet.order = 0;
  const Potential morse = Morse{10.25, 0.2209};
  const auto rhs = [&](const TrajectoryState& s) {
    return full_rhs(VelocityStrategy::RealClassical, s, morse, au);
  };
  const auto coarse =
      integrate(st, rhs, IntegrationConfig{4e-2, 5.93, 1 << 20});
  const auto fine = integrate(st, rhs, IntegrationConfig{1e-3, 5.93, 1 << 20});
  CHECK(coarse.max_halving_error > 100.0 * fine.max_halving_error);
}
