#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "qjet/integrate.hpp"
#include "qjet/strategies.hpp"
#include "qjet/wavepacket.hpp"

using namespace qjet;

namespace {
const PhysicalConstants au{1.0, 1.0};

TrajectoryState state_with_s1(cplx s1) {
  TrajectoryState st;
  st.x = cplx(0.3, 0.0);
  st.jet.order = 2;
  st.jet[1] = s1;
  st.jet[2] = cplx(0.1, 0.4);
  return st;
}
}  // namespace

TEST_CASE("velocity_of per strategy", "[strategies]") {
  const TrajectoryState st = state_with_s1(cplx(1.0, 2.0));
  CHECK(velocity_of(VelocityStrategy::Zevca, st, au) == cplx{});
  CHECK(velocity_of(VelocityStrategy::Bomca, st, au) == cplx(1.0, 2.0));
  CHECK(velocity_of(VelocityStrategy::Dpm, st, au) == cplx(1.0, 0.0));

  TrajectoryState rc = st;
  rc.v_aux = cplx(-0.7, 0.0);
  CHECK(velocity_of(VelocityStrategy::RealClassical, rc, au) ==
        cplx(-0.7, 0.0));
  CHECK_THROWS_AS(velocity_of(VelocityStrategy::RealClassical, st, au),
                  std::logic_error);
}

TEST_CASE("mass rescales the velocity", "[strategies]") {
  const PhysicalConstants heavy{1.0, 4.0};
  const TrajectoryState st = state_with_s1(cplx(2.0, -1.0));
  CHECK(velocity_of(VelocityStrategy::Bomca, st, heavy) == cplx(0.5, -0.25));
  CHECK(velocity_of(VelocityStrategy::Dpm, st, heavy) == cplx(0.5, 0.0));
}

TEST_CASE("momentum-derivative rows of the coupled system", "[strategies]") {
  const Potential well = Harmonic{1.0, 1.0};

  SECTION("BOMCA: classical momentum law, no quantum force") {
    TrajectoryState st = state_with_s1(cplx(0.8, 0.0));
    st.x = cplx(1.2, 0.0);
    const TrajectoryState d = full_rhs(VelocityStrategy::Bomca, st, well, au);
    CHECK(std::abs(d.jet.s(1) + eval_derivative(well, st.x, 1)) < 1e-15);
    CHECK(d.x == velocity_of(VelocityStrategy::Bomca, st, au));
  }

  SECTION("DPM: residual imaginary-velocity coupling") {
    TrajectoryState st = state_with_s1(cplx(0.8, 0.6));
    st.x = cplx(1.2, 0.0);
    const TrajectoryState d = full_rhs(VelocityStrategy::Dpm, st, well, au);
    const cplx expect = -eval_derivative(well, st.x, 1) -
                        cplx(0.0, 1.0) * st.jet.s(2) / au.mass *
                            st.jet.s(1).imag();
    CHECK(std::abs(d.jet.s(1) - expect) < 1e-15);
  }

  SECTION("RealClassical: no force at the Morse minimum") {
    TrajectoryState st = state_with_s1(cplx(0.8, 0.6));
    st.x = cplx{};
    st.v_aux = cplx(0.4, 0.0);
    const TrajectoryState d =
        full_rhs(VelocityStrategy::RealClassical, st, Morse{10.25, 0.2209},
                 au);
    REQUIRE(d.v_aux.has_value());
    CHECK(*d.v_aux == cplx{});
    CHECK(d.x == cplx(0.4, 0.0));
  }
}

TEST_CASE("split DPM system at the ground-state configuration",
          "[strategies]") {
  const Potential well = Harmonic{1.0, 1.0};
  // alpha0 = m omega / 2 hbar: S1 = i x, S2 = i, so s1 = s2 = 0,
  // c1 = -x, c2 = -1.
  auto ground_split = [&](double x0) {
    DpmSplitState y;
    y.x = x0;
    y.s = {0.0, 0.0, 0.0};
    y.c = {0.0, -x0, -1.0};
    return y;
  };

  SECTION("eigen-trajectories are straight lines") {
    const DpmSplitState d = dpm_split_rhs(ground_split(2.0), well, au);
    CHECK(d.x == 0.0);
    CHECK(d.s[1] == 0.0);  // quantum force cancels the classical force
    CHECK(d.s[2] == 0.0);
    CHECK(d.c[1] == 0.0);
    CHECK(d.c[2] == 0.0);
  }

  SECTION("quantum force equals the classical force in magnitude") {
    for (double x0 : {2.0, -2.0, 1.0, -1.0, 0.5}) {
      const DpmSplitState y = ground_split(x0);
      const double quantum =
          au.hbar * au.hbar * y.c[1] * y.c[2] / au.mass;
      CHECK(quantum == au.mass * 1.0 * x0);  // m omega^2 x(0), omega = 1
    }
  }
}

TEST_CASE("split DPM zero state is a fixed point of the free system",
          "[strategies]") {
  const DpmSplitState d = dpm_split_rhs(DpmSplitState{}, Free{}, au);
  CHECK(d.x == 0.0);
  for (int n = 0; n < 3; ++n) {
    CHECK(d.s[static_cast<std::size_t>(n)] == 0.0);
    CHECK(d.c[static_cast<std::size_t>(n)] == 0.0);
  }
}

TEST_CASE("split/jet conversions", "[strategies]") {
  SECTION("definition") {
    DpmSplitState y;
    y.s = {0.0, 1.0, 0.0};
    y.c = {0.0, 2.0, 0.0};
    const TrajectoryState st = split_to_jet(y, au);
    CHECK(st.jet.s(1) == cplx(1.0, -2.0));
  }
  SECTION("zero maps to zero") {
    const TrajectoryState st = split_to_jet(DpmSplitState{}, au);
    for (int n = 0; n <= 2; ++n) CHECK(st.jet.s(n) == cplx{});
  }
  SECTION("random round trip is exact") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 25; ++trial) {
      DpmSplitState y;
      y.t = u(rng);
      y.x = u(rng);
      for (auto& v : y.s) v = u(rng);
      for (auto& v : y.c) v = u(rng);
      const DpmSplitState z = jet_to_split(split_to_jet(y, au), au);
      CHECK(z.t == y.t);
      CHECK(z.x == y.x);
      for (int n = 0; n < 3; ++n) {
        CHECK(z.s[static_cast<std::size_t>(n)] ==
              y.s[static_cast<std::size_t>(n)]);
        CHECK(z.c[static_cast<std::size_t>(n)] ==
              y.c[static_cast<std::size_t>(n)]);
      }
    }
  }
}

TEST_CASE("complex and split DPM forms integrate identically",
          "[strategies]") {
  struct Setup {
    Potential potential;
    GaussianWavepacket w;
    double x0;
    double t_final;
  };
  const std::vector<Setup> setups = {
      {Harmonic{1.0, 1.0}, GaussianWavepacket::make(0.5, 1.0, 0.0, au), 1.7,
       2.0 * kPi},
      {Morse{10.25, 0.2209}, GaussianWavepacket::make(0.5, 9.342, 0.0, au),
       8.8, 5.93},
  };
  for (const auto& su : setups) {
    IntegrationConfig cfg{1e-3, su.t_final, 250};
    const TrajectoryState st0 =
        init_state(su.w, VelocityStrategy::Dpm, cplx(su.x0, 0.0), 2, au);
    const auto complex_form = integrate(
        st0,
        [&](const TrajectoryState& s) {
          return full_rhs(VelocityStrategy::Dpm, s, su.potential, au);
        },
        cfg);
    const auto split_form = integrate(
        jet_to_split(st0, au),
        [&](const DpmSplitState& s) {
          return dpm_split_rhs(s, su.potential, au);
        },
        cfg);
    REQUIRE_FALSE(complex_form.diverged);
    REQUIRE_FALSE(split_form.diverged);
    REQUIRE(complex_form.samples.size() == split_form.samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < complex_form.samples.size(); ++i) {
      const TrajectoryState& a = complex_form.samples[i];
      const TrajectoryState b = split_to_jet(split_form.samples[i], au);
      worst = std::max(worst, std::abs(a.x - b.x));
      for (int n = 0; n <= 2; ++n)
        worst = std::max(worst, std::abs(a.jet.s(n) - b.jet.s(n)));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("BOMCA keeps the momentum law along a Morse trajectory",
          "[strategies]") {
  const Potential morse = Morse{10.25, 0.2209};
  const auto w = GaussianWavepacket::make(0.5, 9.342, 0.0, au);
  const TrajectoryState st0 =
      init_state(w, VelocityStrategy::Bomca, cplx(9.0, 0.2), 2, au);
  const auto res = integrate(
      st0,
      [&](const TrajectoryState& s) {
        return full_rhs(VelocityStrategy::Bomca, s, morse, au);
      },
      IntegrationConfig{1e-3, 3.0, 25});
  REQUIRE_FALSE(res.diverged);
  for (const auto& s : res.samples) {
    const TrajectoryState d = full_rhs(VelocityStrategy::Bomca, s, morse, au);
    CHECK(std::abs(d.jet.s(1) + eval_derivative(morse, s.x, 1)) < 1e-10);
  }
}

TEST_CASE("ZEVCA never moves", "[strategies]") {
  const Potential morse = Morse{10.25, 0.2209};
  const auto w = GaussianWavepacket::make(0.5, 9.342, 0.0, au);
  const cplx x0(7.31, 0.0);
  const TrajectoryState st0 =
      init_state(w, VelocityStrategy::Zevca, x0, 4, au);
  const auto res = integrate(
      st0,
      [&](const TrajectoryState& s) {
        return full_rhs(VelocityStrategy::Zevca, s, morse, au);
      },
      IntegrationConfig{1e-3, 2.0, 100});
  REQUIRE_FALSE(res.diverged);
  for (const auto& s : res.samples) {
    CHECK(s.x.real() == x0.real());
    CHECK(s.x.imag() == x0.imag());
  }
}

TEST_CASE("RealClassical with a complex initial velocity reproduces BOMCA",
          "[strategies]") {
  const Potential morse = Morse{10.25, 0.2209};
  const auto w = GaussianWavepacket::make(0.5, 9.342, 0.0, au);
  const cplx x0(9.8, 0.0);
  IntegrationConfig cfg{1e-3, 4.0, 200};

  const auto bomca = integrate(
      init_state(w, VelocityStrategy::Bomca, x0, 2, au),
      [&](const TrajectoryState& s) {
        return full_rhs(VelocityStrategy::Bomca, s, morse, au);
      },
      cfg);

  TrajectoryState rc0 = init_state(w, VelocityStrategy::Bomca, x0, 2, au);
  rc0.v_aux = rc0.jet.s(1) / au.mass;  // complex, not Im(S1)/m
  const auto real_classical = integrate(
      rc0,
      [&](const TrajectoryState& s) {
        return full_rhs(VelocityStrategy::RealClassical, s, morse, au);
      },
      cfg);

  REQUIRE_FALSE(bomca.diverged);
  REQUIRE_FALSE(real_classical.diverged);
  REQUIRE(bomca.samples.size() == real_classical.samples.size());
  for (std::size_t i = 0; i < bomca.samples.size(); ++i)
    CHECK(std::abs(bomca.samples[i].x - real_classical.samples[i].x) < 1e-12);
}
