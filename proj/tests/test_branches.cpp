#include <catch2/catch_amalgamated.hpp>

#include "qjet/branches.hpp"

using namespace qjet;
using Catch::Matchers::ContainsSubstring;

namespace {
const PhysicalConstants au{1.0, 1.0};

Fan morse_fan(int count, double lo = 2.842, double hi = 12.878) {
  const auto w = GaussianWavepacket::make(0.5, 9.342, 0.0, au);
  const Potential morse = Morse{10.25, 0.2209};
  IntegrationConfig cfg{1e-3, 5.93, 100};
  return propagate_fan(w, morse, VelocityStrategy::RealClassical,
                       linspace_complex(lo, hi, count), 2, cfg, au);
}

std::vector<double> window_grid(double lo, double hi, int count) {
  std::vector<double> xs(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    xs[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  return xs;
}
}  // namespace

TEST_CASE("inward starts reflect, outward starts do not", "[branches]") {
  const auto fan = morse_fan(2, 6.342, 12.342);
  const auto classified = classify_branches(fan);
  CHECK(classified.excluded_divergent == 0);
  REQUIRE(classified.reflected.members.size() == 1);
  REQUIRE(classified.direct.members.size() == 1);
  CHECK(classified.reflected.members[0].x0 == 6.342);
  CHECK(classified.direct.members[0].x0 == 12.342);
  CHECK(classified.direct.members[0].x_f > 12.342);
}

TEST_CASE("classification requires velocity histories", "[branches]") {
  const auto w = GaussianWavepacket::make(0.5, 9.342, 0.0, au);
  const Potential morse = Morse{10.25, 0.2209};
  IntegrationConfig cfg{1e-3, 2e-3, 1};
  const auto fan = propagate_fan(w, morse, VelocityStrategy::Dpm,
                                 linspace_complex(8.0, 9.0, 3), 2, cfg, au);
  CHECK_THROWS_AS(classify_branches(fan), std::invalid_argument);
}

TEST_CASE("divergent members are excluded and counted", "[branches]") {
  auto fan = morse_fan(3, 6.0, 12.0);
  fan[1].path.diverged = true;
  const auto classified = classify_branches(fan);
  CHECK(classified.excluded_divergent == 1);
  CHECK(classified.reflected.members.size() +
            classified.direct.members.size() ==
        2);
}

TEST_CASE("branch amplitude is exact at the knots", "[branches]") {
  Branch b;
  b.members = {{0.0, 0.0, cplx(1.0, 0.0)},
               {1.0, 1.0, cplx(0.0, 2.0)},
               {2.0, 2.0, cplx(0.5, -0.3)}};
  const std::vector<double> grid{-0.5, 0.5, 1.0, 2.0, 2.5};
  const auto curve = branch_amplitude(b, grid, au);

  CHECK_FALSE(curve.covered[0]);
  CHECK(curve.psi[0] == cplx{});
  CHECK_FALSE(curve.covered[4]);

  REQUIRE(curve.covered[2]);
  CHECK(std::abs(curve.psi[2] - reconstruct_amplitude(cplx(0.0, 2.0), au)) <
        1e-15);
  REQUIRE(curve.covered[3]);
  CHECK(std::abs(curve.psi[3] - reconstruct_amplitude(cplx(0.5, -0.3), au)) <
        1e-15);

  REQUIRE(curve.covered[1]);
  const cplx s_mid = 0.5 * (cplx(1.0, 0.0) + cplx(0.0, 2.0));
  CHECK(std::abs(curve.psi[1] - reconstruct_amplitude(s_mid, au)) < 1e-15);
}

TEST_CASE("a fold inside a branch is rejected loudly", "[branches]") {
  Branch b;
  b.members = {{0.0, 0.0, cplx{}}, {1.0, 2.0, cplx{}}, {2.0, 1.0, cplx{}}};
  CHECK_THROWS_WITH(branch_amplitude(b, {0.5}, au),
                    ContainsSubstring("fold inside branch"));
  Branch tiny;
  tiny.members = {{0.0, 0.0, cplx{}}};
  CHECK_THROWS_AS(branch_amplitude(tiny, {0.5}, au), std::invalid_argument);
}

TEST_CASE("single-branch amplitudes are node-free and grow toward the fold",
          "[branches]") {
  const auto classified = classify_branches(morse_fan(301));
  REQUIRE(classified.reflected.members.size() >= 2);
  REQUIRE(classified.direct.members.size() >= 2);

  const auto grid = window_grid(-2.5, 10.0, 301);
  const auto built = build_branched_amplitudes(classified, grid, au);

  std::vector<double> a1, a2, covered_x;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (built.coverage[i] != 3) continue;
    covered_x.push_back(grid[i]);
    a1.push_back(std::abs(built.psi1[i]));
    a2.push_back(std::abs(built.psi2[i]));
  }
  REQUIRE(covered_x.size() >= 100);
  CHECK(find_nodes(covered_x, a1).empty());
  CHECK(find_nodes(covered_x, a2).empty());

  // the reflected amplitude swells as the fold (x ~ -2.8) is approached
  std::size_t mid = 0;
  while (mid < covered_x.size() && covered_x[mid] < 4.0) ++mid;
  REQUIRE(mid < covered_x.size());
  CHECK(a1.front() > 2.0 * a1[mid]);

  // the superposition over the same stretch does oscillate
  std::vector<double> s;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (built.coverage[i] == 3) s.push_back(std::abs(built.psi_sum[i]));
  CHECK(find_nodes(covered_x, s).size() >= 3);
}

TEST_CASE("superpose adds pointwise and validates sizes", "[branches]") {
  const std::vector<cplx> a{cplx(1.0, 0.0), cplx(0.0, 1.0), cplx(0.5, 0.5)};
  const std::vector<cplx> zeros(3, cplx{});
  CHECK(superpose(a, zeros) == a);

  std::vector<cplx> minus;
  for (const auto& v : a) minus.push_back(-v);
  for (const auto& v : superpose(a, minus)) CHECK(std::abs(v) == 0.0);

  CHECK_THROWS_AS(superpose(a, std::vector<cplx>(2, cplx{})),
                  std::invalid_argument);
}

TEST_CASE("node finder locates the zeros of a sine", "[branches]") {
  std::vector<double> xs, mag;
  for (double x = 0.5; x <= 9.5; x += 0.01) {
    xs.push_back(x);
    mag.push_back(std::abs(std::sin(x)));
  }
  const auto nodes = find_nodes(xs, mag);
  REQUIRE(nodes.size() == 3);
  CHECK(std::abs(nodes[0] - kPi) < 1e-4);
  CHECK(std::abs(nodes[1] - 2.0 * kPi) < 1e-4);
  CHECK(std::abs(nodes[2] - 3.0 * kPi) < 1e-4);

  std::vector<double> ramp_x, ramp;
  for (int i = 0; i < 50; ++i) {
    ramp_x.push_back(0.1 * i);
    ramp.push_back(1.0 + 0.1 * i);
  }
  CHECK(find_nodes(ramp_x, ramp).empty());

  const std::vector<double> dip_x{0.0, 1.0, 2.0};
  const std::vector<double> dip{1.0, 0.5, 1.0};
  CHECK(find_nodes(dip_x, dip).empty());
}

TEST_CASE("superposed pattern is stable under fan refinement", "[branches]") {
  const auto grid = window_grid(-2.5, 10.0, 626);
  const auto coarse =
      build_branched_amplitudes(classify_branches(morse_fan(2501)), grid, au);
  const auto fine =
      build_branched_amplitudes(classify_branches(morse_fan(5001)), grid, au);

  double worst = 0.0;
  std::size_t both = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (coarse.coverage[i] != 3 || fine.coverage[i] != 3) continue;
    ++both;
    worst = std::max(worst, std::abs(coarse.psi_sum[i] - fine.psi_sum[i]));
  }
  REQUIRE(both >= 500);
  CHECK(worst < 1e-4);
}
