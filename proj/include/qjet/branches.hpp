#pragma once

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qjet/fan.hpp"

namespace qjet {

enum class BranchLabel { Reflected, Direct };

struct BranchMember {
  double x0 = 0.0;
  double x_f = 0.0;
  cplx s0_f{};  // S_0 at t_f
};

struct Branch {
  BranchLabel label = BranchLabel::Direct;
  std::vector<BranchMember> members;  // in x0 order
};

struct ClassifiedFan {
  Branch reflected;
  Branch direct;
  int excluded_divergent = 0;
};

// A trajectory is Reflected iff its velocity history crosses from negative
// to positive (inner-wall bounce); everything else is Direct. Divergent
// trajectories are excluded and counted.
inline ClassifiedFan classify_branches(const Fan& fan) {
  ClassifiedFan out;
  out.reflected.label = BranchLabel::Reflected;
  out.direct.label = BranchLabel::Direct;
  for (const auto& rec : fan) {
    if (rec.path.diverged) {
      ++out.excluded_divergent;
      continue;
    }
    const auto& samples = rec.path.samples;
    bool reflected = false;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      if (!samples[i].v_aux || !samples[i + 1].v_aux)
        throw std::invalid_argument(
            "classify_branches: fan lacks velocity histories (RealClassical "
            "required)");
      if (samples[i].v_aux->real() < 0.0 && samples[i + 1].v_aux->real() > 0.0) {
        reflected = true;
        break;
      }
    }
    BranchMember m;
    m.x0 = rec.x0.real();
    m.x_f = samples.back().x.real();
    m.s0_f = samples.back().jet.s(0);
    (reflected ? out.reflected : out.direct).members.push_back(m);
  }
  return out;
}

struct BranchCurve {
  std::vector<cplx> psi;
  std::vector<bool> covered;
};

// Interpolates S_0 linearly in x_f between neighboring members and applies
// psi = exp(i S_0 / hbar). S_0 is smooth within a branch, so this keeps the
// phase structure that interpolating psi itself would destroy.
inline BranchCurve branch_amplitude(const Branch& b,
                                    const std::vector<double>& x_grid,
                                    const PhysicalConstants& consts) {
  if (b.members.size() < 2)
    throw std::invalid_argument("branch_amplitude: branch needs >= 2 members");

  // monotonicity of x_f along x0 is what makes the branch single-valued
  const bool increasing = b.members.back().x_f > b.members.front().x_f;
  for (std::size_t i = 0; i + 1 < b.members.size(); ++i) {
    const double a = b.members[i].x_f, c = b.members[i + 1].x_f;
    if ((increasing && c <= a) || (!increasing && c >= a)) {
      std::ostringstream msg;
      msg << "branch_amplitude: fold inside branch between x0 = "
          << b.members[i].x0 << " and x0 = " << b.members[i + 1].x0;
      throw std::runtime_error(msg.str());
    }
  }

  std::vector<const BranchMember*> sorted;
  sorted.reserve(b.members.size());
  for (const auto& m : b.members) sorted.push_back(&m);
  std::sort(sorted.begin(), sorted.end(),
            [](const BranchMember* a, const BranchMember* c) {
              return a->x_f < c->x_f;
            });

  BranchCurve out;
  out.psi.assign(x_grid.size(), cplx{});
  out.covered.assign(x_grid.size(), false);
  const double lo = sorted.front()->x_f, hi = sorted.back()->x_f;
  for (std::size_t g = 0; g < x_grid.size(); ++g) {
    const double x = x_grid[g];
    if (x < lo || x > hi) continue;
    auto it = std::lower_bound(
        sorted.begin(), sorted.end(), x,
        [](const BranchMember* m, double v) { return m->x_f < v; });
    cplx s0;
    if ((*it)->x_f == x) {
      s0 = (*it)->s0_f;
    } else {
      const BranchMember* right = *it;
      const BranchMember* left = *(it - 1);
      const double th = (x - left->x_f) / (right->x_f - left->x_f);
      s0 = (1.0 - th) * left->s0_f + th * right->s0_f;
    }
    out.psi[g] = reconstruct_amplitude(s0, consts);
    out.covered[g] = true;
  }
  return out;
}

inline std::vector<cplx> superpose(const std::vector<cplx>& psi1,
                                   const std::vector<cplx>& psi2) {
  if (psi1.size() != psi2.size())
    throw std::invalid_argument("superpose: grids differ");
  std::vector<cplx> out(psi1.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = psi1[i] + psi2[i];
  return out;
}

struct BranchedAmplitudes {
  std::vector<double> x_grid;
  std::vector<cplx> psi1;        // reflected branch
  std::vector<cplx> psi2;        // direct branch
  std::vector<cplx> psi_sum;     // psi1 + psi2 where both cover, else 0
  std::vector<int> coverage;     // bit 1: reflected, bit 2: direct
};

inline BranchedAmplitudes build_branched_amplitudes(
    const ClassifiedFan& fan, const std::vector<double>& x_grid,
    const PhysicalConstants& consts) {
  BranchedAmplitudes out;
  out.x_grid = x_grid;
  const BranchCurve c1 = branch_amplitude(fan.reflected, x_grid, consts);
  const BranchCurve c2 = branch_amplitude(fan.direct, x_grid, consts);
  out.psi1 = c1.psi;
  out.psi2 = c2.psi;
  out.psi_sum.assign(x_grid.size(), cplx{});
  out.coverage.assign(x_grid.size(), 0);
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    out.coverage[i] = (c1.covered[i] ? 1 : 0) | (c2.covered[i] ? 2 : 0);
    if (out.coverage[i] == 3) out.psi_sum[i] = out.psi1[i] + out.psi2[i];
  }
  return out;
}

// Strict local minima of |psi| that dip below 0.1x the larger neighboring
// local maximum, refined by a parabola through |psi|^2.
inline std::vector<double> find_nodes(const std::vector<double>& x_grid,
                                      const std::vector<double>& abs_psi) {
  if (x_grid.size() != abs_psi.size())
    throw std::invalid_argument("find_nodes: grid size mismatch");
  std::vector<double> nodes;
  const std::size_t n = abs_psi.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(abs_psi[i] < abs_psi[i - 1] && abs_psi[i] < abs_psi[i + 1]))
      continue;
    // climb to the nearest local max (or the grid end) on each side
    std::size_t l = i - 1;
    while (l > 0 && abs_psi[l - 1] > abs_psi[l]) --l;
    std::size_t r = i + 1;
    while (r + 1 < n && abs_psi[r + 1] > abs_psi[r]) ++r;
    const double wall = std::max(abs_psi[l], abs_psi[r]);
    if (!(abs_psi[i] < 0.1 * wall)) continue;

    const double y0 = abs_psi[i - 1] * abs_psi[i - 1];
    const double y1 = abs_psi[i] * abs_psi[i];
    const double y2 = abs_psi[i + 1] * abs_psi[i + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    double shift = 0.0;
    if (denom > 0.0) shift = 0.5 * (y0 - y2) / denom;
    const double dx = x_grid[1] - x_grid[0];
    nodes.push_back(x_grid[i] + shift * dx);
  }
  return nodes;
}

}  // namespace qjet
