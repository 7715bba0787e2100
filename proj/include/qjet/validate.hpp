#pragma once

#include <iomanip>
#include <iostream>
#include <random>

#include "qjet/analytic.hpp"
#include "qjet/branches.hpp"
#include "qjet/root_search.hpp"
#include "qjet/runner.hpp"
#include "qjet/table.hpp"

namespace qjet {

namespace detail {

class CheckSink {
 public:
  explicit CheckSink(std::ostream& out) : out_(out) {}

  void check(const std::string& name, bool ok, double measured,
             double bound) {
    out_ << (ok ? "ok   " : "FAIL ") << std::left << std::setw(52) << name
         << " measured " << std::scientific << std::setprecision(2) << measured
         << " bound " << bound << std::defaultfloat << "\n";
    if (!ok) ++failures_;
  }
  int failures() const { return failures_; }

 private:
  std::ostream& out_;
  int failures_ = 0;
};

}  // namespace detail

// Fast end-to-end pass over the library's core invariants. Returns the
// number of failed checks.
inline int run_validate(std::ostream& out) {
  detail::CheckSink sink(out);
  const PhysicalConstants au{1.0, 1.0};

  {  // Leibniz convolution vs brute-force binomial expansion
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      PhaseJet jet;
      jet.order = 10;
      for (int n = 0; n <= jet.order; ++n) jet[n] = cplx(u(rng), u(rng));
      for (int n = 0; n <= 10; ++n) {
        cplx brute{};
        for (int j = 0; j <= n; ++j) {
          double b = 1.0;
          for (int i = 0; i < j; ++i)
            b = b * static_cast<double>(n - i) / static_cast<double>(i + 1);
          brute += b * jet.s(j + 1) * jet.s(n - j + 1);
        }
        const double scale = std::max(1.0, std::abs(brute));
        worst = std::max(worst,
                         std::abs(leibniz_square(jet, n) - brute) / scale);
      }
    }
    sink.check("leibniz_square vs brute force", worst < 1e-12, worst, 1e-12);
  }

  {  // stationary ground-state jet under the hierarchy RHS
    TrajectoryState st;
    st.x = cplx{};
    st.jet.order = 2;
    st.jet[1] = cplx{};
    st.jet[2] = cplx(0.0, 1.0);
    const Potential well = Harmonic{1.0, 1.0};
    const PhaseJet d = hierarchy_rhs(st, cplx{}, well, au);
    const double err = std::max(std::abs(d.s(2)), std::abs(d.s(0) + 0.5));
    sink.check("hierarchy RHS on the harmonic ground jet", err == 0.0, err,
               0.0);
  }

  {  // potential derivatives vs central finite differences
    const std::vector<Potential> fams = {
        Harmonic{1.3, 1.0}, Morse{10.25, 0.2209},
        Polynomial{{0.5, -1.0, 0.25, 0.125, -0.0625}}};
    double worst = 0.0;
    const double h = 1e-5;
    for (const auto& p : fams) {
      for (double x : {-2.0, 0.0, 1.5, 9.342}) {
        for (int n = 1; n <= 6; ++n) {
          const cplx fd = (eval_derivative(p, cplx(x + h, 0.0), n - 1) -
                           eval_derivative(p, cplx(x - h, 0.0), n - 1)) /
                          (2.0 * h);
          const cplx an = eval_derivative(p, cplx(x, 0.0), n);
          const double scale = std::max(1.0, std::abs(an));
          worst = std::max(worst, std::abs(fd - an) / scale);
        }
      }
    }
    sink.check("potential derivatives vs finite differences", worst < 1e-6,
               worst, 1e-6);
  }

  {  // DPM complex form vs split real form, Morse
    const Potential morse = Morse{10.25, 0.2209};
    const auto w = GaussianWavepacket::make(0.5, 9.342, 0.0, au);
    IntegrationConfig cfg{1e-3, 5.93, 100};
    const auto rec = propagate_one(w, morse, VelocityStrategy::Dpm,
                                   cplx(8.8, 0.0), 2, cfg, au);
    DpmSplitState y0 = jet_to_split(
        init_state(w, VelocityStrategy::Dpm, cplx(8.8, 0.0), 2, au), au);
    const auto split = integrate(
        y0,
        [&](const DpmSplitState& s) { return dpm_split_rhs(s, morse, au); },
        cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < rec.path.samples.size(); ++i) {
      const TrajectoryState a = rec.path.samples[i];
      const TrajectoryState b = split_to_jet(split.samples[i], au);
      worst = std::max(worst, std::abs(a.x - b.x));
      for (int n = 0; n <= 2; ++n)
        worst = std::max(worst, std::abs(a.jet.s(n) - b.jet.s(n)));
    }
    sink.check("DPM complex form vs split form (Morse)", worst < 1e-9, worst,
               1e-9);
  }

  {  // ZEVCA fixed point is bitwise
    const Potential morse = Morse{10.25, 0.2209};
    const auto w = GaussianWavepacket::make(0.5, 9.342, 0.0, au);
    const cplx x0(7.7, 0.0);
    const auto rec = propagate_one(w, morse, VelocityStrategy::Zevca, x0, 2,
                                   {1e-3, 2.0, 500}, au);
    bool exact = true;
    for (const auto& s : rec.path.samples) exact = exact && (s.x == x0);
    sink.check("ZEVCA positions bitwise constant", exact, exact ? 0.0 : 1.0,
               0.0);
  }

  {  // BOMCA momentum law: dS1/dt + V1 = 0 along the trajectory
    const Potential morse = Morse{10.25, 0.2209};
    const auto w = GaussianWavepacket::make(0.5, 9.342, 0.0, au);
    const auto rec = propagate_one(w, morse, VelocityStrategy::Bomca,
                                   cplx(9.0, 0.0), 2, {1e-3, 3.0, 50}, au);
    double worst = 0.0;
    for (const auto& s : rec.path.samples) {
      const TrajectoryState d = full_rhs(VelocityStrategy::Bomca, s, morse, au);
      worst = std::max(worst,
                       std::abs(d.jet.s(1) + eval_derivative(morse, s.x, 1)));
    }
    sink.check("BOMCA momentum law residual", worst < 1e-10, worst, 1e-10);
  }

  {  // RK4 order: halving dt shrinks the error by ~16
    auto rhs = [](const TrajectoryState& s) {
      TrajectoryState d;
      d.x = cplx(0.0, 1.0) * s.x;  // circle
      return d;
    };
    auto run = [&](double dt) {
      TrajectoryState s;
      s.x = cplx(1.0, 0.0);
      const auto r = integrate(s, rhs, {dt, 2.0, 1 << 30});
      return std::abs(r.samples.back().x - std::exp(cplx(0.0, 2.0)));
    };
    const double ratio = run(2e-3) / run(1e-3);
    sink.check("RK4 order (error ratio in [12,20])",
               ratio > 12.0 && ratio < 20.0, ratio, 16.0);
  }

  {  // split-operator: ground state stationary + free packet width law
    const PhysicalConstants pc{1.0, 1.0};
    const auto w = GaussianWavepacket::make(0.5, 0.0, 0.0, pc);
    GridWavefunction g = sample_wavepacket(w, {-12.0, 12.0, 512}, pc);
    const GridWavefunction g0 = g;
    g = split_operator_propagate(std::move(g), Harmonic{1.0, 1.0}, 1e-3, 6283,
                                 pc);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i)
      worst = std::max(worst, std::abs(std::abs(g.psi[i]) -
                                       std::abs(g0.psi[i])));
    sink.check("split-operator ground state |psi| stationary", worst < 1e-8,
               worst, 1e-8);

    GridWavefunction f = sample_wavepacket(w, {-40.0, 40.0, 4096}, pc);
    f = split_operator_propagate(std::move(f), Free{}, 1e-3, 2000, pc);
    double worst_free = 0.0;
    for (std::size_t i = 0; i < f.n(); ++i)
      worst_free = std::max(
          worst_free,
          std::abs(f.psi[i] - thawed_psi_free(w, f.x(i), 2.0, pc)));
    sink.check("split-operator free packet vs width law", worst_free < 1e-8,
               worst_free, 1e-8);
  }

  {  // BOMCA root search on the ground state: closed-form map, <= 3 iters
    const PhysicalConstants pc{1.0, 1.0};
    const auto w = GaussianWavepacket::make(0.5, 0.0, 0.0, pc);
    const Potential well = Harmonic{1.0, 1.0};
    const double tf = 1.3;
    RootSearchConfig cfg;
    double worst = 0.0;
    int worst_iters = 0;
    for (double target : {-0.8, 0.4, 1.2}) {
      const auto r = bomca_root_search(target, well, w, 2, tf, cfg, pc);
      const cplx closed = target * std::exp(cplx(0.0, -tf));
      worst = std::max(worst, std::abs(r.x0 - closed));
      worst_iters = std::max(worst_iters, r.converged ? r.iterations : 99);
    }
    sink.check("BOMCA root search vs closed form", worst < 1e-8, worst, 1e-8);
    sink.check("BOMCA root search iterations <= 3", worst_iters <= 3,
               worst_iters, 3.0);
  }

  {  // init_jet vs numerical differentiation of -i hbar ln psi
    const auto w = GaussianWavepacket::make(cplx(0.4, 0.1), 1.0, 0.7, au);
    const double h = 0.5;  // ln psi is polynomial, so any step is exact
    auto lnpsi = [&](double x) {
      return initial_action(w, cplx(x, 0.0), au) * cplx(0.0, 1.0) / au.hbar;
    };
    const double x0 = 1.8;
    const PhaseJet jet = init_jet(w, cplx(x0, 0.0), 4, au);
    const cplx d1 = (lnpsi(x0 + h) - lnpsi(x0 - h)) / (2 * h);
    const cplx d2 =
        (lnpsi(x0 + h) - 2.0 * lnpsi(x0) + lnpsi(x0 - h)) / (h * h);
    const cplx mih(0.0, -au.hbar);
    const double err =
        std::max(std::abs(mih * d1 - jet.s(1)), std::abs(mih * d2 - jet.s(2)));
    sink.check("init_jet vs numerical ln psi derivatives", err < 1e-8, err,
               1e-8);
  }

  {  // trajectory table round-trips at full precision
    const auto w = GaussianWavepacket::make(0.5, 9.342, 0.0, au);
    RunConfig c;
    c.wavepacket = w;
    c.potential = Morse{10.25, 0.2209};
    c.strategy = VelocityStrategy::RealClassical;
    c.truncation = 2;
    const auto x0 = linspace_complex(8.0, 10.0, 3);
    Fan fan = propagate_fan(w, c.potential, c.strategy, x0, 2,
                            {1e-3, 0.5, 100}, au);
    std::stringstream buf;
    write_trajectory_table(buf, fan, c);
    const auto rows = read_trajectory_table(buf);
    double worst = 0.0;
    std::size_t k = 0;
    bool shape_ok = true;
    for (std::size_t id = 0; id < fan.size(); ++id)
      for (const auto& st : fan[id].path.samples) {
        if (k >= rows.size()) {
          shape_ok = false;
          break;
        }
        worst = std::max(worst, std::abs(rows[k].x - st.x));
        worst = std::max(worst, std::abs(rows[k].t - st.t));
        for (int n = 0; n <= 2; ++n)
          worst = std::max(worst, std::abs(rows[k].jet[static_cast<std::size_t>(n)] -
                                           st.jet.s(n)));
        ++k;
      }
    shape_ok = shape_ok && k == rows.size();
    sink.check("trajectory table round-trip", shape_ok && worst == 0.0, worst,
               0.0);
  }

  {  // config validation rejects an empty fan range
    bool threw = false;
    try {
      parse_config_text("fan.min = 2\nfan.max = 2\n");
    } catch (const std::invalid_argument&) {
      threw = true;
    }
    sink.check("config rejects empty fan range", threw, threw ? 0.0 : 1.0,
               0.0);
  }

  return sink.failures();
}

}  // namespace qjet
