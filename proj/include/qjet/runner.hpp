#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include "qjet/analytic.hpp"
#include "qjet/branches.hpp"
#include "qjet/config.hpp"
#include "qjet/root_search.hpp"
#include "qjet/spectral.hpp"
#include "qjet/table.hpp"

namespace qjet {

struct RunnerOptions {
  std::string out_dir = ".";
  int threads = 1;
  std::optional<double> dt_override;
  bool reverse_sweep = false;  // root-search continuation direction
};

namespace detail {

inline std::string out_path(const RunnerOptions& opt, const RunConfig& c,
                            const std::string& suffix) {
  namespace fs = std::filesystem;
  fs::create_directories(opt.out_dir);
  return (fs::path(opt.out_dir) / (c.output_prefix + suffix)).string();
}

inline std::vector<double> window_grid(const WindowSpec& w) {
  std::vector<double> xs(static_cast<std::size_t>(w.points));
  for (int i = 0; i < w.points; ++i)
    xs[static_cast<std::size_t>(i)] =
        w.min + (w.max - w.min) * static_cast<double>(i) / (w.points - 1);
  return xs;
}

inline std::vector<double> fan_grid(const FanSpec& f) {
  std::vector<double> xs(static_cast<std::size_t>(f.count));
  for (int i = 0; i < f.count; ++i)
    xs[static_cast<std::size_t>(i)] =
        f.count > 1 ? f.min + (f.max - f.min) * static_cast<double>(i) /
                                  (f.count - 1)
                    : f.min;
  return xs;
}

inline std::vector<cplx> to_complex(const std::vector<double>& xs) {
  std::vector<cplx> out;
  out.reserve(xs.size());
  for (const double x : xs) out.emplace_back(x, 0.0);
  return out;
}

inline RunConfig with_overrides(RunConfig c, const RunnerOptions& opt) {
  if (opt.dt_override) {
    c.integration.dt = *opt.dt_override;
    c.rootsearch.dt = *opt.dt_override;
  }
  return c;
}

inline GridWavefunction compute_reference(const RunConfig& c,
                                          SplitOpDiagnostics* diag = nullptr) {
  GridWavefunction psi0 =
      sample_wavepacket(c.wavepacket, c.reference, c.constants);
  const double tf = c.integration.t_final;
  if (tf <= 0.0) return psi0;
  const auto n_steps =
      std::max<std::int64_t>(1, std::llround(tf / c.reference_dt));
  const double dt = tf / static_cast<double>(n_steps);
  return split_operator_propagate(std::move(psi0), c.potential, dt, n_steps,
                                  c.constants, diag);
}

}  // namespace detail

inline int run_propagate(const RunConfig& cfg, const RunnerOptions& opt) {
  const RunConfig c = detail::with_overrides(cfg, opt);
  const auto x0 = detail::to_complex(detail::fan_grid(c.fan));
  const Fan fan = propagate_fan(c.wavepacket, c.potential, c.strategy, x0,
                                c.truncation, c.integration, c.constants,
                                opt.threads);
  int divergent = 0;
  double max_halving = 0.0;
  for (const auto& rec : fan) {
    if (rec.path.diverged) ++divergent;
    max_halving = std::max(max_halving, rec.path.max_halving_error);
  }
  const std::string path = detail::out_path(opt, c, "_trajectories.csv");
  std::ofstream out(path);
  write_trajectory_table(out, fan, c);
  std::cout << "propagate: " << fan.size() << " trajectories ("
            << strategy_name(c.strategy) << ", N=" << c.truncation << "), "
            << divergent << " divergent, max halving error " << max_halving
            << "\n";
  std::cout << "wrote " << path << "\n";
  return 0;
}

inline int run_reference(const RunConfig& cfg, const RunnerOptions& opt) {
  const RunConfig c = detail::with_overrides(cfg, opt);
  SplitOpDiagnostics diag;
  const GridWavefunction psi = detail::compute_reference(c, &diag);
  const std::string path = detail::out_path(opt, c, "_reference.csv");
  std::ofstream out(path);
  write_grid_wavefunction(out, psi, c);
  std::cout << "reference: " << psi.n() << " grid points, norm "
            << grid_norm(psi) << ", aliased fraction " << diag.aliased_fraction
            << (diag.aliasing_warning ? " (WARNING: aliasing)" : "") << "\n";
  std::cout << "wrote " << path << "\n";
  return 0;
}

namespace detail {

struct InterferenceResult {
  ClassifiedFan classified;
  BranchedAmplitudes amplitudes;
  std::vector<double> nodes;
};

inline InterferenceResult interfere_pipeline(const RunConfig& c,
                                             int threads) {
  if (c.strategy != VelocityStrategy::RealClassical)
    throw std::invalid_argument(
        "strategy: interference requires realclassical");
  const auto x0 = to_complex(fan_grid(c.fan));
  const Fan fan = propagate_fan(c.wavepacket, c.potential, c.strategy, x0,
                                c.truncation, c.integration, c.constants,
                                threads);
  InterferenceResult out;
  out.classified = classify_branches(fan);
  const auto xs = window_grid(c.window);
  out.amplitudes = build_branched_amplitudes(out.classified, xs, c.constants);

  // node search over the largest contiguous fully covered run
  std::size_t best_b = 0, best_e = 0, b = 0;
  const auto& cov = out.amplitudes.coverage;
  while (b < cov.size()) {
    if (cov[b] != 3) {
      ++b;
      continue;
    }
    std::size_t e = b;
    while (e + 1 < cov.size() && cov[e + 1] == 3) ++e;
    if (e - b > best_e - best_b) {
      best_b = b;
      best_e = e;
    }
    b = e + 1;
  }
  if (best_e > best_b) {
    std::vector<double> xs_run(xs.begin() + static_cast<std::ptrdiff_t>(best_b),
                               xs.begin() + static_cast<std::ptrdiff_t>(best_e) + 1);
    std::vector<double> abs_run(xs_run.size());
    for (std::size_t i = 0; i < xs_run.size(); ++i)
      abs_run[i] = std::abs(out.amplitudes.psi_sum[best_b + i]);
    out.nodes = find_nodes(xs_run, abs_run);
  }
  return out;
}

}  // namespace detail

inline int run_interfere(const RunConfig& cfg, const RunnerOptions& opt) {
  const RunConfig c = detail::with_overrides(cfg, opt);
  const auto res = detail::interfere_pipeline(c, opt.threads);

  const std::string bpath = detail::out_path(opt, c, "_branches.csv");
  {
    std::ofstream out(bpath);
    write_branched_amplitudes(out, res.amplitudes, c);
  }
  const std::string npath = detail::out_path(opt, c, "_nodes.csv");
  {
    std::ofstream out(npath);
    write_metadata(out, c, "superposition nodes");
    out << "x_node\n";
    for (const double x : res.nodes) out << fmt17(x) << "\n";
  }
  std::cout << "interfere: reflected branch "
            << res.classified.reflected.members.size() << ", direct branch "
            << res.classified.direct.members.size() << ", excluded divergent "
            << res.classified.excluded_divergent << "\n";
  std::cout << "nodes of |psi1+psi2|:";
  for (const double x : res.nodes) std::cout << " " << x;
  std::cout << "\n";
  std::cout << "wrote " << bpath << " and " << npath << "\n";
  return 0;
}

namespace detail {

struct MethodSamples {
  std::vector<double> x;
  std::vector<cplx> psi;
  bool on_window_grid = false;
  int missing = 0;  // e.g. unconverged root-search targets
  std::string note;
  std::vector<double> nodes;
};

inline cplx interp_grid(const GridWavefunction& g, double x) {
  const double f = (x - g.x_min) / g.dx;
  const auto i = static_cast<std::ptrdiff_t>(std::floor(f));
  if (i < 0 || i + 1 >= static_cast<std::ptrdiff_t>(g.n()))
    throw std::invalid_argument("compare: point outside the reference grid");
  const double th = f - static_cast<double>(i);
  const auto u = static_cast<std::size_t>(i);
  return (1.0 - th) * g.psi[u] + th * g.psi[u + 1];
}

inline MethodSamples method_on_grid(const RunConfig& c,
                                    const RunnerOptions& opt,
                                    const std::vector<double>& xs) {
  MethodSamples out;
  switch (c.strategy) {
    case VelocityStrategy::Zevca: {
      const Fan fan = propagate_fan(c.wavepacket, c.potential, c.strategy,
                                    to_complex(xs), c.truncation,
                                    c.integration, c.constants, opt.threads);
      out.psi.reserve(fan.size());
      for (const auto& rec : fan) {
        if (rec.path.diverged) {
          ++out.missing;
          continue;
        }
        out.x.push_back(rec.x0.real());
        out.psi.push_back(rec.psi_final);
      }
      out.on_window_grid = out.missing == 0;
      out.note = "fixed-point trajectories at the window grid";
      break;
    }
    case VelocityStrategy::Bomca: {
      const auto grid = bomca_root_search_grid(
          xs, c.potential, c.wavepacket, c.truncation, c.integration.t_final,
          c.rootsearch, c.constants, opt.reverse_sweep);
      out.on_window_grid = false;  // some targets may be missing
      out.note = "root-search targets on the window grid";
      bool all = true;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto& r = grid.results[i];
        if (!r.converged) {
          ++out.missing;
          all = false;
          continue;
        }
        const auto rec =
            propagate_one(c.wavepacket, c.potential, VelocityStrategy::Bomca,
                          r.x0, c.truncation,
                          {c.rootsearch.dt, c.integration.t_final,
                           std::numeric_limits<std::int64_t>::max()},
                          c.constants);
        out.x.push_back(xs[i]);
        out.psi.push_back(rec.psi_final);
      }
      out.on_window_grid = all;
      break;
    }
    case VelocityStrategy::Dpm: {
      const Fan fan = propagate_fan(c.wavepacket, c.potential, c.strategy,
                                    to_complex(fan_grid(c.fan)), c.truncation,
                                    c.integration, c.constants, opt.threads);
      Branch endpoints;  // reuse the branch machinery for node detection
      for (const auto& rec : fan) {
        if (rec.path.diverged) {
          ++out.missing;
          continue;
        }
        const double xf = rec.path.samples.back().x.real();
        endpoints.members.push_back(
            {rec.x0.real(), xf, rec.path.samples.back().jet.s(0)});
        if (xf >= xs.front() && xf <= xs.back()) {
          out.x.push_back(xf);
          out.psi.push_back(rec.psi_final);
        }
      }
      out.note = "evaluated at real trajectory endpoints inside the window";
      const BranchCurve curve = branch_amplitude(endpoints, xs, c.constants);
      std::vector<double> xs_cov;
      std::vector<double> abs_cov;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!curve.covered[i]) continue;
        xs_cov.push_back(xs[i]);
        abs_cov.push_back(std::abs(curve.psi[i]));
      }
      out.nodes = find_nodes(xs_cov, abs_cov);
      break;
    }
    case VelocityStrategy::RealClassical: {
      const auto res = interfere_pipeline(c, opt.threads);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (res.amplitudes.coverage[i] != 3) {
          std::ostringstream msg;
          msg << "compare: window point x = " << xs[i]
              << " is not covered by both branches";
          throw std::runtime_error(msg.str());
        }
        out.x.push_back(xs[i]);
        out.psi.push_back(res.amplitudes.psi_sum[i]);
      }
      out.on_window_grid = true;
      out.note = "branch superposition psi1 + psi2";
      out.nodes = res.nodes;
      break;
    }
  }
  if (out.on_window_grid && out.nodes.empty() && !out.psi.empty()) {
    std::vector<double> abs_psi(out.psi.size());
    for (std::size_t i = 0; i < out.psi.size(); ++i)
      abs_psi[i] = std::abs(out.psi[i]);
    out.nodes = find_nodes(out.x, abs_psi);
  }
  return out;
}

}  // namespace detail

struct CompareReport {
  std::string method;
  std::string reference;
  double window_min = 0, window_max = 0, exclude_below = 0;
  std::size_t points_used = 0;
  int missing = 0;
  double l2_rel_abs = 0;       // relative L2 of |psi| over the stated window
  double sup_abs = 0;          // sup |  |psi_m| - |psi_r|  |
  double l2_rel_complex = 0;   // same with complex differences
  double sup_complex = 0;      // sup |psi_m - psi_r|
  double l2_rel_abs_full = 0;  // without the exclude_below clip
  std::vector<double> method_nodes;
  std::vector<double> reference_nodes;
  double max_node_displacement = 0;  // max over reference nodes
};

inline CompareReport compare_report(const RunConfig& cfg,
                                    const RunnerOptions& opt) {
  RunConfig c = detail::with_overrides(cfg, opt);
  const bool method_is_spectral = c.compare_method == "spectral";
  if (!c.compare_method.empty() && !method_is_spectral) {
    if (c.compare_method == "zevca") c.strategy = VelocityStrategy::Zevca;
    if (c.compare_method == "bomca") c.strategy = VelocityStrategy::Bomca;
    if (c.compare_method == "dpm") c.strategy = VelocityStrategy::Dpm;
    if (c.compare_method == "realclassical")
      c.strategy = VelocityStrategy::RealClassical;
  }
  const auto xs = detail::window_grid(c.window);

  // reference evaluator
  std::function<cplx(double)> ref;
  GridWavefunction ref_grid;
  if (c.compare_reference == "spectral") {
    ref_grid = detail::compute_reference(c);
    ref = [&ref_grid](double x) { return detail::interp_grid(ref_grid, x); };
  } else {  // analytic
    const double tf = c.integration.t_final;
    if (const auto* h = std::get_if<Harmonic>(&c.potential)) {
      const double omega = h->omega;
      ref = [&, omega, tf](double x) {
        return thawed_psi_harmonic(c.wavepacket, omega, x, tf, c.constants);
      };
    } else if (std::holds_alternative<Free>(c.potential)) {
      ref = [&, tf](double x) {
        return thawed_psi_free(c.wavepacket, x, tf, c.constants);
      };
    } else {
      throw std::invalid_argument(
          "compare.reference: analytic reference requires a harmonic or free "
          "potential");
    }
  }

  CompareReport rep;
  rep.method = method_is_spectral ? "spectral" : strategy_name(c.strategy);
  rep.reference = c.compare_reference;
  rep.window_min = c.window.min;
  rep.window_max = c.window.max;
  rep.exclude_below = c.window.exclude_below;

  detail::MethodSamples m;
  if (method_is_spectral) {
    m.x = xs;
    m.on_window_grid = true;
    m.psi.reserve(xs.size());
    for (const double x : xs) m.psi.push_back(ref(x));
    std::vector<double> abs_psi(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) abs_psi[i] = std::abs(m.psi[i]);
    m.nodes = find_nodes(xs, abs_psi);
    m.note = "the reference itself";
  } else {
    m = detail::method_on_grid(c, opt, xs);
  }
  rep.missing = m.missing;
  rep.method_nodes = m.nodes;

  double num = 0, den = 0, num_full = 0, den_full = 0;
  for (std::size_t i = 0; i < m.x.size(); ++i) {
    const cplx pr = ref(m.x[i]);
    const cplx pm = m.psi[i];
    const double dabs = std::abs(pm) - std::abs(pr);
    num_full += dabs * dabs;
    den_full += std::norm(pr);
    if (m.x[i] < c.window.exclude_below) continue;
    ++rep.points_used;
    num += dabs * dabs;
    den += std::norm(pr);
    rep.sup_abs = std::max(rep.sup_abs, std::abs(dabs));
    rep.sup_complex = std::max(rep.sup_complex, std::abs(pm - pr));
    rep.l2_rel_complex += std::norm(pm - pr);
  }
  rep.l2_rel_abs = den > 0 ? std::sqrt(num / den) : 0.0;
  rep.l2_rel_complex =
      den > 0 ? std::sqrt(rep.l2_rel_complex / den) : 0.0;
  rep.l2_rel_abs_full = den_full > 0 ? std::sqrt(num_full / den_full) : 0.0;

  // reference nodes over the full window grid
  std::vector<double> ref_abs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ref_abs[i] = std::abs(ref(xs[i]));
  rep.reference_nodes = find_nodes(xs, ref_abs);
  for (const double rn : rep.reference_nodes) {
    double best = std::numeric_limits<double>::infinity();
    for (const double mn : rep.method_nodes)
      best = std::min(best, std::abs(mn - rn));
    rep.max_node_displacement = std::max(rep.max_node_displacement, best);
  }
  return rep;
}

inline void print_report(std::ostream& out, const CompareReport& r) {
  out << "method = " << r.method << "\n";
  out << "reference = " << r.reference << "\n";
  out << "window = [" << r.window_min << ", " << r.window_max << "]\n";
  out << "exclude_below = " << r.exclude_below << "\n";
  out << "points_used = " << r.points_used << "\n";
  out << "missing_points = " << r.missing << "\n";
  out << "l2_rel_abs = " << r.l2_rel_abs << "\n";
  out << "sup_abs = " << r.sup_abs << "\n";
  out << "l2_rel_complex = " << r.l2_rel_complex << "\n";
  out << "sup_complex = " << r.sup_complex << "\n";
  out << "l2_rel_abs_unclipped = " << r.l2_rel_abs_full << "\n";
  out << "reference_nodes =";
  for (const double x : r.reference_nodes) out << " " << x;
  out << "\nmethod_nodes =";
  for (const double x : r.method_nodes) out << " " << x;
  out << "\nmax_node_displacement = " << r.max_node_displacement << "\n";
}

inline int run_compare(const RunConfig& cfg, const RunnerOptions& opt) {
  const RunConfig c = detail::with_overrides(cfg, opt);
  const CompareReport rep = compare_report(c, opt);
  const std::string path = detail::out_path(opt, c, "_compare.txt");
  {
    std::ofstream out(path);
    print_report(out, rep);
  }
  print_report(std::cout, rep);
  std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace qjet
