#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "qjet/branches.hpp"
#include "qjet/config.hpp"
#include "qjet/fan.hpp"
#include "qjet/version.hpp"

namespace qjet {

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char ch : s) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ull;
  }
  return h;
}

// 17 significant digits round-trip a double exactly through text.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string canonical_config_text(const RunConfig& c) {
  std::ostringstream s;
  s << "label=" << c.label << ";hbar=" << fmt17(c.constants.hbar)
    << ";mass=" << fmt17(c.constants.mass)
    << ";alpha0=" << fmt17(c.wavepacket.alpha0.real()) << ","
    << fmt17(c.wavepacket.alpha0.imag()) << ";xc=" << fmt17(c.wavepacket.xc)
    << ";pc=" << fmt17(c.wavepacket.pc)
    << ";gamma0=" << fmt17(c.wavepacket.gamma0.real()) << ","
    << fmt17(c.wavepacket.gamma0.imag());
  s << ";potential=";
  if (std::holds_alternative<Free>(c.potential)) {
    s << "free";
  } else if (const auto* h = std::get_if<Harmonic>(&c.potential)) {
    s << "harmonic," << fmt17(h->omega) << "," << fmt17(h->mass);
  } else if (const auto* m = std::get_if<Morse>(&c.potential)) {
    s << "morse," << fmt17(m->depth) << "," << fmt17(m->range);
  } else if (const auto* p = std::get_if<Polynomial>(&c.potential)) {
    s << "polynomial";
    for (const double v : p->coefficients) s << "," << fmt17(v);
  }
  s << ";strategy=" << strategy_name(c.strategy)
    << ";truncation=" << c.truncation << ";fan=" << c.fan.count << ","
    << fmt17(c.fan.min) << "," << fmt17(c.fan.max)
    << ";dt=" << fmt17(c.integration.dt)
    << ";t_final=" << fmt17(c.integration.t_final)
    << ";store_every=" << c.integration.store_every
    << ";reference=" << fmt17(c.reference.x_min) << ","
    << fmt17(c.reference.x_max) << "," << c.reference.n_points << ","
    << fmt17(c.reference_dt) << ";rootsearch=" << c.rootsearch.max_iter << ","
    << fmt17(c.rootsearch.tol_imag) << "," << fmt17(c.rootsearch.step)
    << ";window=" << fmt17(c.window.min) << "," << fmt17(c.window.max) << ","
    << c.window.points << "," << fmt17(c.window.exclude_below)
    << ";compare=" << c.compare_reference << "," << c.compare_method;
  return s.str();
}

inline std::string config_fingerprint(const RunConfig& c) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                static_cast<unsigned long long>(fnv1a(canonical_config_text(c))));
  return buf;
}

inline void write_metadata(std::ostream& out, const RunConfig& c,
                           const std::string& kind) {
  out << "# qjet " << kind << "\n";
  out << "# version = " << kVersion << "\n";
  out << "# config = " << config_fingerprint(c) << "\n";
  out << "# label = " << c.label << "\n";
}

// One row per stored sample: traj_id, t, x, v, S_0..S_N, diverged.
inline void write_trajectory_table(std::ostream& out, const Fan& fan,
                                   const RunConfig& c) {
  const int N = c.truncation;
  write_metadata(out, c, "trajectory table");
  out << "# strategy = " << strategy_name(c.strategy) << "\n";
  out << "traj_id,t,re_x,im_x,re_v,im_v";
  for (int n = 0; n <= N; ++n) out << ",re_S" << n << ",im_S" << n;
  out << ",diverged\n";
  for (std::size_t id = 0; id < fan.size(); ++id) {
    const auto& rec = fan[id];
    for (const auto& st : rec.path.samples) {
      const cplx v = st.v_aux ? *st.v_aux
                              : velocity_of(c.strategy, st, c.constants);
      out << id << "," << fmt17(st.t) << "," << fmt17(st.x.real()) << ","
          << fmt17(st.x.imag()) << "," << fmt17(v.real()) << ","
          << fmt17(v.imag());
      for (int n = 0; n <= N; ++n)
        out << "," << fmt17(st.jet.s(n).real()) << ","
            << fmt17(st.jet.s(n).imag());
      out << "," << (rec.path.diverged ? 1 : 0) << "\n";
    }
  }
}

struct TrajectoryRow {
  std::int64_t traj_id = 0;
  double t = 0.0;
  cplx x{};
  cplx v{};
  std::vector<cplx> jet;
  bool diverged = false;
};

inline std::vector<TrajectoryRow> read_trajectory_table(std::istream& in) {
  std::vector<TrajectoryRow> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {  // column header
      header_seen = true;
      continue;
    }
    std::vector<double> f;
    std::string item;
    std::istringstream ls(line);
    while (std::getline(ls, item, ',')) f.push_back(std::stod(item));
    if (f.size() < 7 || (f.size() - 7) % 2 != 0)
      throw std::runtime_error("trajectory table: malformed row");
    TrajectoryRow row;
    row.traj_id = static_cast<std::int64_t>(f[0]);
    row.t = f[1];
    row.x = cplx(f[2], f[3]);
    row.v = cplx(f[4], f[5]);
    for (std::size_t k = 6; k + 2 < f.size(); k += 2)
      row.jet.emplace_back(f[k], f[k + 1]);
    row.diverged = f.back() != 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void write_grid_wavefunction(std::ostream& out,
                                    const GridWavefunction& g,
                                    const RunConfig& c) {
  write_metadata(out, c, "wavefunction");
  out << "x,re_psi,im_psi,abs_psi\n";
  for (std::size_t i = 0; i < g.n(); ++i)
    out << fmt17(g.x(i)) << "," << fmt17(g.psi[i].real()) << ","
        << fmt17(g.psi[i].imag()) << "," << fmt17(std::abs(g.psi[i])) << "\n";
}

inline void write_branched_amplitudes(std::ostream& out,
                                      const BranchedAmplitudes& b,
                                      const RunConfig& c) {
  write_metadata(out, c, "branched amplitudes");
  out << "x,re_psi1,im_psi1,re_psi2,im_psi2,re_psi_sum,im_psi_sum,coverage\n";
  for (std::size_t i = 0; i < b.x_grid.size(); ++i)
    out << fmt17(b.x_grid[i]) << "," << fmt17(b.psi1[i].real()) << ","
        << fmt17(b.psi1[i].imag()) << "," << fmt17(b.psi2[i].real()) << ","
        << fmt17(b.psi2[i].imag()) << "," << fmt17(b.psi_sum[i].real()) << ","
        << fmt17(b.psi_sum[i].imag()) << "," << b.coverage[i] << "\n";
}

}  // namespace qjet
