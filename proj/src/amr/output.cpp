#include <fstream>
#include <ostream>

#include "bouss/amr/driver.hpp"
#include "bouss/core/error.hpp"
#include "bouss/linalg/csr.hpp"

namespace bouss::amr {

void write_frame(std::ostream& out, const Hierarchy& H, double t) {
  out.precision(17);
  out << "# time " << t << '\n';
  for (int l = 1; l <= H.finest(); ++l)
    for (const Patch& p : H.level(l).patches) {
      out << "patch " << l << ' ' << p.box.i_lo << ' ' << p.box.j_lo << ' ' << p.nx() << ' ' << p.ny() << ' ' << p.dx
          << ' ' << p.dy << ' ' << p.x_origin + p.box.i_lo * p.dx << ' ' << p.y_origin + p.box.j_lo * p.dy << '\n';
      for (int j = 0; j < p.ny(); ++j)
        for (int i = 0; i < p.nx(); ++i) {
          const double eta = eta_of(p.state(i, j), p.B(i, j), H.cfg.dry_tolerance).value;
          out << p.h(i, j) << ' ' << p.hu(i, j) << ' ' << p.hv(i, j) << ' ' << eta << ' ' << p.psi1(i, j) << ' '
              << p.psi2(i, j) << '\n';
        }
    }
}

void write_manifest(std::ostream& out, const SimConfig& cfg, const RunSummary& s) {
  out.precision(17);
  out << to_text(cfg);
  out << "wall_seconds=" << s.wall_seconds << '\n';
  out << "coarse_steps=" << s.coarse_steps << '\n';
  out << "final_time=" << s.final_time << '\n';
  for (std::size_t l = 0; l < s.levels.size(); ++l) {
    const std::string k = std::to_string(l + 1);
    out << "solves_level_" << k << '=' << s.levels[l].solves << '\n';
    out << "solves_per_coarse_step_min_level_" << k << '=' << s.levels[l].min_per_coarse_step << '\n';
    out << "solves_per_coarse_step_max_level_" << k << '=' << s.levels[l].max_per_coarse_step << '\n';
    out << "krylov_iterations_level_" << k << '=' << s.levels[l].krylov_iterations << '\n';
  }
  long total = 0;
  for (const LevelStats& l : s.levels) total += l.krylov_iterations;
  out << "krylov_iterations=" << total << '\n';
  out << "max_abs_eta=" << s.max_abs_eta << '\n';
  out << "max_abs_psi=" << s.max_abs_psi << '\n';
  out << "mass_initial=" << s.mass_initial << '\n';
  out << "mass_final=" << s.mass_final << '\n';
  out << "frames=" << s.frames_written << '\n';
}

void dump_level_system(const Hierarchy& H, int level, const std::string& matrix_path) {
  std::vector<Patch> copy = H.level(level).patches;
  std::vector<Patch*> ptrs;
  for (Patch& p : copy) ptrs.push_back(&p);
  const sgn::SgnParams params = sgn::sgn_params(H.cfg);
  sgn::enumerate_cells(ptrs, H.domain);
  std::vector<sgn::SgnFields> fields;
  for (const Patch* p : ptrs) fields.push_back(sgn::compute_phi_w(*p, params));
  const sgn::LevelSystem sys = sgn::assemble_level_system(ptrs, fields, H.domain, params);
  std::ofstream out(matrix_path);
  if (!out) throw Error("cannot write '" + matrix_path + "'");
  linalg::write_matrix_market(out, sys.A);
}

void dump_level_mask(const Hierarchy& H, int level, const std::string& mask_path) {
  std::ofstream out(mask_path);
  if (!out) throw Error("cannot write '" + mask_path + "'");
  const sgn::SgnParams params = sgn::sgn_params(H.cfg);
  for (const Patch& p : H.level(level).patches) {
    const Grid2D<unsigned char> m = sgn::switch_mask(p, params);
    out << "patch " << level << ' ' << p.box.i_lo << ' ' << p.box.j_lo << ' ' << p.nx() << ' ' << p.ny() << '\n';
    // North row first, so the text reads like a map.
    for (int j = p.ny() - 1; j >= 0; --j) {
      for (int i = 0; i < p.nx(); ++i) out << (m(i, j) ? '1' : '0');
      out << '\n';
    }
  }
}

}  // namespace bouss::amr
