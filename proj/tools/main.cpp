// charpit: first-order PDE toolkit built on characteristic strips.
//
// Subcommands:
//   verify  run the generic verification battery for psi at a point
//   strip   integrate one characteristic strip to CSV
//   solve   complete Cauchy data and sweep a solution sheet (mesh + CSV)
//   monge   sample the cone of characteristic directions over a point
//
// Exit codes: 0 ok, 1 usage, 2 point off the PDE, 3 degenerate point,
// 4 characteristic (non-transversal) initial data, 5 numeric failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "charpit/expr.hpp"
#include "charpit/jets.hpp"
#include "charpit/pde.hpp"
#include "charpit/strips.hpp"
#include "charpit/weil.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitOffSurface = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitTransversality = 4;
constexpr int kExitNumeric = 5;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CommonOptions {
  std::string psi;
  double on_tol = 1e-9;
  double inv_tol = 1e-9;
  double conservation_tol = 1e-8;

  charpit::Tolerances tols() const { return {on_tol, inv_tol}; }
  charpit::StripOptions strip_options() const {
    charpit::StripOptions o;
    o.conservation_tol = conservation_tol;
    o.tols = tols();
    return o;
  }
};

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->set_help_flag("--help", "print help");  // frees -h for the step-size flag
  cmd->add_option("--psi", common.psi, "defining expression psi(x,y,z,p,q)")->required();
  cmd->add_option("--tol", common.on_tol, "membership tolerance for |psi|");
  cmd->add_option("--inv-tol", common.inv_tol, "invertibility / nondegeneracy threshold");
  cmd->add_option("--conservation-tol", common.conservation_tol,
                  "|psi| guard along integrated strips");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
  if (!out) throw charpit::Error("cannot open output file: " + path);
  return out;
}

std::string sibling_csv_path(const std::string& mesh_path) {
  const auto slash = mesh_path.find_last_of('/');
  const auto dot = mesh_path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return mesh_path + ".csv";
  return mesh_path.substr(0, dot) + ".csv";
}

// ---------------------------------------------------------------------------

int cmd_verify(const CommonOptions& common, const std::vector<double>& point) {
  const charpit::Pde pde = charpit::make_pde(common.psi);
  const charpit::SurfaceElement<double> el{point[0], point[1], point[2], point[3],
                                           point[4]};
  charpit::PdePoint pt;
  try {
    pt = charpit::at_element(pde, el, common.tols());
  } catch (const charpit::DegeneracyError& e) {
    std::cout << "degenerate point: max(|psi_p|,|psi_q|) = " << fmt(e.margin) << "\n";
    return kExitDegenerate;
  }
  if (!pt.on_surface) {
    std::cout << "point is not on the PDE: |psi| = " << fmt(std::abs(pt.value)) << "\n";
    return kExitOffSurface;
  }

  bool all_ok = true;
  auto report = [&](const char* name, bool ok, double residual) {
    std::cout << "check " << name << ": " << (ok ? "PASS" : "FAIL")
              << " (residual " << fmt(residual) << ")\n";
    all_ok = all_ok && ok;
  };

  {
    // reversed united-position expression must vanish structurally
    namespace weil = charpit::weil;
    const weil::BlockSpec spec = weil::BlockSpec::single(5, 1);
    const weil::Element dx = weil::Element::generator(spec, 0, 0);
    const weil::Element dy = weil::Element::generator(spec, 0, 1);
    const weil::Element dp = weil::Element::generator(spec, 0, 3);
    const weil::Element dq = weil::Element::generator(spec, 0, 4);
    const weil::Element dz = dx * el.p + dy * el.q;
    const weil::Element rev = (dp + el.p) * -dx + (dq + el.q) * -dy + dz;
    double residual = 0.0;
    for (const auto& [m, c] : rev.terms()) residual = std::max(residual, std::abs(c));
    report("united-position-symmetry", rev.is_zero(), residual);
  }
  {
    const double r = charpit::symmetry_residual(pt);
    report("characteristic-symmetry", r <= 1e-12, r);
  }
  {
    const std::array<double, 2> md = charpit::monge_direction(pt);
    const charpit::CharDirection cd = charpit::characteristic_direction(pt);
    const double norm = std::hypot(cd.dx, cd.dy);
    const double diff = std::max(std::abs(md[0] - cd.dx / norm),
                                 std::abs(md[1] - cd.dy / norm));
    const double generic = charpit::monge_generic_residual(pt);
    report("monge-calotte-agreement", diff <= 1e-10 && generic <= 1e-12,
           std::max(diff, generic));
  }
  {
    const charpit::CalotteFamily fam = charpit::solution_calotte_family(pt);
    const charpit::AugmentedSystem& sys = fam.system;
    double residual = 0.0;
    auto row_residual = [&](double r, double s, double t) {
      const double r1 = sys.p1 * r + sys.p2 * s - sys.r1;
      const double r2 = sys.p1 * s + sys.p2 * t - sys.r2;
      const double scale = std::max({1.0, std::abs(sys.p1 * r), std::abs(sys.p2 * s),
                                     std::abs(sys.p1 * s), std::abs(sys.p2 * t),
                                     std::abs(sys.r1), std::abs(sys.r2)});
      return std::max(std::abs(r1), std::abs(r2)) / scale;
    };
    for (double c : {-10.0, -1.0, 0.0, 1.0, 10.0}) {
      residual = std::max(residual,
                          row_residual(fam.particular[0] + c * fam.kernel[0],
                                       fam.particular[1] + c * fam.kernel[1],
                                       fam.particular[2] + c * fam.kernel[2]));
    }
    const double hom = std::max(
        std::abs(sys.p1 * fam.kernel[0] + sys.p2 * fam.kernel[1]),
        std::abs(sys.p1 * fam.kernel[1] + sys.p2 * fam.kernel[2]));
    residual = std::max(residual, hom / std::max(1.0, std::abs(sys.p1) + std::abs(sys.p2)));
    report("solution-calotte-family", residual <= 1e-12, residual);
  }

  std::cout << "verdict: " << (all_ok ? "PASS" : "FAIL") << "\n";
  return all_ok ? kExitOk : kExitNumeric;
}

// ---------------------------------------------------------------------------

void write_strip_rows(std::ofstream& out, const charpit::Strip& strip) {
  out << "t,x,y,z,p,q,psi_residual\n";
  for (const charpit::StripSample& s : strip.samples)
    out << fmt(s.t) << ',' << fmt(s.x) << ',' << fmt(s.y) << ',' << fmt(s.z) << ','
        << fmt(s.p) << ',' << fmt(s.q) << ',' << fmt(s.psi) << "\n";
}

int cmd_strip(const CommonOptions& common, const std::vector<double>& point,
              double t_end, double h, const std::string& out_path) {
  const charpit::Pde pde = charpit::make_pde(common.psi);
  const charpit::SurfaceElement<double> el{point[0], point[1], point[2], point[3],
                                           point[4]};
  try {
    const charpit::Strip strip =
        charpit::integrate_strip(pde, el, t_end, h, common.strip_options());
    std::ofstream out = open_out(out_path);
    write_strip_rows(out, strip);
    std::cout << "wrote " << strip.samples.size() << " samples to " << out_path << "\n";
    return kExitOk;
  } catch (const charpit::StripIntegrationError& e) {
    std::ofstream out = open_out(out_path);
    write_strip_rows(out, e.partial);
    out << "# error: " << e.what() << "\n";
    std::cerr << e.what() << "\n";
    return e.reason == charpit::StripIntegrationError::Reason::degeneracy
               ? kExitDegenerate
               : kExitNumeric;
  }
}

// ---------------------------------------------------------------------------

int cmd_solve(const CommonOptions& common, const std::string& cx, const std::string& cy,
              const std::string& cz, double s_min, double s_max, int n_s,
              const std::vector<double>& seed, double t_end, double h,
              const std::string& out_path) {
  const charpit::Pde pde = charpit::make_pde(common.psi);
  const charpit::Curve curve = charpit::Curve::parse(cx, cy, cz);

  std::vector<double> s_values;
  s_values.reserve(static_cast<std::size_t>(n_s));
  for (int i = 0; i < n_s; ++i)
    s_values.push_back(n_s == 1 ? s_min : s_min + (s_max - s_min) * i / (n_s - 1));

  const charpit::InitialStrip init =
      charpit::complete_to_strip(pde, curve, s_values, seed[0], seed[1], common.tols());
  const charpit::SolutionSheet sheet =
      charpit::sweep(pde, init, t_end, h, common.strip_options());

  std::ofstream mesh = open_out(out_path);
  for (const charpit::SheetNode& n : sheet.nodes)
    mesh << "v " << fmt(n.x) << ' ' << fmt(n.y) << ' ' << fmt(n.z) << "\n";
  for (std::size_t i = 0; i + 1 < sheet.n_s; ++i) {
    for (std::size_t j = 0; j + 1 < sheet.n_t; ++j) {
      const std::size_t a = i * sheet.n_t + j + 1;  // 1-based
      mesh << "f " << a << ' ' << a + 1 << ' ' << a + sheet.n_t + 1 << ' '
           << a + sheet.n_t << "\n";
    }
  }

  const std::string csv_path = sibling_csv_path(out_path);
  std::ofstream csv = open_out(csv_path);
  csv << "s,t,x,y,z,p,q\n";
  for (const charpit::SheetNode& n : sheet.nodes)
    csv << fmt(n.s) << ',' << fmt(n.t) << ',' << fmt(n.x) << ',' << fmt(n.y) << ','
        << fmt(n.z) << ',' << fmt(n.p) << ',' << fmt(n.q) << "\n";

  const charpit::SheetResiduals res = charpit::sheet_residuals(pde, sheet);
  std::cout << "wrote mesh " << out_path << " and samples " << csv_path << "\n"
            << "max |psi| = " << fmt(res.max_psi)
            << ", max strip defect = " << fmt(res.max_strip)
            << ", max gradient residual = " << fmt(res.max_gradient) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_monge(const CommonOptions& common, const std::vector<double>& at,
              const std::vector<double>& seed, int n, const std::string& out_path) {
  const charpit::Pde pde = charpit::make_pde(common.psi);
  const std::vector<charpit::ConeSample> samples = charpit::monge_cone_sample(
      pde, at[0], at[1], at[2], n, seed[0], seed[1], common.tols());

  std::ofstream out = open_out(out_path);
  out << "p,q,dx,dy,dz\n";
  for (const charpit::ConeSample& s : samples)
    out << fmt(s.p) << ',' << fmt(s.q) << ',' << fmt(s.direction.dx) << ','
        << fmt(s.direction.dy) << ',' << fmt(s.direction.dz) << "\n";
  std::cout << "wrote " << samples.size() << " cone directions to " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"characteristic-strip toolkit for first-order PDEs psi(x,y,z,p,q) = 0"};
  app.require_subcommand(1);

  CommonOptions common;
  std::vector<double> point, at, seed;
  std::string out_path, curve_x, curve_y, curve_z;
  double t_end = 1.0, h = 1e-3, s_min = 0.0, s_max = 1.0;
  int n_s = 2, n = 16;

  CLI::App* verify = app.add_subcommand("verify", "run the verification battery at a point");
  add_common(verify, common);
  verify->add_option("--point", point, "surface element x y z p q")->expected(5)->required();

  CLI::App* strip = app.add_subcommand("strip", "integrate one characteristic strip");
  add_common(strip, common);
  strip->add_option("--point", point, "start element x y z p q")->expected(5)->required();
  strip->add_option("--t-end", t_end, "integration endpoint")->required();
  strip->add_option("--h", h, "step size");
  strip->add_option("--out", out_path, "CSV output path")->required();

  CLI::App* solve = app.add_subcommand("solve", "sweep a solution sheet from Cauchy data");
  add_common(solve, common);
  solve->add_option("--curve-x", curve_x, "initial curve x(s)")->required();
  solve->add_option("--curve-y", curve_y, "initial curve y(s)")->required();
  solve->add_option("--curve-z", curve_z, "initial curve z(s)")->required();
  solve->add_option("--s-min", s_min, "curve parameter range start")->required();
  solve->add_option("--s-max", s_max, "curve parameter range end")->required();
  solve->add_option("--n-s", n_s, "number of curve samples")->required()
      ->check(CLI::PositiveNumber);
  solve->add_option("--seed", seed, "slope seed p q at the first sample")
      ->expected(2)->required();
  solve->add_option("--t-end", t_end, "strip integration endpoint")->required();
  solve->add_option("--h", h, "step size");
  solve->add_option("--out", out_path, "mesh output path (CSV written alongside)")->required();

  CLI::App* monge = app.add_subcommand("monge", "sample cone directions over a point");
  add_common(monge, common);
  monge->add_option("--at", at, "base point x y z")->expected(3)->required();
  monge->add_option("--seed", seed, "element seed p q on the PDE")->expected(2)->required();
  monge->add_option("--n", n, "number of cone samples")->check(CLI::NonNegativeNumber);
  monge->add_option("--out", out_path, "CSV output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(common, point);
    if (strip->parsed()) return cmd_strip(common, point, t_end, h, out_path);
    if (solve->parsed())
      return cmd_solve(common, curve_x, curve_y, curve_z, s_min, s_max, n_s, seed,
                       t_end, h, out_path);
    if (monge->parsed()) return cmd_monge(common, at, seed, n, out_path);
  } catch (const charpit::ParseError& e) {
    std::cerr << "expression error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const charpit::OffSurfaceError& e) {
    std::cerr << e.what() << " (|psi| = " << fmt(std::abs(e.value)) << ")\n";
    return kExitOffSurface;
  } catch (const charpit::DegeneracyError& e) {
    std::cerr << e.what() << "\n";
    return kExitDegenerate;
  } catch (const charpit::TransversalityError& e) {
    std::cerr << e.what() << "\n";
    return kExitTransversality;
  } catch (const charpit::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
