#include "charpit/strips.hpp"

#include <cmath>
#include <string>

namespace charpit {

namespace {

using State = std::array<double, 5>;

State field_at(const Pde& pde, const State& u, bool unit_speed) {
  const std::array<double, 5> g = pde.gradient(u);
  State f = {g[3], g[4], u[3] * g[3] + u[4] * g[4], -g[0] - u[3] * g[2],
             -g[1] - u[4] * g[2]};
  if (unit_speed) {
    const double v = std::hypot(g[3], g[4]);
    for (double& c : f) c /= v;
  }
  return f;
}

bool finite(const State& u) {
  for (double c : u)
    if (!std::isfinite(c)) return false;
  return true;
}

State rk4_step(const Pde& pde, const State& u, double dt, bool unit_speed) {
  auto axpy = [](const State& a, double c, const State& b) {
    State r;
    for (int i = 0; i < 5; ++i) r[static_cast<std::size_t>(i)] =
        a[static_cast<std::size_t>(i)] + c * b[static_cast<std::size_t>(i)];
    return r;
  };
  const State k1 = field_at(pde, u, unit_speed);
  const State k2 = field_at(pde, axpy(u, dt / 2, k1), unit_speed);
  const State k3 = field_at(pde, axpy(u, dt / 2, k2), unit_speed);
  const State k4 = field_at(pde, axpy(u, dt, k3), unit_speed);
  State out;
  for (std::size_t i = 0; i < 5; ++i)
    out[i] = u[i] + dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return out;
}

}  // namespace

Strip integrate_strip(const Pde& pde, const SurfaceElement<double>& start,
                      double t_end, double h, const StripOptions& opts) {
  if (h <= 0) throw Error("integrate_strip: step size must be positive");
  if (t_end < 0) throw Error("integrate_strip: t_end must be nonnegative");

  State u = {start.x, start.y, start.z, start.p, start.q};
  const double psi0 = pde.value(u);
  if (std::abs(psi0) > opts.tols.on_tol)
    throw OffSurfaceError("integrate_strip: start element is not on the PDE", psi0);

  Strip strip;
  auto margin_at = [&](const State& s) {
    const std::array<double, 5> g = pde.gradient(s);
    return std::max(std::abs(g[3]), std::abs(g[4]));
  };
  auto check_and_push = [&](double t, const State& s) {
    const double last_good = strip.samples.empty() ? 0.0 : strip.samples.back().t;
    if (!finite(s))
      throw StripIntegrationError(
          "integrate_strip: non-finite state at t = " + std::to_string(t),
          StripIntegrationError::Reason::non_finite, std::move(strip), last_good);
    const double psi = pde.value(s);
    if (std::abs(psi) > opts.conservation_tol)
      throw StripIntegrationError(
          "integrate_strip: |psi| = " + std::to_string(std::abs(psi)) +
              " exceeds the conservation tolerance at t = " + std::to_string(t),
          StripIntegrationError::Reason::conservation, std::move(strip), last_good);
    if (margin_at(s) <= opts.tols.inv_tol)
      throw StripIntegrationError(
          "integrate_strip: nondegeneracy lost at t = " + std::to_string(t) +
              " (last good t = " + std::to_string(last_good) + ")",
          StripIntegrationError::Reason::degeneracy, std::move(strip), last_good);
    strip.samples.push_back({t, s[0], s[1], s[2], s[3], s[4], psi});
  };

  check_and_push(0.0, u);
  const long steps = t_end > 0 ? static_cast<long>(std::ceil(t_end / h - 1e-9)) : 0;
  for (long k = 0; k < steps; ++k) {
    const double t0 = static_cast<double>(k) * h;
    const double t1 = std::min(static_cast<double>(k + 1) * h, t_end);
    u = rk4_step(pde, u, t1 - t0, opts.unit_speed);
    check_and_push(t1, u);
  }
  return strip;
}

Curve Curve::from(ExprPtr x, ExprPtr y, ExprPtr z) {
  Curve c;
  c.x = std::move(x);
  c.y = std::move(y);
  c.z = std::move(z);
  c.dx = differentiate(*c.x, 0);
  c.dy = differentiate(*c.y, 0);
  c.dz = differentiate(*c.z, 0);
  return c;
}

Curve Curve::parse(std::string_view xs, std::string_view ys, std::string_view zs) {
  static const std::string vars[] = {"s"};
  return from(charpit::parse(xs, vars), charpit::parse(ys, vars),
              charpit::parse(zs, vars));
}

std::array<double, 6> Curve::at(double s) const {
  const double env[] = {s};
  return {eval(*x, env), eval(*y, env), eval(*z, env),
          eval(*dx, env), eval(*dy, env), eval(*dz, env)};
}

InitialStrip complete_to_strip(const Pde& pde, const Curve& curve,
                               std::span<const double> s_values, double p0, double q0,
                               Tolerances tols) {
  InitialStrip out;
  out.samples.reserve(s_values.size());
  double p = p0, q = q0;
  for (double s : s_values) {
    const std::array<double, 6> c = curve.at(s);
    const double xs = c[3], ys = c[4], zs = c[5];

    auto residuals = [&](double pp, double qq) {
      const std::array<double, 5> state = {c[0], c[1], c[2], pp, qq};
      return std::array<double, 2>{pde.value(state), zs - pp * xs - qq * ys};
    };
    auto check_transversal = [&](double det, double scale) {
      if (std::abs(det) <= 1e-9 * std::max(1.0, scale))
        throw TransversalityError(
            "complete_to_strip: initial curve is characteristic at s = " +
                std::to_string(s),
            s);
    };

    bool converged = false;
    for (int iter = 0; iter < 25; ++iter) {
      const std::array<double, 2> g = residuals(p, q);
      const double scale = std::max({1.0, std::abs(p), std::abs(q),
                                     std::abs(p * xs) + std::abs(q * ys) + std::abs(zs)});
      if (std::abs(g[0]) <= 1e-12 * scale && std::abs(g[1]) <= 1e-12 * scale) {
        converged = true;
        break;
      }
      const std::array<double, 5> state = {c[0], c[1], c[2], p, q};
      const std::array<double, 5> grad = pde.gradient(state);
      const double det = grad[3] * (-ys) - grad[4] * (-xs);
      check_transversal(det, std::abs(grad[3] * ys) + std::abs(grad[4] * xs));
      // J = [[psi_p, psi_q], [-x', -y']]
      p -= (g[0] * (-ys) - grad[4] * g[1]) / det;
      q -= (grad[3] * g[1] - g[0] * (-xs)) / det;
    }
    if (!converged)
      throw NumericError("complete_to_strip: Newton did not converge at s = " +
                         std::to_string(s));

    const std::array<double, 5> state = {c[0], c[1], c[2], p, q};
    const std::array<double, 5> grad = pde.gradient(state);
    const double det = grad[3] * (-ys) - grad[4] * (-xs);
    check_transversal(det, std::abs(grad[3] * ys) + std::abs(grad[4] * xs));
    if (std::max(std::abs(grad[3]), std::abs(grad[4])) <= tols.inv_tol)
      throw DegeneracyError(
          "complete_to_strip: degenerate element at s = " + std::to_string(s),
          std::max(std::abs(grad[3]), std::abs(grad[4])));

    out.samples.push_back({s, c[0], c[1], c[2], p, q});
  }
  return out;
}

SolutionSheet sweep(const Pde& pde, const InitialStrip& init, double t_end, double h,
                    const StripOptions& opts) {
  SolutionSheet sheet;
  sheet.n_s = init.samples.size();
  sheet.dt = h;
  if (init.samples.size() > 1)
    sheet.ds = init.samples[1].s - init.samples[0].s;

  for (std::size_t i = 0; i < init.samples.size(); ++i) {
    const InitialSample& a = init.samples[i];
    Strip strip;
    try {
      strip = integrate_strip(pde, {a.x, a.y, a.z, a.p, a.q}, t_end, h, opts);
    } catch (const StripIntegrationError& e) {
      sheet.n_s = i;  // keep the complete rows
      throw SweepError("sweep: strip " + std::to_string(i) + " (s = " +
                           std::to_string(a.s) + ") failed: " + e.what(),
                       i, a.s, std::move(sheet));
    }
    if (i == 0) sheet.n_t = strip.samples.size();
    for (const StripSample& sm : strip.samples)
      sheet.nodes.push_back({a.s, sm.t, sm.x, sm.y, sm.z, sm.p, sm.q, sm.psi});
  }
  return sheet;
}

SheetResiduals sheet_residuals(const Pde& pde, const SolutionSheet& sheet) {
  SheetResiduals out;
  if (sheet.empty()) return out;
  out.empty = false;

  for (const SheetNode& n : sheet.nodes) {
    const std::array<double, 5> state = {n.x, n.y, n.z, n.p, n.q};
    out.max_psi = std::max(out.max_psi, std::abs(pde.value(state)));
  }

  for (std::size_t i = 0; i < sheet.n_s; ++i) {
    for (std::size_t j = 0; j + 1 < sheet.n_t; ++j) {
      const SheetNode& a = sheet.at(i, j);
      const SheetNode& b = sheet.at(i, j + 1);
      const double defect = (b.z - a.z) - 0.5 * (a.p + b.p) * (b.x - a.x) -
                            0.5 * (a.q + b.q) * (b.y - a.y);
      out.max_strip = std::max(out.max_strip, std::abs(defect));
    }
  }

  // gradient check by central differences where (x,y) is locally invertible
  for (std::size_t i = 1; i + 1 < sheet.n_s; ++i) {
    for (std::size_t j = 1; j + 1 < sheet.n_t; ++j) {
      const SheetNode& c = sheet.at(i, j);
      const SheetNode &sm = sheet.at(i - 1, j), &sp = sheet.at(i + 1, j);
      const SheetNode &tm = sheet.at(i, j - 1), &tp = sheet.at(i, j + 1);
      const double dss = sp.s - sm.s, dtt = tp.t - tm.t;
      const double xs = (sp.x - sm.x) / dss, xt = (tp.x - tm.x) / dtt;
      const double ys = (sp.y - sm.y) / dss, yt = (tp.y - tm.y) / dtt;
      const double zs = (sp.z - sm.z) / dss, zt = (tp.z - tm.z) / dtt;
      const double det = xs * yt - xt * ys;
      const double scale = std::abs(xs * yt) + std::abs(xt * ys);
      if (std::abs(det) <= 1e-9 * std::max(1.0, scale)) continue;
      const double zx = (yt * zs - ys * zt) / det;
      const double zy = (-xt * zs + xs * zt) / det;
      out.max_gradient = std::max(
          out.max_gradient, std::max(std::abs(zx - c.p), std::abs(zy - c.q)));
    }
  }
  return out;
}

double tangency_along_strip(const GraphSurface& f1, const GraphSurface& f2,
                            const Strip& strip) {
  double max_disc = 0.0;
  for (const StripSample& sm : strip.samples) {
    const SurfaceElement<double> j1 = f1.jet1(sm.x, sm.y);
    const SurfaceElement<double> j2 = f2.jet1(sm.x, sm.y);
    max_disc = std::max({max_disc, std::abs(j1.z - j2.z), std::abs(j1.p - j2.p),
                         std::abs(j1.q - j2.q)});
  }
  return max_disc;
}

}  // namespace charpit
