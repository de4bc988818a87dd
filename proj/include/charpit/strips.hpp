#pragma once

// Characteristic strips: fixed-step RK4 integration of the field
// (psi_p, psi_q, p psi_p + q psi_q, -psi_x - p psi_z, -psi_y - q psi_z),
// completion of initial curves to initial strips, sweeping strips into
// solution sheets, and residual/tangency diagnostics.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "charpit/expr.hpp"
#include "charpit/jets.hpp"
#include "charpit/pde.hpp"

namespace charpit {

struct StripSample {
  double t, x, y, z, p, q;
  double psi;  ///< residual of the conserved quantity at this sample
};

struct Strip {
  std::vector<StripSample> samples;
};

struct StripOptions {
  bool unit_speed = false;         ///< reparametrize to unit speed in (x,y)
  double conservation_tol = 1e-8;  ///< |psi| guard along the trajectory
  Tolerances tols{};
};

/// Integration stopped before t_end; `partial` holds the good samples.
class StripIntegrationError : public Error {
 public:
  enum class Reason { degeneracy, non_finite, conservation };

  StripIntegrationError(const std::string& what, Reason reason, Strip partial,
                        double last_good_t)
      : Error(what), reason(reason), partial(std::move(partial)), last_good_t(last_good_t) {}

  Reason reason;
  Strip partial;
  double last_good_t;
};

/// Classical RK4 with fixed step h (last step shortened to land on t_end);
/// samples at t = 0, h, 2h, ..., t_end.
Strip integrate_strip(const Pde& pde, const SurfaceElement<double>& start,
                      double t_end, double h, const StripOptions& opts = {});

/// An initial curve (x(s), y(s), z(s)) with symbolic s-derivatives.
struct Curve {
  ExprPtr x, y, z;
  ExprPtr dx, dy, dz;

  static Curve from(ExprPtr x, ExprPtr y, ExprPtr z);
  /// Parses the three component expressions over the variable {s}.
  static Curve parse(std::string_view xs, std::string_view ys, std::string_view zs);

  std::array<double, 6> at(double s) const;  // x, y, z, x', y', z'
};

struct InitialSample {
  double s, x, y, z, p, q;
};

struct InitialStrip {
  std::vector<InitialSample> samples;
};

/// Completes Cauchy data to an initial strip: per sample a 2x2 Newton solve
/// of psi = 0 and z' = p x' + q y' for (p,q), warm-started along the curve.
/// Throws TransversalityError where the curve runs characteristically.
InitialStrip complete_to_strip(const Pde& pde, const Curve& curve,
                               std::span<const double> s_values, double p0, double q0,
                               Tolerances tols = {});

struct SheetNode {
  double s, t, x, y, z, p, q;
  double psi;
};

/// Grid of strip points: node (i_s, i_t) at nodes[i_s * n_t + i_t].
struct SolutionSheet {
  std::size_t n_s = 0, n_t = 0;
  double ds = 0.0, dt = 0.0;  // nominal spacing
  std::vector<SheetNode> nodes;

  const SheetNode& at(std::size_t i_s, std::size_t i_t) const {
    return nodes[i_s * n_t + i_t];
  }
  bool empty() const { return nodes.empty(); }
};

/// A strip failed mid-sweep; `partial` holds the rows integrated so far.
class SweepError : public Error {
 public:
  SweepError(const std::string& what, std::size_t strip_index, double s,
             SolutionSheet partial)
      : Error(what), strip_index(strip_index), s(s), partial(std::move(partial)) {}

  std::size_t strip_index;
  double s;
  SolutionSheet partial;
};

/// One integrated strip per initial sample, assembled into a sheet.
SolutionSheet sweep(const Pde& pde, const InitialStrip& init, double t_end, double h,
                    const StripOptions& opts = {});

struct SheetResiduals {
  double max_psi = 0.0;       ///< max |psi| over the grid
  double max_strip = 0.0;     ///< strip-condition defect between t-neighbours
  double max_gradient = 0.0;  ///< |(p,q) - grad z| where the sheet is a graph
  bool empty = true;
};

SheetResiduals sheet_residuals(const Pde& pde, const SolutionSheet& sheet);

/// Maximum componentwise discrepancy of the (z,p,q) 1-jets of two graph
/// surfaces along the strip's base curve.
double tangency_along_strip(const GraphSurface& f1, const GraphSurface& f2,
                            const Strip& strip);

}  // namespace charpit
