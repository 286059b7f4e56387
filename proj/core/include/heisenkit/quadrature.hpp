#pragma once

#include <functional>
#include <vector>

#include "heisenkit/group.hpp"

namespace heisenkit {

struct QuadSpec {
  double relative_tolerance = 1e-8;
  int max_subdivisions = 22;   // adaptive bisection depth cap per axis
  int points_per_axis = 8;     // Gauss-Legendre order per panel
  double shell_ratio = 2.0;    // gauge shell ratio for singular integrals
  double inner_cutoff = -1.0;  // epsilon_in; < 0 means radius * 1e-3
  double outer_cutoff = -1.0;  // gauge radius R for full-space integrals; < 0 = auto
  double tail_exponent = 0.0;  // gamma with |f| <= C rho^{-gamma} outside R
  double tail_constant = -1.0; // C; < 0 = estimate by sampling near rho = R
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long long evaluations = 0;
};

using ScalarField = std::function<double(const HPoint&)>;

/// Axis-aligned box in R^{2n+1}; coordinates (x_1..x_2n, t).
QuadResult integrate_box(const ScalarField& f, const std::vector<double>& lo,
                         const std::vector<double>& hi, const QuadSpec& spec);

/// Integral over the Koranyi ball {rho(z0^{-1} w) < delta}.  The domain is
/// recentred at the identity (exact under Haar measure) and meshed with
/// exact t-fibers; the x-levels are integrated adaptively.
QuadResult integrate_ball(const ScalarField& f, const KoranyiBall& ball, const QuadSpec& spec);

/// Integral over `ball` of f(w) rho(w^{-1} z)^{-beta}, singular at w = z.
/// Requires beta < Q; the domain is decomposed into gauge shells around z
/// down to epsilon_in, and the omitted core contributes an analytic bound
/// to error_estimate.
QuadResult integrate_singular(const ScalarField& f, double beta, const KoranyiBall& ball,
                              const HPoint& singular_point, const QuadSpec& spec);

/// Integral over all of H^n of a smooth integrand with |f| <= C rho^{-gamma}
/// outside the working radius, gamma = spec.tail_exponent > Q.  The tail
/// bound C R^{Q-gamma} (Haar-exact shell mass) is folded into error_estimate.
QuadResult integrate_fullspace(const ScalarField& f, int n, const QuadSpec& spec);

/// Haar measure of the unit gauge ball, computed once per n and cached.
double unit_ball_volume(int n);

/// GroupContext with unit_ball_volume filled in.
GroupContext make_group_context(int n);

// ---------------------------------------------------------------------------
// Fixed meshes.  These trade the adaptive error control above for node
// lists that sweeps can reuse; weights integrate exactly over the region.

/// Gauge annulus r1 <= rho(v) < r2 at the origin, optionally intersected
/// with a translated ball {rho(xi . v) < mask_delta} (exact in the t fiber).
struct FiberRegion {
  double r1 = 0.0;
  double r2 = 1.0;
  bool has_mask = false;
  std::vector<double> mask_x;  // x part of xi
  double mask_t = 0.0;
  double mask_delta = 0.0;
};

struct MeshSpec {
  int x_panels = 2;      // uniform panels per x level
  int x_order = 8;       // GL order per x panel
  int t_order = 8;       // GL order per t interval
  int grade_levels = 0;  // geometric edge panels per end of each x level
};

struct WeightedMesh {
  std::vector<HPoint> nodes;
  std::vector<double> weights;

  double total_weight() const;
};

WeightedMesh build_region_mesh(int n, const FiberRegion& region, const MeshSpec& ms);

/// Nodes dilated by s, weights scaled by s^Q: integrates over the dilated region.
WeightedMesh dilated_mesh(const WeightedMesh& mesh, double s, int Q);

/// Nodes left-translated by g (Haar measure keeps the weights).
WeightedMesh translated_mesh(const WeightedMesh& mesh, const HPoint& g);

/// Deterministic points on the gauge sphere rho = r (used for tail estimates).
std::vector<HPoint> gauge_sphere_samples(int n, double r, int count);

}  // namespace heisenkit
