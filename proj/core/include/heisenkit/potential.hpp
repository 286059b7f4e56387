#pragma once

#include <memory>
#include <vector>

#include "heisenkit/atom.hpp"
#include "heisenkit/kernel_expr.hpp"
#include "heisenkit/quadrature.hpp"
#include "heisenkit/test_function.hpp"

namespace heisenkit {

/// c_n = [ n(n+2) int |x|^2 (rho^4+1)^{-(n+4)/2} ]^{-1}, with the error bar
/// propagated from the quadrature.
QuadResult compute_cn(int n, const QuadSpec& spec);

struct FundamentalSolution {
  int n = 1;
  double c_n = 0.0;
  double c_n_error = 0.0;
  KernelExpr kernel;  // rho^{-2n}

  FundamentalSolution() : kernel(KernelExpr::zero(1)) {}
};

/// Computes c_n and checks L(rho^{-2n}) == 0 symbolically.
FundamentalSolution make_fundamental_solution(int n, const QuadSpec& spec);

struct PotentialNumerics {
  double near_factor = 2.0;      // direct gauge shells inside near_factor * delta
  double surrogate_factor = 4.0; // Chebyshev surrogate box covers rho < this * delta
  double subtract_factor = 4.0;  // vanishing-moment subtraction beyond this * delta
  MeshSpec atom_mesh{3, 8, 10, 0};        // accurate support mesh
  MeshSpec sweep_mesh{2, 6, 6, 0};        // cheap support mesh for sweeps
  MeshSpec shell_mesh{1, 6, 6, 1};        // gauge shells for near-field values
  double shell_ratio = 2.0;
  double inner_cutoff_factor = 1e-3;      // epsilon_in / delta
  int surrogate_order = 24;               // Chebyshev order per axis (n = 1 only)
  int max_derivative_degree = 3;          // cached kernels X^I Phi, d(I) <= 3
};

/// b = a * c_n rho^{-2n} and its invariant derivatives.  Derivative kernels
/// X^I Phi are cached symbolically; far-field values subtract the kernel's
/// group Taylor polynomial (annihilated by the atom's vanishing moments) so
/// the quadrature resolves the decaying signal instead of cancelling digits.
/// Near-field sweep evaluations go through a Chebyshev surrogate fitted to
/// direct shell quadrature (n = 1), built lazily and validated in tests.
class PotentialField {
 public:
  PotentialField(GroupContext ctx, Atom atom, FundamentalSolution fs, PotentialNumerics num = {});

  const GroupContext& ctx() const { return ctx_; }
  const Atom& atom() const { return atom_; }
  const FundamentalSolution& fs() const { return fs_; }
  const PotentialNumerics& numerics() const { return num_; }
  double delta() const { return atom_.params.ball.radius; }

  int slot_of(const MultiIndex& I) const;  // -1 when d(I) > cached degree
  const KernelExpr& kernel(int slot) const { return kernels_[slot]; }
  const MultiIndex& kernel_index(int slot) const { return kernel_ids_[slot]; }
  int slot_count() const { return static_cast<int>(kernels_.size()); }

  /// b(z); honest quadrature at any point (gauge shells near the support).
  double eval(const HPoint& z) const;
  /// X^I b; d(I) >= 2 requires rho(z0^{-1} z) >= near_factor * delta.
  double derivative(const MultiIndex& I, const HPoint& z) const;
  /// R(z, w) = b(z w) - sum_{d(I)<=1} (X^I b)(z) w^I.
  double remainder(const HPoint& z, const HPoint& w) const;

  // --- sweep entry points (atom frame: zeta = z0^{-1} z) ---
  double field_in_frame(int slot, const HPoint& zeta, bool fast) const;
  double remainder_in_frame(const HPoint& zeta, const HPoint& w, bool fast) const;
  void ensure_surrogate() const;
  bool surrogate_ready() const;
  /// Direct shell evaluation (no surrogate), for validation.
  double near_value_direct(int slot, const HPoint& zeta) const;

  const AtomQuadrature& sweep_quadrature() const { return sweep_quad_; }

 private:
  double far_value(int slot, const HPoint& zeta, const AtomQuadrature& qa, bool subtract) const;
  double remainder_far(const HPoint& zeta, const HPoint& w, const AtomQuadrature& qa) const;

  GroupContext ctx_;
  Atom atom_;
  FundamentalSolution fs_;
  PotentialNumerics num_;

  std::vector<MultiIndex> kernel_ids_;
  std::vector<KernelExpr> kernels_;                 // X^I rho^{-2n}
  std::vector<std::vector<KernelExpr>> right_der_;  // X~_j applied to each kernel, j < 2n

  AtomQuadrature atom_quad_;
  AtomQuadrature sweep_quad_;
  std::vector<HPoint> atom_quad_inv_;  // inv(u_m) cached
  std::vector<HPoint> sweep_quad_inv_;
  std::vector<WeightedMesh> shell_meshes_;  // gauge-shell ladder, delta-scaled
  std::vector<double> shell_radii_;

  struct Surrogate;
  std::shared_ptr<Surrogate> surrogate_;
};

/// The spec-facing operations (route through PotentialField).
double potential_eval(const PotentialField& pf, const HPoint& z, const QuadSpec& spec);
double potential_derivative(const PotentialField& pf, const MultiIndex& I, const HPoint& z,
                            const QuadSpec& spec);
double remainder_eval(const PotentialField& pf, const HPoint& z, const HPoint& w,
                      const QuadSpec& spec);

/// int b . (L u) - int a . u;  zero for the exact fundamental solution.
double weak_residual(const PotentialField& pf, const TestFunction& u, const QuadSpec& spec);

}  // namespace heisenkit
