#pragma once

#include <array>
#include <span>
#include <vector>

namespace ppes {

inline constexpr int kMaxOrder = 12;

/// Diagonal-norm SBP operator on LGL points. Matrices are row-major.
struct OperatorSet {
  int p = 0;
  int N = 1;
  std::vector<double> nodes;
  std::vector<double> P;
  std::vector<double> Q;
  std::vector<double> D;
  std::vector<double> B;
  std::vector<double> Delta;  // N x (N+1)
  std::vector<double> fluxNodes;
  std::vector<double> Pinv;

  double q(int i, int j) const { return Q[i * N + j]; }
  double d(int i, int j) const { return D[i * N + j]; }
};

/// Builds the LGL operator for 1 <= p <= 12. Throws ConfigError otherwise.
OperatorSet build_lgl(int p);

/// Single-point operator used for inactive directions of 1-D and 2-D runs:
/// node 0, P = 2, D = Q = 0, flux points {-1, 1}.
OperatorSet collapsed_operator();

/// Shared immutable operator for order p (p = 0 is the collapsed operator).
const OperatorSet& operators(int p);

/// P^{-1} Delta fbar for one line of N+1 flux values.
std::vector<double> telescope(const OperatorSet& ops, std::span<const double> fbar);

/// Legendre polynomial L_n and its derivative at x.
void legendre(int n, double x, double& L, double& dL);

/// Tensor-product view over three 1-D operators. Point index is
/// i + N0*(j + N1*k); field components are innermost.
struct TensorOps {
  std::array<const OperatorSet*, 3> op{};
  std::array<int, 3> n{1, 1, 1};
  int npts = 1;
  std::vector<double> weights;  // P_i P_j P_k

  TensorOps() = default;
  TensorOps(const OperatorSet& a, const OperatorSet& b, const OperatorSet& c);

  bool active(int dir) const { return n[dir] > 1; }
  int index(int i, int j, int k) const { return i + n[0] * (j + n[1] * k); }

  /// outer/inner extents for a field with ncomp components along dir.
  void extents(int dir, int ncomp, int& outer, int& inner) const;

  /// out = D_dir applied to in (ncomp components per point).
  void apply_derivative(int dir, std::span<const double> in, std::span<double> out, int ncomp) const;
  /// out += scale * D_dir in.
  void apply_derivative_acc(int dir, const double* in, double* out, int ncomp, double scale) const;
  /// out += scale * P^{-1} Delta fbar along dir; fbar has n[dir]+1 entries along dir.
  void telescope_acc(int dir, const double* fbar, double* out, int ncomp, double scale) const;
  /// Volume quadrature 1^T P f of a scalar field.
  double integrate(std::span<const double> f) const;
};

}  // namespace ppes
