#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace ppes {

/// Number of conservative variables per point.
inline constexpr int kNv = 5;

using Vec3 = std::array<double, 3>;
using Vec5 = std::array<double, 5>;

/// Conservative state (rho, rho V, rho E) at one solution point.
struct State {
  double rho = 0.0;
  Vec3 m{0.0, 0.0, 0.0};
  double Et = 0.0;

  static State from(const double* u) { return State{u[0], {u[1], u[2], u[3]}, u[4]}; }
  void store(double* u) const {
    u[0] = rho;
    u[1] = m[0];
    u[2] = m[1];
    u[3] = m[2];
    u[4] = Et;
  }
  Vec5 vec() const { return {rho, m[0], m[1], m[2], Et}; }
};

std::string to_string(const State& s);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Broken precondition (shape mismatch, out-of-range argument).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nonpositive density or internal energy, with the location that produced it.
class InadmissibleState : public std::runtime_error {
 public:
  InadmissibleState(const State& s, long element = -1, long point = -1);
  State state;
  long element;
  long point;
};

inline void require(bool ok, const char* what) {
  if (!ok) throw ContractViolation(what);
}

/// Neumaier compensated summation for global integrals.
struct CompensatedSum {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

inline double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Vec3 cross3(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace ppes
