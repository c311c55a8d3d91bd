#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rd {

struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  Vec2 &operator+=(const Vec2 &o) { x += o.x; y += o.y; return *this; }
  Vec2 &operator-=(const Vec2 &o) { x -= o.x; y -= o.y; return *this; }
  Vec2 &operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, const Vec2 &b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2 &b) { return a -= b; }
inline Vec2 operator*(double s, Vec2 a) { return a *= s; }
inline Vec2 operator*(Vec2 a, double s) { return a *= s; }
inline Vec2 operator-(const Vec2 &a) { return {-a.x, -a.y}; }
inline double dot(const Vec2 &a, const Vec2 &b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2 &a, const Vec2 &b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2 &a) { return std::hypot(a.x, a.y); }

/// Conserved 4-vector (rho, m_x, m_y, E), also reused for any per-component
/// quantity living in the same space (residuals, entropy variables).
struct State
{
  std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};

  State() = default;
  State(double a, double b, double d, double e) : c{a, b, d, e} {}

  double &operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }

  State &operator+=(const State &o)
  {
    for (int i = 0; i < 4; ++i) c[i] += o.c[i];
    return *this;
  }
  State &operator-=(const State &o)
  {
    for (int i = 0; i < 4; ++i) c[i] -= o.c[i];
    return *this;
  }
  State &operator*=(double s)
  {
    for (double &v : c) v *= s;
    return *this;
  }
  bool operator==(const State &o) const { return c == o.c; }
};

inline State operator+(State a, const State &b) { return a += b; }
inline State operator-(State a, const State &b) { return a -= b; }
inline State operator*(double s, State a) { return a *= s; }
inline State operator*(State a, double s) { return a *= s; }
inline State operator-(State a) { return a *= -1.0; }
inline double dot(const State &a, const State &b)
{
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}
inline double norm(const State &a) { return std::sqrt(dot(a, a)); }
inline double max_abs(const State &a)
{
  return std::max(std::max(std::abs(a[0]), std::abs(a[1])),
                  std::max(std::abs(a[2]), std::abs(a[3])));
}
inline bool finite(const State &a)
{
  return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]) &&
         std::isfinite(a[3]);
}

/// Flux tensor: one State per spatial direction.
struct Flux
{
  State fx;
  State fy;

  State dot(const Vec2 &n) const { return n.x * fx + n.y * fy; }
  Flux &operator+=(const Flux &o) { fx += o.fx; fy += o.fy; return *this; }
};

inline Flux operator*(double s, const Flux &f) { return {s * f.fx, s * f.fy}; }

enum class ErrorKind
{
  NonConforming,
  DegenerateTriangle,
  UnmatchedPeriodicEdge,
  OutOfElement,
  UnsupportedDegree,
  VacuumState,
  NonPositivePressure,
  CflViolation,
  AlphaTooSmall,
  PicardDivergence,
  ParachutePadFailure,
  MeshMismatch,
  InadmissibleParameters,
  Config,
  Io,
};

const char *to_string(ErrorKind k);

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string &what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
  {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace rd
