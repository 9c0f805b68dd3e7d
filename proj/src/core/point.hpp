#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

namespace hl {

inline constexpr int kMaxDim = 8;

// Point in R^d with inline storage; d is fixed at construction.
class Point {
public:
  Point() = default;
  explicit Point(int dim);
  Point(std::initializer_list<double> coords);
  static Point from_span(std::span<const double> coords);

  int dim() const { return dim_; }
  double &operator[](int i) { return x_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return x_[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const { return {x_.data(), static_cast<std::size_t>(dim_)}; }

  double norm() const;
  double norm_squared() const;

  Point &operator+=(const Point &o);
  Point &operator-=(const Point &o);
  Point &operator*=(double s);

  friend Point operator+(Point a, const Point &b) { return a += b; }
  friend Point operator-(Point a, const Point &b) { return a -= b; }
  friend Point operator*(Point a, double s) { return a *= s; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend bool operator==(const Point &a, const Point &b);

  std::string to_string() const;

private:
  std::array<double, kMaxDim> x_{};
  int dim_ = 0;
};

double distance(const Point &a, const Point &b);
double dot(const Point &a, const Point &b);
Point unit_vector(int dim, int axis);

// Open ball {y : |y - center| < radius}.
struct Ball {
  Point center;
  double radius = 1.0;

  Ball() = default;
  Ball(Point c, double r);

  int dim() const { return center.dim(); }
  bool contains(const Point &p) const { return distance(p, center) < radius; }
  // Distance from p to the sphere, positive inside.
  double depth(const Point &p) const { return radius - distance(p, center); }
};

} // namespace hl
