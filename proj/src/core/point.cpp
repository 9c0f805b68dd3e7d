#include "point.hpp"

#include "errors.hpp"

#include <sstream>

namespace hl {

Point::Point(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim)
    throw ConfigError("dimension must be in [1, " + std::to_string(kMaxDim) + "], got " +
                      std::to_string(dim));
}

Point::Point(std::initializer_list<double> coords) : Point(static_cast<int>(coords.size())) {
  std::size_t i = 0;
  for (double c : coords)
    x_[i++] = c;
}

Point Point::from_span(std::span<const double> coords) {
  Point p(static_cast<int>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i)
    p.x_[i] = coords[i];
  return p;
}

double Point::norm_squared() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i)
    s += x_[i] * x_[i];
  return s;
}

double Point::norm() const { return std::sqrt(norm_squared()); }

Point &Point::operator+=(const Point &o) {
  for (int i = 0; i < dim_; ++i)
    x_[i] += o.x_[i];
  return *this;
}

Point &Point::operator-=(const Point &o) {
  for (int i = 0; i < dim_; ++i)
    x_[i] -= o.x_[i];
  return *this;
}

Point &Point::operator*=(double s) {
  for (int i = 0; i < dim_; ++i)
    x_[i] *= s;
  return *this;
}

bool operator==(const Point &a, const Point &b) {
  if (a.dim_ != b.dim_)
    return false;
  for (int i = 0; i < a.dim_; ++i)
    if (a.x_[i] != b.x_[i])
      return false;
  return true;
}

std::string Point::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int i = 0; i < dim_; ++i)
    os << (i ? ", " : "") << x_[i];
  os << ')';
  return os.str();
}

double distance(const Point &a, const Point &b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return std::sqrt(s);
}

double dot(const Point &a, const Point &b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    s += a[i] * b[i];
  return s;
}

Point unit_vector(int dim, int axis) {
  Point p(dim);
  p[axis] = 1.0;
  return p;
}

Ball::Ball(Point c, double r) : center(std::move(c)), radius(r) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw ConfigError("ball radius must be positive and finite");
}

} // namespace hl
