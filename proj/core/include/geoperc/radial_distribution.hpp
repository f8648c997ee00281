#pragma once

#include <limits>
#include <memory>
#include <string>
#include <variant>

namespace geoperc {

/// A law of a nonnegative radius, described by its generalized inverse
/// (quantile), its tail P(R > t) and its first two moments.
///
/// Built-in families:
///  - point_mass(a):           delta_a
///  - two_point(p, a, b):      p * delta_b + (1 - p) * delta_a
///  - pareto(shape, scale):    P(R > t) = (scale / t)^shape for t >= scale
///  - cylinder_marginal(c, F): law of the cylinder field at a point when the
///                             number of cylinders covering it is
///                             Poisson(c) and the field is the minimum of
///                             their F-distributed values (0 if none)
/// Any law can be capped at M (law of min(R, M)).
class RadialDistribution {
 public:
  struct PointMass {
    double value;
    friend bool operator==(const PointMass&, const PointMass&) = default;
  };
  struct TwoPoint {
    double high_probability;
    double low;
    double high;
    friend bool operator==(const TwoPoint&, const TwoPoint&) = default;
  };
  struct Pareto {
    double shape;
    double scale;
    double cap;  // +inf when uncapped
    friend bool operator==(const Pareto&, const Pareto&) = default;
  };
  struct CylinderMarginal {
    double coverage_rate;  // c = 2 * pi * u * r
    std::shared_ptr<const RadialDistribution> values;
    friend bool operator==(const CylinderMarginal& a, const CylinderMarginal& b) {
      return a.coverage_rate == b.coverage_rate && *a.values == *b.values;
    }
  };
  using Family = std::variant<PointMass, TwoPoint, Pareto, CylinderMarginal>;

  static RadialDistribution point_mass(double value);
  static RadialDistribution two_point(double high_probability, double low, double high);
  static RadialDistribution pareto(double shape, double scale);
  static RadialDistribution cylinder_marginal(double coverage_rate, RadialDistribution values);

  /// Law of min(R, cap). cap = +inf returns *this.
  RadialDistribution capped(double cap) const;

  /// inf { x : P(R <= x) >= z } for z in (0, 1]; z <= 0 maps to the
  /// bottom of the support.
  double quantile(double z) const;
  /// P(R > t).
  double tail(double t) const;
  double mean() const;
  /// May be +inf.
  double second_moment() const;
  /// Supremum of the support (may be +inf).
  double support_max() const;
  bool bounded() const { return support_max() < std::numeric_limits<double>::infinity(); }

  /// E[Q(W)^k] where W has density c * exp(-c w) on [0, 1]; the moment
  /// building block of cylinder_marginal.
  double exponential_weighted_moment(int k, double c) const;

  const Family& family() const { return family_; }
  std::string describe() const;

  friend bool operator==(const RadialDistribution&, const RadialDistribution&) = default;

 private:
  explicit RadialDistribution(Family f) : family_(std::move(f)) {}
  Family family_;
};

}  // namespace geoperc
