#include "geoperc/radial_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "geoperc/errors.hpp"

namespace geoperc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_radius(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) throw ParameterError(what);
}

}  // namespace

RadialDistribution RadialDistribution::point_mass(double value) {
  require_radius(value, "point_mass: value must be finite and >= 0");
  return RadialDistribution(PointMass{value});
}

RadialDistribution RadialDistribution::two_point(double p, double low, double high) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("two_point: probability outside [0, 1]");
  require_radius(low, "two_point: low value must be finite and >= 0");
  require_radius(high, "two_point: high value must be finite and >= 0");
  if (low > high) throw ParameterError("two_point: low value exceeds high value");
  return RadialDistribution(TwoPoint{p, low, high});
}

RadialDistribution RadialDistribution::pareto(double shape, double scale) {
  if (!std::isfinite(shape) || shape <= 1.0)
    throw ParameterError("pareto: shape must be finite and > 1 (finite mean)");
  if (!std::isfinite(scale) || scale <= 0.0) throw ParameterError("pareto: scale must be > 0");
  return RadialDistribution(Pareto{shape, scale, kInf});
}

RadialDistribution RadialDistribution::cylinder_marginal(double coverage_rate,
                                                         RadialDistribution values) {
  if (!std::isfinite(coverage_rate) || coverage_rate <= 0.0)
    throw ParameterError("cylinder_marginal: coverage rate must be finite and > 0");
  if (std::holds_alternative<CylinderMarginal>(values.family_))
    throw ParameterError("cylinder_marginal: nested cylinder marginals are not supported");
  return RadialDistribution(CylinderMarginal{
      coverage_rate, std::make_shared<const RadialDistribution>(std::move(values))});
}

RadialDistribution RadialDistribution::capped(double cap) const {
  if (std::isnan(cap) || cap < 0.0) throw ParameterError("capped: cap must be >= 0");
  if (cap == kInf) return *this;
  return std::visit(
      Overloaded{
          [&](const PointMass& d) { return RadialDistribution(PointMass{std::min(d.value, cap)}); },
          [&](const TwoPoint& d) {
            return RadialDistribution(
                TwoPoint{d.high_probability, std::min(d.low, cap), std::min(d.high, cap)});
          },
          [&](const Pareto& d) {
            return RadialDistribution(Pareto{d.shape, d.scale, std::min(d.cap, cap)});
          },
          [&](const CylinderMarginal& d) {
            return RadialDistribution(CylinderMarginal{
                d.coverage_rate, std::make_shared<const RadialDistribution>(d.values->capped(cap))});
          },
      },
      family_);
}

double RadialDistribution::quantile(double z) const {
  z = std::clamp(z, 0.0, 1.0);
  return std::visit(
      Overloaded{
          [&](const PointMass& d) { return d.value; },
          [&](const TwoPoint& d) { return z <= 1.0 - d.high_probability ? d.low : d.high; },
          [&](const Pareto& d) {
            if (z >= 1.0) return d.cap;
            return std::min(d.cap, d.scale * std::pow(1.0 - z, -1.0 / d.shape));
          },
          [&](const CylinderMarginal& d) {
            const double empty = std::exp(-d.coverage_rate);
            if (z <= empty) return 0.0;
            const double w = -std::log1p(empty - z) / d.coverage_rate;
            return d.values->quantile(std::min(w, 1.0));
          },
      },
      family_);
}

double RadialDistribution::tail(double t) const {
  if (t < 0.0) return 1.0;
  return std::visit(Overloaded{
                        [&](const PointMass& d) { return t < d.value ? 1.0 : 0.0; },
                        [&](const TwoPoint& d) {
                          if (t < d.low) return 1.0;
                          return t < d.high ? d.high_probability : 0.0;
                        },
                        [&](const Pareto& d) {
                          if (t >= d.cap) return 0.0;
                          if (t < d.scale) return 1.0;
                          return std::pow(d.scale / t, d.shape);
                        },
                        [&](const CylinderMarginal& d) {
                          const double g = d.values->tail(t);
                          // exp(-c(1-g)) - exp(-c), accurate for small g.
                          return std::exp(-d.coverage_rate) * std::expm1(d.coverage_rate * g);
                        },
                    },
                    family_);
}

double RadialDistribution::mean() const {
  return std::visit(
      Overloaded{
          [](const PointMass& d) { return d.value; },
          [](const TwoPoint& d) {
            return (1.0 - d.high_probability) * d.low + d.high_probability * d.high;
          },
          [](const Pareto& d) {
            const double b = d.shape, s = d.scale, m = d.cap;
            if (m <= s) return m;
            if (m == kInf) return b * s / (b - 1.0);
            return s + std::pow(s, b) * (std::pow(m, 1.0 - b) - std::pow(s, 1.0 - b)) / (1.0 - b);
          },
          [](const CylinderMarginal& d) {
            return d.values->exponential_weighted_moment(1, d.coverage_rate);
          },
      },
      family_);
}

double RadialDistribution::second_moment() const {
  return std::visit(
      Overloaded{
          [](const PointMass& d) { return d.value * d.value; },
          [](const TwoPoint& d) {
            return (1.0 - d.high_probability) * d.low * d.low +
                   d.high_probability * d.high * d.high;
          },
          [](const Pareto& d) {
            const double b = d.shape, s = d.scale, m = d.cap;
            if (m <= s) return m * m;
            if (m == kInf) return b > 2.0 ? b * s * s / (b - 2.0) : kInf;
            if (b == 2.0) return s * s + 2.0 * s * s * std::log(m / s);
            return s * s + 2.0 * std::pow(s, b) * (std::pow(m, 2.0 - b) - std::pow(s, 2.0 - b)) /
                               (2.0 - b);
          },
          [](const CylinderMarginal& d) {
            if (d.values->second_moment() == kInf) return kInf;
            return d.values->exponential_weighted_moment(2, d.coverage_rate);
          },
      },
      family_);
}

double RadialDistribution::support_max() const {
  return std::visit(Overloaded{
                        [](const PointMass& d) { return d.value; },
                        [](const TwoPoint& d) { return d.high_probability > 0.0 ? d.high : d.low; },
                        [](const Pareto& d) { return d.cap; },
                        [](const CylinderMarginal& d) { return d.values->support_max(); },
                    },
                    family_);
}

double RadialDistribution::exponential_weighted_moment(int k, double c) const {
  // Integral over [w0, w1] of c * exp(-c w) dw.
  const auto mass = [c](double w0, double w1) { return std::exp(-c * w0) - std::exp(-c * w1); };
  return std::visit(
      Overloaded{
          [&](const PointMass& d) { return std::pow(d.value, k) * mass(0.0, 1.0); },
          [&](const TwoPoint& d) {
            const double split = 1.0 - d.high_probability;
            return std::pow(d.low, k) * mass(0.0, split) + std::pow(d.high, k) * mass(split, 1.0);
          },
          [&](const Pareto& d) {
            const double b = d.shape, s = d.scale, m = d.cap;
            if (m <= s) return std::pow(m, k) * mass(0.0, 1.0);
            if (m == kInf && k >= b) return kInf;
            // Beyond w_cap the quantile is clamped at the cap.
            const double w_cap = m == kInf ? 1.0 : 1.0 - std::pow(s / m, b);
            // Substitute v = 1 - w; the integrand is singular at v = 0 only
            // when uncapped.
            const auto integrand = [&](double v) {
              return std::pow(s, k) * std::pow(v, -k / b) * c * std::exp(-c * (1.0 - v));
            };
            boost::math::quadrature::tanh_sinh<double> integrator;
            const double body = integrator.integrate(integrand, 1.0 - w_cap, 1.0);
            const double clamped = m == kInf ? 0.0 : std::pow(m, k) * mass(w_cap, 1.0);
            return body + clamped;
          },
          [&](const CylinderMarginal&) -> double {
            throw ParameterError("exponential_weighted_moment: nested cylinder marginal");
          },
      },
      family_);
}

std::string RadialDistribution::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const PointMass& d) { os << "point_mass(" << d.value << ")"; },
                 [&](const TwoPoint& d) {
                   os << "two_point(p=" << d.high_probability << ",low=" << d.low
                      << ",high=" << d.high << ")";
                 },
                 [&](const Pareto& d) {
                   os << "pareto(shape=" << d.shape << ",scale=" << d.scale;
                   if (d.cap != kInf) os << ",cap=" << d.cap;
                   os << ")";
                 },
                 [&](const CylinderMarginal& d) {
                   os << "cylinder_marginal(c=" << d.coverage_rate << "," << d.values->describe()
                      << ")";
                 },
             },
             family_);
  return os.str();
}

}  // namespace geoperc
