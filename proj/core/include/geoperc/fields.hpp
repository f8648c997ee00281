#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <variant>

#include "geoperc/geometry.hpp"
#include "geoperc/radial_distribution.hpp"
#include "geoperc/sampling.hpp"

namespace geoperc {

inline constexpr double kDefaultEpsPad = 1e-6;

struct ConstantFieldParams {
  double value = 0.0;
  friend bool operator==(const ConstantFieldParams&, const ConstantFieldParams&) = default;
};

/// Poisson cylinders: lines of intensity u, each thickened to a closed strip
/// of half-width r and carrying the value F^{-1}(z) of its uniform mark.
struct CylinderFieldParams {
  double line_intensity;
  double base_radius;
  RadialDistribution values;
  friend bool operator==(const CylinderFieldParams&, const CylinderFieldParams&) = default;
};

/// Two-point Voronoi field: cells of a Poisson(mu) tessellation are high (b)
/// with probability p and low (a) otherwise.
struct VoronoiFieldParams {
  double seed_intensity = 1.0;
  double high_probability = 0.5;
  double low_value = 1.0;
  double high_value = 2.0;
  friend bool operator==(const VoronoiFieldParams&, const VoronoiFieldParams&) = default;
};

/// Law of a stationary field, optionally truncated at `cap`.
class FieldSpec {
 public:
  using Family = std::variant<ConstantFieldParams, CylinderFieldParams, VoronoiFieldParams>;

  static FieldSpec constant(double value);
  static FieldSpec cylinder(CylinderFieldParams params);
  static FieldSpec voronoi(VoronoiFieldParams params);

  /// Spec of min(phi, cap); caps compose by minimum.
  FieldSpec truncated(double cap) const;

  const Family& family() const { return family_; }
  double cap() const { return cap_; }
  bool is_truncated() const { return cap_ < std::numeric_limits<double>::infinity(); }
  /// "constant", "cylinder" or "voronoi".
  std::string family_name() const;

  /// Law of phi(0).
  RadialDistribution marginal() const;
  /// Essential supremum of phi (may be +inf).
  double supremum() const;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  explicit FieldSpec(Family f) : family_(std::move(f)) {}
  Family family_;
  double cap_ = std::numeric_limits<double>::infinity();
};

enum class FieldFamily { constant, cylinder, voronoi_two_point, truncated };

/// One realization of a field, evaluable on `window`. Cheap to copy (shared
/// immutable state) and safe for concurrent readers.
class FieldRealization {
 public:
  FieldFamily family() const;
  const FieldSpec& spec() const;
  const Rect& window() const;
  const Rect& padded_window() const;
  /// Probability that evaluate() differs from the infinite-volume field
  /// somewhere on the window. Every built-in construction is exact, so 0.
  double failure_probability_budget() const;

  /// phi(x). Throws QueryError outside the window.
  double evaluate(Point2 x) const;
  /// A realized upper bound on phi over the window (may be +inf).
  double supremum() const;

  /// Cylinder lines, centred at window().center(); empty for other families.
  std::span<const MarkedLine> lines() const;

  /// A cylinder field with explicitly given lines (parametrized relative to
  /// window.center()). Mainly for tests.
  static FieldRealization cylinder_from_lines(const CylinderFieldParams& params, const Rect& window,
                                              std::vector<MarkedLine> lines);

  struct Impl;

 private:
  explicit FieldRealization(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;

  friend FieldRealization build_constant_field(double, const Rect&);
  friend FieldRealization build_cylinder_field(const CylinderFieldParams&, const Rect&, double,
                                               std::uint64_t);
  friend FieldRealization build_voronoi_field(const VoronoiFieldParams&, const Rect&, double,
                                              std::uint64_t);
  friend FieldRealization truncate_field(const FieldRealization&, double);
};

FieldRealization build_constant_field(double value, const Rect& window);

/// Samples every line within distance circumradius(window) + r of the
/// window centre, hence every cylinder meeting the window. Exact.
FieldRealization build_cylinder_field(const CylinderFieldParams& params, const Rect& window,
                                      double eps_pad, std::uint64_t seed);

/// Voronoi seeds are generated lazily per lattice cell of a global grid, each
/// cell from its own stream, and nearest seeds are found by an exact ring
/// search. The realized field is therefore the infinite-volume field
/// restricted to the window, with no padding error.
FieldRealization build_voronoi_field(const VoronoiFieldParams& params, const Rect& window,
                                     double eps_pad, std::uint64_t seed);

/// min(field, cap). cap = +inf returns the field unchanged.
FieldRealization truncate_field(const FieldRealization& field, double cap);

/// Builds any spec (including its cap).
FieldRealization build_field(const FieldSpec& spec, const Rect& window, double eps_pad,
                             std::uint64_t seed);

enum class Tristate { no, yes, uncertain };
std::string to_string(Tristate t);

/// Left-right crossing of rect by the level set {phi > alpha}, on a raster of
/// cell centres with 4-connectivity. Uncertain when the raster answer
/// changes between `resolution` and `resolution / 2`.
Tristate level_set_crossing(const FieldRealization& field, double alpha, const Rect& rect,
                            double resolution);

}  // namespace geoperc
