#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "geoperc/boolean_model.hpp"
#include "geoperc/fields.hpp"
#include "geoperc/radial_distribution.hpp"
#include "geoperc/sampling.hpp"

namespace geoperc {

/// A Boolean model: geostatistical radii from a field, or i.i.d. radii.
struct ModelSpec {
  std::variant<FieldSpec, RadialDistribution> radii;
  double eps_pad = kDefaultEpsPad;
  double eps_leak = kDefaultEpsLeak;

  static ModelSpec geostatistical(FieldSpec field);
  static ModelSpec iid(RadialDistribution radii);
  /// i.i.d. model whose radius law is the marginal of `field`.
  static ModelSpec iid_matched(const FieldSpec& field);

  bool is_geostatistical() const { return std::holds_alternative<FieldSpec>(radii); }
  Marking marking() const { return is_geostatistical() ? Marking::geostatistical : Marking::iid; }
  /// Law of the radius of a typical disc.
  RadialDistribution marginal() const;
  /// Upper bound on any radius (may be +inf).
  double radius_bound() const;
  PadPlan pad_plan(const Rect& window, double lambda) const;
  /// "constant", "cylinder", "voronoi" for fields; "iid" otherwise.
  std::string family_name() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

std::string to_string(Marking m);

/// One replication of a model on a window.
struct Scene {
  MarkedPointSet points;
  std::optional<FieldRealization> field;
  OccupiedRealization occupied;
};

/// Samples points on the window padded by max(pad plan, min_pad), the field
/// (geostatistical case) on that padded region, and the occupied set.
/// Streams come from disjoint labels of `replication_seed`, so a
/// geostatistical and an i.i.d. scene with the same seed and min_pad share
/// their Poisson points.
Scene realize_scene(const ModelSpec& model, double lambda, const Rect& window,
                    std::uint64_t replication_seed, double min_pad = 0.0);

}  // namespace geoperc
