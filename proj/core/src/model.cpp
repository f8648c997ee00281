#include "geoperc/model.hpp"

#include <algorithm>
#include <limits>

#include "geoperc/errors.hpp"
#include "geoperc/rng.hpp"
#include "cylinder_scene.hpp"

namespace geoperc {

ModelSpec ModelSpec::geostatistical(FieldSpec field) { return ModelSpec{std::move(field)}; }

ModelSpec ModelSpec::iid(RadialDistribution radii) { return ModelSpec{std::move(radii)}; }

ModelSpec ModelSpec::iid_matched(const FieldSpec& field) { return iid(field.marginal()); }

RadialDistribution ModelSpec::marginal() const {
  if (const auto* f = std::get_if<FieldSpec>(&radii)) return f->marginal();
  return std::get<RadialDistribution>(radii);
}

double ModelSpec::radius_bound() const {
  if (const auto* f = std::get_if<FieldSpec>(&radii)) return f->supremum();
  return std::get<RadialDistribution>(radii).support_max();
}

PadPlan ModelSpec::pad_plan(const Rect& window, double lambda) const {
  if (const auto* f = std::get_if<FieldSpec>(&radii))
    return plan_geostat_padding(*f, window, lambda, eps_leak);
  return plan_iid_padding(std::get<RadialDistribution>(radii), window, lambda, eps_leak);
}

std::string ModelSpec::family_name() const {
  if (const auto* f = std::get_if<FieldSpec>(&radii)) return f->family_name();
  return "iid";
}

std::string to_string(Marking m) { return m == Marking::geostatistical ? "geostat" : "iid"; }

Scene realize_scene(const ModelSpec& model, double lambda, const Rect& window,
                    std::uint64_t replication_seed, double min_pad) {
  if (const auto* f = std::get_if<FieldSpec>(&model.radii)) {
    const auto* cyl = std::get_if<CylinderFieldParams>(&f->family());
    if (cyl && f->supremum() == std::numeric_limits<double>::infinity())
      return detail::realize_cylinder_scene(*cyl, model.eps_leak, lambda, window,
                                            replication_seed);
  }
  const PadPlan plan = model.pad_plan(window, lambda);
  const Rect region = window.dilated(std::max(plan.distance, min_pad));
  MarkedPointSet points =
      sample_marked_points(lambda, region, derive_seed(replication_seed, StreamLabel::points));
  if (const auto* f = std::get_if<FieldSpec>(&model.radii)) {
    FieldRealization field =
        build_field(*f, region, model.eps_pad, derive_seed(replication_seed, StreamLabel::field));
    OccupiedRealization occ = realize_occupied(points, lambda, field, window, model.eps_leak);
    return Scene{std::move(points), std::move(field), std::move(occ)};
  }
  OccupiedRealization occ = realize_occupied(points, lambda, std::get<RadialDistribution>(model.radii),
                                             window, model.eps_leak);
  return Scene{std::move(points), std::nullopt, std::move(occ)};
}

}  // namespace geoperc
