#include "geoperc/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "geoperc/errors.hpp"
#include "geoperc/rng.hpp"
#include "raster.hpp"

namespace geoperc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const ConstantFieldParams& p) {
  if (!std::isfinite(p.value) || p.value < 0.0)
    throw ParameterError("constant field: value must be finite and >= 0");
}

void validate(const CylinderFieldParams& p) {
  if (!std::isfinite(p.line_intensity) || p.line_intensity <= 0.0)
    throw ParameterError("cylinder field: line intensity must be finite and > 0");
  if (!std::isfinite(p.base_radius) || p.base_radius <= 0.0)
    throw ParameterError("cylinder field: base radius must be finite and > 0");
  if (std::holds_alternative<RadialDistribution::CylinderMarginal>(p.values.family()))
    throw ParameterError("cylinder field: value law cannot itself be a cylinder marginal");
}

void validate(const VoronoiFieldParams& p) {
  if (!std::isfinite(p.seed_intensity) || p.seed_intensity <= 0.0)
    throw ParameterError("voronoi field: seed intensity must be finite and > 0");
  if (!(p.high_probability >= 0.0 && p.high_probability <= 1.0))
    throw ParameterError("voronoi field: high probability outside [0, 1]");
  if (!std::isfinite(p.low_value) || p.low_value <= 0.0)
    throw ParameterError("voronoi field: low value must be finite and > 0");
  if (!std::isfinite(p.high_value) || p.high_value <= p.low_value)
    throw ParameterError("voronoi field: high value must be finite and exceed the low value");
}

void validate_eps_pad(double eps_pad) {
  if (!(eps_pad > 0.0 && eps_pad < 1.0)) throw ParameterError("eps_pad must lie in (0, 1)");
}

struct ConstantData {
  double value;
};

struct CylinderData {
  CylinderFieldParams params;
  Point2 origin;
  std::vector<MarkedLine> lines;
  std::vector<Point2> normals;
  std::vector<double> values;
  double max_value = 0.0;
};

struct VoronoiSeed {
  Point2 location;
  double mark;
};

struct VoronoiData {
  VoronoiFieldParams params;
  std::uint64_t seed;
  double cell_side;
  double cell_mean;

  void append_cell(std::int64_t i, std::int64_t j, std::vector<VoronoiSeed>& out) const {
    SplitMix64 eng(
        derive_seed(seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)}));
    const std::uint64_t count = poisson(eng, cell_mean);
    const double x0 = static_cast<double>(i) * cell_side;
    const double y0 = static_cast<double>(j) * cell_side;
    for (std::uint64_t k = 0; k < count; ++k) {
      VoronoiSeed s;
      s.location.x = x0 + cell_side * uniform01(eng);
      s.location.y = y0 + cell_side * uniform01(eng);
      s.mark = uniform01(eng);
      out.push_back(s);
    }
  }

  // Ring search over lattice cells. After ring k every unvisited seed is at
  // distance >= k * cell_side, so a strictly closer best seed is final.
  VoronoiSeed nearest(Point2 x) const {
    const auto ci = static_cast<std::int64_t>(std::floor(x.x / cell_side));
    const auto cj = static_cast<std::int64_t>(std::floor(x.y / cell_side));
    std::vector<VoronoiSeed> buf;
    VoronoiSeed best{};
    double best_d2 = kInf;
    for (std::int64_t k = 0;; ++k) {
      for (std::int64_t dj = -k; dj <= k; ++dj)
        for (std::int64_t di = -k; di <= k; ++di) {
          if (std::max(std::abs(di), std::abs(dj)) != k) continue;
          buf.clear();
          append_cell(ci + di, cj + dj, buf);
          for (const VoronoiSeed& s : buf) {
            const double d2 = norm2(s.location - x);
            if (d2 < best_d2 || (d2 == best_d2 && s.location < best.location)) {
              best_d2 = d2;
              best = s;
            }
          }
        }
      const double reach = static_cast<double>(k) * cell_side;
      if (best_d2 < reach * reach) return best;
    }
  }

  double evaluate(Point2 x) const {
    return nearest(x).mark <= params.high_probability ? params.high_value : params.low_value;
  }
};

struct TruncatedData {
  FieldRealization inner;
  double cap;
};

}  // namespace

struct FieldRealization::Impl {
  FieldSpec spec;
  Rect window;
  Rect padded_window;
  std::variant<ConstantData, CylinderData, VoronoiData, TruncatedData> data;
};

// ---------------------------------------------------------------------------
// FieldSpec

FieldSpec FieldSpec::constant(double value) {
  ConstantFieldParams p{value};
  validate(p);
  return FieldSpec(p);
}

FieldSpec FieldSpec::cylinder(CylinderFieldParams params) {
  validate(params);
  return FieldSpec(std::move(params));
}

FieldSpec FieldSpec::voronoi(VoronoiFieldParams params) {
  validate(params);
  return FieldSpec(params);
}

FieldSpec FieldSpec::truncated(double cap) const {
  if (std::isnan(cap) || cap < 0.0) throw ParameterError("truncation cap must be >= 0");
  FieldSpec out = *this;
  out.cap_ = std::min(cap_, cap);
  return out;
}

std::string FieldSpec::family_name() const {
  switch (family_.index()) {
    case 0: return "constant";
    case 1: return "cylinder";
    default: return "voronoi";
  }
}

RadialDistribution FieldSpec::marginal() const {
  RadialDistribution base = std::visit(
      [](const auto& p) -> RadialDistribution {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantFieldParams>) {
          return RadialDistribution::point_mass(p.value);
        } else if constexpr (std::is_same_v<T, CylinderFieldParams>) {
          return RadialDistribution::cylinder_marginal(
              2.0 * std::numbers::pi * p.line_intensity * p.base_radius, p.values);
        } else {
          return RadialDistribution::two_point(p.high_probability, p.low_value, p.high_value);
        }
      },
      family_);
  return base.capped(cap_);
}

double FieldSpec::supremum() const {
  const double raw = std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantFieldParams>) {
          return p.value;
        } else if constexpr (std::is_same_v<T, CylinderFieldParams>) {
          return p.values.support_max();
        } else {
          return p.high_probability > 0.0 ? p.high_value : p.low_value;
        }
      },
      family_);
  return std::min(raw, cap_);
}

// ---------------------------------------------------------------------------
// FieldRealization

FieldFamily FieldRealization::family() const {
  return static_cast<FieldFamily>(impl_->data.index());
}
const FieldSpec& FieldRealization::spec() const { return impl_->spec; }
const Rect& FieldRealization::window() const { return impl_->window; }
const Rect& FieldRealization::padded_window() const { return impl_->padded_window; }
double FieldRealization::failure_probability_budget() const { return 0.0; }

double FieldRealization::evaluate(Point2 x) const {
  if (!impl_->window.contains(x)) throw QueryError("field evaluated outside its window");
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ConstantData>) {
          return d.value;
        } else if constexpr (std::is_same_v<T, CylinderData>) {
          const Point2 rel = x - d.origin;
          const double r = d.params.base_radius;
          double v = kInf;
          for (std::size_t k = 0; k < d.lines.size(); ++k)
            if (std::abs(dot(rel, d.normals[k]) - d.lines[k].distance) <= r)
              v = std::min(v, d.values[k]);
          return v == kInf ? 0.0 : v;
        } else if constexpr (std::is_same_v<T, VoronoiData>) {
          return d.evaluate(x);
        } else {
          return std::min(d.inner.evaluate(x), d.cap);
        }
      },
      impl_->data);
}

double FieldRealization::supremum() const {
  return std::visit(
      [](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ConstantData>) {
          return d.value;
        } else if constexpr (std::is_same_v<T, CylinderData>) {
          return d.max_value;
        } else if constexpr (std::is_same_v<T, VoronoiData>) {
          return d.params.high_probability > 0.0 ? d.params.high_value : d.params.low_value;
        } else {
          return std::min(d.inner.supremum(), d.cap);
        }
      },
      impl_->data);
}

std::span<const MarkedLine> FieldRealization::lines() const {
  if (const auto* c = std::get_if<CylinderData>(&impl_->data)) return c->lines;
  if (const auto* t = std::get_if<TruncatedData>(&impl_->data)) return t->inner.lines();
  return {};
}

FieldRealization FieldRealization::cylinder_from_lines(const CylinderFieldParams& params,
                                                       const Rect& window,
                                                       std::vector<MarkedLine> lines) {
  validate(params);
  CylinderData d{params, window.center(), std::move(lines), {}, {}, 0.0};
  for (const MarkedLine& l : d.lines) {
    d.normals.push_back(l.normal());
    const double v = params.values.quantile(l.uniform_mark);
    d.values.push_back(v);
    d.max_value = std::max(d.max_value, v);
  }
  return FieldRealization(std::make_shared<const Impl>(
      Impl{FieldSpec::cylinder(params), window, window.dilated(params.base_radius), std::move(d)}));
}

FieldRealization build_constant_field(double value, const Rect& window) {
  FieldSpec spec = FieldSpec::constant(value);
  return FieldRealization(
      std::make_shared<const FieldRealization::Impl>(FieldRealization::Impl{
          spec, window, window, ConstantData{value}}));
}

FieldRealization build_cylinder_field(const CylinderFieldParams& params, const Rect& window,
                                      double eps_pad, std::uint64_t seed) {
  validate(params);
  validate_eps_pad(eps_pad);
  const double reach = window.circumradius() + params.base_radius;
  return FieldRealization::cylinder_from_lines(
      params, window, sample_marked_lines(params.line_intensity, reach, seed));
}

FieldRealization build_voronoi_field(const VoronoiFieldParams& params, const Rect& window,
                                     double eps_pad, std::uint64_t seed) {
  validate(params);
  validate_eps_pad(eps_pad);
  // About two seeds per lattice cell keeps the ring search at 3x3 cells.
  const double side = 1.5 / std::sqrt(params.seed_intensity);
  VoronoiData d{params, seed, side, params.seed_intensity * side * side};
  return FieldRealization(std::make_shared<const FieldRealization::Impl>(
      FieldRealization::Impl{FieldSpec::voronoi(params), window, window, d}));
}

FieldRealization truncate_field(const FieldRealization& field, double cap) {
  if (std::isnan(cap) || cap < 0.0) throw ParameterError("truncate_field: cap must be >= 0");
  if (cap == kInf) return field;
  return FieldRealization(std::make_shared<const FieldRealization::Impl>(
      FieldRealization::Impl{field.spec().truncated(cap), field.window(), field.padded_window(),
                             TruncatedData{field, cap}}));
}

FieldRealization build_field(const FieldSpec& spec, const Rect& window, double eps_pad,
                             std::uint64_t seed) {
  FieldRealization base = std::visit(
      [&](const auto& p) -> FieldRealization {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantFieldParams>) {
          return build_constant_field(p.value, window);
        } else if constexpr (std::is_same_v<T, CylinderFieldParams>) {
          return build_cylinder_field(p, window, eps_pad, seed);
        } else {
          return build_voronoi_field(p, window, eps_pad, seed);
        }
      },
      spec.family());
  return truncate_field(base, spec.cap());
}

std::string to_string(Tristate t) {
  switch (t) {
    case Tristate::no: return "no";
    case Tristate::yes: return "yes";
    default: return "uncertain";
  }
}

namespace {

bool level_set_raster(const FieldRealization& field, double alpha, const Rect& rect, double h) {
  const int nx = std::max(1, static_cast<int>(std::ceil(rect.width() / h)));
  const int ny = std::max(1, static_cast<int>(std::ceil(rect.height() / h)));
  const double dx = rect.width() / nx, dy = rect.height() / ny;
  detail::Raster r(nx, ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Point2 c{rect.x_min() + (i + 0.5) * dx, rect.y_min() + (j + 0.5) * dy};
      r.at(i, j) = field.evaluate(c) > alpha ? 1 : 0;
    }
  return detail::crosses_left_right(r, false);
}

}  // namespace

Tristate level_set_crossing(const FieldRealization& field, double alpha, const Rect& rect,
                            double resolution) {
  if (!(resolution > 0.0)) throw ParameterError("level_set_crossing: resolution must be > 0");
  if (resolution > rect.width() || resolution > rect.height())
    throw ParameterError("level_set_crossing: resolution exceeds the rectangle");
  if (!field.window().contains(rect))
    throw QueryError("level_set_crossing: rectangle outside the field window");
  const bool coarse = level_set_raster(field, alpha, rect, resolution);
  const bool fine = level_set_raster(field, alpha, rect, 0.5 * resolution);
  if (coarse != fine) return Tristate::uncertain;
  return coarse ? Tristate::yes : Tristate::no;
}

}  // namespace geoperc
