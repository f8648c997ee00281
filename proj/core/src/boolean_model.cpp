#include "geoperc/boolean_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "geoperc/errors.hpp"
#include "geoperc/rng.hpp"
#include "geoperc/spatial_index.hpp"
#include "raster.hpp"

namespace geoperc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxPad = 1e7;

void validate_eps_leak(double eps_leak) {
  if (!(eps_leak > 0.0 && eps_leak < 1.0)) throw ParameterError("eps_leak must lie in (0, 1)");
}

// Integral of g over [d, inf).
template <class G>
double tail_integral(G g, double d) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(g, d, kInf);
}

// Smallest d (to relative precision) with bound(d) <= eps; bound must be
// nonincreasing.
template <class B>
PadPlan smallest_pad(B bound, double eps, double start) {
  if (bound(0.0) <= eps) return {0.0, bound(0.0)};
  double hi = std::max(start, 1.0);
  while (!(bound(hi) <= eps)) {
    hi *= 2.0;
    if (hi > kMaxPad) throw ContractError("padding distance for the requested eps_leak is unbounded");
  }
  double lo = hi / 2.0;
  if (bound(lo) <= eps) lo = 0.0;
  for (int it = 0; it < 60 && hi - lo > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bound(mid) <= eps ? hi : lo) = mid;
  }
  return {hi, bound(hi)};
}

PadPlan fubini_pad(const RadialDistribution& radii, const Rect& window, double lambda,
                   double eps_leak) {
  if (radii.second_moment() == kInf)
    throw ContractError("i.i.d. padding needs a finite second moment of the radius law");
  const double perimeter = window.perimeter();
  const auto bound = [&](double d) {
    const double v = tail_integral(
        [&](double t) { return (perimeter + 2.0 * std::numbers::pi * t) * radii.tail(t); }, d);
    return lambda * v;
  };
  return smallest_pad(bound, eps_leak, radii.mean());
}

}  // namespace

PadPlan plan_iid_padding(const RadialDistribution& radii, const Rect& window, double lambda,
                         double eps_leak) {
  validate_eps_leak(eps_leak);
  if (!(lambda >= 0.0)) throw ParameterError("lambda must be >= 0");
  if (radii.bounded()) return {radii.support_max(), 0.0};
  if (lambda == 0.0) return {0.0, 0.0};
  return fubini_pad(radii, window, lambda, eps_leak);
}

PadPlan plan_geostat_padding(const FieldSpec& field, const Rect& window, double lambda,
                             double eps_leak) {
  validate_eps_leak(eps_leak);
  if (!(lambda >= 0.0)) throw ParameterError("lambda must be >= 0");
  const double sup = field.supremum();
  if (sup < kInf) return {sup, 0.0};
  if (lambda == 0.0) return {0.0, 0.0};

  const auto* cyl = std::get_if<CylinderFieldParams>(&field.family());
  if (cyl == nullptr) throw ContractError("unbounded field without a padding rule");

  // A disc centred at distance > d from the window with radius phi(x) > d
  // lies in a cylinder of value v > d whose axis is within R + v + r of the
  // window centre. Expected number of such cylinders:
  //   2 pi u [(d + r + R) G(d) + int_d^inf G].
  const RadialDistribution& f = cyl->values;
  const double reach = window.circumradius() + cyl->base_radius;
  const auto cylinder_bound = [&](double d) {
    const double g = f.tail(d);
    if (g == 0.0) return 0.0;
    const double t = tail_integral([&](double s) { return f.tail(s); }, d);
    return 2.0 * std::numbers::pi * cyl->line_intensity * ((d + reach) * g + t);
  };
  PadPlan best = smallest_pad(cylinder_bound, eps_leak, f.mean());
  const RadialDistribution marginal = field.marginal();
  if (marginal.second_moment() < kInf) {
    const PadPlan alt = fubini_pad(marginal, window, lambda, eps_leak);
    if (alt.distance < best.distance) best = alt;
  }
  return best;
}

OccupiedRealization::OccupiedRealization(std::vector<Disc> discs,
                                         std::vector<double> intensity_marks, Rect window,
                                         Rect padded_window, Marking marking, double lambda,
                                         double leakage_budget)
    : discs_(std::move(discs)),
      marks_(std::move(intensity_marks)),
      window_(window),
      padded_window_(padded_window),
      marking_(marking),
      lambda_(lambda),
      leakage_budget_(leakage_budget) {
  if (discs_.size() != marks_.size())
    throw ParameterError("OccupiedRealization: discs and marks differ in length");
}

OccupiedRealization OccupiedRealization::at_intensity(double lambda) const {
  if (!(lambda >= 0.0) || lambda > lambda_)
    throw ParameterError("at_intensity: lambda must lie in [0, realized lambda]");
  std::vector<Disc> discs;
  std::vector<double> marks;
  for (std::size_t i = 0; i < discs_.size(); ++i)
    if (marks_[i] <= lambda) {
      discs.push_back(discs_[i]);
      marks.push_back(marks_[i]);
    }
  return OccupiedRealization(std::move(discs), std::move(marks), window_, padded_window_,
                             marking_, lambda, leakage_budget_);
}

OccupiedRealization realize_occupied(const MarkedPointSet& points, double lambda,
                                     const MarkingRule& rule, const Rect& window,
                                     double eps_leak) {
  if (!(lambda >= 0.0) || lambda > points.lambda_max())
    throw ParameterError("realize_occupied: lambda must lie in [0, lambda_max]");
  validate_eps_leak(eps_leak);

  const FieldRealization* field = std::get_if<FieldRealization>(&rule);
  const PadPlan plan =
      field ? plan_geostat_padding(field->spec(), window, lambda, eps_leak)
            : plan_iid_padding(std::get<RadialDistribution>(rule), window, lambda, eps_leak);
  if (!points.region().contains(window.dilated(plan.distance)))
    throw ContractError("realize_occupied: point sample does not cover the padded window");
  if (field && !field->window().contains(points.region()))
    throw ContractError("realize_occupied: field window does not cover the point sample");

  const double reach_cap = field ? field->supremum() : kInf;
  std::vector<Disc> discs;
  std::vector<double> marks;
  for (const MarkedPoint& p : points.points()) {
    if (p.intensity_mark > lambda) continue;
    const double dist = window.distance_to(p.location);
    if (dist > reach_cap) continue;
    const double r = field ? field->evaluate(p.location)
                           : std::get<RadialDistribution>(rule).quantile(p.uniform_mark);
    if (dist > r) continue;
    discs.push_back({p.location, r});
    marks.push_back(p.intensity_mark);
  }
  return OccupiedRealization(std::move(discs), std::move(marks), window, points.region(),
                             field ? Marking::geostatistical : Marking::iid, lambda,
                             plan.leakage_budget);
}

bool covers_point(const OccupiedRealization& occ, Point2 x) {
  if (!occ.window().contains(x)) throw QueryError("covers_point: point outside the window");
  return std::any_of(occ.discs().begin(), occ.discs().end(),
                     [&](const Disc& d) { return d.contains(x); });
}

bool covers_segment(const OccupiedRealization& occ, double s) {
  if (!(s >= 0.0)) throw ParameterError("covers_segment: length must be >= 0");
  if (!occ.window().contains(Point2{0.0, 0.0}) || !occ.window().contains(Point2{s, 0.0}))
    throw QueryError("covers_segment: segment outside the window");
  std::vector<std::pair<double, double>> intervals;
  for (const Disc& d : occ.discs()) {
    const double dy = d.center.y;
    if (std::abs(dy) > d.radius) continue;
    const double h = std::sqrt(d.radius * d.radius - dy * dy);
    intervals.emplace_back(d.center.x - h, d.center.x + h);
  }
  std::sort(intervals.begin(), intervals.end());
  bool started = false;
  double reach = 0.0;
  for (const auto& [lo, hi] : intervals) {
    if (hi < 0.0) continue;
    if (!started) {
      if (lo > 0.0) return false;
      started = true;
      reach = hi;
    } else if (lo <= reach) {
      reach = std::max(reach, hi);
    } else {
      return false;
    }
    if (reach >= s) return true;
  }
  return started && reach >= s;
}

AreaFraction covered_area_fraction(const OccupiedRealization& occ, const Rect& rect,
                                   std::size_t n_probe, std::uint64_t seed) {
  if (n_probe == 0) throw ParameterError("covered_area_fraction: n_probe must be >= 1");
  if (!occ.window().contains(rect))
    throw QueryError("covered_area_fraction: rectangle outside the window");
  std::vector<Disc> local;
  for (const Disc& d : occ.discs())
    if (d.intersects(rect)) local.push_back(d);
  const DiscGrid grid(local, rect);

  const auto rows = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(n_probe)));
  const std::size_t cols = (n_probe + rows - 1) / rows;
  const double dx = rect.width() / static_cast<double>(cols);
  const double dy = rect.height() / static_cast<double>(rows);
  Engine eng = make_engine(seed);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < n_probe; ++k) {
    const double cx = static_cast<double>(k % cols), cy = static_cast<double>(k / cols);
    const Point2 p{rect.x_min() + (cx + uniform01(eng)) * dx,
                   rect.y_min() + (cy + uniform01(eng)) * dy};
    bool hit = false;
    grid.for_each_near(p, [&](std::uint32_t i) { hit = hit || local[i].contains(p); });
    hits += hit ? 1 : 0;
  }
  const double f = static_cast<double>(hits) / static_cast<double>(n_probe);
  return {f, std::sqrt(f * (1.0 - f) / static_cast<double>(n_probe)), n_probe};
}

bool clipped_adjacent(const Disc& d1, const Disc& d2, const Rect& rect) {
  const Point2 delta = d2.center - d1.center;
  const double sep = norm(delta);
  if (sep > d1.radius + d2.radius) return false;
  const Point2 c2 = d2.center;
  if (d1.contains(c2) && rect.contains(c2)) return true;

  // d2 meets C = d1 ∩ rect iff dist(c2, C) <= r2. The nearest point of C lies
  // on the arc (radial projection of c2) or on an edge chord of d1.
  const double r2sq = d2.radius * d2.radius;
  if (sep > 0.0) {
    const Point2 q = d1.center + (d1.radius / sep) * delta;
    if (rect.contains(q) && norm2(q - c2) <= r2sq) return true;
  }
  const auto chord_hit = [&](bool horizontal, double fixed, double lo, double hi) {
    const double off = horizontal ? fixed - d1.center.y : fixed - d1.center.x;
    if (std::abs(off) > d1.radius) return false;
    const double h = std::sqrt(d1.radius * d1.radius - off * off);
    const double mid = horizontal ? d1.center.x : d1.center.y;
    const double a = std::max(lo, mid - h), b = std::min(hi, mid + h);
    if (a > b) return false;
    const Point2 p = horizontal ? Point2{std::clamp(c2.x, a, b), fixed}
                                : Point2{fixed, std::clamp(c2.y, a, b)};
    return norm2(p - c2) <= r2sq;
  };
  return chord_hit(true, rect.y_min(), rect.x_min(), rect.x_max()) ||
         chord_hit(true, rect.y_max(), rect.x_min(), rect.x_max()) ||
         chord_hit(false, rect.x_min(), rect.y_min(), rect.y_max()) ||
         chord_hit(false, rect.x_max(), rect.y_min(), rect.y_max());
}

namespace {

enum Side : std::uint8_t { kLeft = 1, kRight = 2, kBottom = 4, kTop = 8 };

// Discs of positive radius meeting rect, with their clipped adjacency edges.
struct ClippedGraph {
  std::vector<std::uint32_t> disc_index;
  std::vector<std::uint8_t> sides;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

ClippedGraph build_clipped_graph(std::span<const Disc> discs, const Rect& rect) {
  ClippedGraph g;
  std::vector<Disc> local;
  const Segment left{{rect.x_min(), rect.y_min()}, {rect.x_min(), rect.y_max()}};
  const Segment right{{rect.x_max(), rect.y_min()}, {rect.x_max(), rect.y_max()}};
  const Segment bottom{{rect.x_min(), rect.y_min()}, {rect.x_max(), rect.y_min()}};
  const Segment top{{rect.x_min(), rect.y_max()}, {rect.x_max(), rect.y_max()}};
  for (std::uint32_t i = 0; i < discs.size(); ++i) {
    const Disc& d = discs[i];
    if (!(d.radius > 0.0) || !d.intersects(rect)) continue;
    std::uint8_t s = 0;
    if (d.intersects(left)) s |= kLeft;
    if (d.intersects(right)) s |= kRight;
    if (d.intersects(bottom)) s |= kBottom;
    if (d.intersects(top)) s |= kTop;
    g.disc_index.push_back(i);
    g.sides.push_back(s);
    local.push_back(d);
  }
  const DiscGrid grid(local, rect);
  grid.for_each_candidate_pair([&](std::uint32_t a, std::uint32_t b) {
    if (clipped_adjacent(local[a], local[b], rect)) g.edges.emplace_back(a, b);
  });
  return g;
}

void require_inside(const OccupiedRealization& occ, const Rect& rect, const char* what) {
  if (!occ.window().contains(rect)) throw QueryError(what);
}

}  // namespace

CrossingThresholds crossing_thresholds(const OccupiedRealization& occ, const Rect& rect) {
  require_inside(occ, rect, "crossing_thresholds: rectangle outside the window");
  const ClippedGraph g = build_clipped_graph(occ.discs(), rect);
  const std::size_t n = g.disc_index.size();
  const auto mark = [&](std::uint32_t node) { return occ.intensity_marks()[g.disc_index[node]]; };

  struct Event {
    double weight;
    std::uint32_t a, b;
  };
  std::vector<Event> edges;
  edges.reserve(g.edges.size());
  for (const auto& [a, b] : g.edges) edges.push_back({std::max(mark(a), mark(b)), a, b});
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Event& x, const Event& y) { return x.weight < y.weight; });

  // Kruskal in order of activation; one pass per pair of opposite sides so
  // that sentinels of different directions never share a component.
  const auto first_connection = [&](std::uint8_t side_a, std::uint8_t side_b) {
    const std::size_t sa = n, sb = n + 1;
    std::vector<Event> events = edges;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (g.sides[v] & side_a) events.push_back({mark(v), v, static_cast<std::uint32_t>(sa)});
      if (g.sides[v] & side_b) events.push_back({mark(v), v, static_cast<std::uint32_t>(sb)});
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& x, const Event& y) { return x.weight < y.weight; });
    UnionFind uf(n + 2);
    for (const Event& e : events)
      if (uf.unite(e.a, e.b) && uf.connected(sa, sb)) return e.weight;
    return kInf;
  };
  return {first_connection(kLeft, kRight), first_connection(kBottom, kTop)};
}

bool has_crossing(const OccupiedRealization& occ, const CrossingQuery& q) {
  if (q.phase == Phase::vacant) return has_vacant_crossing(occ, q);
  const CrossingThresholds t = crossing_thresholds(occ, q.rect);
  return (q.direction == Direction::horizontal ? t.left_right : t.top_bottom) < kInf;
}

bool has_vacant_crossing(const OccupiedRealization& occ, const CrossingQuery& q) {
  CrossingQuery dual = q;
  dual.phase = Phase::occupied;
  dual.direction =
      q.direction == Direction::horizontal ? Direction::vertical : Direction::horizontal;
  return !has_crossing(occ, dual);
}

bool origin_cluster_reaches(const OccupiedRealization& occ, double radius_n) {
  if (!(radius_n > 0.0)) throw ParameterError("origin_cluster_reaches: radius must be > 0");
  const Rect box = Rect::square({0.0, 0.0}, radius_n);
  require_inside(occ, box, "origin_cluster_reaches: box outside the window");
  const ClippedGraph g = build_clipped_graph(occ.discs(), box);
  const std::size_t n = g.disc_index.size();
  const std::size_t origin = n, boundary = n + 1;
  UnionFind uf(n + 2);
  bool covered = false;
  for (std::uint32_t v = 0; v < n; ++v) {
    const Disc& d = occ.discs()[g.disc_index[v]];
    if (d.contains({0.0, 0.0})) {
      uf.unite(v, origin);
      covered = true;
    }
    if (g.sides[v] != 0) uf.unite(v, boundary);
  }
  if (!covered) return false;
  for (const auto& [a, b] : g.edges) uf.unite(a, b);
  return uf.connected(origin, boundary);
}

namespace {

// Per-cell raster of "cell inside one disc" and "cell meets some disc".
struct CellCover {
  detail::Raster full;
  detail::Raster touch;
};

CellCover rasterize(const std::vector<Disc>& discs, const DiscGrid& grid, const Rect& rect,
                    double h) {
  const int nx = std::max(1, static_cast<int>(std::ceil(rect.width() / h)));
  const int ny = std::max(1, static_cast<int>(std::ceil(rect.height() / h)));
  const double dx = rect.width() / nx, dy = rect.height() / ny;
  CellCover c{detail::Raster(nx, ny), detail::Raster(nx, ny)};
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double x0 = rect.x_min() + i * dx, y0 = rect.y_min() + j * dy;
      const Rect cell(x0, i == nx - 1 ? rect.x_max() : x0 + dx, y0,
                      j == ny - 1 ? rect.y_max() : y0 + dy);
      bool full = false, touch = false;
      grid.for_each_in_rect(cell, [&](std::uint32_t k) {
        const Disc& d = discs[k];
        if (!touch && d.intersects(cell)) touch = true;
        if (!full && d.contains({cell.x_min(), cell.y_min()}) &&
            d.contains({cell.x_max(), cell.y_min()}) && d.contains({cell.x_min(), cell.y_max()}) &&
            d.contains({cell.x_max(), cell.y_max()}))
          full = true;
      });
      c.full.at(i, j) = full;
      c.touch.at(i, j) = touch;
    }
  return c;
}

Tristate oracle_at(const std::vector<Disc>& discs, const DiscGrid& grid, const CrossingQuery& q,
                   double h) {
  CellCover c = rasterize(discs, grid, q.rect, h);
  detail::Raster sure = c.full, maybe = c.touch;
  if (q.phase == Phase::vacant) {
    // Untouched cells are vacant; cells not fully covered may hold vacancy.
    for (std::size_t k = 0; k < sure.cells.size(); ++k) {
      sure.cells[k] = !c.touch.cells[k];
      maybe.cells[k] = !c.full.cells[k];
    }
  }
  if (q.direction == Direction::vertical) {
    sure = detail::transposed(sure);
    maybe = detail::transposed(maybe);
  }
  if (detail::crosses_left_right(sure, false)) return Tristate::yes;
  if (!detail::crosses_left_right(maybe, true)) return Tristate::no;
  return Tristate::uncertain;
}

}  // namespace

Tristate grid_oracle_crossing(const OccupiedRealization& occ, const CrossingQuery& q,
                              double resolution) {
  if (!(resolution > 0.0)) throw ParameterError("grid_oracle_crossing: resolution must be > 0");
  require_inside(occ, q.rect, "grid_oracle_crossing: rectangle outside the window");
  std::vector<Disc> local;
  for (const Disc& d : occ.discs())
    if (d.radius > 0.0 && d.intersects(q.rect)) local.push_back(d);
  const DiscGrid grid(local, q.rect);
  const Tristate coarse = oracle_at(local, grid, q, resolution);
  if (coarse != Tristate::uncertain) return coarse;
  return oracle_at(local, grid, q, 0.5 * resolution);
}

}  // namespace geoperc
