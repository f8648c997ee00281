#include <random>
#include <set>
#include <utility>

#include "doctest.h"
#include "geoperc/spatial_index.hpp"

using namespace geoperc;

TEST_CASE("union find") {
  UnionFind uf(6);
  CHECK(uf.unite(0, 1));
  CHECK(uf.unite(2, 3));
  CHECK_FALSE(uf.unite(1, 0));
  CHECK_FALSE(uf.connected(0, 2));
  CHECK(uf.unite(1, 3));
  CHECK(uf.connected(0, 2));
  CHECK_FALSE(uf.connected(4, 5));
}

TEST_CASE("candidate pairs cover every overlapping pair exactly once") {
  std::mt19937_64 eng(17);
  std::uniform_real_distribution<double> pos(0.0, 30.0), rad(0.0, 2.5);
  std::vector<Disc> discs;
  for (int i = 0; i < 400; ++i) discs.push_back({{pos(eng), pos(eng)}, rad(eng)});
  discs.push_back({{15.0, 15.0}, 12.0});  // one much larger disc
  const Rect domain(0, 30, 0, 30);

  for (double cell : {0.0, 0.7, 5.0}) {
    const DiscGrid grid(discs, domain, cell);
    std::multiset<std::pair<std::uint32_t, std::uint32_t>> seen;
    grid.for_each_candidate_pair([&](std::uint32_t i, std::uint32_t j) { seen.insert({i, j}); });
    for (std::uint32_t i = 0; i < discs.size(); ++i)
      for (std::uint32_t j = i + 1; j < discs.size(); ++j) {
        const bool meet = distance(discs[i].center, discs[j].center) <=
                          discs[i].radius + discs[j].radius;
        if (meet) REQUIRE(seen.count({i, j}) == 1);
        else REQUIRE(seen.count({i, j}) <= 1);
      }
  }
}

TEST_CASE("near queries find every disc containing the point") {
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> pos(-10.0, 10.0), rad(0.1, 3.0);
  std::vector<Disc> discs;
  for (int i = 0; i < 200; ++i) discs.push_back({{pos(eng), pos(eng)}, rad(eng)});
  const DiscGrid grid(discs, Rect(-10, 10, -10, 10));
  for (int k = 0; k < 500; ++k) {
    const Point2 p{pos(eng), pos(eng)};
    std::set<std::uint32_t> found;
    grid.for_each_near(p, [&](std::uint32_t i) { found.insert(i); });
    for (std::uint32_t i = 0; i < discs.size(); ++i)
      if (discs[i].contains(p)) REQUIRE(found.count(i) == 1);
  }
}
