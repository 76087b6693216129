#include "bvdyn/towers.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "bvdyn/error.hpp"
#include "bvdyn/symbolic.hpp"

namespace bvdyn {

namespace {

std::vector<bool> mask_of(std::uint64_t count, const std::vector<std::uint64_t>& cells) {
  std::vector<bool> m(count, false);
  for (auto c : cells) m[c] = true;
  return m;
}

std::vector<std::uint64_t> invert_perm(const std::vector<std::uint64_t>& perm) {
  std::vector<std::uint64_t> inv(perm.size());
  for (std::uint64_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  return inv;
}

void require_plain(const CylMap& t) {
  if (t.has_overrides()) throw InvalidArgument("tower constructions need a map without exceptional points");
}

std::vector<std::pair<Word, long long>> group_pieces(const SeqSpace& space, std::size_t depth,
                                                     const std::vector<long long>& exponent) {
  std::map<long long, std::vector<std::uint64_t>> by_exp;
  for (std::uint64_t c = 0; c < exponent.size(); ++c) by_exp[exponent[c]].push_back(c);
  std::vector<std::pair<Word, long long>> pieces;
  for (auto& [e, cells] : by_exp)
    for (auto& w : compress_cells(space, depth, cells)) pieces.emplace_back(std::move(w), e);
  std::sort(pieces.begin(), pieces.end());
  return pieces;
}

Rational sum_mass(const std::vector<Rational>& mass, const std::vector<std::uint64_t>& cells) {
  Rational s = 0;
  for (auto c : cells) s += mass[c];
  return s;
}

std::string level_name(std::size_t n) { return "A_" + std::to_string(n); }

}  // namespace

std::vector<Rational> cell_masses(const MeasureSpec& mu, const CylinderIndexer& idx) {
  std::vector<Rational> m = mu.nonatomic_masses(idx);
  for (const auto& [x, w] : mu.atoms()) m[idx.index_of_prefix(x)] += w;
  return m;
}

CylUnion MarkerSeq::at(std::size_t n) const {
  if (n == 0) return {Word{}};
  if (n > defined_levels) {
    throw InvalidArgument("marker level " + std::to_string(n) + " is not defined (" + std::to_string(defined_levels) +
                          " levels given)");
  }
  return set(n);
}

MarkerSeq MarkerSeq::zeros(const CylMap& t) {
  MarkerSeq m{t, [](std::size_t n) { return CylUnion{Word(n, 0)}; }, "zeros",
              "the intersection is the single point 0(0), which every nonatomic measure ignores"};
  return m;
}

MarkerSeq MarkerSeq::ones(const CylMap& t) {
  const SeqSpace space = t.space();
  MarkerSeq m{t,
              [space](std::size_t n) {
                Word w;
                for (std::size_t i = 0; i < n; ++i) w.push_back(space.alphabet(i) - 1);
                return CylUnion{w};
              },
              "ones", "the intersection is the single point of maximal digits, which every nonatomic measure ignores"};
  return m;
}

MarkerSeq MarkerSeq::from_list(const CylMap& t, std::vector<CylUnion> sets, std::string name) {
  const std::size_t count = sets.size();
  MarkerSeq m{t, [sets = std::move(sets)](std::size_t n) { return sets.at(n - 1); }, std::move(name), ""};
  m.defined_levels = count;
  return m;
}

std::vector<std::uint64_t> TowerPartition::level_cells(std::size_t tower, std::size_t level) const {
  const Tower& tw = towers.at(tower);
  if (level >= tw.height) throw InvalidArgument("tower level out of range");
  std::vector<std::uint64_t> out;
  for (auto c : tw.base) {
    for (std::size_t i = 0; i < level; ++i) c = perm[c];
    out.push_back(c);
  }
  return out;
}

CylUnion TowerPartition::level(std::size_t tower, std::size_t level) const {
  return compress_cells(space, depth, level_cells(tower, level));
}

TowerPartition build_towers(const CylMap& t, const CylUnion& a, std::size_t depth) {
  require_plain(t);
  TowerPartition xi;
  xi.space = t.space();
  xi.depth = std::max({depth, t.head_depth(), max_depth(a)});
  xi.perm = t.cylinder_permutation(xi.depth);
  const std::uint64_t count = xi.perm.size();
  const auto in_a = mask_of(count, cells_of(xi.space, xi.depth, a));
  std::vector<bool> seen(count, false);
  std::map<std::size_t, Tower> by_height;
  for (std::uint64_t c = 0; c < count; ++c) {
    if (!in_a[c]) continue;
    std::size_t k = 1;
    seen[c] = true;
    for (std::uint64_t x = xi.perm[c]; !in_a[x]; x = xi.perm[x]) {
      seen[x] = true;
      ++k;
    }
    Tower& tw = by_height[k];
    tw.height = k;
    tw.base.push_back(c);
  }
  for (auto& [k, tw] : by_height) xi.towers.push_back(std::move(tw));
  for (std::uint64_t c = 0; c < count; ++c)
    if (!seen[c]) xi.uncovered.push_back(c);
  return xi;
}

bool MarkerReport::passed() const {
  return std::all_of(clauses.begin(), clauses.end(), [](const ClauseResult& c) { return c.answer == Answer::Yes; });
}

MarkerReport validate_markers(const MarkerSeq& m, std::size_t n, std::size_t depth) {
  require_plain(m.t);
  if (n < 1) throw InvalidArgument("marker validation needs n >= 1");
  const SeqSpace& space = m.t.space();
  std::vector<CylUnion> sets;
  std::size_t d = std::max(depth, m.t.head_depth());
  for (std::size_t j = 0; j <= n; ++j) {
    sets.push_back(m.at(j));
    d = std::max(d, max_depth(sets.back()));
  }
  MarkerReport r;
  r.depth = d;
  const auto perm = m.t.cylinder_permutation(d);
  const std::uint64_t count = perm.size();
  std::vector<std::vector<bool>> in;
  for (const auto& s : sets) in.push_back(mask_of(count, cells_of(space, d, s)));

  ClauseResult nest{"(i) nesting", Answer::Yes, "A_0 > A_1 > ... > A_" + std::to_string(n)};
  for (std::size_t j = 1; j <= n && nest.answer == Answer::Yes; ++j) {
    for (std::uint64_t c = 0; c < count; ++c) {
      if (in[j][c] && !in[j - 1][c]) {
        nest.answer = Answer::No;
        nest.message = level_name(j) + " is not contained in " + level_name(j - 1);
        break;
      }
    }
  }
  r.clauses.push_back(nest);

  ClauseResult van{"(ii) vanishing", m.vanishing.empty() ? Answer::Unknown : Answer::Yes,
                   m.vanishing.empty() ? "no certificate for an empty intersection" : m.vanishing};
  r.clauses.push_back(van);

  // Cycles of the cylinder permutation are exactly the orbits of cylinders.
  std::vector<std::uint64_t> cycle_id(count, count);
  std::uint64_t cycles = 0;
  for (std::uint64_t c = 0; c < count; ++c) {
    if (cycle_id[c] != count) continue;
    for (std::uint64_t x = c; cycle_id[x] == count; x = perm[x]) cycle_id[x] = cycles;
    ++cycles;
  }
  ClauseResult sec{"(iii) complete sections", Answer::Yes, "A_j and its complement meet every orbit"};
  for (std::size_t j = 1; j <= n && sec.answer == Answer::Yes; ++j) {
    std::vector<bool> meets(cycles, false), misses(cycles, false);
    for (std::uint64_t c = 0; c < count; ++c) (in[j][c] ? meets : misses)[cycle_id[c]] = true;
    for (std::uint64_t z = 0; z < cycles; ++z) {
      if (!meets[z] || !misses[z]) {
        sec.answer = Answer::No;
        sec.message = (!meets[z] ? level_name(j) : "the complement of " + level_name(j)) + " misses an orbit";
        break;
      }
    }
  }
  r.clauses.push_back(sec);

  r.clauses.push_back({"(iv) recurrence", Answer::Yes,
                       "T permutes the depth-" + std::to_string(d) + " cylinders, so every point of A_j returns"});

  ClauseResult dis{"(v) disjoint images", Answer::Yes, "A_j and T^i A_j are disjoint for 0 < i < j"};
  for (std::size_t j = 2; j <= n && dis.answer == Answer::Yes; ++j) {
    for (std::uint64_t c = 0; c < count && dis.answer == Answer::Yes; ++c) {
      if (!in[j][c]) continue;
      std::uint64_t x = c;
      for (std::size_t i = 1; i < j; ++i) {
        x = perm[x];
        if (in[j][x]) {
          dis.answer = Answer::No;
          dis.message = level_name(j) + " meets T^" + std::to_string(i) + " " + level_name(j);
          break;
        }
      }
    }
  }
  r.clauses.push_back(dis);

  ClauseResult unc{"(vi) uncountable bases", Answer::Yes, "every nonempty cylinder union is uncountable"};
  r.clauses.push_back(unc);
  return r;
}

KMaximal k_maximal(const TowerPartition& xi, std::size_t k) {
  if (k < 2) throw InvalidArgument("k must be at least 2");
  KMaximal out;
  out.k = k;
  for (std::size_t t = 0; t < xi.towers.size(); ++t) {
    const std::size_t strides = xi.towers[t].height / k;
    for (std::size_t j = 0; j < strides; ++j) {
      auto cells = xi.level_cells(t, j * k);
      out.cells.insert(out.cells.end(), cells.begin(), cells.end());
    }
  }
  std::sort(out.cells.begin(), out.cells.end());
  out.set = compress_cells(xi.space, xi.depth, out.cells);

  const std::uint64_t count = xi.perm.size();
  const auto inv = invert_perm(xi.perm);
  const auto in_a = mask_of(count, out.cells);
  std::vector<bool> covered(count, false);
  out.disjoint = true;
  for (auto c : out.cells) {
    covered[c] = true;
    std::uint64_t f = c, b = c;
    for (std::size_t i = 1; i < k; ++i) {
      f = xi.perm[f];
      b = inv[b];
      covered[f] = covered[b] = true;
      if (in_a[f]) out.disjoint = false;
    }
  }
  out.covering = std::all_of(covered.begin(), covered.end(), [](bool v) { return v; });
  return out;
}

std::vector<std::pair<Word, long long>> induced_pieces(const CylMap& t, const CylUnion& a, std::size_t depth) {
  const TowerPartition xi = build_towers(t, a, depth);
  std::vector<long long> exponent(xi.perm.size(), 0);
  for (const auto& tw : xi.towers)
    for (auto c : tw.base) exponent[c] = static_cast<long long>(tw.height);
  return group_pieces(xi.space, xi.depth, exponent);
}

CylMap induced(const CylMap& t, const CylUnion& a, std::size_t depth) {
  return piecewise_power(t, induced_pieces(t, a, depth));
}

std::vector<std::pair<Word, long long>> periodic_pieces(const MarkerSeq& m, std::size_t n) {
  const TowerPartition xi = build_towers(m.t, m.at(n));
  std::vector<long long> exponent(xi.perm.size(), 1);
  for (std::size_t t = 0; t < xi.towers.size(); ++t) {
    const std::size_t h = xi.towers[t].height;
    for (auto c : xi.level_cells(t, h - 1)) exponent[c] = -static_cast<long long>(h - 1);
  }
  return group_pieces(xi.space, xi.depth, exponent);
}

CylMap periodic_approx(const MarkerSeq& m, std::size_t n) { return piecewise_power(m.t, periodic_pieces(m, n)); }

namespace {

RokhlinResult rokhlin_at(const MarkerSeq& markers, std::size_t n, std::size_t m, const Rational& eps,
                         const std::vector<MeasureSpec>& measures) {
  RokhlinResult r;
  r.n = n;
  r.m = m;
  r.eps = eps;
  const TowerPartition xi = build_towers(markers.t, markers.at(n));
  r.depth = xi.depth;
  const CylinderIndexer idx(xi.space, xi.depth);
  std::vector<std::vector<Rational>> mass;
  for (const auto& mu : measures) {
    if (!(mu.space() == xi.space)) throw SpaceMismatch(mu.space().to_string() + " vs " + xi.space.to_string());
    mass.push_back(cell_masses(mu, idx));
  }
  r.measures.assign(measures.size(), RokhlinMeasureReport{0, 0, 0});
  for (std::size_t i = 0; i < measures.size(); ++i) r.measures[i].short_towers = sum_mass(mass[i], xi.uncovered);

  std::vector<std::uint64_t> covered;
  for (std::size_t t = 0; t < xi.towers.size(); ++t) {
    const std::size_t h = xi.towers[t].height;
    TowerSummary sum{h, xi.base(t), std::vector<Rational>(measures.size(), Rational(0))};
    for (std::size_t l = 0; l < h; ++l) {
      const auto cells = xi.level_cells(t, l);
      for (std::size_t i = 0; i < measures.size(); ++i) {
        const Rational w = sum_mass(mass[i], cells);
        sum.mass[i] += w;
        if (h < m) r.measures[i].short_towers += w;
        if (h >= m && l + m >= h + 1) r.measures[i].top_band += w;
      }
      if (h >= m && l < m * (h / m)) {
        covered.insert(covered.end(), cells.begin(), cells.end());
        if (l % m == 0) r.f_cells.insert(r.f_cells.end(), cells.begin(), cells.end());
      }
    }
    r.towers.push_back(std::move(sum));
  }
  std::sort(r.f_cells.begin(), r.f_cells.end());
  r.f = compress_cells(xi.space, xi.depth, r.f_cells);
  for (std::size_t i = 0; i < measures.size(); ++i) r.measures[i].coverage = sum_mass(mass[i], covered);

  const auto in_f = mask_of(xi.perm.size(), r.f_cells);
  r.disjoint = true;
  for (auto c : r.f_cells) {
    std::uint64_t x = c;
    for (std::size_t j = 1; j < m; ++j) {
      x = xi.perm[x];
      if (in_f[x]) r.disjoint = false;
    }
  }
  const Rational half = eps / 2;
  r.bounds_hold = std::all_of(r.measures.begin(), r.measures.end(), [&](const RokhlinMeasureReport& x) {
    return x.short_towers < half && x.top_band <= half;
  });
  r.certified = r.disjoint && std::all_of(r.measures.begin(), r.measures.end(), [&](const RokhlinMeasureReport& x) {
                  return x.coverage > 1 - eps;
                });
  return r;
}

}  // namespace

RokhlinResult rokhlin_set(const MarkerSeq& markers, std::size_t m, const Rational& eps,
                          const std::vector<MeasureSpec>& measures, std::optional<std::size_t> n, std::size_t max_n) {
  require_plain(markers.t);
  if (m < 1) throw InvalidArgument("m must be positive");
  if (eps <= 0 || eps >= 1) throw InvalidArgument("eps must lie in (0, 1)");
  if (n) return rokhlin_at(markers, *n, m, eps, measures);
  max_n = std::min(max_n, markers.defined_levels);
  if (max_n < 1) throw InvalidArgument("no marker levels to search");
  for (std::size_t k = 1; k <= max_n; ++k) {
    RokhlinResult r = rokhlin_at(markers, k, m, eps, measures);
    if (r.bounds_hold || k == max_n) return r;
  }
  throw Error("unreachable");
}

MarkerDiagram::MarkerDiagram(const MarkerSeq& markers, std::size_t levels) : t_(markers.t), levels_(levels) {
  require_plain(t_);
  if (levels < 1) throw InvalidArgument("the diagram needs at least one level");
  const SeqSpace& space = t_.space();
  std::vector<CylUnion> sets;
  depth_ = t_.head_depth();
  for (std::size_t n = 1; n <= levels; ++n) {
    sets.push_back(markers.at(n));
    depth_ = std::max(depth_, max_depth(sets.back()));
  }
  const auto perm = t_.cylinder_permutation(depth_);
  inv_perm_ = invert_perm(perm);
  const std::uint64_t count = perm.size();

  vertex_.assign(1, std::vector<long long>(count, 0));
  route_.assign(1, {});
  heights_.assign(1, {BigInt(1)});
  std::vector<Level> lv{Level{1, {}}};
  for (std::size_t n = 1; n <= levels; ++n) {
    const auto in_a = mask_of(count, cells_of(space, depth_, sets[n - 1]));
    const auto& below = vertex_[n - 1];
    std::vector<long long> vert(count, -1);
    std::map<std::pair<BigInt, std::vector<std::size_t>>, std::size_t> classes;
    std::vector<std::vector<Step>> routes;
    std::vector<BigInt> hs;
    for (std::uint64_t b = 0; b < count; ++b) {
      if (!in_a[b]) continue;
      if (below[b] < 0) throw InvalidArgument(level_name(n) + " is not contained in " + level_name(n - 1));
      std::vector<Step> route;
      std::vector<std::size_t> itinerary;
      std::uint64_t pos = 0;
      std::uint64_t x = b;
      do {
        const auto u = static_cast<std::size_t>(below[x]);
        route.push_back(Step{u, pos, 0});
        itinerary.push_back(u);
        const auto h = static_cast<std::uint64_t>(heights_[n - 1][u]);
        for (std::uint64_t i = 0; i < h; ++i) x = perm[x];
        pos += h;
        if (below[x] < 0) throw InvalidArgument("towers of " + level_name(n - 1) + " do not end on " + level_name(n - 1));
        if (pos > count) throw InvalidArgument("return to " + level_name(n) + " exceeds the number of cylinders");
      } while (!in_a[x]);
      auto [it, fresh] = classes.emplace(std::make_pair(BigInt(pos), itinerary), routes.size());
      if (fresh) {
        routes.push_back(route);
        hs.push_back(BigInt(pos));
      }
      vert[b] = static_cast<long long>(it->second);
    }
    Level l{routes.size(), {}};
    for (std::size_t v = 0; v < routes.size(); ++v)
      for (std::size_t r = 0; r < routes[v].size(); ++r) l.edges.push_back(Edge{routes[v][r].vertex, v, r});
    lv.push_back(l);
    vertex_.push_back(std::move(vert));
    route_.push_back(std::move(routes));
    heights_.push_back(std::move(hs));
  }
  diagram_ = Diagram(std::move(lv));
  for (std::size_t n = 1; n <= levels; ++n)
    for (std::size_t v = 0; v < route_[n].size(); ++v)
      for (std::size_t r = 0; r < route_[n][v].size(); ++r) route_[n][v][r].edge = *diagram_.edge_with_rank(n, v, r);
}

PathPrefix MarkerDiagram::coordinates_of_cell(std::uint64_t cell) const {
  PathPrefix p;
  for (std::size_t n = 1; n <= levels_; ++n) {
    std::uint64_t x = cell;
    std::uint64_t back = 0;
    while (vertex_[n][x] < 0) {
      x = inv_perm_[x];
      if (++back > inv_perm_.size()) throw InvalidArgument("cylinder lies outside every tower of " + level_name(n));
    }
    const auto& route = route_[n][static_cast<std::size_t>(vertex_[n][x])];
    auto it = std::upper_bound(route.begin(), route.end(), back,
                               [](std::uint64_t v, const Step& s) { return v < s.offset; });
    p.edges.push_back(std::prev(it)->edge);
  }
  return p;
}

PathPrefix MarkerDiagram::coordinates(const Point& x) const {
  check_point(t_.space(), x);
  return coordinates_of_cell(CylinderIndexer(t_.space(), depth_).index_of_prefix(x));
}

MarkerDiagram::Conjugacy MarkerDiagram::check_conjugacy(const std::vector<Point>& samples) const {
  Conjugacy c;
  for (const auto& x : samples) {
    auto next = successor(diagram_, coordinates(x));
    if (!next) {
      ++c.skipped;
      continue;
    }
    ++c.checked;
    if (*next != coordinates(t_.apply(x))) c.failures.push_back(x);
  }
  return c;
}

}  // namespace bvdyn
