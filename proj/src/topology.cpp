#include "bvdyn/topology.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "bvdyn/error.hpp"
#include "bvdyn/odometer.hpp"
#include "bvdyn/symbolic.hpp"
#include "bvdyn/towers.hpp"

namespace bvdyn {

namespace {

void same_space(const SeqSpace& a, const SeqSpace& b) {
  if (!(a == b)) throw SpaceMismatch(a.to_string() + " vs " + b.to_string());
}

std::vector<std::uint64_t> invert_perm(const std::vector<std::uint64_t>& perm) {
  std::vector<std::uint64_t> inv(perm.size());
  for (std::uint64_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  return inv;
}

bool in_union(const Point& x, const std::vector<Word>& f) {
  return std::any_of(f.begin(), f.end(), [&](const Word& w) { return in_cylinder(x, w); });
}

// Index of the depth-d prefix of a point.
std::uint64_t prefix_index(const CylinderIndexer& idx, const Point& x) { return idx.index_of_prefix(x); }

using Wide = __int128;

// Exhaustive max-cut style search over subsets of n cells with symmetric integer weights.
std::pair<Wide, std::uint64_t> exhaustive_max(const std::vector<std::vector<Wide>>& w) {
  const std::size_t n = w.size();
  std::vector<bool> in(n, false);
  Wide value = 0, best = 0;
  std::uint64_t mask = 0, best_mask = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t g = 1; g < total; ++g) {
    const auto j = static_cast<std::size_t>(__builtin_ctzll(g));
    Wide delta = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j || w[j][k] == 0) continue;
      delta += in[k] == in[j] ? w[j][k] : -w[j][k];
    }
    in[j] = !in[j];
    mask ^= std::uint64_t{1} << j;
    value += delta;
    if (value > best || (value == best && mask < best_mask)) {
      best = value;
      best_mask = mask;
    }
  }
  return {best, best_mask};
}

std::pair<Rational, std::vector<std::uint64_t>> greedy_max(const std::vector<std::vector<Rational>>& w) {
  const std::size_t n = w.size();
  auto value_of = [&](const std::vector<bool>& in) {
    Rational v = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (in[a] != in[b]) v += w[a][b];
    return v;
  };
  Rational best = 0;
  std::vector<bool> best_in(n, false);
  const std::size_t restarts = std::min<std::size_t>(n, 64);
  for (std::size_t r = 0; r <= restarts; ++r) {
    std::vector<bool> in(n, false);
    if (r > 0) in[(r - 1) * n / restarts] = true;
    for (bool improved = true; improved;) {
      improved = false;
      for (std::size_t j = 0; j < n; ++j) {
        Rational delta = 0;
        for (std::size_t k = 0; k < n; ++k)
          if (k != j) delta += in[k] == in[j] ? w[j][k] : Rational(-w[j][k]);
        if (delta > 0) {
          in[j] = !in[j];
          improved = true;
        }
      }
    }
    Rational v = value_of(in);
    if (v > best) {
      best = v;
      best_in = in;
    }
  }
  std::vector<std::uint64_t> cells;
  for (std::size_t j = 0; j < n; ++j)
    if (best_in[j]) cells.push_back(j);
  return {best, cells};
}

}  // namespace

Interval dist_uniform(const CylMap& s, const CylMap& t, const MeasureSpec& mu, std::size_t depth) {
  same_space(s.space(), t.space());
  same_space(s.space(), mu.space());
  const Classification e = e_set(s, t, depth);
  Interval r{0, 0};
  if (mu.nonatomic_weight() != 0) {
    const auto mass = mu.nonatomic_masses(CylinderIndexer(s.space(), depth));
    for (std::size_t c = 0; c < e.cells.size(); ++c) {
      if (e.cells[c] == CellClass::Different) r.lo += mass[c];
      if (e.cells[c] != CellClass::Equal) r.hi += mass[c];
    }
  }
  if (mu.has_atoms()) {
    const CylMap si = s.inverse(), ti = t.inverse();
    for (const auto& [x, w] : mu.atoms()) {
      if (s.apply(x) != t.apply(x) || si.apply(x) != ti.apply(x)) {
        r.lo += w;
        r.hi += w;
      }
    }
  }
  return r;
}

SymDiffResult sup_symdiff(const CylMap& s, const CylMap& t, const MeasureSpec& mu, std::size_t depth,
                          std::size_t exhaustive_limit) {
  same_space(s.space(), t.space());
  same_space(s.space(), mu.space());
  const SeqSpace& space = s.space();
  const std::size_t D = std::max({depth, s.head_depth(), t.head_depth()});
  const CylinderIndexer fine(space, D), coarse(space, depth);
  const std::uint64_t per = fine.block_size(depth);
  const auto ps = s.cylinder_permutation(D), pt = t.cylinder_permutation(D);
  const auto is = invert_perm(ps), it = invert_perm(pt);
  const auto n = static_cast<std::size_t>(coarse.count());
  if (n > 4096) throw BudgetExceeded("too many cylinders for the subset search at depth " + std::to_string(depth));
  const auto mass = mu.nonatomic_masses(fine);

  std::vector<std::vector<Rational>> w(n, std::vector<Rational>(n, Rational(0)));
  auto add = [&](std::uint64_t a, std::uint64_t b, const Rational& m) {
    if (a == b || m == 0) return;
    w[a][b] += m;
    w[b][a] += m;
  };
  for (std::uint64_t e = 0; e < fine.count(); ++e) add(it[e] / per, is[e] / per, mass[e]);
  const bool atoms = mu.has_atoms();
  const CylMap si = atoms ? s.inverse() : s, ti = atoms ? t.inverse() : t;
  if (atoms) {
    for (const auto& [y, m] : mu.atoms()) add(prefix_index(coarse, ti.apply(y)), prefix_index(coarse, si.apply(y)), m);
  }

  SymDiffResult r;
  r.cylinders = n;
  std::vector<std::uint64_t> chosen;
  if (n <= exhaustive_limit && n <= 30) {
    std::vector<Rational> flat;
    for (const auto& row : w) flat.insert(flat.end(), row.begin(), row.end());
    const BigInt den = common_denominator(flat.data(), flat.data() + flat.size());
    if (den > BigInt(1) << 60) throw BudgetExceeded("measure denominators too large for the subset search");
    std::vector<std::vector<Wide>> iw(n, std::vector<Wide>(n, 0));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const BigInt v = numerator(w[a][b]) * (den / denominator(w[a][b]));
        iw[a][b] = static_cast<Wide>(static_cast<long long>(v));
      }
    auto [best, mask] = exhaustive_max(iw);
    r.lower = Rational(BigInt(static_cast<long long>(best)), den);
    for (std::size_t j = 0; j < n; ++j)
      if (mask >> j & 1) chosen.push_back(j);
    r.exhaustive = true;
  } else {
    auto [best, cells] = greedy_max(w);
    r.lower = best;
    chosen = cells;
  }
  r.witness = compress_cells(space, depth, chosen);

  // Upper bound mu(T E0) + mu(S E0) with E0 over-approximated by the unresolved cylinders.
  const Classification e0 = diff_set(s, t, depth);
  r.upper = 0;
  for (std::uint64_t c = 0; c < fine.count(); ++c) {
    if (e0.cells[c / per] == CellClass::Equal) continue;
    r.upper += mass[pt[c]] + mass[ps[c]];
  }
  if (atoms) {
    for (const auto& [y, m] : mu.atoms()) {
      const Point xt = ti.apply(y), xs = si.apply(y);
      if (s.apply(xt) != t.apply(xt)) r.upper += m;
      if (s.apply(xs) != t.apply(xs)) r.upper += m;
    }
  }
  return r;
}

Rational sup_abs_diff(const CylMap& s, const CylMap& t, const MeasureSpec& mu, std::size_t depth) {
  same_space(s.space(), t.space());
  same_space(s.space(), mu.space());
  const std::size_t D = std::max({depth, s.head_depth(), t.head_depth()});
  Rational total = 0;
  if (mu.nonatomic_weight() != 0) {
    const CylinderIndexer fine(s.space(), D);
    const auto mass = mu.nonatomic_masses(fine);
    const auto ps = s.cylinder_permutation(D), pt = t.cylinder_permutation(D);
    for (std::uint64_t c = 0; c < fine.count(); ++c) {
      const Rational d = mass[pt[c]] - mass[ps[c]];
      if (d > 0) total += d;
    }
  }
  if (mu.has_atoms()) {
    const CylMap si = s.inverse(), ti = t.inverse();
    std::set<Point> z;
    for (const auto& [y, m] : mu.atoms()) {
      z.insert(si.apply(y));
      z.insert(ti.apply(y));
    }
    for (const auto& x : z) {
      const Rational d = mu.point_mass(t.apply(x)) - mu.point_mass(s.apply(x));
      if (d > 0) total += d;
    }
  }
  return total;
}

Answer in_W(const CylMap& s, const CylMap& t, const std::vector<std::vector<Word>>& sets) {
  same_space(s.space(), t.space());
  try {
    std::set<Point> candidates;
    for (const CylMap* m : {&s, &t})
      for (const auto& [x, y] : m->overrides()) {
        candidates.insert(x);
        candidates.insert(y);
      }
    const CylMap si = s.inverse(), ti = t.inverse();
    for (const auto& f : sets) {
      const std::size_t D = std::max({max_depth(f), s.head_depth(), t.head_depth()});
      const auto cells = cells_of(s.space(), D, f);
      const auto ps = s.cylinder_permutation(D), pt = t.cylinder_permutation(D);
      std::vector<std::uint64_t> a, b;
      for (auto c : cells) {
        a.push_back(ps[c]);
        b.push_back(pt[c]);
      }
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) return Answer::No;
      for (const auto& q : candidates)
        if (in_union(si.apply(q), f) != in_union(ti.apply(q), f)) return Answer::No;
    }
    return Answer::Yes;
  } catch (const BudgetExceeded&) {
    return Answer::Unknown;
  }
}

Rational symdiff_mass(const CylMap& s, const CylMap& t, const MeasureSpec& mu, const std::vector<Word>& f) {
  same_space(s.space(), t.space());
  same_space(s.space(), mu.space());
  Rational total = 0;
  if (mu.nonatomic_weight() != 0) {
    const std::size_t D = std::max({max_depth(f), s.head_depth(), t.head_depth()});
    const CylinderIndexer fine(s.space(), D);
    const auto mass = mu.nonatomic_masses(fine);
    const auto ps = s.cylinder_permutation(D), pt = t.cylinder_permutation(D);
    std::vector<int> count(fine.count(), 0);
    for (auto c : cells_of(s.space(), D, f)) {
      count[ps[c]] += 1;
      count[pt[c]] += 2;
    }
    for (std::uint64_t e = 0; e < fine.count(); ++e)
      if (count[e] == 1 || count[e] == 2) total += mass[e];
  }
  if (mu.has_atoms()) {
    const CylMap si = s.inverse(), ti = t.inverse();
    for (const auto& [y, m] : mu.atoms())
      if (in_union(si.apply(y), f) != in_union(ti.apply(y), f)) total += m;
  }
  return total;
}

WbarResult in_Wbar(const CylMap& s, const CylMap& t, const std::vector<std::vector<Word>>& sets,
                   const std::vector<MeasureSpec>& measures, const Rational& eps) {
  if (eps <= 0) throw InvalidArgument("eps must be positive");
  WbarResult r;
  r.worst = 0;
  try {
    const CylMap si = s.inverse(), ti = t.inverse();
    for (const auto& f : sets)
      for (const auto& mu : measures) r.worst = std::max(r.worst, symdiff_mass(s, t, mu, f) + symdiff_mass(si, ti, mu, f));
    r.answer = r.worst < eps ? Answer::Yes : Answer::No;
  } catch (const BudgetExceeded&) {
    r.answer = Answer::Unknown;
  }
  return r;
}

Rational sup_distance(const CylMap& s, const CylMap& t) {
  same_space(s.space(), t.space());
  const std::size_t D = std::max(s.head_depth(), t.head_depth());
  const CylinderIndexer idx(s.space(), D);
  long long best = -1;
  auto offer = [&](long long i) {
    if (best < 0 || i < best) best = i;
  };
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::deque<std::pair<std::size_t, std::size_t>> frontier;
  for (std::uint64_t i = 0; i < idx.count(); ++i) {
    const Word u = idx.word(i);
    const auto rs = s.read(u), rt = t.read(u);
    if (rs.word != rt.word) {
      for (std::size_t k = 0; k < D; ++k)
        if (rs.word[k] != rt.word[k]) {
          offer(static_cast<long long>(k));
          break;
        }
    } else if (seen.insert({rs.state, rt.state}).second) {
      frontier.emplace_back(rs.state, rt.state);
    }
  }
  if (best < 0) {
    // Breadth-first search for the shortest tail on which the transducers write different digits.
    for (long long level = static_cast<long long>(D); !frontier.empty() && best < 0; ++level) {
      std::deque<std::pair<std::size_t, std::size_t>> next;
      for (auto [p, q] : frontier) {
        const MealyNode& a = s.nodes()[p];
        const MealyNode& b = t.nodes()[q];
        for (std::size_t d = 0; d < a.out.size(); ++d) {
          if (a.out[d] != b.out[d]) {
            offer(level);
            break;
          }
          if (seen.insert({a.next[d], b.next[d]}).second) next.emplace_back(a.next[d], b.next[d]);
        }
      }
      frontier = std::move(next);
    }
  }
  std::set<Point> dom;
  for (const CylMap* m : {&s, &t})
    for (const auto& [x, y] : m->overrides()) dom.insert(x);
  for (const auto& x : dom) {
    const long long i = first_difference(s.apply(x), t.apply(x));
    if (i >= 0) offer(i);
  }
  return best < 0 ? Rational(0) : Rational(1, best + 1);
}

Interval d_D(const CylMap& s, const CylMap& t, std::size_t) {
  const Rational v = sup_distance(s, t) + sup_distance(s.inverse(), t.inverse());
  return {v, v};
}

Rational atomic_delta(const std::vector<MeasureSpec>& measures, std::size_t n0) {
  if (measures.empty()) throw InvalidArgument("at least one atomic measure is needed");
  std::optional<Rational> delta;
  for (const auto& mu : measures) {
    if (!mu.purely_atomic()) throw InvalidArgument("atomic_delta needs purely atomic measures");
    auto atoms = mu.atoms();
    if (n0 > 0 && atoms.size() > n0) atoms.resize(n0);
    std::vector<Rational> w;
    for (const auto& [x, m] : atoms) w.push_back(m);
    std::sort(w.begin(), w.end());
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i > 0 && w[i] == w[i - 1]) throw InvalidArgument("duplicate atom weight " + to_string(w[i]));
      Rational d = w[i];
      if (i > 0) d = std::min(d, Rational(w[i] - w[i - 1]));
      if (!delta || d < *delta) delta = d;
    }
  }
  return *delta;
}

SeparationWitness separation_witness(std::size_t depth) {
  const SeqSpace space;
  CylMap t = odometer_map(space);
  CylMap s = periodic_approx(MarkerSeq::zeros(t), 3);
  MeasureSpec mu = MeasureSpec::uniform(space);
  Rational abs = sup_abs_diff(s, t, mu, depth);
  Interval dist = dist_uniform(s, t, mu, depth);
  return SeparationWitness{std::move(t), std::move(s), std::move(mu), depth, abs, dist};
}

}  // namespace bvdyn
