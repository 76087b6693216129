#include "bvdyn/symbolic.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "bvdyn/error.hpp"

namespace bvdyn {

namespace {

constexpr std::uint64_t kMaxCells = std::uint64_t{1} << 22;

void same_space(const CylMap& s, const CylMap& t) {
  if (!(s.space() == t.space())) throw SpaceMismatch(s.space().to_string() + " vs " + t.space().to_string());
}

// Pairs (p, q) of states from which some infinite input makes both write the same output.
class AgreementGraph {
 public:
  AgreementGraph(const std::vector<MealyNode>& a, const std::vector<MealyNode>& b) : a_(a), b_(b) {}

  bool alive(std::size_t p, std::size_t q) {
    ensure(p, q);
    return alive_[ids_.at({p, q})];
  }

 private:
  void ensure(std::size_t p, std::size_t q) {
    if (ids_.count({p, q})) return;
    const std::size_t first = pairs_.size();
    std::vector<std::pair<std::size_t, std::size_t>> stack{{p, q}};
    ids_.emplace(std::make_pair(p, q), pairs_.size());
    pairs_.emplace_back(p, q);
    succ_.emplace_back();
    while (!stack.empty()) {
      auto [x, y] = stack.back();
      stack.pop_back();
      const std::size_t id = ids_.at({x, y});
      const MealyNode& u = a_[x];
      const MealyNode& v = b_[y];
      for (std::size_t d = 0; d < u.out.size(); ++d) {
        if (u.out[d] != v.out[d]) continue;
        auto key = std::make_pair(u.next[d], v.next[d]);
        auto [it, fresh] = ids_.emplace(key, pairs_.size());
        if (fresh) {
          pairs_.push_back(key);
          succ_.emplace_back();
          stack.push_back(key);
        }
        succ_[id].push_back(it->second);
      }
    }
    // Greatest fixed point over the newly discovered pairs; older pairs are already final.
    alive_.resize(pairs_.size(), true);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = first; i < pairs_.size(); ++i) {
        if (!alive_[i]) continue;
        bool any = std::any_of(succ_[i].begin(), succ_[i].end(), [&](std::size_t j) { return alive_[j]; });
        if (!any) {
          alive_[i] = false;
          changed = true;
        }
      }
    }
  }

  const std::vector<MealyNode>& a_;
  const std::vector<MealyNode>& b_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> ids_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<bool> alive_;
};

CellClass merge_forward_inverse(CellClass a, CellClass b) {
  if (a == CellClass::Different || b == CellClass::Different) return CellClass::Different;
  if (a == CellClass::Equal && b == CellClass::Equal) return CellClass::Equal;
  return CellClass::Unresolved;
}

}  // namespace

std::string to_string(CellClass c) {
  switch (c) {
    case CellClass::Equal: return "equal";
    case CellClass::Different: return "different";
    case CellClass::Unresolved: return "unresolved";
  }
  return "?";
}

std::vector<std::uint64_t> Classification::indices(CellClass c) const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < cells.size(); ++i)
    if (cells[i] == c) out.push_back(i);
  return out;
}

bool in_cylinder(const Point& x, const Word& w) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (x.at(i) != w[i]) return false;
  return true;
}

Classification diff_set(const CylMap& s, const CylMap& t, std::size_t depth) {
  same_space(s, t);
  const SeqSpace& space = s.space();
  const std::size_t D = std::max({depth, s.head_depth(), t.head_depth()});
  const CylinderIndexer fine(space, D);
  if (fine.count() > kMaxCells) throw BudgetExceeded("classification depth " + std::to_string(D) + " has too many cylinders");

  // Joint minimization decides functional equality of states across the two maps.
  std::vector<MealyNode> joint = s.nodes();
  const std::size_t offset = joint.size();
  for (MealyNode n : t.nodes()) {
    for (auto& x : n.next) x += offset;
    joint.push_back(std::move(n));
  }
  const auto block = moore_blocks(joint);
  AgreementGraph agree(s.nodes(), t.nodes());

  const CylinderIndexer coarse(space, depth);
  Classification out;
  out.depth = depth;
  out.cells.assign(coarse.count(), CellClass::Equal);
  const std::uint64_t per = fine.block_size(depth);
  std::vector<bool> has_diff(coarse.count(), false), has_unres(coarse.count(), false), has_eq(coarse.count(), false);
  for (std::uint64_t i = 0; i < fine.count(); ++i) {
    const Word u = fine.word(i);
    const auto rs = s.read(u);
    const auto rt = t.read(u);
    const std::uint64_t c = i / per;
    if (rs.word != rt.word) {
      has_diff[c] = true;
    } else if (block[rs.state] == block[rt.state + offset]) {
      has_eq[c] = true;
    } else if (!agree.alive(rs.state, rt.state)) {
      has_diff[c] = true;
    } else {
      has_unres[c] = true;
    }
  }
  for (std::uint64_t c = 0; c < coarse.count(); ++c) {
    if (has_diff[c] && !has_eq[c] && !has_unres[c]) {
      out.cells[c] = CellClass::Different;
    } else if (has_eq[c] && !has_diff[c] && !has_unres[c]) {
      out.cells[c] = CellClass::Equal;
    } else {
      out.cells[c] = CellClass::Unresolved;
    }
  }

  std::set<Point> dom;
  for (const auto& [x, y] : s.overrides()) dom.insert(x);
  for (const auto& [x, y] : t.overrides()) dom.insert(x);
  for (const auto& x : dom)
    if (s.apply(x) != t.apply(x)) out.exceptional.push_back(x);
  return out;
}

Classification e_set(const CylMap& s, const CylMap& t, std::size_t depth) {
  Classification fwd = diff_set(s, t, depth);
  Classification inv = diff_set(s.inverse(), t.inverse(), depth);
  for (std::size_t i = 0; i < fwd.cells.size(); ++i) fwd.cells[i] = merge_forward_inverse(fwd.cells[i], inv.cells[i]);
  std::set<Point> ex(fwd.exceptional.begin(), fwd.exceptional.end());
  ex.insert(inv.exceptional.begin(), inv.exceptional.end());
  fwd.exceptional.assign(ex.begin(), ex.end());
  return fwd;
}

Rational measure(const MeasureSpec& mu, const Region& a) {
  const SeqSpace& space = mu.space();
  for (const auto& w : a.cylinders) check_word(space, w);
  for (const auto& p : a.points) check_point(space, p);
  for (std::size_t i = 0; i < a.cylinders.size(); ++i) {
    for (std::size_t j = 0; j < a.cylinders.size(); ++j) {
      if (i == j) continue;
      const Word& u = a.cylinders[i];
      const Word& v = a.cylinders[j];
      if (u.size() <= v.size() && std::equal(u.begin(), u.end(), v.begin())) {
        throw InvalidArgument("overlapping cylinders " + format_word(space, u) + " and " + format_word(space, v));
      }
    }
  }
  std::set<Point> seen;
  for (const auto& p : a.points) {
    if (!seen.insert(p).second) throw InvalidArgument("point " + format_point(space, p) + " listed twice");
    for (const auto& w : a.cylinders)
      if (in_cylinder(p, w)) throw InvalidArgument("point " + format_point(space, p) + " lies in a listed cylinder");
  }
  Rational total = 0;
  for (const auto& w : a.cylinders) total += mu.mass(w);
  for (const auto& p : a.points) total += mu.point_mass(p);
  return total;
}

Rational pushforward_measure(const MeasureSpec& mu, const CylMap& s, const std::vector<Word>& a) {
  if (!(mu.space() == s.space())) throw SpaceMismatch(mu.space().to_string() + " vs " + s.space().to_string());
  const SeqSpace& space = s.space();
  const std::size_t H = s.head_depth();
  Rational total = 0;
  if (mu.nonatomic_weight() != 0) {
    for (const auto& c : a) {
      check_word(space, c);
      if (c.size() >= H) {
        total += mu.nonatomic_mass(s.image_word(c));
        continue;
      }
      const CylinderIndexer fine(space, H);
      const std::uint64_t n = fine.block_size(c.size());
      if (n > kMaxCells) throw BudgetExceeded("image of " + format_word(space, c) + " needs too many cylinders");
      Word padded = c;
      padded.resize(H, 0);
      const std::uint64_t first = fine.index(padded);
      for (std::uint64_t i = first; i < first + n; ++i) total += mu.nonatomic_mass(s.image_word(fine.word(i)));
    }
  }
  if (mu.has_atoms()) {
    const CylMap inv = s.inverse();
    for (const auto& [x, w] : mu.atoms()) {
      const Point pre = inv.apply(x);
      if (std::any_of(a.begin(), a.end(), [&](const Word& c) { return in_cylinder(pre, c); })) total += w;
    }
  }
  return total;
}

std::size_t max_depth(const std::vector<Word>& cylinders) {
  std::size_t d = 0;
  for (const auto& w : cylinders) d = std::max(d, w.size());
  return d;
}

std::vector<std::uint64_t> cells_of(const SeqSpace& space, std::size_t depth, const std::vector<Word>& cylinders) {
  const CylinderIndexer idx(space, depth);
  std::vector<std::uint64_t> out;
  for (const auto& w : cylinders) {
    if (w.size() > depth) throw InvalidArgument("cylinder " + format_word(space, w) + " is deeper than " + std::to_string(depth));
    check_word(space, w);
    Word padded = w;
    padded.resize(depth, 0);
    const std::uint64_t first = idx.index(padded);
    const std::uint64_t n = idx.block_size(w.size());
    if (n > kMaxCells) throw BudgetExceeded("cylinder union needs too many cells at depth " + std::to_string(depth));
    for (std::uint64_t i = first; i < first + n; ++i) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Word> compress_cells(const SeqSpace& space, std::size_t depth, std::vector<std::uint64_t> cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  const CylinderIndexer idx(space, depth);
  std::vector<Word> out;
  Word prefix;
  auto count_in = [&](std::uint64_t lo, std::uint64_t n) {
    return static_cast<std::uint64_t>(std::lower_bound(cells.begin(), cells.end(), lo + n) -
                                      std::lower_bound(cells.begin(), cells.end(), lo));
  };
  auto rec = [&](auto&& self, std::uint64_t lo) -> void {
    const std::uint64_t n = idx.block_size(prefix.size());
    const std::uint64_t c = count_in(lo, n);
    if (c == 0) return;
    if (c == n) {
      out.push_back(prefix);
      return;
    }
    const std::uint64_t child = idx.block_size(prefix.size() + 1);
    for (Digit a = 0; a < space.alphabet(prefix.size()); ++a) {
      prefix.push_back(a);
      self(self, lo + a * child);
      prefix.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace bvdyn
