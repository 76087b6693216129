#include "bvdyn/cylmap.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

#include "bvdyn/error.hpp"
#include "text_util.hpp"

namespace bvdyn {

namespace {

bool is_permutation_of(const std::vector<Digit>& out, std::size_t n) {
  if (out.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (Digit d : out) {
    if (d >= n || seen[d]) return false;
    seen[d] = true;
  }
  return true;
}

std::uint64_t prefix_index(const SeqSpace& space, const Word& u, std::size_t len) {
  std::uint64_t idx = 0;
  for (std::size_t t = 0; t < len; ++t) idx = idx * space.alphabet(t) + u[t];
  return idx;
}

std::uint64_t point_prefix_index(const SeqSpace& space, const Point& x, std::size_t len) {
  std::uint64_t idx = 0;
  for (std::size_t t = 0; t < len; ++t) idx = idx * space.alphabet(t) + x.at(t);
  return idx;
}

}  // namespace

std::vector<std::size_t> moore_blocks(const std::vector<MealyNode>& nodes) {
  const std::size_t n = nodes.size();
  std::vector<std::size_t> block(n);
  {
    std::map<std::pair<std::size_t, std::vector<Digit>>, std::size_t> ids;
    for (std::size_t i = 0; i < n; ++i) {
      auto key = std::make_pair(nodes[i].cls, nodes[i].out);
      block[i] = ids.emplace(key, ids.size()).first->second;
    }
  }
  std::size_t count = 0;
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::size_t> refined(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> key{block[i]};
      for (auto q : nodes[i].next) key.push_back(block[q]);
      refined[i] = ids.emplace(std::move(key), ids.size()).first->second;
    }
    block = std::move(refined);
    if (ids.size() == count) break;
    count = ids.size();
  }
  return block;
}

std::vector<bool> identity_nodes(const std::vector<MealyNode>& nodes) {
  std::vector<bool> id(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    bool trivial = true;
    for (std::size_t a = 0; a < nodes[i].out.size() && trivial; ++a) trivial = nodes[i].out[a] == a;
    id[i] = trivial;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!id[i]) continue;
      for (auto q : nodes[i].next) {
        if (!id[q]) {
          id[i] = false;
          changed = true;
          break;
        }
      }
    }
  }
  return id;
}

CylMap::CylMap(SeqSpace space, std::size_t head_depth, std::vector<Word> head_out, std::vector<std::size_t> head_next,
               std::vector<MealyNode> nodes, std::map<Point, Point> overrides, std::uint64_t budget)
    : space_(std::move(space)),
      head_depth_(head_depth),
      head_out_(std::move(head_out)),
      head_next_(std::move(head_next)),
      nodes_(std::move(nodes)),
      overrides_(std::move(overrides)) {
  validate();
  canonicalize(budget);
}

void CylMap::validate() const {
  const std::uint64_t count = space_.cylinder_count(head_depth_);
  if (head_out_.size() != count || head_next_.size() != count) {
    throw InvalidArgument("rewrite table must have one entry per cylinder of depth " + std::to_string(head_depth_));
  }
  CylinderIndexer indexer(space_, head_depth_);
  std::vector<bool> hit(count, false);
  const std::size_t head_cls = space_.level_class(head_depth_);
  for (std::size_t i = 0; i < count; ++i) {
    if (head_out_[i].size() != head_depth_) throw InvalidArgument("rewrite changes the prefix length");
    check_word(space_, head_out_[i]);
    auto j = indexer.index(head_out_[i]);
    if (hit[j]) throw InvalidArgument("map is not a bijection: two prefixes share the image " +
                                      format_word(space_, head_out_[i]));
    hit[j] = true;
    if (head_next_[i] >= nodes_.size() || nodes_[head_next_[i]].cls != head_cls) {
      throw InvalidArgument("rewrite table refers to a missing or misplaced state");
    }
  }
  for (const auto& node : nodes_) {
    if (node.cls >= space_.class_count()) throw InvalidArgument("state with invalid level class");
    const std::size_t l = space_.class_alphabet(node.cls);
    if (!is_permutation_of(node.out, l)) throw InvalidArgument("a state does not permute its digits");
    if (node.next.size() != l) throw InvalidArgument("a state has the wrong number of transitions");
    for (auto q : node.next) {
      if (q >= nodes_.size() || nodes_[q].cls != space_.next_class(node.cls)) {
        throw InvalidArgument("transition to a missing or misplaced state");
      }
    }
  }
  if (!overrides_.empty()) {
    std::set<Point> images, automaton_images;
    for (const auto& [x, y] : overrides_) {
      check_point(space_, x);
      check_point(space_, y);
      if (!images.insert(y).second) throw InvalidArgument("exceptional points share an image");
      automaton_images.insert(apply_automaton(x));
    }
    if (images != automaton_images) {
      throw InvalidArgument("exceptional points must permute the images of their domain");
    }
  }
}

void CylMap::canonicalize(std::uint64_t budget) {
  for (;;) {
    // Merge functionally equal states.
    auto block = moore_blocks(nodes_);
    std::size_t blocks = 0;
    for (auto b : block) blocks = std::max(blocks, b + 1);
    std::vector<MealyNode> merged(blocks);
    std::vector<bool> set(blocks, false);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (set[block[i]]) continue;
      set[block[i]] = true;
      MealyNode n = nodes_[i];
      for (auto& q : n.next) q = block[q];
      merged[block[i]] = std::move(n);
    }
    nodes_ = std::move(merged);
    for (auto& q : head_next_) q = block[q];

    if (head_depth_ == 0) break;
    // Try to move the last head digit into the transducer.
    const std::size_t h = head_depth_ - 1;
    const std::uint32_t l = space_.alphabet(h);
    const std::size_t rows = head_out_.size() / l;
    bool collapsible = true;
    for (std::size_t v = 0; v < rows && collapsible; ++v) {
      const Word& first = head_out_[v * l];
      for (std::uint32_t a = 1; a < l && collapsible; ++a) {
        collapsible = std::equal(first.begin(), first.begin() + h, head_out_[v * l + a].begin());
      }
    }
    if (!collapsible) break;
    std::vector<Word> out(rows);
    std::vector<std::size_t> next(rows);
    std::map<std::pair<std::vector<Digit>, std::vector<std::size_t>>, std::size_t> fresh;
    for (std::size_t v = 0; v < rows; ++v) {
      MealyNode n;
      n.cls = space_.level_class(h);
      for (std::uint32_t a = 0; a < l; ++a) {
        n.out.push_back(head_out_[v * l + a][h]);
        n.next.push_back(head_next_[v * l + a]);
      }
      auto key = std::make_pair(n.out, n.next);
      auto it = fresh.find(key);
      if (it == fresh.end()) {
        it = fresh.emplace(key, nodes_.size()).first;
        nodes_.push_back(std::move(n));
      }
      out[v] = Word(head_out_[v * l].begin(), head_out_[v * l].begin() + h);
      next[v] = it->second;
    }
    head_out_ = std::move(out);
    head_next_ = std::move(next);
    head_depth_ = h;
  }

  // Number states in breadth-first order from the table.
  std::vector<std::size_t> order(nodes_.size(), SIZE_MAX);
  std::vector<std::size_t> queue;
  auto visit = [&](std::size_t q) {
    if (order[q] == SIZE_MAX) {
      order[q] = queue.size();
      queue.push_back(q);
    }
  };
  for (auto q : head_next_) visit(q);
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (auto q : nodes_[queue[i]].next) visit(q);
  if (queue.size() > budget) throw BudgetExceeded("transducer exceeds the state budget");
  std::vector<MealyNode> renumbered(queue.size());
  for (std::size_t i = 0; i < queue.size(); ++i) {
    MealyNode n = nodes_[queue[i]];
    for (auto& q : n.next) q = order[q];
    renumbered[i] = std::move(n);
  }
  nodes_ = std::move(renumbered);
  for (auto& q : head_next_) q = order[q];

  for (auto it = overrides_.begin(); it != overrides_.end();) {
    if (apply_automaton(it->first) == it->second) {
      it = overrides_.erase(it);
    } else {
      ++it;
    }
  }
}

void CylMap::expand_head_to(std::size_t depth, std::uint64_t budget) {
  while (head_depth_ < depth) {
    const std::uint32_t l = space_.alphabet(head_depth_);
    if (head_out_.size() * l > budget) throw BudgetExceeded("rewrite table exceeds the rule budget");
    std::vector<Word> out;
    std::vector<std::size_t> next;
    out.reserve(head_out_.size() * l);
    next.reserve(head_out_.size() * l);
    for (std::size_t i = 0; i < head_out_.size(); ++i) {
      const MealyNode& n = nodes_[head_next_[i]];
      for (std::uint32_t a = 0; a < l; ++a) {
        Word w = head_out_[i];
        w.push_back(n.out[a]);
        out.push_back(std::move(w));
        next.push_back(n.next[a]);
      }
    }
    head_out_ = std::move(out);
    head_next_ = std::move(next);
    ++head_depth_;
  }
}

CylMap CylMap::identity(const SeqSpace& space) {
  std::vector<MealyNode> nodes(space.class_count());
  for (std::size_t c = 0; c < nodes.size(); ++c) {
    std::uint32_t l = space.class_alphabet(c);
    for (std::uint32_t a = 0; a < l; ++a) {
      nodes[c].out.push_back(a);
      nodes[c].next.push_back(space.next_class(c));
    }
    nodes[c].cls = c;
  }
  return CylMap(space, 0, {Word{}}, {0}, std::move(nodes));
}

CylMap CylMap::from_prefix_rules(const SeqSpace& space, const std::vector<std::pair<Word, Word>>& rules) {
  std::size_t depth = 0;
  for (const auto& [u, w] : rules) {
    if (u.size() != w.size()) throw InvalidArgument("prefix rules must preserve length");
    if (u.empty()) throw InvalidArgument("empty prefix rule");
    check_word(space, u);
    check_word(space, w);
    depth = std::max(depth, u.size());
  }
  CylMap id = identity(space);
  CylinderIndexer indexer(space, depth);
  if (indexer.count() > kDefaultBudget) throw BudgetExceeded("rewrite table exceeds the rule budget");
  std::vector<Word> out(indexer.count());
  std::vector<std::size_t> next(indexer.count());
  std::vector<int> hits(indexer.count(), 0);
  const std::size_t base_class = space.level_class(depth);
  for (const auto& [u, w] : rules) {
    std::uint64_t first = prefix_index(space, u, u.size()) * indexer.block_size(u.size());
    for (std::uint64_t i = first; i < first + indexer.block_size(u.size()); ++i) {
      Word v = indexer.word(i);
      Word img = w;
      img.insert(img.end(), v.begin() + static_cast<long>(u.size()), v.end());
      out[i] = std::move(img);
      next[i] = base_class;
      ++hits[i];
    }
  }
  for (std::uint64_t i = 0; i < indexer.count(); ++i) {
    if (hits[i] != 1) {
      throw InvalidArgument(std::string(hits[i] ? "overlapping" : "missing") + " prefix rule at " +
                            format_word(space, indexer.word(i)));
    }
  }
  return CylMap(space, depth, std::move(out), std::move(next), id.nodes_);
}

std::optional<std::size_t> CylMap::resolving_depth() const {
  const auto id = identity_nodes(nodes_);
  std::vector<int> state(nodes_.size(), 0);  // 0 new, 1 active, 2 done
  std::vector<std::size_t> len(nodes_.size(), 0);
  bool cyclic = false;
  std::function<void(std::size_t)> dfs = [&](std::size_t q) {
    if (id[q] || state[q] == 2) return;
    if (state[q] == 1) {
      cyclic = true;
      return;
    }
    state[q] = 1;
    std::size_t best = 0;
    for (auto r : nodes_[q].next) {
      dfs(r);
      if (cyclic) return;
      best = std::max(best, len[r]);
    }
    len[q] = best + 1;
    state[q] = 2;
  };
  std::size_t deepest = 0;
  for (auto q : head_next_) {
    dfs(q);
    if (cyclic) return std::nullopt;
    deepest = std::max(deepest, len[q]);
  }
  return head_depth_ + deepest;
}

bool CylMap::is_identity() const {
  return head_depth_ == 0 && overrides_.empty() && identity_nodes(nodes_)[head_next_[0]];
}

CylMap::Read CylMap::read(const Word& u) const {
  if (u.size() < head_depth_) {
    throw InvalidArgument("cylinder of depth " + std::to_string(u.size()) + " is finer than the rewrite depth " +
                          std::to_string(head_depth_));
  }
  const auto idx = prefix_index(space_, u, head_depth_);
  Read r{head_out_[idx], head_next_[idx]};
  for (std::size_t t = head_depth_; t < u.size(); ++t) {
    const MealyNode& n = nodes_[r.state];
    r.word.push_back(n.out[u[t]]);
    r.state = n.next[u[t]];
  }
  return r;
}

std::vector<std::uint64_t> CylMap::cylinder_permutation(std::size_t depth) const {
  if (depth < head_depth_) throw InvalidArgument("cylinder depth below the rewrite depth");
  const std::uint64_t count = space_.cylinder_count(depth);
  if (count > (std::uint64_t{1} << 26)) throw BudgetExceeded("too many cylinders at depth " + std::to_string(depth));
  std::vector<std::uint64_t> perm(count);
  CylinderIndexer head(space_, head_depth_);
  std::function<void(std::size_t, std::uint64_t, std::uint64_t, std::size_t)> walk =
      [&](std::size_t t, std::uint64_t in, std::uint64_t out, std::size_t q) {
        if (t == depth) {
          perm[in] = out;
          return;
        }
        const MealyNode& n = nodes_[q];
        const std::uint64_t l = space_.alphabet(t);
        for (std::uint32_t a = 0; a < l; ++a) walk(t + 1, in * l + a, out * l + n.out[a], n.next[a]);
      };
  for (std::uint64_t i = 0; i < head_out_.size(); ++i) walk(head_depth_, i, head.index(head_out_[i]), head_next_[i]);
  return perm;
}

Point CylMap::apply_automaton(const Point& x) const {
  const auto idx = point_prefix_index(space_, x, head_depth_);
  Word out = head_out_[idx];
  std::size_t q = head_next_[idx];
  std::size_t t = head_depth_;
  const std::size_t start = std::max(head_depth_, x.head.size());
  auto step = [&] {
    const MealyNode& n = nodes_[q];
    Digit a = x.at(t);
    out.push_back(n.out[a]);
    q = n.next[a];
    ++t;
  };
  while (t < start) step();
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
  for (;;) {
    auto key = std::make_pair(q, (t - x.head.size()) % x.period.size());
    auto [it, fresh] = seen.emplace(key, t);
    if (!fresh) {
      const std::size_t t1 = it->second;
      return Point(Word(out.begin(), out.begin() + static_cast<long>(t1)),
                   Word(out.begin() + static_cast<long>(t1), out.end()));
    }
    step();
  }
}

Point CylMap::apply(const Point& x) const {
  if (auto it = overrides_.find(x); it != overrides_.end()) return it->second;
  return apply_automaton(x);
}

Point CylMap::apply_inverse_full(const Point& y) const { return inverse().apply(y); }

std::vector<std::pair<Word, Word>> CylMap::rules(std::size_t max_depth, bool* complete, std::uint64_t budget) const {
  const auto id = identity_nodes(nodes_);
  std::vector<std::pair<Word, Word>> out;
  bool all = true;
  CylinderIndexer head(space_, head_depth_);
  std::function<void(Word&, Word&, std::size_t)> dfs = [&](Word& u, Word& w, std::size_t q) {
    if (id[q]) {
      out.emplace_back(u, w);
      if (out.size() > budget) throw BudgetExceeded("rule enumeration exceeds the budget");
      return;
    }
    if (u.size() >= max_depth) {
      all = false;
      return;
    }
    const MealyNode& n = nodes_[q];
    for (Digit a = 0; a < n.out.size(); ++a) {
      u.push_back(a);
      w.push_back(n.out[a]);
      dfs(u, w, n.next[a]);
      u.pop_back();
      w.pop_back();
    }
  };
  for (std::uint64_t i = 0; i < head_out_.size(); ++i) {
    Word u = head.word(i), w = head_out_[i];
    dfs(u, w, head_next_[i]);
  }
  if (complete) *complete = all;
  return out;
}

CylMap CylMap::inverse() const {
  CylMap r;
  r.space_ = space_;
  r.head_depth_ = head_depth_;
  CylinderIndexer indexer(space_, head_depth_);
  r.head_out_.resize(head_out_.size());
  r.head_next_.resize(head_next_.size());
  for (std::uint64_t i = 0; i < head_out_.size(); ++i) {
    auto j = indexer.index(head_out_[i]);
    r.head_out_[j] = indexer.word(i);
    r.head_next_[j] = head_next_[i];
  }
  r.nodes_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const MealyNode& n = nodes_[i];
    MealyNode& m = r.nodes_[i];
    m.cls = n.cls;
    m.out.resize(n.out.size());
    m.next.resize(n.next.size());
    for (Digit a = 0; a < n.out.size(); ++a) {
      m.out[n.out[a]] = a;
      m.next[n.out[a]] = n.next[a];
    }
  }
  for (const auto& [x, y] : overrides_) r.overrides_.emplace(y, x);
  r.canonicalize(kDefaultBudget);
  return r;
}

CylMap CylMap::power(long long n) const {
  if (n == 0) return identity(space_);
  CylMap base = n < 0 ? inverse() : *this;
  unsigned long long k = n < 0 ? static_cast<unsigned long long>(-(n + 1)) + 1 : static_cast<unsigned long long>(n);
  std::optional<CylMap> acc;
  while (k) {
    if (k & 1) acc = acc ? compose(*acc, base) : base;
    k >>= 1;
    if (k) base = compose(base, base);
  }
  return *acc;
}

CylMap compose(const CylMap& s, const CylMap& t, std::uint64_t budget) {
  if (!(s.space_ == t.space_)) throw SpaceMismatch(s.space_.to_string() + " vs " + t.space_.to_string());
  const std::size_t depth = std::max(s.head_depth_, t.head_depth_);
  CylMap a = s, b = t;
  a.expand_head_to(depth, budget);
  b.expand_head_to(depth, budget);
  CylinderIndexer indexer(s.space_, depth);

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> ids;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  auto get = [&](std::size_t qs, std::size_t qt) {
    auto [it, fresh] = ids.emplace(std::make_pair(qs, qt), pairs.size());
    if (fresh) {
      pairs.emplace_back(qs, qt);
      if (pairs.size() > budget) throw BudgetExceeded("composition exceeds the state budget");
    }
    return it->second;
  };
  std::vector<Word> out(b.head_out_.size());
  std::vector<std::size_t> next(b.head_out_.size());
  for (std::uint64_t i = 0; i < b.head_out_.size(); ++i) {
    auto j = indexer.index(b.head_out_[i]);
    out[i] = a.head_out_[j];
    next[i] = get(a.head_next_[j], b.head_next_[i]);
  }
  std::vector<MealyNode> nodes;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [qs, qt] = pairs[i];
    const MealyNode& ns = a.nodes_[qs];
    const MealyNode& nt = b.nodes_[qt];
    MealyNode n;
    n.cls = nt.cls;
    for (Digit d = 0; d < nt.out.size(); ++d) {
      Digit mid = nt.out[d];
      n.out.push_back(ns.out[mid]);
      n.next.push_back(get(ns.next[mid], nt.next[d]));
    }
    nodes.push_back(std::move(n));
  }

  std::map<Point, Point> overrides;
  if (s.has_overrides() || t.has_overrides()) {
    std::set<Point> candidates;
    for (const auto& [x, y] : t.overrides_) candidates.insert(x);
    if (s.has_overrides()) {
      CylMap tinv = t.inverse();
      for (const auto& [x, y] : s.overrides_) candidates.insert(tinv.apply(x));
    }
    for (const auto& x : candidates) overrides.emplace(x, s.apply(t.apply(x)));
  }
  return CylMap(s.space_, depth, std::move(out), std::move(next), std::move(nodes), std::move(overrides), budget);
}

CylMap piecewise_power(const CylMap& t, const std::vector<std::pair<Word, long long>>& pieces, std::uint64_t budget) {
  if (t.has_overrides()) throw InvalidArgument("piecewise powers need a map without exceptional points");
  if (pieces.empty()) throw InvalidArgument("no pieces");
  const SeqSpace& space = t.space();
  std::map<long long, CylMap> powers;
  std::size_t depth = 0;
  for (const auto& [u, n] : pieces) {
    check_word(space, u);
    depth = std::max(depth, u.size());
    if (!powers.count(n)) powers.emplace(n, t.power(n));
  }
  std::map<long long, std::size_t> offset;
  std::vector<MealyNode> nodes;
  for (const auto& [n, p] : powers) {
    depth = std::max(depth, p.head_depth());
    offset[n] = nodes.size();
    for (MealyNode node : p.nodes()) {
      for (auto& q : node.next) q += offset[n];
      nodes.push_back(std::move(node));
    }
  }
  CylinderIndexer indexer(space, depth);
  if (indexer.count() > budget) throw BudgetExceeded("piecewise map exceeds the rule budget");
  std::vector<long long> owner(indexer.count(), 0);
  std::vector<bool> covered(indexer.count(), false);
  for (const auto& [u, n] : pieces) {
    std::uint64_t first = prefix_index(space, u, u.size()) * indexer.block_size(u.size());
    for (std::uint64_t i = first; i < first + indexer.block_size(u.size()); ++i) {
      if (covered[i]) throw InvalidArgument("pieces overlap at " + format_word(space, indexer.word(i)));
      covered[i] = true;
      owner[i] = n;
    }
  }
  std::vector<Word> out(indexer.count());
  std::vector<std::size_t> next(indexer.count());
  for (std::uint64_t i = 0; i < indexer.count(); ++i) {
    if (!covered[i]) throw InvalidArgument("pieces do not cover " + format_word(space, indexer.word(i)));
    auto r = powers.at(owner[i]).read(indexer.word(i));
    out[i] = std::move(r.word);
    next[i] = r.state + offset[owner[i]];
  }
  return CylMap(space, depth, std::move(out), std::move(next), std::move(nodes), {}, budget);
}

// ---------------------------------------------------------------------------
// Text format

namespace {

struct RuleLine {
  detail::Token u, w;
  std::string target;  // empty: identity tail
  detail::Token at;
};

}  // namespace

CylMap CylMap::parse(std::string_view text) {
  using detail::Token;
  auto lines = detail::tokenize_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "empty map description");
  if (lines[0].size() != 2 || lines[0][0].text != "cylmap" || lines[0][1].text != "1") {
    throw ParseError(lines[0][0].line, lines[0][0].column, "expected header 'cylmap 1'");
  }
  if (lines.size() < 2 || lines[1][0].text != "space" || lines[1].size() != 2) {
    throw ParseError(lines.size() < 2 ? lines[0][0].line + 1 : lines[1][0].line, 1, "expected 'space <alphabet sizes>'");
  }
  SeqSpace space;
  try {
    space = SeqSpace::parse(lines[1][1].text);
  } catch (const InvalidArgument& e) {
    throw ParseError(lines[1][1].line, lines[1][1].column, e.what());
  }

  std::map<std::string, std::vector<RuleLine>> states;
  std::map<std::string, Token> declared;
  std::vector<std::pair<Token, Token>> points;
  std::string current = "main";
  states["main"];
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (line[0].text == "state") {
      if (line.size() != 2) throw ParseError(line[0].line, line[0].column, "expected 'state <name>'");
      current = line[1].text;
      if (declared.count(current) || (current == "main" && !states["main"].empty())) {
        throw ParseError(line[1].line, line[1].column, "state '" + current + "' declared twice");
      }
      declared.emplace(current, line[1]);
      states[current];
    } else if (line[0].text == "point") {
      if (line.size() != 4 || line[2].text != "->") {
        throw ParseError(line[0].line, line[0].column, "expected 'point HEAD(PERIOD) -> HEAD(PERIOD)'");
      }
      points.emplace_back(line[1], line[3]);
    } else {
      if ((line.size() != 3 && line.size() != 4) || line[1].text != "->") {
        throw ParseError(line[0].line, line[0].column, "expected a rule 'u -> w [@state]'");
      }
      RuleLine r{line[0], line[2], "", line[0]};
      if (line.size() == 4) {
        if (line[3].text.size() < 2 || line[3].text[0] != '@') {
          throw ParseError(line[3].line, line[3].column, "expected '@<state>'");
        }
        r.target = line[3].text.substr(1);
        if (!states.count(r.target) && r.target != "main") {
          // forward references are resolved below
        }
      }
      states[current].push_back(std::move(r));
    }
  }

  // Level classes: main starts at level 0; a target starts after its rule.
  std::map<std::string, std::size_t> cls{{"main", 0}};
  std::map<std::string, std::vector<std::pair<Word, Word>>> words;
  std::deque<std::string> queue{"main"};
  std::set<std::string> referenced;
  while (!queue.empty()) {
    std::string name = queue.front();
    queue.pop_front();
    auto& list = words[name];
    for (const auto& r : states[name]) {
      Word u, w;
      try {
        u = parse_word(space, r.u.text, cls[name]);
      } catch (const InvalidArgument& e) {
        throw ParseError(r.u.line, r.u.column, e.what());
      }
      try {
        w = parse_word(space, r.w.text, cls[name]);
      } catch (const InvalidArgument& e) {
        throw ParseError(r.w.line, r.w.column, e.what());
      }
      if (u.empty()) throw ParseError(r.u.line, r.u.column, "empty prefix");
      if (u.size() != w.size()) throw ParseError(r.w.line, r.w.column, "rule changes the prefix length");
      list.emplace_back(u, w);
      if (r.target.empty()) continue;
      if (!states.count(r.target)) throw ParseError(r.at.line, r.at.column, "undefined state '" + r.target + "'");
      referenced.insert(r.target);
      std::size_t c = cls[name];
      for (std::size_t k = 0; k < u.size(); ++k) c = space.next_class(c);
      auto [it, fresh] = cls.emplace(r.target, c);
      if (fresh) {
        queue.push_back(r.target);
      } else if (it->second != c) {
        throw ParseError(r.at.line, r.at.column, "state '" + r.target + "' is used at two different level classes");
      }
    }
  }
  for (const auto& [name, tok] : declared) {
    if (!cls.count(name)) throw ParseError(tok.line, tok.column, "state '" + name + "' is never used");
  }
  if (states["main"].empty()) throw ParseError(lines[1][0].line + 1, 1, "map has no rules");

  std::vector<MealyNode> nodes;
  std::map<std::size_t, std::size_t> identity_of;
  std::function<std::size_t(std::size_t)> identity_node = [&](std::size_t c) -> std::size_t {
    if (auto it = identity_of.find(c); it != identity_of.end()) return it->second;
    std::size_t id = nodes.size();
    identity_of[c] = id;
    nodes.push_back(MealyNode{c, {}, {}});
    std::size_t nxt = identity_node(space.next_class(c));
    for (Digit a = 0; a < space.class_alphabet(c); ++a) {
      nodes[id].out.push_back(a);
      nodes[id].next.push_back(nxt);
    }
    return id;
  };

  // Causal states become tries; targets are patched afterwards.
  std::map<std::string, std::size_t> root;
  std::vector<std::tuple<std::size_t, Digit, std::string>> patches;
  auto build_causal = [&](const std::string& name) {
    const auto& rl = states[name];
    const auto& wl = words[name];
    std::vector<std::size_t> all(wl.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::function<std::size_t(std::size_t, std::size_t, const std::vector<std::size_t>&)> build =
        [&](std::size_t k, std::size_t c, const std::vector<std::size_t>& subset) -> std::size_t {
      std::size_t id = nodes.size();
      nodes.push_back(MealyNode{c, {}, {}});
      const std::uint32_t l = space.class_alphabet(c);
      std::vector<Digit> out(l);
      std::vector<std::size_t> next(l, 0);
      for (Digit a = 0; a < l; ++a) {
        std::vector<std::size_t> sub;
        for (auto i : subset)
          if (wl[i].first[k] == a) sub.push_back(i);
        const Token& where = rl[subset.front()].u;
        if (sub.empty()) {
          throw ParseError(where.line, where.column, "state '" + name + "' has no rule for a prefix ending in digit " +
                                                         std::to_string(a) + " at position " + std::to_string(k));
        }
        for (auto i : sub) {
          if (wl[i].second[k] != wl[sub.front()].second[k]) {
            throw ParseError(rl[i].w.line, rl[i].w.column,
                             "state '" + name + "' must be causal: output digit " + std::to_string(k) +
                                 " depends on later input");
          }
        }
        out[a] = wl[sub.front()].second[k];
        auto leaf = std::find_if(sub.begin(), sub.end(), [&](std::size_t i) { return wl[i].first.size() == k + 1; });
        if (leaf != sub.end()) {
          if (sub.size() != 1) throw ParseError(rl[*leaf].u.line, rl[*leaf].u.column, "rules are not prefix-free");
          const auto& target = rl[*leaf].target;
          if (target.empty()) {
            next[a] = identity_node(space.next_class(c));
          } else {
            patches.emplace_back(id, a, target);
          }
        } else {
          next[a] = build(k + 1, space.next_class(c), sub);
        }
      }
      if (!is_permutation_of(out, l)) {
        const Token& where = rl[subset.front()].w;
        throw ParseError(where.line, where.column, "state '" + name + "' is not a bijection");
      }
      nodes[id].out = std::move(out);
      nodes[id].next = std::move(next);
      return id;
    };
    root[name] = build(0, cls[name], all);
  };
  for (const auto& [name, c] : cls) {
    if (name == "main" && !referenced.count("main")) continue;
    build_causal(name);
  }
  for (const auto& [id, a, target] : patches) nodes[id].next[a] = root.at(target);

  std::size_t depth = 0;
  std::vector<Word> head_out;
  std::vector<std::size_t> head_next;
  const Token& main_at = states["main"].front().u;
  if (referenced.count("main")) {
    head_out = {Word{}};
    head_next = {root["main"]};
  } else {
    const auto& rl = states["main"];
    const auto& wl = words["main"];
    for (const auto& [u, w] : wl) depth = std::max(depth, u.size());
    CylinderIndexer indexer(space, depth);
    if (indexer.count() > kDefaultBudget) throw ParseError(main_at.line, main_at.column, "rewrite table too large");
    head_out.resize(indexer.count());
    head_next.resize(indexer.count());
    std::vector<int> hits(indexer.count(), 0);
    for (std::size_t r = 0; r < wl.size(); ++r) {
      const auto& [u, w] = wl[r];
      std::size_t q = rl[r].target.empty() ? identity_node(space.level_class(u.size())) : root.at(rl[r].target);
      std::uint64_t first = prefix_index(space, u, u.size()) * indexer.block_size(u.size());
      for (std::uint64_t i = first; i < first + indexer.block_size(u.size()); ++i) {
        if (hits[i]++) throw ParseError(rl[r].u.line, rl[r].u.column, "rules are not prefix-free");
        Word v = indexer.word(i);
        Word img = w;
        std::size_t s = q;
        for (std::size_t t = u.size(); t < depth; ++t) {
          img.push_back(nodes[s].out[v[t]]);
          s = nodes[s].next[v[t]];
        }
        head_out[i] = std::move(img);
        head_next[i] = s;
      }
    }
    for (std::uint64_t i = 0; i < indexer.count(); ++i) {
      if (!hits[i]) {
        throw ParseError(main_at.line, main_at.column,
                         "rules do not cover the prefix " + format_word(space, indexer.word(i)));
      }
    }
  }
  if (nodes.empty()) identity_node(0);

  std::map<Point, Point> overrides;
  for (const auto& [x, y] : points) {
    Point px, py;
    try {
      px = parse_point(space, x.text);
    } catch (const InvalidArgument& e) {
      throw ParseError(x.line, x.column, e.what());
    }
    try {
      py = parse_point(space, y.text);
    } catch (const InvalidArgument& e) {
      throw ParseError(y.line, y.column, e.what());
    }
    if (!overrides.emplace(px, py).second) throw ParseError(x.line, x.column, "exceptional point listed twice");
  }
  try {
    return CylMap(space, depth, std::move(head_out), std::move(head_next), std::move(nodes), std::move(overrides));
  } catch (const InvalidArgument& e) {
    const Token& where = points.empty() ? main_at : points.front().first;
    throw ParseError(where.line, where.column, e.what());
  }
}

std::string CylMap::to_text() const {
  const auto id = identity_nodes(nodes_);
  std::vector<std::size_t> indegree(nodes_.size(), 0);
  for (auto q : head_next_) ++indegree[q];
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (id[i]) continue;
    for (auto q : nodes_[i].next) ++indegree[q];
  }
  std::map<std::size_t, std::string> names;
  std::vector<std::size_t> sections;
  const bool causal_main = head_depth_ == 0 && !id[head_next_[0]];
  if (causal_main) names[head_next_[0]] = "main";

  auto name_of = [&](std::size_t q) -> const std::string* {
    if (id[q]) return nullptr;
    if (auto it = names.find(q); it != names.end()) return &it->second;
    if (indegree[q] < 2) return nullptr;
    std::string n = "s" + std::to_string(sections.size() + 1);
    sections.push_back(q);
    return &(names[q] = n);
  };

  std::ostringstream body;
  std::function<void(Word&, Word&, std::size_t, std::size_t)> emit = [&](Word& u, Word& w, std::size_t q,
                                                                         std::size_t start) {
    if (id[q]) {
      body << format_word(space_, u) << " -> " << format_word(space_, w) << "\n";
      return;
    }
    if (const std::string* n = name_of(q)) {
      body << format_word(space_, u) << " -> " << format_word(space_, w) << " @" << *n << "\n";
      return;
    }
    const MealyNode& node = nodes_[q];
    for (Digit a = 0; a < node.out.size(); ++a) {
      u.push_back(a);
      w.push_back(node.out[a]);
      emit(u, w, node.next[a], start);
      u.pop_back();
      w.pop_back();
    }
  };
  auto emit_state = [&](std::size_t q) {
    const MealyNode& node = nodes_[q];
    for (Digit a = 0; a < node.out.size(); ++a) {
      Word u{a}, w{node.out[a]};
      emit(u, w, node.next[a], 0);
    }
  };

  if (causal_main) {
    emit_state(head_next_[0]);
  } else if (head_depth_ == 0) {
    for (Digit a = 0; a < space_.alphabet(0); ++a) body << format_word(space_, {a}) << " -> " << format_word(space_, {a}) << "\n";
  } else {
    CylinderIndexer head(space_, head_depth_);
    for (std::uint64_t i = 0; i < head_out_.size(); ++i) {
      Word u = head.word(i), w = head_out_[i];
      emit(u, w, head_next_[i], 0);
    }
  }
  for (std::size_t k = 0; k < sections.size(); ++k) {
    body << "state " << names[sections[k]] << "\n";
    emit_state(sections[k]);
  }
  for (const auto& [x, y] : overrides_) body << "point " << format_point(space_, x) << " -> " << format_point(space_, y) << "\n";

  return "cylmap 1\nspace " + space_.to_string() + "\n" + body.str();
}

}  // namespace bvdyn
