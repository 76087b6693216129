#include "bvdyn/vershik.hpp"

#include <algorithm>

#include "bvdyn/error.hpp"
#include "text_util.hpp"

namespace bvdyn {

std::vector<BigInt> heights(const Diagram& d, std::size_t n) {
  std::vector<BigInt> h(d.vertex_count(0), BigInt(1));
  for (std::size_t k = 1; k <= n; ++k) {
    const Level& l = d.level(k);
    std::vector<BigInt> next(l.vertices, BigInt(0));
    for (const auto& e : l.edges) next[e.range] += h[e.source];
    h = std::move(next);
  }
  return h;
}

BigInt height(const Diagram& d, std::size_t n, std::size_t v) {
  if (v >= d.vertex_count(n)) throw InvalidArgument("vertex " + std::to_string(v) + " not found on level " + std::to_string(n));
  return heights(d, n)[v];
}

std::size_t terminal_vertex(const Diagram& d, const PathPrefix& p) {
  std::size_t v = 0;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const Level& l = d.level(i + 1);
    if (p.edges[i] >= l.edges.size()) throw InvalidArgument("edge index out of range on level " + std::to_string(i + 1));
    const Edge& e = l.edges[p.edges[i]];
    if (e.source != v) throw InvalidArgument("path is not connected at level " + std::to_string(i + 1));
    v = e.range;
  }
  return v;
}

BigInt rank(const Diagram& d, const PathPrefix& p) {
  terminal_vertex(d, p);
  BigInt r = 0;
  std::vector<BigInt> h(d.vertex_count(0), BigInt(1));
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const std::size_t n = i + 1;
    const Level& l = d.level(n);
    const Edge& e = l.edges[p.edges[i]];
    for (auto j : d.incoming(n, e.range)) {
      if (l.edges[j].rank < e.rank) r += h[l.edges[j].source];
    }
    std::vector<BigInt> next(l.vertices, BigInt(0));
    for (const auto& f : l.edges) next[f.range] += h[f.source];
    h = std::move(next);
  }
  return r;
}

PathPrefix unrank(const Diagram& d, std::size_t n, std::size_t v, const BigInt& i) {
  std::vector<std::vector<BigInt>> h;
  for (std::size_t k = 0; k <= n; ++k) h.push_back(heights(d, k));
  if (v >= h[n].size()) throw InvalidArgument("vertex not found");
  if (i < 0 || i >= h[n][v]) throw InvalidArgument("index " + i.str() + " out of range [0, " + h[n][v].str() + ")");
  PathPrefix p;
  p.edges.resize(n);
  BigInt rest = i;
  for (std::size_t k = n; k >= 1; --k) {
    for (auto j : d.incoming(k, v)) {
      const Edge& e = d.level(k).edges[j];
      if (rest < h[k - 1][e.source]) {
        p.edges[k - 1] = j;
        v = e.source;
        break;
      }
      rest -= h[k - 1][e.source];
    }
  }
  return p;
}

std::vector<std::size_t> labels(const Diagram& d, const PathPrefix& p) {
  terminal_vertex(d, p);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.edges.size(); ++i) out.push_back(d.level(i + 1).edges[p.edges[i]].rank);
  return out;
}

std::vector<std::size_t> vertices(const Diagram& d, const PathPrefix& p) {
  terminal_vertex(d, p);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.edges.size(); ++i) out.push_back(d.level(i + 1).edges[p.edges[i]].range);
  return out;
}

std::string format_path(const Diagram& d, const PathPrefix& p, bool with_vertices) {
  auto join = [](const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  std::string s = join(labels(d, p));
  if (with_vertices) s += "@" + join(vertices(d, p));
  return s;
}

PathPrefix parse_path(const Diagram& d, std::string_view text) {
  std::string s(text);
  std::string lab = s, ver;
  bool has_vertices = false;
  if (auto at = s.find('@'); at != std::string::npos) {
    lab = s.substr(0, at);
    ver = s.substr(at + 1);
    has_vertices = true;
  }
  auto numbers = [](const std::string& t) {
    std::vector<std::size_t> out;
    if (t.empty()) return out;
    for (const auto& x : detail::split(t, ',')) {
      if (x.empty() || !std::all_of(x.begin(), x.end(), [](unsigned char c) { return std::isdigit(c); }) || x.size() > 9) {
        throw InvalidArgument("malformed path '" + t + "'");
      }
      out.push_back(std::stoul(x));
    }
    return out;
  };
  auto ls = numbers(lab);
  auto vs = numbers(ver);
  if (has_vertices && vs.size() != ls.size()) throw InvalidArgument("path needs one vertex per label");
  PathPrefix p;
  std::size_t v = 0;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const std::size_t n = i + 1;
    const Level& l = d.level(n);
    std::vector<std::size_t> match;
    for (std::size_t j = 0; j < l.edges.size(); ++j) {
      const Edge& e = l.edges[j];
      if (e.source == v && e.rank == ls[i] && (!has_vertices || e.range == vs[i])) match.push_back(j);
    }
    if (match.empty()) throw InvalidArgument("no edge with label " + std::to_string(ls[i]) + " on level " + std::to_string(n));
    if (match.size() > 1) throw InvalidArgument("labels are ambiguous on level " + std::to_string(n) + "; add '@vertices'");
    p.edges.push_back(match[0]);
    v = l.edges[match[0]].range;
  }
  return p;
}

LazyPath::LazyPath(const Diagram& d, PathPrefix prefix, Generator tail, std::size_t budget)
    : diagram_(&d), prefix_(std::move(prefix)), tail_(std::move(tail)), budget_(budget) {
  terminal_vertex(d, prefix_);
}

PathPrefix LazyPath::materialize(std::size_t n) const {
  PathPrefix p;
  p.edges.assign(prefix_.edges.begin(), prefix_.edges.begin() + static_cast<long>(std::min(n, prefix_.edges.size())));
  std::size_t v = terminal_vertex(*diagram_, p);
  while (p.edges.size() < n) {
    const std::size_t level = p.edges.size() + 1;
    std::size_t e = tail_(level, v);
    const Level& l = diagram_->level(level);
    if (e >= l.edges.size() || l.edges[e].source != v) {
      throw InvalidArgument("path generator produced a non-adjacent edge on level " + std::to_string(level));
    }
    p.edges.push_back(e);
    v = l.edges[e].range;
  }
  return p;
}

LazyPath path_from_labels(const Diagram& d, std::function<std::size_t(std::size_t)> label, std::size_t budget) {
  auto gen = [&d, label](std::size_t level, std::size_t from) -> std::size_t {
    const Level& l = d.level(level);
    for (std::size_t j = 0; j < l.edges.size(); ++j)
      if (l.edges[j].source == from && l.edges[j].rank == label(level)) return j;
    throw InvalidArgument("no edge with label " + std::to_string(label(level)) + " on level " + std::to_string(level));
  };
  return LazyPath(d, PathPrefix{}, gen, budget);
}

namespace {

// Finds the first level whose edge is not extreme; returns 0 if none within budget.
std::size_t first_non_extreme(const LazyPath& y, bool maximal, PathPrefix& p) {
  const Diagram& d = y.diagram();
  p = y.materialize(y.budget());
  for (std::size_t k = 1; k <= p.edges.size(); ++k) {
    const Edge& e = d.level(k).edges[p.edges[k - 1]];
    auto inc = d.incoming(k, e.range);
    const std::size_t extreme = maximal ? inc.back() : inc.front();
    if (p.edges[k - 1] != extreme) return k;
  }
  return 0;
}

LazyPath step(const LazyPath& y, bool forward) {
  const Diagram& d = y.diagram();
  PathPrefix p;
  const std::size_t k = first_non_extreme(y, forward, p);
  if (k == 0) {
    throw BudgetExceeded(std::string("every edge up to level ") + std::to_string(y.budget()) + " is " +
                         (forward ? "maximal" : "minimal"));
  }
  const Edge& e = d.level(k).edges[p.edges[k - 1]];
  auto inc = d.incoming(k, e.range);
  auto pos = std::find(inc.begin(), inc.end(), p.edges[k - 1]) - inc.begin();
  const std::size_t f = inc[static_cast<std::size_t>(pos + (forward ? 1 : -1))];
  const std::size_t src = d.level(k).edges[f].source;
  PathPrefix q;
  if (k > 1) {
    BigInt h = height(d, k - 1, src);
    q = unrank(d, k - 1, src, forward ? BigInt(0) : BigInt(h - 1));
  }
  q.edges.push_back(f);
  const auto& old = y.prefix().edges;
  for (std::size_t i = k; i < old.size(); ++i) q.edges.push_back(old[i]);
  return y.with_prefix(std::move(q));
}

}  // namespace

static std::optional<PathPrefix> step_prefix(const Diagram& d, const PathPrefix& p, bool forward) {
  terminal_vertex(d, p);
  for (std::size_t k = 1; k <= p.edges.size(); ++k) {
    const Edge& e = d.level(k).edges[p.edges[k - 1]];
    auto inc = d.incoming(k, e.range);
    auto pos = std::find(inc.begin(), inc.end(), p.edges[k - 1]) - inc.begin();
    if (forward ? static_cast<std::size_t>(pos) + 1 == inc.size() : pos == 0) continue;
    const std::size_t f = inc[static_cast<std::size_t>(pos + (forward ? 1 : -1))];
    const std::size_t src = d.level(k).edges[f].source;
    PathPrefix q;
    if (k > 1) q = unrank(d, k - 1, src, forward ? BigInt(0) : BigInt(height(d, k - 1, src) - 1));
    q.edges.push_back(f);
    for (std::size_t i = k; i < p.edges.size(); ++i) q.edges.push_back(p.edges[i]);
    return q;
  }
  return std::nullopt;
}

LazyPath successor(const LazyPath& y) { return step(y, true); }
LazyPath predecessor(const LazyPath& y) { return step(y, false); }

std::optional<PathPrefix> successor(const Diagram& d, const PathPrefix& p) { return step_prefix(d, p, true); }
std::optional<PathPrefix> predecessor(const Diagram& d, const PathPrefix& p) { return step_prefix(d, p, false); }

std::size_t successor_level(const LazyPath& y) {
  PathPrefix p;
  std::size_t k = first_non_extreme(y, true, p);
  if (!k) throw BudgetExceeded("no non-maximal edge within the budget");
  return k;
}

std::size_t predecessor_level(const LazyPath& y) {
  PathPrefix p;
  std::size_t k = first_non_extreme(y, false, p);
  if (!k) throw BudgetExceeded("no non-minimal edge within the budget");
  return k;
}

PathCoord coords(const Diagram& d, const PathPrefix& p) {
  terminal_vertex(d, p);
  PathCoord c;
  BigInt r = 0;
  std::vector<BigInt> h(d.vertex_count(0), BigInt(1));
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const std::size_t n = i + 1;
    const Level& l = d.level(n);
    const Edge& e = l.edges[p.edges[i]];
    for (auto j : d.incoming(n, e.range))
      if (l.edges[j].rank < e.rank) r += h[l.edges[j].source];
    c.index.push_back(r);
    c.vertex.push_back(e.range);
    std::vector<BigInt> next(l.vertices, BigInt(0));
    for (const auto& f : l.edges) next[f.range] += h[f.source];
    h = std::move(next);
  }
  return c;
}

PathCoord coords(const LazyPath& y, std::size_t n) {
  if (n > y.budget() && n > y.prefix().edges.size()) throw BudgetExceeded("coordinates requested beyond the path budget");
  return coords(y.diagram(), y.materialize(n));
}

}  // namespace bvdyn
