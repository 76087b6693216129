#include "bvdyn/diagram.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>
#include <sstream>

#include "bvdyn/error.hpp"
#include "text_util.hpp"

namespace bvdyn {

namespace {

void sort_edges(Level& level) {
  std::sort(level.edges.begin(), level.edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.range, a.rank, a.source) < std::tie(b.range, b.rank, b.source);
  });
}

void check_refs(const Level& level, std::size_t below, const std::string& where) {
  for (const auto& e : level.edges) {
    if (e.source >= below || e.range >= level.vertices) {
      throw InvalidArgument(where + ": edge refers to a vertex that does not exist");
    }
  }
}

}  // namespace

Diagram::Diagram(std::vector<Level> levels, std::optional<Level> stationary_tail)
    : levels_(std::move(levels)), tail_(std::move(stationary_tail)) {
  if (levels_.empty()) throw InvalidArgument("a diagram needs a root level");
  if (!levels_[0].edges.empty()) throw InvalidArgument("the root level has no incoming edges");
  for (std::size_t n = 1; n < levels_.size(); ++n) {
    check_refs(levels_[n], levels_[n - 1].vertices, "level " + std::to_string(n));
    sort_edges(levels_[n]);
  }
  if (tail_) {
    if (tail_->vertices != levels_.back().vertices) {
      throw InvalidArgument("the repeating level must have as many vertices as the last explicit level");
    }
    check_refs(*tail_, tail_->vertices, "repeating level");
    sort_edges(*tail_);
  }
}

const Level& Diagram::level(std::size_t n) const {
  if (n < levels_.size()) return levels_[n];
  if (tail_) return *tail_;
  throw InvalidArgument("level " + std::to_string(n) + " is beyond the truncation " + std::to_string(truncation()));
}

std::vector<std::size_t> Diagram::incoming(std::size_t n, std::size_t v) const {
  const Level& l = level(n);
  std::vector<std::size_t> out;
  auto it = std::lower_bound(l.edges.begin(), l.edges.end(), v, [](const Edge& e, std::size_t x) { return e.range < x; });
  for (; it != l.edges.end() && it->range == v; ++it) out.push_back(static_cast<std::size_t>(it - l.edges.begin()));
  return out;
}

std::optional<std::size_t> Diagram::edge_with_rank(std::size_t n, std::size_t v, std::size_t rank) const {
  for (auto i : incoming(n, v))
    if (level(n).edges[i].rank == rank) return i;
  return std::nullopt;
}

Diagram Diagram::truncated(std::size_t n) const {
  std::vector<Level> levels;
  for (std::size_t i = 0; i <= n; ++i) levels.push_back(level(i));
  return Diagram(std::move(levels));
}

std::string Diagram::to_text() const {
  std::ostringstream out;
  out << "bbd 1\n";
  for (std::size_t n = 0; n < levels_.size(); ++n) {
    out << "level " << n << " vertices " << levels_[n].vertices << "\n";
    for (const auto& e : levels_[n].edges) {
      out << "edge " << n << " L" << n - 1 << "." << e.source << " L" << n << "." << e.range << " " << e.rank << "\n";
    }
  }
  if (tail_) {
    const std::size_t k = tail_->vertices;
    std::string rows, order;
    for (std::size_t v = 0; v < k; ++v) {
      std::vector<std::size_t> count(k, 0);
      std::string ord;
      for (const auto& e : tail_->edges) {
        if (e.range != v) continue;
        ++count[e.source];
        if (!ord.empty()) ord += ',';
        ord += std::to_string(e.source);
      }
      if (v) {
        rows += ';';
        order += ';';
      }
      for (std::size_t s = 0; s < k; ++s) rows += (s ? "," : "") + std::to_string(count[s]);
      order += ord.empty() ? "-" : ord;
    }
    out << "generator stationary " << k << " rows " << rows << " order " << order << "\n";
  }
  return out.str();
}

namespace {

std::size_t parse_count(const detail::Token& t, const char* what) {
  const auto& s = t.text;
  if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw ParseError(t.line, t.column, std::string("expected ") + what + ", got '" + s + "'");
  }
  return std::stoul(s);
}

}  // namespace

Diagram Diagram::parse(std::string_view text) {
  using detail::Token;
  auto lines = detail::tokenize_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "empty diagram file");
  if (lines[0].size() != 2 || lines[0][0].text != "bbd" || lines[0][1].text != "1") {
    throw ParseError(lines[0][0].line, lines[0][0].column, "expected header 'bbd 1'");
  }
  std::vector<Level> levels;
  std::optional<Level> tail;
  std::vector<std::set<std::pair<std::size_t, std::size_t>>> used_ranks;

  auto vertex_ref = [&](const Token& t, std::size_t level) -> std::size_t {
    std::string s = t.text;
    std::size_t index;
    if (s.size() > 1 && s[0] == 'L') {
      auto dot = s.find('.');
      if (dot == std::string::npos) throw ParseError(t.line, t.column, "undeclared vertex '" + s + "'");
      Token lv{s.substr(1, dot - 1), t.line, t.column + 1};
      Token ix{s.substr(dot + 1), t.line, t.column + dot + 1};
      std::size_t m;
      try {
        m = parse_count(lv, "a level");
        index = parse_count(ix, "a vertex index");
      } catch (const ParseError&) {
        throw ParseError(t.line, t.column, "undeclared vertex '" + s + "'");
      }
      if (m != level) {
        throw ParseError(t.line, t.column,
                         "vertex '" + s + "' is not on level " + std::to_string(level));
      }
    } else if (!s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }) &&
               s.size() <= 9) {
      index = std::stoul(s);
    } else {
      throw ParseError(t.line, t.column, "undeclared vertex '" + s + "'");
    }
    if (index >= levels[level].vertices) {
      throw ParseError(t.line, t.column, "undeclared vertex '" + s + "' on level " + std::to_string(level));
    }
    return index;
  };

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const Token& head = line[0];
    if (tail) throw ParseError(head.line, head.column, "nothing may follow the generator line");
    if (head.text == "level") {
      if (line.size() != 4 || line[2].text != "vertices") {
        throw ParseError(head.line, head.column, "expected 'level <n> vertices <k>'");
      }
      std::size_t n = parse_count(line[1], "a level number");
      std::size_t k = parse_count(line[3], "a vertex count");
      if (n != levels.size()) {
        throw ParseError(line[1].line, line[1].column,
                         "expected level " + std::to_string(levels.size()) + ", got " + std::to_string(n));
      }
      if (k == 0) throw ParseError(line[3].line, line[3].column, "a level needs at least one vertex");
      levels.push_back(Level{k, {}});
      used_ranks.emplace_back();
    } else if (head.text == "edge") {
      if (line.size() != 5) throw ParseError(head.line, head.column, "expected 'edge <n> <source> <range> <rank>'");
      std::size_t n = parse_count(line[1], "a level number");
      if (n == 0 || n >= levels.size()) {
        throw ParseError(line[1].line, line[1].column, "edge on undeclared level " + std::to_string(n));
      }
      Edge e;
      e.source = vertex_ref(line[2], n - 1);
      e.range = vertex_ref(line[3], n);
      e.rank = parse_count(line[4], "an order rank");
      if (!used_ranks[n].emplace(e.range, e.rank).second) {
        throw ParseError(line[4].line, line[4].column,
                         "duplicate rank " + std::to_string(e.rank) + " at vertex L" + std::to_string(n) + "." +
                             std::to_string(e.range));
      }
      levels[n].edges.push_back(e);
    } else if (head.text == "generator") {
      if (line.size() != 7 || line[1].text != "stationary" || line[3].text != "rows" || line[5].text != "order") {
        throw ParseError(head.line, head.column, "expected 'generator stationary <k> rows <rows> order <order>'");
      }
      if (levels.empty()) throw ParseError(head.line, head.column, "generator before any level");
      std::size_t k = parse_count(line[2], "a vertex count");
      if (k != levels.back().vertices) {
        throw ParseError(line[2].line, line[2].column,
                         "generator has " + std::to_string(k) + " vertices but the last level has " +
                             std::to_string(levels.back().vertices));
      }
      auto row_texts = detail::split(line[4].text, ';');
      auto order_texts = detail::split(line[6].text, ';');
      if (row_texts.size() != k) throw ParseError(line[4].line, line[4].column, "expected " + std::to_string(k) + " rows");
      if (order_texts.size() != k) {
        throw ParseError(line[6].line, line[6].column, "expected " + std::to_string(k) + " order lists");
      }
      Level t{k, {}};
      for (std::size_t v = 0; v < k; ++v) {
        auto counts = detail::split(row_texts[v], ',');
        if (counts.size() != k) {
          throw ParseError(line[4].line, line[4].column, "row " + std::to_string(v) + " needs " + std::to_string(k) + " entries");
        }
        std::vector<std::size_t> expected(k);
        for (std::size_t s = 0; s < k; ++s) expected[s] = parse_count(Token{counts[s], line[4].line, line[4].column}, "an edge count");
        std::vector<std::size_t> seen(k, 0);
        if (order_texts[v] != "-") {
          std::size_t rank = 0;
          for (const auto& src : detail::split(order_texts[v], ',')) {
            std::size_t s = parse_count(Token{src, line[6].line, line[6].column}, "a source index");
            if (s >= k) throw ParseError(line[6].line, line[6].column, "undeclared vertex '" + src + "' in order");
            ++seen[s];
            t.edges.push_back(Edge{s, v, rank++});
          }
        }
        if (seen != expected) {
          throw ParseError(line[6].line, line[6].column, "order of row " + std::to_string(v) + " disagrees with its counts");
        }
      }
      tail = std::move(t);
    } else {
      throw ParseError(head.line, head.column, "unknown statement '" + head.text + "'");
    }
  }
  if (levels.empty()) throw ParseError(lines[0][0].line + 1, 1, "missing 'level 0 vertices 1'");
  return Diagram(std::move(levels), std::move(tail));
}

std::string to_string(DefectKind kind) {
  switch (kind) {
    case DefectKind::RootNotSingleton: return "root-not-singleton";
    case DefectKind::MissingIncoming: return "missing-incoming";
    case DefectKind::MissingOutgoing: return "missing-outgoing";
    case DefectKind::DuplicateRank: return "duplicate-rank";
    case DefectKind::RankGap: return "rank-gap";
  }
  return "unknown";
}

std::vector<Defect> validate(const Diagram& d, std::size_t up_to_level) {
  if (!d.has_level(up_to_level)) {
    throw InvalidArgument("level " + std::to_string(up_to_level) + " is beyond the truncation");
  }
  std::vector<Defect> report;
  if (d.vertex_count(0) != 1) {
    report.push_back({DefectKind::RootNotSingleton, 0, 0,
                      "level 0 has " + std::to_string(d.vertex_count(0)) + " vertices, expected a single root"});
  }
  for (std::size_t n = 0; n <= up_to_level; ++n) {
    const std::size_t k = d.vertex_count(n);
    if (n >= 1) {
      const Level& l = d.level(n);
      std::vector<std::vector<std::size_t>> ranks(k);
      for (const auto& e : l.edges) ranks[e.range].push_back(e.rank);
      for (std::size_t v = 0; v < k; ++v) {
        auto& r = ranks[v];
        if (r.empty()) {
          report.push_back({DefectKind::MissingIncoming, n, v, "vertex has no incoming edges"});
          continue;
        }
        std::sort(r.begin(), r.end());
        if (std::adjacent_find(r.begin(), r.end()) != r.end()) {
          report.push_back({DefectKind::DuplicateRank, n, v, "two incoming edges share an order rank"});
        } else if (r.back() != r.size() - 1) {
          report.push_back({DefectKind::RankGap, n, v,
                            "order ranks are not 0.." + std::to_string(r.size() - 1)});
        }
      }
    }
    if (n < up_to_level) {
      std::vector<bool> has_out(k, false);
      for (const auto& e : d.level(n + 1).edges) has_out[e.source] = true;
      for (std::size_t v = 0; v < k; ++v) {
        if (!has_out[v]) report.push_back({DefectKind::MissingOutgoing, n, v, "vertex has no outgoing edges"});
      }
    }
  }
  return report;
}

Matrix incidence(const Diagram& d, std::size_t n) {
  if (n == 0 || !d.has_level(n)) throw InvalidArgument("level " + std::to_string(n) + " out of range");
  Matrix m(d.vertex_count(n), std::vector<BigInt>(d.vertex_count(n - 1), BigInt(0)));
  for (const auto& e : d.level(n).edges) m[e.range][e.source] += 1;
  return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t inner = b.size();
  if (!a.empty() && a[0].size() != inner) throw InvalidArgument("matrix shapes do not match");
  const std::size_t cols = inner ? b[0].size() : 0;
  Matrix c(a.size(), std::vector<BigInt>(cols, BigInt(0)));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Diagram telescope(const Diagram& d, const std::vector<std::size_t>& cuts) {
  if (cuts.empty() || cuts[0] != 0) throw InvalidArgument("cuts must start at level 0");
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    if (cuts[i] <= cuts[i - 1]) throw InvalidArgument("cuts must be strictly increasing");
  }
  if (!d.has_level(cuts.back())) throw InvalidArgument("cut beyond the truncation");
  std::vector<Level> levels{Level{d.vertex_count(0), {}}};
  for (std::size_t j = 1; j < cuts.size(); ++j) {
    const std::size_t from = cuts[j - 1], to = cuts[j];
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> memo;
    std::function<const std::vector<std::size_t>&(std::size_t, std::size_t)> sources =
        [&](std::size_t lvl, std::size_t v) -> const std::vector<std::size_t>& {
      auto key = std::make_pair(lvl, v);
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      std::vector<std::size_t> out;
      if (lvl == from) {
        out.push_back(v);
      } else {
        for (auto i : d.incoming(lvl, v)) {
          const auto& below = sources(lvl - 1, d.level(lvl).edges[i].source);
          out.insert(out.end(), below.begin(), below.end());
        }
      }
      return memo[key] = std::move(out);
    };
    Level l{d.vertex_count(to), {}};
    for (std::size_t v = 0; v < l.vertices; ++v) {
      const auto& src = sources(to, v);
      for (std::size_t r = 0; r < src.size(); ++r) l.edges.push_back(Edge{src[r], v, r});
    }
    levels.push_back(std::move(l));
  }
  return Diagram(std::move(levels));
}

Diagram split(const Diagram& d, std::size_t n) {
  if (n == 0 || n > d.truncation()) throw InvalidArgument("level " + std::to_string(n) + " out of range");
  std::vector<Level> levels;
  for (std::size_t i = 0; i < n; ++i) levels.push_back(d.level(i));
  const Level& old = d.level(n);
  Level inserted{old.edges.size(), {}};
  Level upper{old.vertices, {}};
  for (std::size_t i = 0; i < old.edges.size(); ++i) {
    inserted.edges.push_back(Edge{old.edges[i].source, i, 0});
    upper.edges.push_back(Edge{i, old.edges[i].range, old.edges[i].rank});
  }
  levels.push_back(std::move(inserted));
  levels.push_back(std::move(upper));
  for (std::size_t i = n + 1; i <= d.truncation(); ++i) levels.push_back(d.level(i));
  return Diagram(std::move(levels), d.tail());
}

namespace {

std::string block_name(std::size_t n, std::size_t j) {
  return "V(" + std::to_string(n) + "," + std::to_string(j) + ")";
}

}  // namespace

std::vector<SpecialViolation> validate_special(const Diagram& d, const SpecialDiagramSpec& spec,
                                               std::size_t up_to_level) {
  if (up_to_level > spec.levels.size()) throw InvalidArgument("block structure does not reach the requested level");
  if (!d.has_level(up_to_level)) throw InvalidArgument("level beyond the truncation");
  std::vector<SpecialViolation> out;
  auto add = [&](const char* clause, std::size_t n, std::string msg) { out.push_back({clause, n, std::move(msg)}); };

  // Block label of each vertex: j for far blocks, n for the core (with side 0/1).
  struct Label {
    std::size_t block = 0;
    int side = -1;  // 0 or 1 inside the core block
    bool assigned = false;
  };
  std::vector<std::vector<Label>> labels(up_to_level + 1);
  for (std::size_t n = 1; n <= up_to_level; ++n) {
    const SpecialLevel& s = spec.levels[n - 1];
    auto& lab = labels[n];
    lab.assign(d.vertex_count(n), Label{});
    auto assign = [&](std::size_t v, std::size_t block, int side) {
      if (v >= lab.size()) {
        add("partition", n, "block lists vertex " + std::to_string(v) + " which does not exist");
        return;
      }
      if (lab[v].assigned) {
        add("partition", n, "vertex " + std::to_string(v) + " lies in two blocks");
        return;
      }
      lab[v] = Label{block, side, true};
    };
    for (auto v : s.core0) assign(v, n, 0);
    for (auto v : s.core1) assign(v, n, 1);
    for (const auto& [j, vs] : s.far) {
      if (j <= n) {
        add("partition", n, "far block index " + std::to_string(j) + " must exceed the level");
        continue;
      }
      for (auto v : vs) assign(v, j, -1);
    }
    for (std::size_t v = 0; v < lab.size(); ++v) {
      if (!lab[v].assigned) add("partition", n, "vertex " + std::to_string(v) + " is in no block");
    }
    if (s.core0.size() + s.core1.size() < 2) add("block-size", n, block_name(n, n) + " has fewer than 2 vertices");
    for (const auto& [j, vs] : s.far) {
      if (vs.size() < 2) add("block-size", n, block_name(n, j) + " has fewer than 2 vertices");
    }
    if (s.core0.size() < 2) add("core-size", n, "the first part of " + block_name(n, n) + " has fewer than 2 vertices");
  }

  auto in_block = [&](std::size_t n, std::size_t v, std::size_t j) {
    return labels[n][v].assigned && labels[n][v].block == j;
  };

  for (std::size_t n = 1; n <= up_to_level; ++n) {
    const Level& lvl = d.level(n);
    const SpecialLevel& s = spec.levels[n - 1];
    for (std::size_t v = 0; v < labels[n].size(); ++v) {
      const Label& l = labels[n][v];
      if (!l.assigned) continue;
      auto inc = d.incoming(n, v);
      const std::string vname = "vertex " + std::to_string(v);
      if ((l.block > n || l.side == 1) && inc.size() != 1) {
        add("single-incoming", n, vname + " must have exactly one incoming edge, has " + std::to_string(inc.size()));
      }
      if (l.block == n && l.side == 0 && inc.size() < 4) {
        add("core-incoming", n, vname + " needs at least 4 incoming edges, has " + std::to_string(inc.size()));
      }
      if (n < 2) continue;  // sources on level 0 carry no block structure
      for (auto i : inc) {
        std::size_t src = lvl.edges[i].source;
        if (l.block > n && !in_block(n - 1, src, l.block)) {
          add("far-source", n, vname + " of " + block_name(n, l.block) + " has a source outside " +
                                   block_name(n - 1, l.block));
        }
        if (l.block == n && l.side == 1 && !in_block(n - 1, src, n)) {
          add("core-one-source", n, vname + " has a source outside " + block_name(n - 1, n));
        }
      }
      if (l.block == n && l.side == 0 && inc.size() >= 2) {
        const std::size_t m = inc.size();
        if (!in_block(n - 1, lvl.edges[inc[0]].source, n)) {
          add("core-order", n, vname + ": the first edge must start in " + block_name(n - 1, n));
        }
        for (std::size_t k = 1; k + 1 < m; ++k) {
          if (!in_block(n - 1, lvl.edges[inc[k]].source, n - 1)) {
            add("core-order", n, vname + ": middle edge " + std::to_string(k) + " must start in " +
                                     block_name(n - 1, n - 1));
          }
        }
        const Label& last = labels[n - 1][lvl.edges[inc[m - 1]].source];
        bool ok = last.assigned && ((last.block == n - 1 && last.side == 1) || last.block >= n);
        if (!ok) {
          add("core-order", n, vname + ": the last edge must start in the second part of " +
                                   block_name(n - 1, n - 1) + " or in a block V(" + std::to_string(n - 1) +
                                   ",j) with j >= " + std::to_string(n));
        }
      }
    }
    if (n < 2) continue;
    for (const auto& [j, vs] : s.far) {
      if (j <= n) continue;
      std::set<std::size_t> hit;
      for (const auto& e : lvl.edges)
        if (in_block(n, e.range, j)) hit.insert(e.source);
      const auto& below = spec.levels[n - 2].far;
      auto it = below.find(j);
      std::set<std::size_t> want;
      if (it != below.end()) want.insert(it->second.begin(), it->second.end());
      if (it == below.end() || hit != want) {
        add("far-surjective", n, "sources of edges into " + block_name(n, j) + " must be exactly " +
                                     block_name(n - 1, j));
      }
    }
  }
  return out;
}

std::string to_string(Answer a) {
  switch (a) {
    case Answer::Yes: return "yes";
    case Answer::No: return "no";
    case Answer::Unknown: return "unknown";
  }
  return "unknown";
}

ExtremesVerdict check_no_cofinal_extremes(const Diagram& d, const SpecialDiagramSpec* spec) {
  if (d.stationary()) {
    const Level& t = *d.tail();
    for (int pick_max = 1; pick_max >= 0; --pick_max) {
      // parent[v]: source of the extreme edge into v; a cycle yields an extreme path repeating forever.
      std::vector<std::optional<std::size_t>> parent(t.vertices);
      for (std::size_t v = 0; v < t.vertices; ++v) {
        auto inc = d.incoming(d.truncation() + 1, v);
        if (inc.empty()) continue;
        parent[v] = t.edges[pick_max ? inc.back() : inc.front()].source;
      }
      for (std::size_t v = 0; v < t.vertices; ++v) {
        std::size_t x = v;
        for (std::size_t steps = 0; steps <= t.vertices && parent[x]; ++steps) x = *parent[x];
        if (parent[x]) {
          return {Answer::No, d.truncation(),
                  std::string(pick_max ? "maximal" : "minimal") + " edges of the repeating level form a cycle"};
        }
      }
    }
    return {Answer::Yes, d.truncation(), "extreme edges of the repeating level form no cycle"};
  }
  if (spec && spec->levels.size() >= d.truncation() && validate_special(d, *spec, d.truncation()).empty() &&
      validate(d, d.truncation()).empty()) {
    return {Answer::Yes, d.truncation(), "certified by a valid special block structure"};
  }
  return {Answer::Unknown, d.truncation(), "not decidable from a finite truncation"};
}

}  // namespace bvdyn
