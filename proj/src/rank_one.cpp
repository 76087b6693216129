#include "bvdyn/rank_one.hpp"

#include <algorithm>

#include "bvdyn/error.hpp"
#include "text_util.hpp"

namespace bvdyn {

namespace {

constexpr std::uint64_t kMaxLevels = std::uint64_t{1} << 22;

std::size_t parse_count(const detail::Token& t, const char* what) {
  const std::string& s = t.text;
  if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw ParseError(t.line, t.column, std::string("expected ") + what + ", found '" + s + "'");
  }
  return std::stoul(s);
}

void expect(const std::vector<detail::Token>& line, std::size_t i, const char* word) {
  if (i >= line.size()) {
    const auto& last = line.back();
    throw ParseError(last.line, last.column + last.text.size(), std::string("expected '") + word + "'");
  }
  if (line[i].text != word) {
    throw ParseError(line[i].line, line[i].column, std::string("expected '") + word + "', found '" + line[i].text + "'");
  }
}

}  // namespace

bool CuttingStackingSpec::no_spacers() const {
  return std::all_of(stages.begin(), stages.end(), [](const CuttingStage& s) {
    return std::all_of(s.spacers.begin(), s.spacers.end(), [](std::size_t m) { return m == 0; });
  });
}

CuttingStackingSpec CuttingStackingSpec::uniform(std::size_t cuts, std::size_t stages) {
  if (cuts < 1) throw InvalidArgument("each stage needs at least one cut");
  CuttingStackingSpec s;
  s.stages.assign(stages, CuttingStage{std::vector<std::size_t>(cuts, 0)});
  return s;
}

CuttingStackingSpec CuttingStackingSpec::parse(std::string_view text) {
  CuttingStackingSpec spec;
  for (const auto& line : detail::tokenize_lines(text)) {
    expect(line, 0, "stage");
    if (line.size() < 2) throw ParseError(line[0].line, line[0].column + 5, "expected a stage number");
    const std::size_t n = parse_count(line[1], "a stage number");
    if (n != spec.stages.size() + 1) {
      throw ParseError(line[1].line, line[1].column,
                       "expected stage " + std::to_string(spec.stages.size() + 1) + ", found " + std::to_string(n));
    }
    expect(line, 2, "cuts");
    if (line.size() < 4) throw ParseError(line[2].line, line[2].column + 4, "expected a cut count");
    const std::size_t p = parse_count(line[3], "a cut count");
    if (p < 1) throw ParseError(line[3].line, line[3].column, "a stage needs at least one cut");
    expect(line, 4, "spacers");
    if (line.size() != 5 + p) {
      const auto& at = line.size() > 5 + p ? line[5 + p] : line.back();
      throw ParseError(at.line, at.column, "expected " + std::to_string(p) + " spacer counts, found " +
                                               std::to_string(line.size() - 5));
    }
    CuttingStage st;
    for (std::size_t k = 0; k < p; ++k) st.spacers.push_back(parse_count(line[5 + k], "a spacer count"));
    spec.stages.push_back(std::move(st));
  }
  if (spec.stages.empty()) throw ParseError(1, 1, "no stages");
  return spec;
}

std::string CuttingStackingSpec::to_text() const {
  std::string out;
  for (std::size_t n = 0; n < stages.size(); ++n) {
    out += "stage " + std::to_string(n + 1) + " cuts " + std::to_string(stages[n].cuts()) + " spacers";
    for (auto m : stages[n].spacers) out += " " + std::to_string(m);
    out += "\n";
  }
  return out;
}

RankOne rank1_build(const CuttingStackingSpec& spec, std::size_t stages) {
  if (stages < 1) throw InvalidArgument("at least one stage is needed");
  if (stages > spec.stages.size()) {
    throw InvalidArgument("the cutting-and-stacking spec defines " + std::to_string(spec.stages.size()) + " stages, " +
                          std::to_string(stages) + " requested");
  }
  RankOne r;
  r.spec.stages.assign(spec.stages.begin(), spec.stages.begin() + static_cast<long>(stages));
  const bool spacers = !r.spec.no_spacers();
  r.heights.push_back(BigInt(1));
  std::vector<Level> levels{Level{1, {}}};
  for (std::size_t n = 1; n <= stages; ++n) {
    const CuttingStage& st = r.spec.stages[n - 1];
    Level l{spacers ? std::size_t{2} : std::size_t{1}, {}};
    const std::size_t tower_src = 0;
    const std::size_t spacer_src = n == 1 ? 0 : 1;
    std::size_t rank = 0;
    BigInt h = 0;
    for (auto m : st.spacers) {
      l.edges.push_back(Edge{tower_src, 0, rank++});
      for (std::size_t j = 0; j < m; ++j) l.edges.push_back(Edge{spacer_src, 0, rank++});
      h += r.heights.back() + m;
    }
    if (spacers) l.edges.push_back(Edge{spacer_src, 1, 0});
    levels.push_back(std::move(l));
    r.heights.push_back(h);
  }
  r.diagram = Diagram(std::move(levels));
  return r;
}

std::optional<PathPrefix> approximant(const RankOne& r, std::size_t n, const PathPrefix& p) {
  if (p.edges.size() != n) throw InvalidArgument("the stage-" + std::to_string(n) + " approximant needs a path of length n");
  if (n == 0 || terminal_vertex(r.diagram, p) != 0) return std::nullopt;
  return successor(r.diagram, p);
}

std::vector<long long> stage_layout(const RankOne& r, std::size_t n) {
  const std::size_t N = r.stages();
  if (n > N) throw InvalidArgument("stage beyond the built system");
  if (r.heights[N] > kMaxLevels) throw BudgetExceeded("the final tower has too many levels to lay out");
  std::vector<long long> layout;
  const auto hn = static_cast<long long>(r.heights[n]);
  for (long long i = 0; i < hn; ++i) layout.push_back(i);
  for (std::size_t j = n + 1; j <= N; ++j) {
    std::vector<long long> next;
    for (auto m : r.spec.stages[j - 1].spacers) {
      next.insert(next.end(), layout.begin(), layout.end());
      next.insert(next.end(), m, -1);
    }
    layout = std::move(next);
  }
  return layout;
}

OdometerApprox odometer_approx(const RankOne& r, const std::vector<RankOneMeasure>& measures, const Rational& eps) {
  if (eps <= 0) throw InvalidArgument("eps must be positive");
  const std::size_t N = r.stages();
  const auto total = static_cast<std::uint64_t>(r.heights[N]);
  for (const auto& mu : measures) {
    if (mu.atom && (mu.level < 0 || mu.level >= r.heights[N])) throw InvalidArgument("atom level outside the final tower");
  }
  auto mass = [&](const RankOneMeasure& mu, const std::vector<bool>& in) {
    if (mu.atom) return Rational(in[static_cast<std::uint64_t>(mu.level)] ? 1 : 0);
    return Rational(static_cast<long long>(std::count(in.begin(), in.end(), true)), static_cast<long long>(total));
  };

  OdometerApprox out;
  std::vector<long long> layout;
  for (std::size_t n = 1; n <= N; ++n) {
    layout = stage_layout(r, n);
    const auto top = static_cast<long long>(r.heights[n]) - 1;
    std::vector<bool> band(total);
    for (std::uint64_t i = 0; i < total; ++i) band[i] = layout[i] < 0 || layout[i] == 0 || layout[i] == top;
    out.bounds.clear();
    for (const auto& mu : measures) out.bounds.push_back(mass(mu, band));
    if (std::all_of(out.bounds.begin(), out.bounds.end(), [&](const Rational& b) { return b < eps; })) {
      out.stage = n;
      break;
    }
  }

  std::vector<std::uint64_t> order;
  for (std::uint64_t i = 0; i < total; ++i)
    if (layout[i] >= 0) order.push_back(i);
  for (std::uint64_t i = 0; i < total; ++i)
    if (layout[i] < 0) order.push_back(i);
  out.s.assign(total, 0);
  for (std::size_t k = 0; k < order.size(); ++k) out.s[order[k]] = order[(k + 1) % order.size()];
  std::vector<bool> differ(total, false);
  for (std::uint64_t i = 0; i < total; ++i) {
    if (out.s[i] != (i + 1) % total) differ[i] = differ[out.s[i]] = true;
  }
  for (const auto& mu : measures) out.distances.push_back(mass(mu, differ));
  out.certified = out.stage.has_value() &&
                  std::all_of(out.distances.begin(), out.distances.end(), [&](const Rational& d) { return d < eps; });
  return out;
}

}  // namespace bvdyn
