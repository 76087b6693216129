#include "bvdyn/measure.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "bvdyn/error.hpp"
#include "text_util.hpp"

namespace bvdyn {

namespace {

std::size_t levels_to_check(const SeqSpace& space, std::size_t head, std::size_t period) {
  std::size_t a = std::max<std::size_t>(period, 1), b = space.period().size();
  return std::max(head, space.head().size()) + a / std::gcd(a, b) * b + 1;
}

void check_distribution(const ProbVector& p, std::size_t size, const std::string& where) {
  if (p.size() != size) {
    throw InvalidArgument(where + ": expected " + std::to_string(size) + " probabilities, got " +
                          std::to_string(p.size()));
  }
  Rational total = 0;
  for (const auto& x : p) {
    if (x < 0) throw InvalidArgument(where + ": negative probability");
    total += x;
  }
  if (total != 1) throw InvalidArgument(where + ": probabilities sum to " + to_string(total) + ", not 1");
}

void validate_law(const SeqSpace& space, const Bernoulli& b) {
  if (b.period.empty()) throw InvalidArgument("bernoulli: missing repeating distribution");
  std::size_t n = levels_to_check(space, b.head.size(), b.period.size());
  for (std::size_t t = 0; t < n; ++t)
    check_distribution(b.at(t), space.alphabet(t), "bernoulli level " + std::to_string(t));
}

void validate_law(const SeqSpace& space, const Markov& m) {
  check_distribution(m.init, space.alphabet(0), "markov init");
  if (m.period.empty()) throw InvalidArgument("markov: missing repeating step");
  std::size_t n = levels_to_check(space, m.head.size() + 1, m.period.size());
  for (std::size_t t = 1; t < n; ++t) {
    const auto& mat = m.step(t);
    std::string where = "markov step " + std::to_string(t);
    if (mat.size() != space.alphabet(t - 1)) throw InvalidArgument(where + ": wrong number of rows");
    for (const auto& row : mat) check_distribution(row, space.alphabet(t), where);
  }
}

void validate_law(const SeqSpace& space, const Atomic& a) {
  if (a.atoms.empty()) throw InvalidArgument("atomic: no atoms");
  Rational total = 0;
  for (const auto& [p, w] : a.atoms) {
    check_point(space, p);
    if (w <= 0) throw InvalidArgument("atomic: weights must be positive");
    total += w;
  }
  if (total != 1) throw InvalidArgument("atomic: weights sum to " + to_string(total) + ", not 1");
}

std::string join_vector(const ProbVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += to_string(v[i]);
  }
  return s;
}

std::string join_matrix(const ProbMatrix& m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += ';';
    s += join_vector(m[i]);
  }
  return s;
}

}  // namespace

MeasureSpec::MeasureSpec(SeqSpace space, std::vector<MeasureComponent> components)
    : space_(std::move(space)), components_(std::move(components)) {
  if (components_.empty()) throw InvalidArgument("measure has no components");
  Rational total = 0;
  for (const auto& c : components_) {
    if (c.weight <= 0) throw InvalidArgument("mixture weights must be positive");
    total += c.weight;
    std::visit([&](const auto& law) { validate_law(space_, law); }, c.law);
  }
  if (total != 1) throw InvalidArgument("mixture weights sum to " + to_string(total) + ", not 1");
}

MeasureSpec MeasureSpec::uniform(const SeqSpace& space) {
  Bernoulli b;
  for (auto l : space.head()) b.head.emplace_back(l, Rational(1, l));
  for (auto l : space.period()) b.period.emplace_back(l, Rational(1, l));
  return MeasureSpec(space, {{Rational(1), b}});
}

MeasureSpec MeasureSpec::bernoulli(const SeqSpace& space, ProbVector probabilities) {
  Bernoulli b;
  b.period.push_back(std::move(probabilities));
  return MeasureSpec(space, {{Rational(1), b}});
}

MeasureSpec MeasureSpec::dirac(const SeqSpace& space, const Point& point) {
  return atomic(space, {{point, Rational(1)}});
}

MeasureSpec MeasureSpec::atomic(const SeqSpace& space, std::vector<std::pair<Point, Rational>> atoms) {
  return MeasureSpec(space, {{Rational(1), Atomic{std::move(atoms)}}});
}

bool MeasureSpec::has_atoms() const {
  return std::any_of(components_.begin(), components_.end(),
                     [](const auto& c) { return std::holds_alternative<Atomic>(c.law); });
}

bool MeasureSpec::purely_atomic() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const auto& c) { return std::holds_alternative<Atomic>(c.law); });
}

Rational MeasureSpec::nonatomic_weight() const {
  Rational w = 0;
  for (const auto& c : components_)
    if (!std::holds_alternative<Atomic>(c.law)) w += c.weight;
  return w;
}

std::vector<std::pair<Point, Rational>> MeasureSpec::atoms() const {
  std::map<Point, Rational> merged;
  for (const auto& c : components_) {
    if (const auto* a = std::get_if<Atomic>(&c.law)) {
      for (const auto& [p, w] : a->atoms) merged[p] += c.weight * w;
    }
  }
  return {merged.begin(), merged.end()};
}

Rational MeasureSpec::point_mass(const Point& point) const {
  Rational m = 0;
  for (const auto& c : components_) {
    if (const auto* a = std::get_if<Atomic>(&c.law)) {
      for (const auto& [p, w] : a->atoms)
        if (p == point) m += c.weight * w;
    }
  }
  return m;
}

Rational MeasureSpec::nonatomic_mass(const Word& word) const {
  Rational total = 0;
  for (const auto& c : components_) {
    if (const auto* b = std::get_if<Bernoulli>(&c.law)) {
      Rational m = c.weight;
      for (std::size_t t = 0; t < word.size() && m != 0; ++t) m *= b->at(t)[word[t]];
      total += m;
    } else if (const auto* mk = std::get_if<Markov>(&c.law)) {
      Rational m = c.weight;
      if (!word.empty()) m *= mk->init[word[0]];
      for (std::size_t t = 1; t < word.size() && m != 0; ++t) m *= mk->step(t)[word[t - 1]][word[t]];
      total += m;
    }
  }
  return total;
}

Rational MeasureSpec::mass(const Word& word) const {
  Rational m = nonatomic_mass(word);
  for (const auto& [p, w] : atoms()) {
    bool inside = true;
    for (std::size_t t = 0; t < word.size() && inside; ++t) inside = p.at(t) == word[t];
    if (inside) m += w;
  }
  return m;
}

std::vector<Rational> MeasureSpec::nonatomic_masses(const CylinderIndexer& indexer) const {
  std::vector<Rational> total(indexer.count(), Rational(0));
  const std::size_t depth = indexer.depth();
  for (const auto& c : components_) {
    if (std::holds_alternative<Atomic>(c.law)) continue;
    std::vector<Rational> cur{c.weight};
    for (std::size_t t = 0; t < depth; ++t) {
      const std::uint32_t l = space_.alphabet(t);
      const std::uint32_t prev = t ? space_.alphabet(t - 1) : 1;
      std::vector<Rational> next(cur.size() * l);
      for (std::size_t i = 0; i < cur.size(); ++i) {
        for (std::uint32_t a = 0; a < l; ++a) {
          Rational p;
          if (const auto* b = std::get_if<Bernoulli>(&c.law)) {
            p = b->at(t)[a];
          } else {
            const auto& mk = std::get<Markov>(c.law);
            p = t == 0 ? mk.init[a] : mk.step(t)[i % prev][a];
          }
          next[i * l + a] = cur[i] * p;
        }
      }
      cur = std::move(next);
    }
    for (std::size_t i = 0; i < cur.size(); ++i) total[i] += cur[i];
  }
  return total;
}

MeasureSpec MeasureSpec::parse(std::string_view text) {
  auto lines = detail::tokenize_lines(text);
  std::size_t i = 0;
  auto fail = [](const detail::Token& t, const std::string& msg) -> ParseError {
    return ParseError(t.line, t.column, msg);
  };
  if (lines.empty()) throw ParseError(1, 1, "empty measure description");
  if (lines[0].size() != 2 || lines[0][0].text != "measure" || lines[0][1].text != "1") {
    throw fail(lines[0][0], "expected header 'measure 1'");
  }
  i = 1;
  if (i >= lines.size() || lines[i][0].text != "space" || lines[i].size() != 2) {
    throw ParseError(i < lines.size() ? lines[i][0].line : lines[0][0].line + 1, 1, "expected 'space <alphabet sizes>'");
  }
  SeqSpace space;
  try {
    space = SeqSpace::parse(lines[i][1].text);
  } catch (const InvalidArgument& e) {
    throw fail(lines[i][1], e.what());
  }
  ++i;

  auto vec = [&](const detail::Token& t) {
    ProbVector v;
    for (const auto& item : detail::split(t.text, ',')) {
      try {
        v.push_back(parse_rational(item));
      } catch (const InvalidArgument& e) {
        throw fail(t, e.what());
      }
    }
    return v;
  };
  auto mat = [&](const detail::Token& t) {
    ProbMatrix m;
    for (const auto& row : detail::split(t.text, ';')) m.push_back(vec(detail::Token{row, t.line, t.column}));
    return m;
  };

  std::vector<MeasureComponent> comps;
  std::vector<const detail::Token*> starts;
  auto read_component = [&](const std::string& kind, const detail::Token& at, Rational weight) {
    MeasureComponent comp{weight, Bernoulli{}};
    if (kind == "uniform") {
      comp.law = std::get<Bernoulli>(MeasureSpec::uniform(space).components_[0].law);
    } else if (kind == "bernoulli") {
      Bernoulli b;
      while (i < lines.size() && (lines[i][0].text == "level" || lines[i][0].text == "repeat")) {
        if (lines[i].size() != 2) throw fail(lines[i][0], "expected one probability vector");
        (lines[i][0].text == "level" ? b.head : b.period).push_back(vec(lines[i][1]));
        ++i;
      }
      comp.law = std::move(b);
    } else if (kind == "markov") {
      Markov m;
      bool has_init = false;
      while (i < lines.size() &&
             (lines[i][0].text == "init" || lines[i][0].text == "step" || lines[i][0].text == "repeat-step")) {
        if (lines[i].size() != 2) throw fail(lines[i][0], "expected one value");
        if (lines[i][0].text == "init") {
          m.init = vec(lines[i][1]);
          has_init = true;
        } else {
          (lines[i][0].text == "step" ? m.head : m.period).push_back(mat(lines[i][1]));
        }
        ++i;
      }
      if (!has_init) throw fail(at, "markov component needs an 'init' line");
      comp.law = std::move(m);
    } else if (kind == "atomic") {
      Atomic a;
      while (i < lines.size() && lines[i][0].text == "atom") {
        if (lines[i].size() != 3) throw fail(lines[i][0], "expected 'atom <weight> <point>'");
        try {
          a.atoms.emplace_back(parse_point(space, lines[i][2].text), parse_rational(lines[i][1].text));
        } catch (const InvalidArgument& e) {
          throw fail(lines[i][1], e.what());
        }
        ++i;
      }
      comp.law = std::move(a);
    } else {
      throw fail(at, "unknown measure kind '" + kind + "'");
    }
    comps.push_back(std::move(comp));
    starts.push_back(&at);
  };

  if (i >= lines.size()) throw ParseError(lines.back()[0].line + 1, 1, "missing measure stanza");
  if (lines[i][0].text == "mix") {
    ++i;
    while (i < lines.size()) {
      const auto& line = lines[i];
      if (line[0].text != "component" || line.size() != 3) throw fail(line[0], "expected 'component <weight> <kind>'");
      Rational w;
      try {
        w = parse_rational(line[1].text);
      } catch (const InvalidArgument& e) {
        throw fail(line[1], e.what());
      }
      ++i;
      read_component(line[2].text, line[2], w);
    }
    if (comps.empty()) throw fail(lines.back()[0], "mixture without components");
  } else {
    const auto& line = lines[i];
    if (line.size() != 1) throw fail(line[1], "unexpected token");
    ++i;
    read_component(line[0].text, line[0], Rational(1));
    if (i < lines.size()) throw fail(lines[i][0], "unexpected line after measure stanza");
  }
  try {
    return MeasureSpec(space, std::move(comps));
  } catch (const InvalidArgument& e) {
    throw fail(*starts.front(), e.what());
  }
}

std::string MeasureSpec::to_text() const {
  std::ostringstream out;
  out << "measure 1\nspace " << space_.to_string() << "\n";
  const bool mixture = components_.size() > 1;
  if (mixture) out << "mix\n";
  for (const auto& c : components_) {
    std::string kind = std::holds_alternative<Bernoulli>(c.law) ? "bernoulli"
                       : std::holds_alternative<Markov>(c.law) ? "markov"
                                                               : "atomic";
    if (mixture) {
      out << "component " << to_string(c.weight) << " " << kind << "\n";
    } else {
      out << kind << "\n";
    }
    if (const auto* b = std::get_if<Bernoulli>(&c.law)) {
      for (const auto& v : b->head) out << "level " << join_vector(v) << "\n";
      for (const auto& v : b->period) out << "repeat " << join_vector(v) << "\n";
    } else if (const auto* m = std::get_if<Markov>(&c.law)) {
      out << "init " << join_vector(m->init) << "\n";
      for (const auto& s : m->head) out << "step " << join_matrix(s) << "\n";
      for (const auto& s : m->period) out << "repeat-step " << join_matrix(s) << "\n";
    } else {
      for (const auto& [p, w] : std::get<Atomic>(c.law).atoms)
        out << "atom " << to_string(w) << " " << format_point(space_, p) << "\n";
    }
  }
  return out.str();
}

}  // namespace bvdyn
