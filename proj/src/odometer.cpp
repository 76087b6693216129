#include "bvdyn/odometer.hpp"

#include <map>
#include <numeric>

#include "bvdyn/error.hpp"

namespace bvdyn {

namespace {

std::size_t lcm(std::size_t a, std::size_t b) { return a / std::gcd(a, b) * b; }

void same_space(const AdicInt& x, const AdicInt& y) {
  if (!(x.space() == y.space())) throw SpaceMismatch(x.space().to_string() + " vs " + y.space().to_string());
}

}  // namespace

AdicInt::AdicInt(SeqSpace space, Point digits) : space_(std::move(space)), digits_(std::move(digits)) {
  check_point(space_, digits_);
}

AdicInt AdicInt::zero(const SeqSpace& space) { return AdicInt(space, Point({}, {0})); }

AdicInt AdicInt::one(const SeqSpace& space) { return AdicInt(space, Point({1}, {0})); }

AdicInt AdicInt::from_integer(const SeqSpace& space, const BigInt& n) {
  if (n < 0) return neg(from_integer(space, -n));
  Word head;
  BigInt rest = n;
  for (std::size_t t = 0; rest > 0; ++t) {
    const std::uint32_t l = space.alphabet(t);
    head.push_back(static_cast<Digit>(static_cast<unsigned>(rest % l)));
    rest /= l;
  }
  return AdicInt(space, Point(head, {0}));
}

AdicInt AdicInt::parse(std::string_view text) {
  auto at = text.find('@');
  if (at == std::string_view::npos) throw InvalidArgument("adic integer needs '@<alphabet sizes>'");
  SeqSpace space = SeqSpace::parse(text.substr(at + 1));
  return parse(space, text.substr(0, at));
}

AdicInt AdicInt::parse(const SeqSpace& space, std::string_view digits) {
  return AdicInt(space, parse_point(space, digits));
}

std::string AdicInt::to_string() const { return format_point(space_, digits_) + "@" + space_.to_string(); }

AdicInt add(const AdicInt& x, const AdicInt& b) {
  same_space(x, b);
  const SeqSpace& space = x.space();
  const Point& p = x.digits();
  const Point& q = b.digits();
  const std::size_t start = std::max({p.head.size(), q.head.size(), space.head().size()});
  const std::size_t period = lcm(lcm(p.period.size(), q.period.size()), space.period().size());
  Word out;
  unsigned carry = 0;
  std::size_t t = 0;
  auto step = [&] {
    const unsigned l = space.alphabet(t);
    unsigned s = p.at(t) + q.at(t) + carry;
    out.push_back(s % l);
    carry = s / l;
    ++t;
  };
  while (t < start) step();
  std::map<std::pair<unsigned, std::size_t>, std::size_t> seen;
  for (;;) {
    auto [it, fresh] = seen.emplace(std::make_pair(carry, (t - start) % period), t);
    if (!fresh) {
      const auto t1 = static_cast<long>(it->second);
      return AdicInt(space, Point(Word(out.begin(), out.begin() + t1), Word(out.begin() + t1, out.end())));
    }
    step();
  }
}

AdicInt add_one(const AdicInt& x) { return add(x, AdicInt::one(x.space())); }

AdicInt neg(const AdicInt& x) {
  const SeqSpace& space = x.space();
  const Point& p = x.digits();
  const std::size_t start = std::max(p.head.size(), space.head().size());
  const std::size_t period = lcm(p.period.size(), space.period().size());
  Word head, per;
  for (std::size_t t = 0; t < start; ++t) head.push_back(space.alphabet(t) - 1 - p.at(t));
  for (std::size_t t = start; t < start + period; ++t) per.push_back(space.alphabet(t) - 1 - p.at(t));
  return add_one(AdicInt(space, Point(head, per)));
}

AdicInt subtract(const AdicInt& x, const AdicInt& b) { return add(x, neg(b)); }

Rational adic_metric(const AdicInt& x, const AdicInt& y) {
  same_space(x, y);
  long long n = first_difference(x.digits(), y.digits());
  if (n < 0) return Rational(0);
  return Rational(1, n + 1);
}

CylMap translation_map(const AdicInt& b, std::uint64_t budget) {
  const SeqSpace& space = b.space();
  const Point& q = b.digits();
  const std::size_t start = std::max(q.head.size(), space.head().size());
  const std::size_t period = lcm(q.period.size(), space.period().size());
  // Position key: exact level before `start`, then the phase of the joint period.
  auto key_of = [&](std::size_t t) { return t < start ? t : start + (t - start) % period; };
  std::map<std::pair<unsigned, std::size_t>, std::size_t> ids;
  std::vector<std::pair<unsigned, std::size_t>> states;
  auto get = [&](unsigned carry, std::size_t pos) {
    auto [it, fresh] = ids.emplace(std::make_pair(carry, pos), states.size());
    if (fresh) {
      states.emplace_back(carry, pos);
      if (states.size() > budget) throw BudgetExceeded("translation exceeds the state budget");
    }
    return it->second;
  };
  get(0, 0);
  std::vector<MealyNode> nodes;
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto [carry, pos] = states[i];
    MealyNode n;
    n.cls = space.level_class(pos);
    const unsigned l = space.alphabet(pos);
    for (unsigned a = 0; a < l; ++a) {
      unsigned s = a + q.at(pos) + carry;
      n.out.push_back(s % l);
      n.next.push_back(get(s / l, key_of(pos + 1)));
    }
    nodes.push_back(std::move(n));
  }
  return CylMap(space, 0, {Word{}}, {0}, std::move(nodes), {}, budget);
}

CylMap odometer_map(const SeqSpace& space) { return translation_map(AdicInt::one(space)); }

Diagram to_vershik_diagram(const SeqSpace& space, std::size_t levels) {
  if (levels < 1) throw InvalidArgument("the odometer diagram needs at least one level");
  std::vector<Level> out{Level{1, {}}};
  for (std::size_t n = 1; n <= levels; ++n) {
    Level l{1, {}};
    for (std::size_t a = 0; a < space.alphabet(n - 1); ++a) l.edges.push_back(Edge{0, 0, a});
    out.push_back(std::move(l));
  }
  return Diagram(std::move(out));
}

}  // namespace bvdyn
