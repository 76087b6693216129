#include "bvdyn/seqspace.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>

#include "bvdyn/error.hpp"

namespace bvdyn {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::uint32_t> parse_uint_list(std::string_view text, std::string_view what) {
  std::vector<std::uint32_t> out;
  std::string s = trim(text);
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    std::string item = trim(std::string_view(s).substr(pos, comma - pos));
    if (item.empty() || !std::all_of(item.begin(), item.end(), [](unsigned char c) { return std::isdigit(c); }) ||
        item.size() > 9) {
      throw InvalidArgument("malformed " + std::string(what) + " '" + std::string(text) + "'");
    }
    out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    pos = comma + 1;
  }
  return out;
}

}  // namespace

SeqSpace::SeqSpace() : SeqSpace({}, {2}) {}

SeqSpace::SeqSpace(std::vector<std::uint32_t> head, std::vector<std::uint32_t> period)
    : head_(std::move(head)), period_(std::move(period)) {
  if (period_.empty()) throw InvalidArgument("alphabet sizes need a nonempty repeating block");
  for (auto l : head_)
    if (l < 2) throw InvalidArgument("alphabet sizes must be at least 2");
  for (auto l : period_)
    if (l < 2) throw InvalidArgument("alphabet sizes must be at least 2");
  normalize_eventually_periodic(head_, period_);
}

SeqSpace SeqSpace::uniform(std::uint32_t lambda) { return SeqSpace({}, {lambda}); }

SeqSpace SeqSpace::parse(std::string_view text) {
  std::string s = trim(text);
  if (s.size() > 4 && s.substr(s.size() - 4) == "adic") s = s.substr(0, s.size() - 4);
  auto open = s.find('(');
  if (open == std::string::npos) {
    auto items = parse_uint_list(s, "alphabet sizes");
    if (items.size() != 1) throw InvalidArgument("alphabet sizes need a repeating block in parentheses: '" + s + "'");
    return SeqSpace({}, items);
  }
  if (s.back() != ')') throw InvalidArgument("malformed alphabet sizes '" + s + "'");
  std::string head = s.substr(0, open);
  if (!head.empty() && head.back() == ',') head.pop_back();
  auto h = parse_uint_list(head, "alphabet sizes");
  auto p = parse_uint_list(std::string_view(s).substr(open + 1, s.size() - open - 2), "alphabet sizes");
  return SeqSpace(std::move(h), std::move(p));
}

std::uint32_t SeqSpace::alphabet(std::size_t level) const { return class_alphabet(level_class(level)); }

std::size_t SeqSpace::level_class(std::size_t level) const {
  if (level < head_.size()) return level;
  return head_.size() + (level - head_.size()) % period_.size();
}

std::size_t SeqSpace::next_class(std::size_t cls) const {
  if (cls + 1 < class_count()) return cls + 1;
  return head_.size();
}

std::uint32_t SeqSpace::class_alphabet(std::size_t cls) const {
  return cls < head_.size() ? head_[cls] : period_[cls - head_.size()];
}

std::uint32_t SeqSpace::max_alphabet() const {
  std::uint32_t m = 0;
  for (auto l : head_) m = std::max(m, l);
  for (auto l : period_) m = std::max(m, l);
  return m;
}

BigInt SeqSpace::partial_product(long long t) const {
  BigInt p = 1;
  for (long long i = 0; i <= t; ++i) p *= alphabet(static_cast<std::size_t>(i));
  return p;
}

std::uint64_t SeqSpace::cylinder_count(std::size_t depth) const {
  constexpr std::uint64_t limit = std::uint64_t{1} << 62;
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < depth; ++i) {
    std::uint64_t l = alphabet(i);
    if (c > limit / l) throw BudgetExceeded("too many cylinders at depth " + std::to_string(depth));
    c *= l;
  }
  return c;
}

std::string SeqSpace::to_string() const {
  auto join = [](const std::vector<std::uint32_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(v[i]);
    }
    return s;
  };
  if (head_.empty() && period_.size() == 1) return std::to_string(period_[0]);
  std::string s = join(head_);
  return s + "(" + join(period_) + ")";
}

Point::Point(Word h, Word p) : head(std::move(h)), period(std::move(p)) {
  if (period.empty()) throw InvalidArgument("a point needs a nonempty period");
  normalize_eventually_periodic(head, period);
}

Word Point::prefix(std::size_t n) const {
  Word w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = at(i);
  return w;
}

void check_word(const SeqSpace& space, const Word& word, std::size_t start_level) {
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] >= space.alphabet(start_level + i)) {
      throw InvalidArgument("digit " + std::to_string(word[i]) + " out of range at level " +
                            std::to_string(start_level + i));
    }
  }
}

void check_point(const SeqSpace& space, const Point& point) {
  check_word(space, point.head);
  // The period must respect every alphabet it meets; the joint period of
  // levels and digits is lcm(|period|, space period) after the heads.
  std::size_t start = std::max(point.head.size(), space.head().size());
  std::size_t a = point.period.size(), b = space.period().size();
  std::size_t l = a / std::gcd(a, b) * b;
  for (std::size_t i = point.head.size(); i < start + l; ++i) {
    if (point.at(i) >= space.alphabet(i)) {
      throw InvalidArgument("digit " + std::to_string(point.at(i)) + " out of range at level " +
                            std::to_string(i));
    }
  }
}

std::string format_word(const SeqSpace& space, const Word& word) {
  std::string s;
  bool compact = space.compact_digits();
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (!compact && i) s += '.';
    s += std::to_string(word[i]);
  }
  return s;
}

Word parse_word(const SeqSpace& space, std::string_view text, std::size_t start_level) {
  std::string s = trim(text);
  Word w;
  if (s.empty()) return w;
  if (space.compact_digits() && s.find('.') == std::string::npos) {
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw InvalidArgument("malformed word '" + s + "'");
      w.push_back(static_cast<Digit>(c - '0'));
    }
  } else {
    std::size_t pos = 0;
    while (pos <= s.size()) {
      std::size_t dot = s.find('.', pos);
      if (dot == std::string::npos) dot = s.size();
      std::string item = s.substr(pos, dot - pos);
      if (item.empty() || item.size() > 9 ||
          !std::all_of(item.begin(), item.end(), [](unsigned char c) { return std::isdigit(c); })) {
        throw InvalidArgument("malformed word '" + s + "'");
      }
      w.push_back(static_cast<Digit>(std::stoul(item)));
      pos = dot + 1;
    }
  }
  check_word(space, w, start_level);
  return w;
}

std::string format_point(const SeqSpace& space, const Point& point) {
  std::string s = format_word(space, point.head);
  if (!space.compact_digits() && !point.head.empty()) s += '.';
  return s + "(" + format_word(space, point.period) + ")";
}

Point parse_point(const SeqSpace& space, std::string_view text) {
  std::string s = trim(text);
  auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')' || open + 2 > s.size() - 1) {
    throw InvalidArgument("malformed point '" + s + "', expected HEAD(PERIOD)");
  }
  std::string head = s.substr(0, open);
  if (!head.empty() && head.back() == '.') head.pop_back();
  Word h = parse_word(space, head);
  std::string per = s.substr(open + 1, s.size() - open - 2);
  SeqSpace any = SeqSpace::uniform(space.max_alphabet());
  Word p = parse_word(any, per);
  Point pt(std::move(h), std::move(p));
  check_point(space, pt);
  return pt;
}

long long first_difference(const Point& a, const Point& b) {
  std::size_t h = std::max(a.head.size(), b.head.size());
  std::size_t x = a.period.size(), y = b.period.size();
  std::size_t l = x / std::gcd(x, y) * y;
  for (std::size_t i = 0; i < h + l; ++i)
    if (a.at(i) != b.at(i)) return static_cast<long long>(i);
  return -1;
}

CylinderIndexer::CylinderIndexer(const SeqSpace& space, std::size_t depth) {
  count_ = space.cylinder_count(depth);
  radices_.resize(depth);
  for (std::size_t i = 0; i < depth; ++i) radices_[i] = space.alphabet(i);
  suffix_counts_.assign(depth + 1, 1);
  for (std::size_t i = depth; i-- > 0;) suffix_counts_[i] = suffix_counts_[i + 1] * radices_[i];
}

std::uint64_t CylinderIndexer::index(const Word& word) const {
  if (word.size() != radices_.size()) throw InvalidArgument("word length does not match cylinder depth");
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] >= radices_[i]) throw InvalidArgument("digit out of range");
    idx = idx * radices_[i] + word[i];
  }
  return idx;
}

std::uint64_t CylinderIndexer::index_of_prefix(const Point& point) const {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < radices_.size(); ++i) idx = idx * radices_[i] + point.at(i);
  return idx;
}

Word CylinderIndexer::word(std::uint64_t index) const {
  Word w(radices_.size());
  for (std::size_t i = radices_.size(); i-- > 0;) {
    w[i] = static_cast<Digit>(index % radices_[i]);
    index /= radices_[i];
  }
  return w;
}

}  // namespace bvdyn
