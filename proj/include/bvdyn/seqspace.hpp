#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "bvdyn/numeric.hpp"

namespace bvdyn {

using Digit = std::uint32_t;
using Word = std::vector<Digit>;

/// Normalizes an eventually periodic sequence (head followed by a repeating
/// period) to its unique shortest form: minimal period, then minimal head.
template <class T>
void normalize_eventually_periodic(std::vector<T>& head, std::vector<T>& period) {
  const std::size_t n = period.size();
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    bool repeats = true;
    for (std::size_t i = d; i < n && repeats; ++i) repeats = period[i] == period[i - d];
    if (repeats) {
      period.resize(d);
      break;
    }
  }
  while (!head.empty() && head.back() == period.back()) {
    T last = head.back();
    head.pop_back();
    period.pop_back();
    period.insert(period.begin(), last);
  }
}

/// The sequence space of all digit streams x with x_t < lambda_t. The
/// alphabet sizes are eventually periodic, so levels fall into finitely many
/// classes: level t < |head| is its own class, later levels share a class
/// with every level congruent to them modulo the period.
class SeqSpace {
 public:
  SeqSpace();  // the dyadic space
  SeqSpace(std::vector<std::uint32_t> head, std::vector<std::uint32_t> period);

  static SeqSpace uniform(std::uint32_t lambda);
  /// "2", "3,5(2)", "(2,3)"; also accepts the shorthand "2adic".
  static SeqSpace parse(std::string_view text);

  std::uint32_t alphabet(std::size_t level) const;
  std::size_t level_class(std::size_t level) const;
  std::size_t class_count() const noexcept { return head_.size() + period_.size(); }
  std::size_t next_class(std::size_t cls) const;
  std::uint32_t class_alphabet(std::size_t cls) const;
  std::uint32_t max_alphabet() const;

  /// p_t = lambda_0 * ... * lambda_t, with p_{-1} = 1.
  BigInt partial_product(long long t) const;
  /// Number of cylinders of the given depth; throws BudgetExceeded past 2^62.
  std::uint64_t cylinder_count(std::size_t depth) const;

  /// Words are printed without separators when every alphabet has at most ten symbols.
  bool compact_digits() const { return max_alphabet() <= 10; }

  const std::vector<std::uint32_t>& head() const noexcept { return head_; }
  const std::vector<std::uint32_t>& period() const noexcept { return period_; }

  std::string to_string() const;

  friend bool operator==(const SeqSpace&, const SeqSpace&) = default;

 private:
  std::vector<std::uint32_t> head_;
  std::vector<std::uint32_t> period_;
};

/// An eventually periodic digit stream, kept in normal form so that equality
/// of points is structural equality.
struct Point {
  Word head;
  Word period;

  Point() : period{0} {}
  Point(Word h, Word p);

  Digit at(std::size_t i) const {
    return i < head.size() ? head[i] : period[(i - head.size()) % period.size()];
  }
  Word prefix(std::size_t n) const;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

/// Throws InvalidArgument unless every digit of the point is below its level's alphabet.
void check_point(const SeqSpace& space, const Point& point);
void check_word(const SeqSpace& space, const Word& word, std::size_t start_level = 0);

std::string format_word(const SeqSpace& space, const Word& word);
Word parse_word(const SeqSpace& space, std::string_view text, std::size_t start_level = 0);
std::string format_point(const SeqSpace& space, const Point& point);
/// "HEAD(PERIOD)", e.g. "110(0)"; dot-separated digits for large alphabets.
Point parse_point(const SeqSpace& space, std::string_view text);

/// Index of the first position where the two points differ, or -1 if equal.
long long first_difference(const Point& a, const Point& b);

/// Bijection between depth-d words and [0, count): lexicographic order with
/// the first digit most significant.
class CylinderIndexer {
 public:
  CylinderIndexer(const SeqSpace& space, std::size_t depth);

  std::size_t depth() const noexcept { return radices_.size(); }
  std::uint64_t count() const noexcept { return count_; }
  std::uint64_t index(const Word& word) const;
  /// Index of the depth-d prefix of a longer word or point.
  std::uint64_t index_of_prefix(const Point& point) const;
  Word word(std::uint64_t index) const;
  /// Number of depth-d cylinders inside one cylinder of depth k <= d.
  std::uint64_t block_size(std::size_t k) const { return suffix_counts_[k]; }

 private:
  std::vector<std::uint32_t> radices_;
  std::vector<std::uint64_t> suffix_counts_;
  std::uint64_t count_ = 1;
};

}  // namespace bvdyn
