#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "bvdyn/numeric.hpp"
#include "bvdyn/seqspace.hpp"

namespace bvdyn {

using ProbVector = std::vector<Rational>;
using ProbMatrix = std::vector<ProbVector>;  // rows indexed by the previous digit

/// Independent digits; level t uses the distribution at position t of the
/// eventually periodic sequence head, period, period, ...
struct Bernoulli {
  std::vector<ProbVector> head;
  std::vector<ProbVector> period;

  const ProbVector& at(std::size_t level) const {
    return level < head.size() ? head[level] : period[(level - head.size()) % period.size()];
  }
};

/// Digit t depends on digit t-1 through the step matrix for level t (t >= 1).
struct Markov {
  ProbVector init;
  std::vector<ProbMatrix> head;  // steps for levels 1, 2, ...
  std::vector<ProbMatrix> period;

  const ProbMatrix& step(std::size_t level) const {
    std::size_t i = level - 1;
    return i < head.size() ? head[i] : period[(i - head.size()) % period.size()];
  }
};

struct Atomic {
  std::vector<std::pair<Point, Rational>> atoms;
};

struct MeasureComponent {
  Rational weight;
  std::variant<Bernoulli, Markov, Atomic> law;
};

/// A probability measure on a sequence space: a finite convex combination of
/// Bernoulli, Markov and finitely atomic laws, all with exact rational data.
class MeasureSpec {
 public:
  MeasureSpec(SeqSpace space, std::vector<MeasureComponent> components);

  static MeasureSpec uniform(const SeqSpace& space);
  static MeasureSpec bernoulli(const SeqSpace& space, ProbVector probabilities);
  static MeasureSpec dirac(const SeqSpace& space, const Point& point);
  static MeasureSpec atomic(const SeqSpace& space, std::vector<std::pair<Point, Rational>> atoms);

  /// Parses the `measure 1` text block. Throws ParseError with line:column.
  static MeasureSpec parse(std::string_view text);
  std::string to_text() const;

  const SeqSpace& space() const noexcept { return space_; }
  const std::vector<MeasureComponent>& components() const noexcept { return components_; }

  bool has_atoms() const;
  bool purely_atomic() const;
  /// Total weight carried by the Bernoulli and Markov components.
  Rational nonatomic_weight() const;

  /// Weighted atoms, merged by point and sorted.
  std::vector<std::pair<Point, Rational>> atoms() const;
  Rational point_mass(const Point& point) const;

  /// Mass of the cylinder [word] carried by the nonatomic components only.
  Rational nonatomic_mass(const Word& word) const;
  /// Full mass of the cylinder [word].
  Rational mass(const Word& word) const;
  /// Nonatomic masses of all cylinders of the indexer's depth, by index.
  std::vector<Rational> nonatomic_masses(const CylinderIndexer& indexer) const;

 private:
  SeqSpace space_;
  std::vector<MeasureComponent> components_;
};

}  // namespace bvdyn
