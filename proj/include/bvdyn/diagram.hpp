#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bvdyn/numeric.hpp"

namespace bvdyn {

/// An edge from vertex `source` of level n-1 to vertex `range` of level n.
struct Edge {
  std::size_t source = 0;
  std::size_t range = 0;
  std::size_t rank = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Vertices of one level and the edges arriving at them from the level below.
struct Level {
  std::size_t vertices = 0;
  std::vector<Edge> edges;

  friend bool operator==(const Level&, const Level&) = default;
};

/// An ordered Bratteli diagram: finitely many explicit levels, optionally
/// followed by one level pattern repeated forever. Edges of each level are
/// kept sorted by (range, rank, source).
class Diagram {
 public:
  Diagram() = default;
  /// levels[0] is the root level (no edges). Throws InvalidArgument on
  /// references to vertices that do not exist; ordering defects are allowed
  /// and reported by validate().
  explicit Diagram(std::vector<Level> levels, std::optional<Level> stationary_tail = std::nullopt);

  /// Index of the deepest explicit level.
  std::size_t truncation() const noexcept { return levels_.size() - 1; }
  bool stationary() const noexcept { return tail_.has_value(); }
  const std::optional<Level>& tail() const noexcept { return tail_; }
  bool has_level(std::size_t n) const noexcept { return n < levels_.size() || tail_.has_value(); }
  /// Throws InvalidArgument past the truncation of a diagram without a tail.
  const Level& level(std::size_t n) const;
  std::size_t vertex_count(std::size_t n) const { return level(n).vertices; }

  /// Edge indices of level n arriving at v, in rank order.
  std::vector<std::size_t> incoming(std::size_t n, std::size_t v) const;
  /// The edge into v with the given rank, if any.
  std::optional<std::size_t> edge_with_rank(std::size_t n, std::size_t v, std::size_t rank) const;

  /// The first N levels as an explicit diagram without a tail.
  Diagram truncated(std::size_t n) const;

  /// Canonical `bbd 1` text.
  std::string to_text() const;
  /// Throws ParseError with line:column for syntax and semantic errors.
  static Diagram parse(std::string_view text);

  friend bool operator==(const Diagram&, const Diagram&) = default;

 private:
  std::vector<Level> levels_{Level{1, {}}};
  std::optional<Level> tail_;
};

enum class DefectKind { RootNotSingleton, MissingIncoming, MissingOutgoing, DuplicateRank, RankGap };

struct Defect {
  DefectKind kind;
  std::size_t level;
  std::size_t vertex;
  std::string message;
};

std::string to_string(DefectKind kind);

/// Structural checks up to the given level; an empty report means valid.
std::vector<Defect> validate(const Diagram& d, std::size_t up_to_level);

using Matrix = std::vector<std::vector<BigInt>>;

/// Entry (i, k) counts edges from vertex k of level n-1 to vertex i of level n.
Matrix incidence(const Diagram& d, std::size_t n);
Matrix multiply(const Matrix& a, const Matrix& b);

/// Keeps levels m_0 = 0 < m_1 < ... and replaces the levels between them by
/// composite paths, ordered with the last edge most significant.
Diagram telescope(const Diagram& d, const std::vector<std::size_t>& cuts);

/// Inserts a level before level n with one vertex per edge of level n.
Diagram split(const Diagram& d, std::size_t n);

/// Block structure used by the special-diagram conditions. For level n >= 1,
/// `core0` and `core1` partition the core block V_nn and `far[j]` (j > n) are
/// the remaining blocks.
struct SpecialLevel {
  std::vector<std::size_t> core0;
  std::vector<std::size_t> core1;
  std::map<std::size_t, std::vector<std::size_t>> far;
};

struct SpecialDiagramSpec {
  std::vector<SpecialLevel> levels;  // levels[n - 1] describes level n
};

struct SpecialViolation {
  std::string clause;
  std::size_t level;
  std::string message;
};

std::vector<SpecialViolation> validate_special(const Diagram& d, const SpecialDiagramSpec& spec,
                                               std::size_t up_to_level);

enum class Answer { Yes, No, Unknown };
std::string to_string(Answer a);

struct ExtremesVerdict {
  Answer answer;
  std::size_t checked_level;  // truncation inspected for Unknown answers
  std::string reason;
};

/// Decides whether the diagram is free of cofinal maximal and minimal paths.
/// Decided for stationary diagrams, or certified by a special-diagram block
/// structure that validates; otherwise Unknown.
ExtremesVerdict check_no_cofinal_extremes(const Diagram& d, const SpecialDiagramSpec* spec = nullptr);

}  // namespace bvdyn
