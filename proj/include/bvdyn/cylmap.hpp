#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bvdyn/seqspace.hpp"

namespace bvdyn {

/// One state of a synchronous transducer. It reads a digit at a level of
/// class `cls`, writes out[digit] and moves to next[digit].
struct MealyNode {
  std::size_t cls = 0;
  std::vector<Digit> out;
  std::vector<std::size_t> next;

  friend bool operator==(const MealyNode&, const MealyNode&) = default;
};

/// Coarsest partition of the nodes into blocks of functionally equal states.
std::vector<std::size_t> moore_blocks(const std::vector<MealyNode>& nodes);

/// Nodes that act as the identity on every tail.
std::vector<bool> identity_nodes(const std::vector<MealyNode>& nodes);

/// A bijection of a sequence space given by a length-preserving prefix rewrite.
///
/// The first H digits are rewritten through a finite table (which may look
/// ahead across all H digits); the rest of the stream is rewritten digit by
/// digit by a finite transducer whose states are bijective on each digit.
/// Finitely many eventually periodic points may be overridden, provided the
/// overrides permute the automaton images of their domain.
///
/// Every value is kept in canonical form (minimal head depth, minimal
/// transducer, normalized overrides), so equality of maps is structural.
class CylMap {
 public:
  static constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 16;

  CylMap(SeqSpace space, std::size_t head_depth, std::vector<Word> head_out, std::vector<std::size_t> head_next,
         std::vector<MealyNode> nodes, std::map<Point, Point> overrides = {},
         std::uint64_t budget = kDefaultBudget);

  static CylMap identity(const SeqSpace& space);
  /// Rewrites prefixes by the given rules and carries every tail unchanged.
  static CylMap from_prefix_rules(const SeqSpace& space, const std::vector<std::pair<Word, Word>>& rules);

  /// Parses the `cylmap 1` text format. Throws ParseError with line:column.
  static CylMap parse(std::string_view text);
  std::string to_text() const;

  const SeqSpace& space() const noexcept { return space_; }
  std::size_t head_depth() const noexcept { return head_depth_; }
  const std::vector<Word>& head_out() const noexcept { return head_out_; }
  const std::vector<std::size_t>& head_next() const noexcept { return head_next_; }
  const std::vector<MealyNode>& nodes() const noexcept { return nodes_; }
  const std::map<Point, Point>& overrides() const noexcept { return overrides_; }
  bool has_overrides() const noexcept { return !overrides_.empty(); }

  /// Depth past which every cylinder is rewritten by a fixed prefix rule with
  /// an identical tail; nullopt when unbounded carries make the table lazy.
  std::optional<std::size_t> resolving_depth() const;
  bool is_identity() const;

  /// Image of a point, including overrides.
  Point apply(const Point& x) const;
  /// Image of a point under the transducer alone.
  Point apply_automaton(const Point& x) const;

  /// For |u| >= head_depth: the image of [u] is the cylinder [word], and the
  /// tail beyond |u| is rewritten by the node `state`.
  struct Read {
    Word word;
    std::size_t state;
  };
  Read read(const Word& u) const;
  Word image_word(const Word& u) const { return read(u).word; }

  /// Permutation of depth-d cylinder indices induced by the map; d >= head_depth.
  std::vector<std::uint64_t> cylinder_permutation(std::size_t depth) const;

  /// Prefix rules u -> w after which the tail is carried identically, in
  /// lexicographic order of u, enumerated up to max_depth. Sets *complete to
  /// false if some branch is still unresolved at max_depth.
  std::vector<std::pair<Word, Word>> rules(std::size_t max_depth, bool* complete = nullptr,
                                           std::uint64_t budget = kDefaultBudget) const;

  CylMap inverse() const;
  CylMap power(long long n) const;

  friend bool operator==(const CylMap&, const CylMap&) = default;

 private:
  CylMap() = default;
  void validate() const;
  void canonicalize(std::uint64_t budget);
  void expand_head_to(std::size_t depth, std::uint64_t budget);
  Point apply_inverse_full(const Point& y) const;

  friend CylMap compose(const CylMap& s, const CylMap& t, std::uint64_t budget);

  SeqSpace space_;
  std::size_t head_depth_ = 0;
  std::vector<Word> head_out_;
  std::vector<std::size_t> head_next_;
  std::vector<MealyNode> nodes_;
  std::map<Point, Point> overrides_;
};

/// s o t: apply t first, then s.
CylMap compose(const CylMap& s, const CylMap& t, std::uint64_t budget = CylMap::kDefaultBudget);

/// A map that applies T^{n_j} on the cylinder [u_j]; the cylinders must
/// partition the space and the result must be a bijection.
CylMap piecewise_power(const CylMap& t, const std::vector<std::pair<Word, long long>>& pieces,
                       std::uint64_t budget = CylMap::kDefaultBudget);

}  // namespace bvdyn
