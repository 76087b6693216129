#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bvdyn/cylmap.hpp"
#include "bvdyn/measure.hpp"
#include "bvdyn/numeric.hpp"

namespace bvdyn {

enum class CellClass { Equal, Different, Unresolved };
std::string to_string(CellClass c);

/// Classification of the depth-d cylinders by how two maps compare on them.
/// Points where an exceptional override makes the maps disagree are listed
/// separately; they carry no mass unless a measure has atoms there.
struct Classification {
  std::size_t depth = 0;
  std::vector<CellClass> cells;  // indexed by cylinder index at `depth`
  std::vector<Point> exceptional;

  std::vector<std::uint64_t> indices(CellClass c) const;
};

/// Where S and T disagree: {x : Sx != Tx}.
Classification diff_set(const CylMap& s, const CylMap& t, std::size_t depth);
/// Where S, T or their inverses disagree.
Classification e_set(const CylMap& s, const CylMap& t, std::size_t depth);

/// A finite union of cylinders and single points.
struct Region {
  std::vector<Word> cylinders;
  std::vector<Point> points;
};

/// Exact measure of a region; throws InvalidArgument if its pieces overlap.
Rational measure(const MeasureSpec& mu, const Region& a);
/// mu(S A) for a union of cylinders A.
Rational pushforward_measure(const MeasureSpec& mu, const CylMap& s, const std::vector<Word>& a);

/// True if the point lies in the cylinder [w].
bool in_cylinder(const Point& x, const Word& w);

/// Indices of the depth-d cylinders covered by a union of cylinders of depth <= d.
std::vector<std::uint64_t> cells_of(const SeqSpace& space, std::size_t depth, const std::vector<Word>& cylinders);
/// The coarsest cylinder union equal to a set of depth-d cylinders, in lexicographic order.
std::vector<Word> compress_cells(const SeqSpace& space, std::size_t depth, std::vector<std::uint64_t> cells);
/// Largest word length in a cylinder union.
std::size_t max_depth(const std::vector<Word>& cylinders);

}  // namespace bvdyn
