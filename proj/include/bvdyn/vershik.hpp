#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bvdyn/diagram.hpp"
#include "bvdyn/numeric.hpp"

namespace bvdyn {

/// h(n, v): number of paths from the root to vertex v of level n.
BigInt height(const Diagram& d, std::size_t n, std::size_t v);
/// Heights of every vertex of level n.
std::vector<BigInt> heights(const Diagram& d, std::size_t n);

/// A finite path from the root: edges[i] indexes the edges of level i + 1.
struct PathPrefix {
  std::vector<std::size_t> edges;

  friend bool operator==(const PathPrefix&, const PathPrefix&) = default;
};

/// Checks adjacency and returns the terminal vertex.
std::size_t terminal_vertex(const Diagram& d, const PathPrefix& p);

/// Position of the path in the ordered enumeration of paths into its terminal vertex.
BigInt rank(const Diagram& d, const PathPrefix& p);
PathPrefix unrank(const Diagram& d, std::size_t n, std::size_t v, const BigInt& i);

/// Order labels (edge ranks) and range vertices of a path.
std::vector<std::size_t> labels(const Diagram& d, const PathPrefix& p);
std::vector<std::size_t> vertices(const Diagram& d, const PathPrefix& p);
/// "1,1,0", or "1,1,0@0,0,0" when vertices are included.
std::string format_path(const Diagram& d, const PathPrefix& p, bool with_vertices);
/// Reads labels with optional vertices; labels alone must determine the edges.
PathPrefix parse_path(const Diagram& d, std::string_view text);

/// An infinite path: a finite prefix continued by a generator that picks the
/// edge of level n leaving a given vertex of level n - 1. The generator must
/// be a pure function of (n, vertex); budget bounds how deep successor and
/// predecessor may search.
class LazyPath {
 public:
  using Generator = std::function<std::size_t(std::size_t level, std::size_t from_vertex)>;

  LazyPath(const Diagram& d, PathPrefix prefix, Generator tail, std::size_t budget);

  const Diagram& diagram() const noexcept { return *diagram_; }
  const PathPrefix& prefix() const noexcept { return prefix_; }
  std::size_t budget() const noexcept { return budget_; }
  /// The first n edges.
  PathPrefix materialize(std::size_t n) const;

  LazyPath with_prefix(PathPrefix p) const { return LazyPath(*diagram_, std::move(p), tail_, budget_); }

 private:
  const Diagram* diagram_;
  PathPrefix prefix_;
  Generator tail_;
  std::size_t budget_;
};

/// The path that follows the given order labels digit by digit (one vertex
/// per level), e.g. the adic digits of a point on an odometer diagram.
LazyPath path_from_labels(const Diagram& d, std::function<std::size_t(std::size_t level)> label,
                          std::size_t budget);

/// Vershik map: the next path in the ordering. Throws BudgetExceeded when
/// every edge within the budget is maximal.
LazyPath successor(const LazyPath& y);
LazyPath predecessor(const LazyPath& y);
/// The same step on a finite path; nullopt when every edge of the prefix is extreme.
std::optional<PathPrefix> successor(const Diagram& d, const PathPrefix& p);
std::optional<PathPrefix> predecessor(const Diagram& d, const PathPrefix& p);
/// Level at which successor/predecessor changes the edge (1-based).
std::size_t successor_level(const LazyPath& y);
std::size_t predecessor_level(const LazyPath& y);

struct PathCoord {
  std::vector<BigInt> index;           // i_n, n = 1..N
  std::vector<std::size_t> vertex;     // v_n
};

PathCoord coords(const LazyPath& y, std::size_t n);
PathCoord coords(const Diagram& d, const PathPrefix& p);

}  // namespace bvdyn
