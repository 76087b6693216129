#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bvdyn/cylmap.hpp"
#include "bvdyn/diagram.hpp"
#include "bvdyn/measure.hpp"
#include "bvdyn/numeric.hpp"
#include "bvdyn/vershik.hpp"

namespace bvdyn {

using CylUnion = std::vector<Word>;

/// A nested sequence of marker sets A_1 > A_2 > ... for an automorphism T
/// (A_0 is the whole space).
struct MarkerSeq {
  CylMap t;
  std::function<CylUnion(std::size_t)> set;
  std::string name;
  /// How the empty intersection of the A_n is certified; empty if it is not.
  std::string vanishing;
  /// Number of levels that are defined; unbounded for generated sequences.
  std::size_t defined_levels = static_cast<std::size_t>(-1);

  CylUnion at(std::size_t n) const;

  /// A_n = [0^n].
  static MarkerSeq zeros(const CylMap& t);
  /// A_n = [top^n], the cylinder of maximal digits.
  static MarkerSeq ones(const CylMap& t);
  /// Explicit sets A_1..A_N; asking for a deeper level is an error.
  static MarkerSeq from_list(const CylMap& t, std::vector<CylUnion> sets, std::string name = "explicit");
};

/// One T-tower: the base cells (columns) and their images up to height - 1.
struct Tower {
  std::size_t height = 0;
  std::vector<std::uint64_t> base;
};

/// Towers over a set A, grouped by return time, at a fixed cylinder depth.
/// T permutes the cylinders of that depth, so return times are exact.
struct TowerPartition {
  SeqSpace space;
  std::size_t depth = 0;
  std::vector<std::uint64_t> perm;
  std::vector<Tower> towers;             // ascending height
  std::vector<std::uint64_t> uncovered;  // cells whose orbit never meets A

  std::vector<std::uint64_t> level_cells(std::size_t tower, std::size_t level) const;
  CylUnion level(std::size_t tower, std::size_t level) const;
  CylUnion base(std::size_t tower) const { return level(tower, 0); }
  CylUnion top(std::size_t tower) const { return level(tower, towers.at(tower).height - 1); }
  bool covers() const { return uncovered.empty(); }
};

/// Return-time towers over A at depth max(depth, rewrite depth, depth of A).
TowerPartition build_towers(const CylMap& t, const CylUnion& a, std::size_t depth = 0);

struct ClauseResult {
  std::string clause;
  Answer answer = Answer::Unknown;
  std::string message;
};

struct MarkerReport {
  std::size_t depth = 0;
  std::vector<ClauseResult> clauses;
  bool passed() const;
};

/// Checks nesting, vanishing, complete sections, recurrence, disjointness of
/// A_n from its first n - 1 images, and uncountable bases for A_1..A_n.
MarkerReport validate_markers(const MarkerSeq& m, std::size_t n, std::size_t depth);

struct KMaximal {
  std::size_t k = 0;
  std::vector<std::uint64_t> cells;
  CylUnion set;
  bool covering = false;  // union of T^i A over |i| < k is the space
  bool disjoint = false;  // A and T^i A are disjoint for 0 < i < k
};

/// Every k-th level of each tower, floor(h/k) strides from the base.
KMaximal k_maximal(const TowerPartition& xi, std::size_t k);

/// First-return map of T on A, the identity off A.
CylMap induced(const CylMap& t, const CylUnion& a, std::size_t depth = 0);

/// Pieces (cylinder, exponent) of the return-time cocycle of the induced map.
std::vector<std::pair<Word, long long>> induced_pieces(const CylMap& t, const CylUnion& a, std::size_t depth = 0);

/// T off the tower tops, T^{-(k-1)} on the top of each height-k tower.
CylMap periodic_approx(const MarkerSeq& m, std::size_t n);
std::vector<std::pair<Word, long long>> periodic_pieces(const MarkerSeq& m, std::size_t n);

struct TowerSummary {
  std::size_t height = 0;
  CylUnion base;
  std::vector<Rational> mass;  // per measure, mass of the whole tower
};

struct RokhlinMeasureReport {
  Rational short_towers;  // mass of the towers lower than m
  Rational top_band;      // mass of the m - 1 levels ending at the tops of the other towers
  Rational coverage;      // mass of F u TF u ... u T^{m-1}F
};

struct RokhlinResult {
  std::size_t n = 0;
  std::size_t m = 0;
  Rational eps;
  std::size_t depth = 0;
  CylUnion f;
  std::vector<std::uint64_t> f_cells;
  bool disjoint = false;
  bool bounds_hold = false;  // both smallness conditions on the chosen n
  bool certified = false;    // disjoint and every coverage exceeds 1 - eps
  std::vector<RokhlinMeasureReport> measures;
  std::vector<TowerSummary> towers;
};

/// The Rokhlin set over the marker towers. Without a forced n, picks the
/// smallest n <= max_n satisfying both smallness conditions.
RokhlinResult rokhlin_set(const MarkerSeq& markers, std::size_t m, const Rational& eps,
                          const std::vector<MeasureSpec>& measures, std::optional<std::size_t> n = std::nullopt,
                          std::size_t max_n = 16);

/// The ordered diagram of the nested tower partitions over A_1..A_N, with the
/// map sending a cylinder to the path of tower levels containing it.
class MarkerDiagram {
 public:
  MarkerDiagram(const MarkerSeq& markers, std::size_t levels);

  const Diagram& diagram() const noexcept { return diagram_; }
  std::size_t depth() const noexcept { return depth_; }
  std::size_t levels() const noexcept { return levels_; }
  /// Tower heights h(n, v) read off the partitions.
  const std::vector<std::vector<BigInt>>& tower_heights() const noexcept { return heights_; }

  PathPrefix coordinates(const Point& x) const;
  PathPrefix coordinates_of_cell(std::uint64_t cell) const;

  struct Conjugacy {
    std::size_t checked = 0;
    std::size_t skipped = 0;  // prefixes that are maximal on every level
    std::vector<Point> failures;
  };
  /// Compares F(Tx) with the Vershik successor of F(x) on each sample.
  Conjugacy check_conjugacy(const std::vector<Point>& samples) const;

 private:
  struct Step {
    std::size_t vertex;
    std::uint64_t offset;
    std::size_t edge;
  };
  CylMap t_;
  std::size_t levels_;
  std::size_t depth_ = 0;
  Diagram diagram_;
  std::vector<std::uint64_t> inv_perm_;
  std::vector<std::vector<long long>> vertex_;          // [n][cell] vertex of a base cell, -1 elsewhere
  std::vector<std::vector<std::vector<Step>>> route_;  // [n][v] traversals of level n - 1 towers
  std::vector<std::vector<BigInt>> heights_;
};

/// Masses of every depth-d cylinder, atoms included.
std::vector<Rational> cell_masses(const MeasureSpec& mu, const CylinderIndexer& idx);

}  // namespace bvdyn
