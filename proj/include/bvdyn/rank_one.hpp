#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bvdyn/diagram.hpp"
#include "bvdyn/numeric.hpp"
#include "bvdyn/vershik.hpp"

namespace bvdyn {

/// Stage n cuts the current tower into `spacers.size()` columns and puts
/// spacers[k] new levels on top of column k before stacking left to right.
struct CuttingStage {
  std::vector<std::size_t> spacers;

  std::size_t cuts() const noexcept { return spacers.size(); }
  friend bool operator==(const CuttingStage&, const CuttingStage&) = default;
};

struct CuttingStackingSpec {
  std::vector<CuttingStage> stages;  // stages[n - 1] is stage n

  bool no_spacers() const;
  /// p cuts and no spacers at each of the given number of stages.
  static CuttingStackingSpec uniform(std::size_t cuts, std::size_t stages);
  /// Lines `stage <n> cuts <p> spacers <m_1> ... <m_p>`; throws ParseError.
  static CuttingStackingSpec parse(std::string_view text);
  std::string to_text() const;

  friend bool operator==(const CuttingStackingSpec&, const CuttingStackingSpec&) = default;
};

/// A rank-one system as a Vershik system: vertex 0 of level n is the tower
/// after n stages, vertex 1 (present when some stage adds spacers) feeds the
/// spacers. Level 0 is the root.
struct RankOne {
  CuttingStackingSpec spec;
  Diagram diagram;
  std::vector<BigInt> heights;  // h_0 = 1, ..., h_N

  std::size_t stages() const noexcept { return heights.size() - 1; }
  bool has_spacer_vertex() const { return diagram.vertex_count(1) > 1; }
};

RankOne rank1_build(const CuttingStackingSpec& spec, std::size_t stages);

/// The stage-n approximant: the next level of the stage-n tower, undefined
/// on its top and off the tower.
std::optional<PathPrefix> approximant(const RankOne& r, std::size_t n, const PathPrefix& p);

/// Measures on the levels of the final tower: the normalized count of
/// levels, or the point mass of one level.
struct RankOneMeasure {
  bool atom = false;
  BigInt level;

  static RankOneMeasure uniform() { return {}; }
  static RankOneMeasure point(BigInt level) { return {true, std::move(level)}; }
};

struct OdometerApprox {
  std::optional<std::size_t> stage;  // smallest stage meeting every bound
  std::vector<Rational> bounds;      // mass of leftover, base and top per measure
  std::vector<Rational> distances;   // mass of E(S, T) per measure
  bool certified = false;            // every distance is below eps
  /// S on the levels of the final tower: a single cycle through the copies of
  /// the stage tower in order, then through the leftover levels.
  std::vector<std::uint64_t> s;
};

/// Level layout of the final tower relative to stage n: position inside a
/// copy of the stage-n tower, or -1 for levels added after stage n.
std::vector<long long> stage_layout(const RankOne& r, std::size_t n);

OdometerApprox odometer_approx(const RankOne& r, const std::vector<RankOneMeasure>& measures, const Rational& eps);

}  // namespace bvdyn
