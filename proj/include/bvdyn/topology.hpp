#pragma once

#include <cstddef>
#include <vector>

#include "bvdyn/cylmap.hpp"
#include "bvdyn/diagram.hpp"
#include "bvdyn/measure.hpp"
#include "bvdyn/numeric.hpp"

namespace bvdyn {

struct Interval {
  Rational lo;
  Rational hi;

  bool exact() const { return lo == hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Bounds on mu(E(S, T)) from the depth-d classification; atoms are decided pointwise.
Interval dist_uniform(const CylMap& s, const CylMap& t, const MeasureSpec& mu, std::size_t depth);

struct SymDiffResult {
  Rational lower;               // max of mu(TF delta SF) over unions F of depth-d cylinders
  Rational upper;               // mu(T E0) + mu(S E0)
  std::vector<Word> witness;    // an F attaining the lower bound
  bool exhaustive = false;      // lower bound from the full subset search
  std::size_t cylinders = 0;    // number of depth-d cylinders searched
};

/// Exhaustive when there are at most `exhaustive_limit` depth-d cylinders,
/// otherwise a greedy ascent with restarts.
SymDiffResult sup_symdiff(const CylMap& s, const CylMap& t, const MeasureSpec& mu, std::size_t depth,
                          std::size_t exhaustive_limit = 20);

/// sup over F of |mu(TF) - mu(SF)|: the positive part of mu o T - mu o S on
/// depth-d cylinders plus the exact atomic part.
Rational sup_abs_diff(const CylMap& s, const CylMap& t, const MeasureSpec& mu, std::size_t depth);

/// SF = TF for every listed cylinder union F.
Answer in_W(const CylMap& s, const CylMap& t, const std::vector<std::vector<Word>>& sets);

struct WbarResult {
  Answer answer = Answer::Unknown;
  Rational worst;  // largest mu(SF delta TF) + mu(S^-1 F delta T^-1 F) over sets and measures
};

WbarResult in_Wbar(const CylMap& s, const CylMap& t, const std::vector<std::vector<Word>>& sets,
                   const std::vector<MeasureSpec>& measures, const Rational& eps);

/// mu(SF delta TF) for a cylinder union F.
Rational symdiff_mass(const CylMap& s, const CylMap& t, const MeasureSpec& mu, const std::vector<Word>& f);

/// sup d(Sx, Tx) + sup d(S^-1 x, T^-1 x) under the adic metric 1/(n + 1).
Interval d_D(const CylMap& s, const CylMap& t, std::size_t depth = 0);
/// The first term alone.
Rational sup_distance(const CylMap& s, const CylMap& t);

/// The largest delta below which small sup_abs_diff forces every listed atom
/// to be fixed: the minimum over measures of the gaps between the first n0
/// atom weights and the weights themselves.
Rational atomic_delta(const std::vector<MeasureSpec>& measures, std::size_t n0);

struct SeparationWitness {
  CylMap t;
  CylMap s;
  MeasureSpec mu;
  std::size_t depth;
  Rational sup_abs_diff;
  Interval dist;
};

/// The odometer and its third periodic approximant under the uniform
/// measure: equal pushforwards, yet they differ on a set of mass 1/4.
SeparationWitness separation_witness(std::size_t depth = 4);

}  // namespace bvdyn
