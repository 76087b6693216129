#pragma once

#include <string>
#include <string_view>

#include "bvdyn/cylmap.hpp"
#include "bvdyn/diagram.hpp"
#include "bvdyn/numeric.hpp"
#include "bvdyn/seqspace.hpp"

namespace bvdyn {

/// An element of the mixed-radix adic integers: x = sum x_i p_{i-1}, with an
/// eventually periodic digit stream (least significant digit first).
class AdicInt {
 public:
  AdicInt(SeqSpace space, Point digits);

  static AdicInt zero(const SeqSpace& space);
  static AdicInt one(const SeqSpace& space);
  /// A non-negative integer, written in the mixed radix of the space.
  static AdicInt from_integer(const SeqSpace& space, const BigInt& n);
  /// "HEAD(PERIOD)@lambda", e.g. "110(0)@2".
  static AdicInt parse(std::string_view text);
  /// Parses the digit part against a known space.
  static AdicInt parse(const SeqSpace& space, std::string_view digits);

  const SeqSpace& space() const noexcept { return space_; }
  const Point& digits() const noexcept { return digits_; }
  std::string to_string() const;

  friend bool operator==(const AdicInt&, const AdicInt&) = default;

 private:
  SeqSpace space_;
  Point digits_;
};

AdicInt add_one(const AdicInt& x);
AdicInt add(const AdicInt& x, const AdicInt& b);
AdicInt neg(const AdicInt& x);
AdicInt subtract(const AdicInt& x, const AdicInt& b);

/// 1/(n+1) where n is the first index at which the digits differ; 0 if equal.
Rational adic_metric(const AdicInt& x, const AdicInt& y);

/// The odometer x -> x + 1 as a transducer.
CylMap odometer_map(const SeqSpace& space);
/// x -> x + b. The carry states are finite because b is eventually periodic.
CylMap translation_map(const AdicInt& b, std::uint64_t budget = CylMap::kDefaultBudget);

/// Single vertex per level, lambda_{n-1} parallel edges at level n ordered by digit.
Diagram to_vershik_diagram(const SeqSpace& space, std::size_t levels);

}  // namespace bvdyn
