#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "shapedecomp/poly9.hpp"

namespace shapedecomp {

// Row-echelon span of polynomials over Q, keyed by leading monomial.
class LinearSpan {
 public:
  // Returns true when p was independent of the current span.
  bool add(const Poly9& p);
  bool contains(const Poly9& p) const;
  int rank() const noexcept { return static_cast<int>(pivots_.size()); }

  // Coordinates of p in terms of the polynomials passed to add() (in order of
  // successful insertion), or nullopt when p lies outside the span.
  std::optional<std::vector<Rational>> solve(const Poly9& p) const;

 private:
  struct Pivot {
    Poly9 row;                     // monic in its leading monomial
    std::vector<Rational> combo;   // row = Σ combo[i] · inputs[i]
  };
  Poly9 reduce(Poly9 p, std::vector<Rational>* combo) const;

  std::map<std::uint64_t, Pivot> pivots_;
  std::size_t inputs_ = 0;
};

}  // namespace shapedecomp
