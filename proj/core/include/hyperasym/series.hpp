#pragma once
// Truncated power-series arithmetic over complex coefficients.

#include "hyperasym/arith.hpp"

#include <vector>

namespace hyperasym {

// Coefficients in ascending powers of the local variable; `order()` is the
// number of stored coefficients (results are exact through order-1).
struct TruncatedSeries {
  std::vector<Complex> coefficients;

  TruncatedSeries() = default;
  explicit TruncatedSeries(std::vector<Complex> c) : coefficients(std::move(c)) {}
  std::size_t order() const { return coefficients.size(); }
  const Complex& operator[](std::size_t k) const { return coefficients[k]; }
  Complex& operator[](std::size_t k) { return coefficients[k]; }
};

// Cauchy product truncated to the smaller order.
TruncatedSeries ps_mul(const TruncatedSeries& a, const TruncatedSeries& b);

// h^e for a unit series (h[0] == 1), via the J.C.P. Miller recurrence.
// Throws std::invalid_argument when the leading coefficient is not 1.
TruncatedSeries ps_pow(const TruncatedSeries& h, const Real& e);

}  // namespace hyperasym
