#include "hyperasym/series.hpp"

#include <algorithm>
#include <stdexcept>

namespace hyperasym {

TruncatedSeries ps_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  std::size_t n = std::min(a.order(), b.order());
  TruncatedSeries out{std::vector<Complex>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{};
    for (std::size_t j = 0; j <= k; ++j) acc += a[j] * b[k - j];
    out[k] = acc;
  }
  return out;
}

TruncatedSeries ps_pow(const TruncatedSeries& h, const Real& e) {
  if (h.order() == 0) return h;
  if (!(h[0] == Complex(Real(1))))
    throw std::invalid_argument("ps_pow: series must have unit leading coefficient");
  std::size_t n = h.order();
  TruncatedSeries c{std::vector<Complex>(n)};
  c[0] = Complex(Real(1));
  // Miller recurrence: k*c_k = sum_{j=1..k} ((e+1)j - k) h_j c_{k-j}.
  for (std::size_t k = 1; k < n; ++k) {
    Complex acc{};
    for (std::size_t j = 1; j <= k; ++j)
      acc += Complex((e + 1) * Real(static_cast<long>(j)) - Real(static_cast<long>(k))) *
             h[j] * c[k - j];
    c[k] = acc / Real(static_cast<long>(k));
  }
  return c;
}

}  // namespace hyperasym
