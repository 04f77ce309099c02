#include "chd/field.hpp"

namespace chd {

double pairwise_sum(std::span<const double> a) {
  const size_t n = a.size();
  if (n <= 32) {
    double s = 0.0;
    for (double x : a) s += x;
    return s;
  }
  const size_t half = n / 2;
  return pairwise_sum(a.first(half)) + pairwise_sum(a.subspan(half));
}

}  // namespace chd
