#include <algorithm>
#include <numeric>

#include "demibit/reduction.hpp"

namespace demibit {

bool HybridTrace::telescopes() const {
  if (points.empty() || gaps.size() + 1 != points.size()) return false;
  const Rational sum = std::accumulate(gaps.begin(), gaps.end(), Rational(0));
  return sum == points.front() - points.back();
}

std::size_t HybridTrace::argmax(const std::vector<Rational>& gaps) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < gaps.size(); ++k)
    if (gaps[k] > gaps[best]) best = k;
  return best + 1;
}

HybridTrace HybridTrace::from_points(std::vector<Rational> points) {
  HybridTrace t;
  for (std::size_t k = 1; k < points.size(); ++k) t.gaps.push_back(points[k - 1] - points[k]);
  t.points = std::move(points);
  if (!t.gaps.empty()) t.i_star = argmax(t.gaps);
  return t;
}

bool ReductionCertificate::holds() const {
  return !clauses.empty() && std::all_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.holds(); });
}

}  // namespace demibit
