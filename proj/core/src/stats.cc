#include "strikebench/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "strikebench/error.h"

namespace strikebench {
namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

Moments moments(std::span<const double> x) {
  Moments m;
  m.mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  if (x.size() > 1) {
    double ss = 0.0;
    for (const double v : x) ss += (v - m.mean) * (v - m.mean);
    m.var = ss / static_cast<double>(x.size() - 1);
  }
  return m;
}

}  // namespace

SignificanceResult group_significance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw ConfigError("significance test needs two non-empty groups");
  }
  SignificanceResult result;
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());

  if (a.size() >= 2 && b.size() >= 2) {
    const auto ma = moments(a);
    const auto mb = moments(b);
    const double qa = ma.var / na;
    const double qb = mb.var / nb;
    const double se2 = qa + qb;
    if (se2 > 0.0) {
      const double t = (ma.mean - mb.mean) / std::sqrt(se2);
      const double df = se2 * se2 / (qa * qa / (na - 1) + qb * qb / (nb - 1));
      boost::math::students_t dist(df);
      result.welch_t = t;
      result.welch_df = df;
      result.welch_p = boost::math::cdf(boost::math::complement(dist, t));
    }
  }

  // Midranks over the pooled sample.
  std::vector<std::pair<double, bool>> pooled;
  pooled.reserve(a.size() + b.size());
  for (const double v : a) pooled.emplace_back(v, true);
  for (const double v : b) pooled.emplace_back(v, false);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  const std::size_t n = pooled.size();
  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && pooled[j].first == pooled[i].first) ++j;
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].second) rank_sum_a += mid;
    }
    const auto t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double u = rank_sum_a - na * (na + 1) / 2.0;
  result.mannwhitney_u = u;

  const double total = static_cast<double>(n);
  const double var = na * nb / 12.0 * ((total + 1) - tie_term / (total * (total - 1)));
  if (n > 1 && var > 0.0) {
    const double z = (u - na * nb / 2.0 - 0.5) / std::sqrt(var);
    result.mannwhitney_p = boost::math::cdf(boost::math::complement(boost::math::normal(), z));
  }
  return result;
}

}  // namespace strikebench
