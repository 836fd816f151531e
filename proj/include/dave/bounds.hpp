#pragma once

// Numerical checks for the asymptotic settlement bound: finite discrete
// sequences, the binomial kernel and its powers, the per-round recurrence on
// demotion distributions, the ramp bound, and the round threshold J.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "dave/error.hpp"

namespace dave {

// Slack added to floating-point right-hand sides before comparing them with
// exact integer counts.
inline constexpr double bound_slack = 1e-9;

// Finite-support sequence: values[i] sits at index offset + i.
struct sequence {
  std::int64_t offset = 0;
  std::vector<double> values;

  double operator[](std::int64_t k) const {
    std::int64_t i = k - offset;
    return (i < 0 || i >= static_cast<std::int64_t>(values.size())) ? 0.0 : values[static_cast<std::size_t>(i)];
  }

  std::int64_t first() const { return offset; }
  std::int64_t last() const { return offset + static_cast<std::int64_t>(values.size()) - 1; }
  bool empty() const { return values.empty(); }

  // Strips explicit zeros at both ends.
  sequence& normalize() {
    std::size_t b = 0, e = values.size();
    while (b < e && values[b] == 0.0) ++b;
    while (e > b && values[e - 1] == 0.0) --e;
    values = std::vector<double>(values.begin() + static_cast<std::ptrdiff_t>(b),
                                 values.begin() + static_cast<std::ptrdiff_t>(e));
    offset = values.empty() ? 0 : offset + static_cast<std::int64_t>(b);
    return *this;
  }
};

inline sequence make_sequence(std::int64_t offset, std::vector<double> values) {
  sequence s{offset, std::move(values)};
  s.normalize();
  return s;
}

inline sequence delta(std::int64_t i) { return {i, {1.0}}; }

// Unit step and unit ramp starting at i, truncated after index `last`.
inline sequence unit_step(std::int64_t i, std::int64_t last) {
  return make_sequence(i, std::vector<double>(static_cast<std::size_t>(std::max<std::int64_t>(0, last - i + 1)), 1.0));
}

inline sequence unit_ramp(std::int64_t i, std::int64_t last) {
  std::vector<double> v;
  for (std::int64_t k = i; k <= last; ++k) v.push_back(static_cast<double>(k - i + 1));
  return make_sequence(i, std::move(v));
}

inline sequence convolve(const sequence& x, const sequence& y) {
  if (x.empty() || y.empty()) return {};
  std::vector<double> z(x.values.size() + y.values.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.values.size(); ++i) {
    for (std::size_t j = 0; j < y.values.size(); ++j) z[i + j] += x.values[i] * y.values[j];
  }
  return make_sequence(x.offset + y.offset, std::move(z));
}

inline sequence add(const sequence& x, const sequence& y) {
  if (x.empty()) return y;
  if (y.empty()) return x;
  std::int64_t lo = std::min(x.first(), y.first()), hi = std::max(x.last(), y.last());
  std::vector<double> v;
  for (std::int64_t k = lo; k <= hi; ++k) v.push_back(x[k] + y[k]);
  return make_sequence(lo, std::move(v));
}

inline sequence scale(double a, sequence x) {
  for (auto& v : x.values) v *= a;
  return x.normalize();
}

struct bound_params {
  std::uint32_t G = 2;
  double q = 0.5;
  double p = 0.5;
};

inline bound_params make_bound_params(std::uint32_t G) {
  if (G < 2) throw error(errc::invalid_param, "G must be >= 2");
  double q = 1.0 / G;
  return {G, q, 1.0 - q};
}

inline sequence binomial_kernel(std::uint32_t G) {
  auto bp = make_bound_params(G);
  return {0, {bp.q, bp.p}};
}

// b^j[k] = C(j,k) p^k q^(j-k), in log space.
inline double auto_convolution(std::uint32_t G, std::uint64_t j, std::int64_t k) {
  auto bp = make_bound_params(G);
  if (k < 0 || static_cast<std::uint64_t>(k) > j) return 0.0;
  auto jj = static_cast<double>(j), kk = static_cast<double>(k);
  double lg = std::lgamma(jj + 1) - std::lgamma(kk + 1) - std::lgamma(jj - kk + 1);
  return std::exp(lg + kk * std::log(bp.p) + (jj - kk) * std::log(bp.q));
}

// d_{j+1}[k] <= p d_j[k-1] + q d_j[k] + 4p for k >= 1, and
// d_{j+1}[0] <= q d_j[0] + p.
inline bool recurrence_check(std::span<const std::uint64_t> before, std::span<const std::uint64_t> after,
                             std::uint32_t G) {
  auto bp = make_bound_params(G);
  for (std::size_t k = 0; k < after.size(); ++k) {
    double dk = k < before.size() ? static_cast<double>(before[k]) : 0.0;
    double rhs = k == 0 ? bp.q * dk + bp.p
                        : bp.p * static_cast<double>(before[k - 1]) + bp.q * dk + 4 * bp.p;
    if (static_cast<double>(after[k]) > rhs * (1 + bound_slack) + bound_slack) return false;
  }
  return true;
}

// r'_0[k] = r_0[k] + 3 r_1[k] = 4k + 1.
inline double ramp_offset(std::int64_t k) { return k < 0 ? 0.0 : 4.0 * static_cast<double>(k) + 1.0; }

// d_j <= N b^j + r'_0, pointwise.
inline bool ramp_bound_check(std::span<const std::uint64_t> d, std::uint64_t N, std::uint64_t j, std::uint32_t G) {
  for (std::size_t k = 0; k < d.size(); ++k) {
    auto kk = static_cast<std::int64_t>(k);
    double rhs = static_cast<double>(N) * auto_convolution(G, j, kk) + ramp_offset(kk);
    if (static_cast<double>(d[k]) > rhs * (1 + bound_slack) + bound_slack) return false;
  }
  return true;
}

// d <= r'_0 pointwise (the slope-4 ramp).
inline bool under_ramp(std::span<const std::uint64_t> d) {
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (static_cast<double>(d[k]) > ramp_offset(static_cast<std::int64_t>(k))) return false;
  }
  return true;
}

inline double log_g(double x, std::uint32_t G) { return std::log(x) / std::log(static_cast<double>(G)); }

inline double big_j_bound(std::uint32_t K, std::uint32_t G, std::uint64_t N) {
  double L = log_g(static_cast<double>(N), G);
  return 4.0 * K + L + 2.0 * std::sqrt(K * L);
}

// Rounds after which N b^j[k] < 1 for every k < K, from the logarithmic lower
// bound on the W_{-1} branch.
inline std::uint64_t j_threshold(std::uint32_t K, std::uint32_t G, std::uint64_t N) {
  if (K < 1 || N < 2) throw error(errc::invalid_param, "j_threshold needs K >= 1 and N >= 2");
  auto bp = make_bound_params(G);
  const double e = std::numbers::e;
  double lq = std::log(bp.q);
  double alpha = bp.q * lq / (e * bp.p * std::pow(static_cast<double>(N), 1.0 / K));
  if (!(alpha > -1.0 / e && alpha < 0.0)) {
    throw error(errc::alpha_out_of_domain, "alpha=" + std::to_string(alpha) + " outside (-1/e, 0)");
  }
  double j = K * std::log(-alpha) / lq - std::sqrt(2.0) * K * std::sqrt(-std::log(-e * alpha)) / lq;
  auto J = static_cast<std::uint64_t>(std::ceil(j));
  if (static_cast<double>(J) > big_j_bound(K, G, N) + bound_slack) {
    throw error(errc::precondition_violated, "J=" + std::to_string(J) + " exceeds its closed-form bound");
  }
  return J;
}

inline double settlement_bound(std::uint32_t K, std::uint32_t G, std::uint64_t N) {
  double L = log_g(static_cast<double>(N), G);
  return 13.0 * K + L + 2.0 * std::sqrt(K * L);
}

inline double binomial_pmf(std::uint64_t n, double p, std::uint64_t i) {
  if (i > n) return 0.0;
  if (p <= 0.0) return i == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return i == n ? 1.0 : 0.0;
  auto nn = static_cast<double>(n), ii = static_cast<double>(i);
  return std::exp(std::lgamma(nn + 1) - std::lgamma(ii + 1) - std::lgamma(nn - ii + 1) + ii * std::log(p) +
                  (nn - ii) * std::log1p(-p));
}

// P[Bin(n,p) <= k] <= exp(-2n (p - k/n)^2), for k <= np.
inline bool hoeffding_tail_check(std::uint64_t n, double p, std::uint64_t k) {
  if (static_cast<double>(k) > static_cast<double>(n) * p + 1e-12) {
    throw error(errc::precondition_violated, "k > np");
  }
  double cdf = 0.0;
  for (std::uint64_t i = 0; i <= k; ++i) cdf += binomial_pmf(n, p, i);
  double gap = p - static_cast<double>(k) / static_cast<double>(n);
  return cdf <= std::exp(-2.0 * static_cast<double>(n) * gap * gap) * (1 + bound_slack);
}

}  // namespace dave
