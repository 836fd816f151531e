#pragma once

// Worst-case delay D(K,G,N) under the maximum-delay strategy, its step-curve
// breakpoints and regression fit, grace-period schedules, and economics.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "dave/adversary.hpp"
#include "dave/error.hpp"
#include "dave/types.hpp"

namespace dave {

struct delay_point {
  std::uint32_t K = 0;
  std::uint32_t G = 0;
  std::uint64_t N = 0;
  std::uint64_t rounds = 0;
};

inline std::uint64_t max_delay_rounds(std::uint32_t K, std::uint32_t G, std::uint64_t N,
                                      abstract_model model = abstract_model::hero_pinned) {
  if (K < 1 || G < 2 || N < 1) throw error(errc::invalid_param, "need K>=1, G>=2, N>=1");
  auto d = initial_distribution(K, N);
  std::uint64_t rounds = 0;
  while (total_claims(d) > 1) {
    d = max_delay_step(d, G, model);
    ++rounds;
  }
  return rounds;
}

// Every distribution from [N,0,...] to the end, inclusive.
inline std::vector<distribution> max_delay_trace(std::uint32_t K, std::uint32_t G, std::uint64_t N,
                                                 abstract_model model = abstract_model::hero_pinned) {
  std::vector<distribution> trace{initial_distribution(K, N)};
  while (total_claims(trace.back()) > 1) trace.push_back(max_delay_step(trace.back(), G, model));
  return trace;
}

// D(K,G,.) with memoization, for breakpoint searches.
class delay_curve {
 public:
  delay_curve(std::uint32_t K, std::uint32_t G) : K_(K), G_(G) {}

  std::uint64_t operator()(std::uint64_t N) {
    auto it = cache_.find(N);
    if (it != cache_.end()) return it->second;
    return cache_[N] = max_delay_rounds(K_, G_, N);
  }

  // Smallest N' > N with D(N') > D(N), if one exists up to `limit`.
  std::optional<std::uint64_t> next_larger(std::uint64_t N, std::uint64_t limit) {
    if (N >= limit) return std::nullopt;
    const auto base = (*this)(N);
    std::uint64_t lo = N, step = 1, hi = N + 1;
    while ((*this)(hi) <= base) {
      if (hi >= limit) return std::nullopt;
      lo = hi;
      step *= 2;
      hi = std::min(limit, N + step);
    }
    while (hi - lo > 1) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      if ((*this)(mid) > base) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  }

  // Breakpoints of the step curve: (N, D(N)) where D first reaches a new value.
  std::vector<delay_point> breakpoints(std::uint64_t max_n) {
    std::vector<delay_point> out;
    std::uint64_t n = 1;
    while (auto nx = next_larger(n, max_n)) {
      n = *nx;
      out.push_back({K_, G_, n, (*this)(n)});
    }
    return out;
  }

 private:
  std::uint32_t K_, G_;
  std::map<std::uint64_t, std::uint64_t> cache_;
};

inline std::uint64_t next_larger_N(std::uint32_t K, std::uint32_t G, std::uint64_t N,
                                   std::uint64_t limit = std::uint64_t{1} << 40) {
  delay_curve c(K, G);
  auto r = c.next_larger(N, limit);
  if (!r) throw error(errc::invalid_param, "no larger delay below the search limit");
  return *r;
}

inline double log_base(double x, double base) { return std::log(x) / std::log(base); }

inline double numerical_bound(std::uint32_t K, std::uint32_t G, std::uint64_t N) {
  double L = log_base(static_cast<double>(N), G);
  return 2.66 * K + L + 2.0 * std::sqrt(K * L);
}

inline bool check_numerical_bound(std::uint32_t K, std::uint32_t G, std::uint64_t N) {
  return static_cast<double>(max_delay_rounds(K, G, N)) < numerical_bound(K, G, N);
}

// ---------------------------------------------------------------------------
// Regression of D against alpha K + beta log_G N + gamma sqrt(K log_G N).

struct fit_result {
  double alpha = 0, beta = 0, gamma = 0;
  double rms = 0;
  double max_abs_err = 0;
  std::size_t samples = 0;
};

inline constexpr std::array<double, 3> fit_lower{0.0, 0.0, 0.0};
inline constexpr std::array<double, 3> fit_upper{13.0, 1.0, 2.0};
inline constexpr std::uint64_t fit_min_n = 100;

// Solves the box-constrained least-squares problem exactly by trying every
// assignment of each coefficient to free / lower / upper, then polishes with
// coordinate descent.
inline fit_result fit_bound(const std::vector<delay_point>& points) {
  std::vector<delay_point> use;
  for (const auto& p : points) {
    if (p.N > fit_min_n) use.push_back(p);
  }
  if (use.size() < 3) throw error(errc::insufficient_samples, std::to_string(use.size()) + " samples with N > 100");

  const auto n = static_cast<Eigen::Index>(use.size());
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = use[static_cast<std::size_t>(i)];
    double L = log_base(static_cast<double>(p.N), p.G);
    A(i, 0) = p.K;
    A(i, 1) = L;
    A(i, 2) = std::sqrt(p.K * L);
    y(i) = static_cast<double>(p.rounds);
  }
  auto objective = [&](const Eigen::Vector3d& c) { return (A * c - y).squaredNorm(); };

  Eigen::Vector3d best = Eigen::Vector3d::Zero();
  double best_obj = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < 27; ++mask) {
    std::array<int, 3> st{mask % 3, (mask / 3) % 3, mask / 9};  // 0 free, 1 lower, 2 upper
    Eigen::Vector3d c;
    std::vector<int> free;
    for (int j = 0; j < 3; ++j) {
      if (st[j] == 0) {
        free.push_back(j);
        c(j) = 0;
      } else {
        c(j) = st[j] == 1 ? fit_lower[j] : fit_upper[j];
      }
    }
    if (!free.empty()) {
      Eigen::MatrixXd Af(n, static_cast<Eigen::Index>(free.size()));
      for (std::size_t f = 0; f < free.size(); ++f) Af.col(static_cast<Eigen::Index>(f)) = A.col(free[f]);
      Eigen::VectorXd rhs = y - A * c;
      Eigen::VectorXd sol = Af.completeOrthogonalDecomposition().solve(rhs);
      bool inside = true;
      for (std::size_t f = 0; f < free.size(); ++f) {
        double v = sol(static_cast<Eigen::Index>(f));
        int j = free[f];
        if (v < fit_lower[j] - 1e-12 || v > fit_upper[j] + 1e-12) inside = false;
        c(j) = std::clamp(v, fit_lower[j], fit_upper[j]);
      }
      if (!inside) continue;
    }
    double obj = objective(c);
    if (obj < best_obj) {
      best_obj = obj;
      best = c;
    }
  }

  for (int iter = 0; iter < 10000; ++iter) {
    double before = best_obj;
    for (int j = 0; j < 3; ++j) {
      double norm = A.col(j).squaredNorm();
      if (norm == 0) continue;
      Eigen::VectorXd r = y - A * best;
      best(j) = std::clamp(best(j) + A.col(j).dot(r) / norm, fit_lower[j], fit_upper[j]);
    }
    best_obj = objective(best);
    if (before - best_obj < 1e-9) break;
  }

  fit_result f;
  f.alpha = best(0);
  f.beta = best(1);
  f.gamma = best(2);
  f.samples = use.size();
  Eigen::VectorXd res = A * best - y;
  f.rms = std::sqrt(res.squaredNorm() / static_cast<double>(n));
  f.max_abs_err = res.cwiseAbs().maxCoeff();
  return f;
}

// ---------------------------------------------------------------------------
// Schedules. T_g = T_c / K need not be a whole number of seconds when K is
// chosen freely, so durations are kept as exact fractions over K.

inline std::uint64_t round_half_up(unsigned __int128 num, unsigned __int128 den) {
  return static_cast<std::uint64_t>((2 * num + den) / (2 * den));
}

struct schedule_row {
  std::uint32_t G = 0;
  std::uint64_t N = 0;
  std::uint32_t K = 0;
  std::uint64_t R = 0;  // rounds without censorship
  seconds T_c = 0;
  seconds T_m = 0;
  dispute_mode mode = dispute_mode::discrete;

  // K * T_r, an integer.
  unsigned __int128 round_times_k() const {
    unsigned grace_periods = mode == dispute_mode::discrete ? 2 : 1;
    return static_cast<unsigned __int128>(T_m) * K + static_cast<unsigned __int128>(grace_periods) * T_c;
  }
  std::uint64_t censored_rounds() const { return R == 0 ? 0 : R + K - 1; }

  double t_g_seconds() const { return static_cast<double>(T_c) / K; }
  double round_seconds() const { return static_cast<double>(round_times_k()) / K; }
  double delta_t() const { return static_cast<double>(R * round_times_k()) / K; }
  double delta_t_prime() const { return static_cast<double>(censored_rounds() * round_times_k()) / K; }

  // Values at printed precision: tenths of an hour, hundredths of a day.
  std::uint64_t t_g_tenths_hour() const { return round_half_up(static_cast<unsigned __int128>(T_c) * 10, 3600ull * K); }
  std::uint64_t delta_t_hundredths() const { return round_half_up(R * round_times_k() * 100, 86400ull * K); }
  std::uint64_t delta_t_prime_hundredths() const {
    return round_half_up(censored_rounds() * round_times_k() * 100, 86400ull * K);
  }
};

inline schedule_row make_schedule_row(std::uint32_t G, std::uint64_t N, std::uint32_t K, seconds T_c, seconds T_m,
                                      dispute_mode mode) {
  return {G, N, K, max_delay_rounds(K, G, N), T_c, T_m, mode};
}

// Minimizes the no-censorship dispute time over K in [1, T_c / 1h], compared
// at printed precision; ties go to the smaller K (longer grace period).
inline schedule_row optimize_grace(std::uint32_t G, std::uint64_t N, seconds T_c, seconds T_m) {
  if (T_c == 0 || T_m == 0) throw error(errc::invalid_param, "T_c and T_m must be positive");
  const auto k_max = static_cast<std::uint32_t>(std::max<seconds>(1, T_c / 3600));
  std::optional<schedule_row> best;
  for (std::uint32_t K = 1; K <= k_max; ++K) {
    auto row = make_schedule_row(G, N, K, T_c, T_m, dispute_mode::discrete);
    if (!best || row.delta_t_hundredths() < best->delta_t_hundredths()) best = row;
  }
  return *best;
}

inline schedule_row fixed_schedule(std::uint32_t G, std::uint32_t K, std::uint64_t N, seconds T_c, seconds T_m,
                                   dispute_mode mode) {
  if (K == 0 || T_c % K != 0) throw error(errc::non_divisible_grace, "K must divide T_c");
  return make_schedule_row(G, N, K, T_c, T_m, mode);
}

// ---------------------------------------------------------------------------
// Economics.

enum class bond_policy { nearest, ceil };

constexpr std::string_view to_string(bond_policy p) { return p == bond_policy::nearest ? "nearest" : "ceil"; }

struct economics_row {
  std::uint32_t G = 0;
  std::uint32_t K = 0;
  std::uint64_t N = 0;
  std::uint64_t R = 0;
  double c_m = 0;            // ether per match
  double bond_target = 0;    // hero's worst-case spend against a single Sybil
  double bond = 0;           // ether
  double hero_expenses = 0;  // ether
  double adversary_loss = 0; // ether
  double delay = 0;          // seconds
  bond_policy policy = bond_policy::nearest;
};

inline economics_row economics(std::uint32_t G, std::uint32_t K, std::uint64_t N, double c_m,
                               bond_policy policy = bond_policy::nearest, seconds T_c = 604800,
                               seconds T_m = 7200) {
  if (N < 2) throw error(errc::invalid_param, "economics needs N >= 2");
  economics_row e;
  e.G = G;
  e.K = K;
  e.N = N;
  e.c_m = c_m;
  e.policy = policy;
  e.R = max_delay_rounds(K, G, N);
  e.bond_target = (G - 1) * c_m * static_cast<double>(max_delay_rounds(K, G, 2));
  e.bond = policy == bond_policy::nearest ? std::round(e.bond_target) : std::ceil(e.bond_target - 1e-9);
  e.hero_expenses = (G - 1) * c_m * static_cast<double>(e.R);
  e.adversary_loss = static_cast<double>(N - 1) * e.bond;
  e.delay = schedule_row{G, N, K, e.R, T_c, T_m, dispute_mode::discrete}.delta_t();
  return e;
}

}  // namespace dave
