#include "vlkey/schemes.hpp"

#include <algorithm>
#include <cmath>

namespace vlkey {

JointSource matched_pair_source(int m) {
  if (m < 1 || m > 10) throw std::invalid_argument("matched_pair_source: m out of range");
  const long long n = 1LL << m;
  JointSource s(n, n);
  const Rational base(1, n);
  const Rational off = base * Rational(7, 8) * base;  // fresh-draw branch
  for (long long x = 0; x < n; ++x) {
    for (long long y = 0; y < n; ++y) s.at(x, y) = off;
    s.at(x, x) += base * Rational(1, 8);
  }
  return s;
}

JointSource erasure_pair_source(int m, const Rational& eps) {
  if (m < 1 || m > 10) throw std::invalid_argument("erasure_pair_source: m out of range");
  if (eps < 0 || eps > 1) throw std::invalid_argument("erasure_pair_source: eps out of range");
  const long long n = 1LL << m;
  JointSource s(n, n + 1);
  const Rational base(1, n);
  for (long long x = 0; x < n; ++x) {
    s.at(x, x) = base * (1 - eps);
    s.at(x, n) = base * eps;  // erasure symbol
  }
  return s;
}

JointSource identity_source(long long n) {
  if (n < 1) throw std::invalid_argument("identity_source: n must be positive");
  JointSource s(n, n);
  for (long long i = 0; i < n; ++i) s.at(i, i) = Rational(1, n);
  return s;
}

std::pair<Party, Party> prefix_matching_scheme(const PrefixSchemeConfig& cfg) {
  if (cfg.m < 1 || cfg.t < 0 || cfg.t > cfg.m)
    throw std::invalid_argument("prefix scheme: need 0 <= t <= m");
  const int m = cfg.m, t = cfg.t;
  const long long residual_mask = (m == t) ? 0 : ((1LL << (m - t)) - 1);

  auto decide = [m, t, residual_mask](long long obs, const Transcript& tr) {
    const long long pa = tr[0].payload[0];
    const long long pb = tr[1].payload[0];
    if (pa == pb) return PartyAction::stop(m - t, (obs & residual_mask) + 1);
    return PartyAction::stop(0, 1);
  };

  Party alice;
  alice.memoizable = true;
  alice.act = [m, t, decide](long long obs, std::span<const long long>,
                             const Transcript& tr) {
    if (tr.empty()) return PartyAction::send(Message::of(obs >> (m - t)));
    return decide(obs, tr);
  };
  Party bob;
  bob.memoizable = true;
  bob.act = [m, t, decide](long long obs, std::span<const long long>,
                           const Transcript& tr) {
    if (tr.size() == 1) return PartyAction::send(Message::of(obs >> (m - t)));
    return decide(obs, tr);
  };
  return {std::move(alice), std::move(bob)};
}

ProtocolOptions prefix_scheme_options(const PrefixSchemeConfig& cfg) {
  ProtocolOptions opts;
  const long long limit = 1LL << cfg.t;
  opts.validate = [limit](int round, const Message& msg) {
    if (round > 2) return false;
    return !msg.failure && msg.payload.size() == 1 && msg.payload[0] >= 0 &&
           msg.payload[0] < limit;
  };
  return opts;
}

std::pair<Party, Party> erasure_scheme(int m, const Rational& eps) {
  (void)eps;  // the scheme itself does not depend on the erasure rate
  if (m < 1 || m > 20) throw std::invalid_argument("erasure scheme: m out of range");
  const long long n = 1LL << m;

  Party alice;
  alice.memoizable = true;
  alice.act = [m](long long obs, std::span<const long long>, const Transcript&) {
    return PartyAction::stop(m, obs + 1);
  };
  Party bob;
  bob.rand_spaces = {Dist::uniform(n)};
  bob.act = [m, n](long long obs, std::span<const long long> rnd, const Transcript&) {
    const long long value = (obs == n) ? rnd[0] : obs;
    return PartyAction::stop(m, value + 1);
  };
  return {std::move(alice), std::move(bob)};
}

double gap_objective(double a, double b) {
  return std::max(0.5 - a * b, 0.0) + std::max(0.5 - (1 - a) * (1 - b), 0.0);
}

namespace {

// For fixed alpha the objective is piecewise linear in beta, so the minimum
// is attained at an endpoint or a kink.
double best_beta(double a, double* beta_out) {
  double candidates[4];
  std::size_t n = 0;
  candidates[n++] = 0.0;
  candidates[n++] = 1.0;
  if (a > 0) {
    const double k = 0.5 / a;
    if (k > 0 && k < 1) candidates[n++] = k;
  }
  if (a < 1) {
    const double k = 1.0 - 0.5 / (1.0 - a);
    if (k > 0 && k < 1) candidates[n++] = k;
  }
  double best = 1e300, arg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = gap_objective(a, candidates[i]);
    if (v < best) {
      best = v;
      arg = candidates[i];
    }
  }
  if (beta_out) *beta_out = arg;
  return best;
}

}  // namespace

GapConstant fixed_length_gap_constant(double grid) {
  if (!(grid > 0 && grid <= 1e-2))
    throw std::invalid_argument("fixed_length_gap_constant: grid out of range");
  double best = 1e300, best_a = 0;
  const long long steps = static_cast<long long>(std::llround(1.0 / grid));
  for (long long i = 0; i <= steps; ++i) {
    const double a = static_cast<double>(i) / steps;
    const double v = best_beta(a, nullptr);
    if (v < best) {
      best = v;
      best_a = a;
    }
  }
  // local ternary refinement in alpha around the grid minimiser
  double lo = std::max(0.0, best_a - 2 * grid), hi = std::min(1.0, best_a + 2 * grid);
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (best_beta(m1, nullptr) < best_beta(m2, nullptr))
      hi = m2;
    else
      lo = m1;
  }
  GapConstant out;
  out.alpha = (lo + hi) / 2;
  out.inner_min = best_beta(out.alpha, &out.beta);
  out.headline = out.inner_min - 0.25;
  return out;
}

double gap_min_diagonal(double grid) {
  double best = 1e300, best_a = 0;
  const long long steps = static_cast<long long>(std::llround(1.0 / grid));
  for (long long i = 0; i <= steps; ++i) {
    const double a = static_cast<double>(i) / steps;
    const double v = gap_objective(a, a);
    if (v < best) {
      best = v;
      best_a = a;
    }
  }
  double lo = std::max(0.0, best_a - 2 * grid), hi = std::min(1.0, best_a + 2 * grid);
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (gap_objective(m1, m1) < gap_objective(m2, m2))
      hi = m2;
    else
      lo = m1;
  }
  return gap_objective((lo + hi) / 2, (lo + hi) / 2);
}

}  // namespace vlkey
