#include "vlkey/dist.hpp"

#include <algorithm>
#include <cmath>

#include "vlkey/exact_log.hpp"

namespace vlkey {

Dist Dist::from_pairs(std::vector<std::pair<long long, Rational>> mass) {
  std::sort(mass.begin(), mass.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Rational total = 0;
  Dist d;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (mass[i].second < 0)
      throw std::invalid_argument("Dist: negative mass");
    if (i > 0 && mass[i].first == mass[i - 1].first)
      throw std::invalid_argument("Dist: duplicate label");
    total += mass[i].second;
    if (mass[i].second > 0) d.mass_.push_back(std::move(mass[i]));
  }
  if (total != 1) throw std::invalid_argument("Dist: masses must sum to 1");
  return d;
}

Dist Dist::uniform(long long n) {
  if (n <= 0) throw std::invalid_argument("Dist::uniform: n must be positive");
  std::vector<std::pair<long long, Rational>> m;
  m.reserve(n);
  for (long long i = 0; i < n; ++i) m.emplace_back(i, Rational(1, n));
  Dist d;
  d.mass_ = std::move(m);
  return d;
}

Dist Dist::point(long long label) {
  Dist d;
  d.mass_ = {{label, Rational(1)}};
  return d;
}

Dist Dist::bernoulli(const Rational& p_one) {
  if (p_one < 0 || p_one > 1)
    throw std::invalid_argument("Dist::bernoulli: p out of range");
  std::vector<std::pair<long long, Rational>> m;
  if (p_one != 1) m.emplace_back(0, 1 - p_one);
  if (p_one != 0) m.emplace_back(1, p_one);
  return from_pairs(std::move(m));
}

Rational Dist::mass(long long label) const {
  auto it = std::lower_bound(
      mass_.begin(), mass_.end(), label,
      [](const auto& a, long long l) { return a.first < l; });
  if (it != mass_.end() && it->first == label) return it->second;
  return Rational(0);
}

JointSource::JointSource(std::size_t nx, std::size_t ny)
    : nx_(nx), ny_(ny), mass_(nx * ny, Rational(0)) {
  if (nx == 0 || ny == 0)
    throw std::invalid_argument("JointSource: empty alphabet");
  if (nx * ny > 4u * 1024u * 1024u)
    throw std::invalid_argument("JointSource: table too large");
}

void JointSource::validate() const {
  Rational total = 0;
  for (const auto& m : mass_) {
    if (m < 0) throw std::invalid_argument("JointSource: negative mass");
    total += m;
  }
  if (total != 1) throw std::invalid_argument("JointSource: masses must sum to 1");
}

Dist JointSource::marginal_x() const {
  std::vector<std::pair<long long, Rational>> m;
  for (std::size_t x = 0; x < nx_; ++x) {
    Rational s = 0;
    for (std::size_t y = 0; y < ny_; ++y) s += at(x, y);
    m.emplace_back(static_cast<long long>(x), s);
  }
  return Dist::from_pairs(std::move(m));
}

Dist JointSource::marginal_y() const {
  std::vector<std::pair<long long, Rational>> m;
  for (std::size_t y = 0; y < ny_; ++y) {
    Rational s = 0;
    for (std::size_t x = 0; x < nx_; ++x) s += at(x, y);
    m.emplace_back(static_cast<long long>(y), s);
  }
  return Dist::from_pairs(std::move(m));
}

bool JointSource::factorizes() const {
  const Dist px = marginal_x();
  const Dist py = marginal_y();
  for (std::size_t x = 0; x < nx_; ++x)
    for (std::size_t y = 0; y < ny_; ++y)
      if (at(x, y) != px.mass(x) * py.mass(y)) return false;
  return true;
}

double entropy(const Dist& d) {
  double h = 0.0;
  for (const auto& [label, p] : d.support()) {
    (void)label;
    const double v = to_double(p);
    if (v > 0) h -= v * std::log2(v);
  }
  return h < 0 ? 0.0 : h;
}

double entropy_of_weights(const std::vector<Rational>& w) {
  Rational total = 0;
  for (const auto& v : w) total += v;
  if (total == 0) return 0.0;
  double h = 0.0;
  const double t = to_double(total);
  for (const auto& v : w) {
    const double p = to_double(v) / t;
    if (p > 0) h -= p * std::log2(p);
  }
  return h < 0 ? 0.0 : h;
}

double entropy_of_weights(const std::vector<double>& w) {
  double total = 0;
  for (double v : w) total += v;
  if (total <= 0) return 0.0;
  double h = 0.0;
  for (double v : w) {
    const double p = v / total;
    if (p > 0) h -= p * std::log2(p);
  }
  return h < 0 ? 0.0 : h;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("binary_entropy: p must be in [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double mutual_information(const JointSource& s) {
  std::vector<Rational> joint;
  joint.reserve(s.nx() * s.ny());
  for (std::size_t x = 0; x < s.nx(); ++x)
    for (std::size_t y = 0; y < s.ny(); ++y) joint.push_back(s.at(x, y));
  const double h_xy = entropy_of_weights(joint);
  const double h = entropy(s.marginal_x()) + entropy(s.marginal_y()) - h_xy;
  return h < 0 && h > -1e-12 ? 0.0 : h;
}

Rational tv_distance(const Dist& p, const Dist& q) {
  Rational acc = 0;
  auto pi = p.support().begin();
  auto qi = q.support().begin();
  while (pi != p.support().end() || qi != q.support().end()) {
    Rational diff;
    if (qi == q.support().end() || (pi != p.support().end() && pi->first < qi->first)) {
      diff = pi->second;
      ++pi;
    } else if (pi == p.support().end() || qi->first < pi->first) {
      diff = qi->second;
      ++qi;
    } else {
      diff = pi->second - qi->second;
      ++pi;
      ++qi;
    }
    acc += diff < 0 ? -diff : diff;
  }
  return acc / 2;
}

JointSource coarsen_x(const JointSource& s, const std::vector<long long>& image,
                      std::size_t k) {
  if (image.size() != s.nx())
    throw std::invalid_argument("coarsen_x: image size mismatch");
  JointSource out(k, s.ny());
  for (std::size_t x = 0; x < s.nx(); ++x) {
    const long long g = image[x];
    if (g < 0 || static_cast<std::size_t>(g) >= k)
      throw std::invalid_argument("coarsen_x: image out of range");
    for (std::size_t y = 0; y < s.ny(); ++y) out.at(g, y) += s.at(x, y);
  }
  return out;
}

bool coarsening_never_gains(const JointSource& fine,
                            const std::vector<long long>& image, std::size_t k) {
  // I(X;Y) - I(g(X);Y) = sum_{x,y} p(x,y) log[ p(x,y) P(g(x)) / (p(x) P(g(x),y)) ]
  const JointSource coarse = coarsen_x(fine, image, k);
  const Dist px = fine.marginal_x();
  const Dist pg = coarse.marginal_x();
  std::vector<std::pair<Rational, Rational>> terms;
  for (std::size_t x = 0; x < fine.nx(); ++x) {
    for (std::size_t y = 0; y < fine.ny(); ++y) {
      const Rational& p = fine.at(x, y);
      if (p == 0) continue;
      const Rational ratio =
          p * pg.mass(image[x]) / (px.mass(x) * coarse.at(image[x], y));
      terms.emplace_back(p, ratio);
    }
  }
  const LogCmp c = compare_weighted_log(terms, Rational(0));
  return c == LogCmp::greater || c == LogCmp::equal;
}

bool mutual_information_nonnegative_exact(const JointSource& s) {
  const Dist px = s.marginal_x();
  const Dist py = s.marginal_y();
  std::vector<std::pair<Rational, Rational>> terms;
  for (std::size_t x = 0; x < s.nx(); ++x)
    for (std::size_t y = 0; y < s.ny(); ++y) {
      const Rational& p = s.at(x, y);
      if (p == 0) continue;
      terms.emplace_back(p, p / (px.mass(x) * py.mass(y)));
    }
  const LogCmp c = compare_weighted_log(terms, Rational(0));
  if (c == LogCmp::less) return false;
  if (c == LogCmp::equal) return s.factorizes();
  return true;
}

}  // namespace vlkey
