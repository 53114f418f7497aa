#include "vlkey/transcript.hpp"

#include <algorithm>
#include <cstring>
#include <unordered_map>

namespace vlkey {

namespace {

void append_int(std::string& s, long long v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  s.append(buf, 8);
}

}  // namespace

std::string transcript_key(const Transcript& t) {
  std::string s;
  s.reserve(t.size() * 16);
  for (const Message& m : t) {
    s.push_back(m.failure ? 'F' : 'M');
    append_int(s, static_cast<long long>(m.payload.size()));
    for (long long v : m.payload) append_int(s, v);
  }
  return s;
}

void KeyLaw::normalize() {
  std::unordered_map<std::string, std::size_t> index;
  std::vector<KeyOutcome> merged;
  merged.reserve(outcomes.size());
  for (auto& o : outcomes) {
    std::string key = transcript_key(o.w);
    append_int(key, o.L);
    append_int(key, o.a);
    append_int(key, o.b);
    auto [it, fresh] = index.emplace(std::move(key), merged.size());
    if (fresh) {
      merged.push_back(std::move(o));
    } else {
      merged[it->second].p += o.p;
    }
  }
  std::erase_if(merged, [](const KeyOutcome& o) { return o.p == 0; });
  std::sort(merged.begin(), merged.end(), [](const KeyOutcome& x, const KeyOutcome& y) {
    if (x.w != y.w) return x.w < y.w;
    if (x.L != y.L) return x.L < y.L;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  outcomes = std::move(merged);
}

Rational KeyLaw::total_mass() const {
  Rational t = 0;
  for (const auto& o : outcomes) t += o.p;
  return t;
}

Rational KeyLaw::expected_length() const {
  Rational t = 0;
  for (const auto& o : outcomes) t += o.p * o.L;
  return t;
}

Rational KeyLaw::prob_length_positive() const {
  Rational t = 0;
  for (const auto& o : outcomes)
    if (o.L > 0) t += o.p;
  return t;
}

Rational KeyLaw::prob_disagree() const {
  Rational t = 0;
  for (const auto& o : outcomes)
    if (o.a != o.b) t += o.p;
  return t;
}

Rational KeyLaw::prob_disagree_with_key() const {
  Rational t = 0;
  for (const auto& o : outcomes)
    if (o.a != o.b && o.L > 0) t += o.p;
  return t;
}

KeyLaw product_law(const KeyLaw& k1, const KeyLaw& k2) {
  KeyLaw out;
  out.outcomes.reserve(k1.outcomes.size() * k2.outcomes.size());
  for (const auto& o1 : k1.outcomes) {
    for (const auto& o2 : k2.outcomes) {
      KeyOutcome o;
      o.w = o1.w;
      o.w.insert(o.w.end(), o2.w.begin(), o2.w.end());
      o.L = o1.L + o2.L;
      if (o.L > 62) throw std::overflow_error("product_law: combined length too large");
      o.a = ((o1.a - 1) << o2.L) + o2.a;
      o.b = ((o1.b - 1) << o2.L) + o2.b;
      o.p = o1.p * o2.p;
      out.outcomes.push_back(std::move(o));
    }
  }
  out.normalize();
  return out;
}

}  // namespace vlkey
