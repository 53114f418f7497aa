#include "vlkey/entropy_model.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <unordered_map>

namespace vlkey {

double QuantileTable::mutual_information() const {
  double acc = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    const Rational px_ = px.mass(x);
    if (px_ == 0) continue;
    for (std::size_t y = 0; y < ny; ++y) {
      const Rational py_ = py.mass(y);
      if (py_ == 0 || f[x][y] == 0) continue;
      const double joint = to_double(px_ * py_ * f[x][y]);
      acc += joint * std::log2(to_double(f[x][y]));
    }
  }
  return acc < 0 && acc > -1e-12 ? 0.0 : acc;
}

QuantileTable quantile_reduce(const JointSource& source) {
  source.validate();
  QuantileTable table;
  table.nx = source.nx();
  table.ny = source.ny();
  table.px = source.marginal_x();
  table.py = source.marginal_y();
  table.f.assign(table.nx, std::vector<Rational>(table.ny, Rational(0)));
  for (std::size_t x = 0; x < table.nx; ++x) {
    const Rational px = table.px.mass(x);
    if (px == 0) continue;  // zero-mass symbols dropped
    for (std::size_t y = 0; y < table.ny; ++y) {
      const Rational py = table.py.mass(y);
      if (py == 0) continue;
      table.f[x][y] = source.at(x, y) / (px * py);
    }
  }
  return table;
}

namespace {

long long lcm_up_to(long long n) {
  long long l = 1;
  for (long long i = 2; i <= n; ++i) l = std::lcm(l, i);
  return l;
}

// Alice's derived candidate structure for one (observation, randomness) pair.
struct CandidateLayout {
  std::vector<long long> slot_sym;          // slot -> symbol
  std::vector<long long> slot_of_internal;  // internal j -> slot
  long long true_slot = 0;
  std::vector<int> phi;                     // halving permutation over internals
};

// rnd layout: [n-1 dummy symbols][n-1 swap digits][1 placement digit]
CandidateLayout build_layout(long long x, std::span<const long long> rnd, int n) {
  CandidateLayout lay;
  const long long* dummies = rnd.data();
  const long long* digits = rnd.data() + (n - 1);
  const long long placement = rnd[2 * (n - 1)];

  // counts per symbol (true counts once)
  std::map<long long, long long> counts;
  counts[x] += 1;
  for (int j = 0; j < n - 1; ++j) counts[dummies[j]] += 1;

  // base slot of each symbol group in ascending symbol order
  std::map<long long, long long> base;
  long long next = 0;
  for (const auto& [sym, c] : counts) {
    base[sym] = next;
    next += c;
  }

  lay.slot_sym.assign(n, 0);
  for (const auto& [sym, c] : counts)
    for (long long i = 0; i < c; ++i) lay.slot_sym[base[sym] + i] = sym;

  // the true candidate sits at a uniform position within its symbol group
  const long long c_true = counts[x];
  const long long pos_true = placement % c_true;
  lay.true_slot = base[x] + pos_true;

  lay.slot_of_internal.assign(n, -1);
  lay.slot_of_internal[0] = lay.true_slot;
  std::map<long long, long long> fill;  // next free position per symbol
  for (int j = 0; j < n - 1; ++j) {
    const long long sym = dummies[j];
    long long pos = fill[sym];
    if (sym == x && pos >= pos_true) pos += 1;  // skip the true slot
    fill[sym] += 1;
    lay.slot_of_internal[j + 1] = base[sym] + pos;
  }

  // Fisher-Yates from the declared swap digits gives a uniform permutation
  lay.phi.resize(n);
  std::iota(lay.phi.begin(), lay.phi.end(), 0);
  for (int i = 0; i < n - 1; ++i) {
    const long long span = n - i;
    const int k = i + static_cast<int>(((digits[i] % span) + span) % span);
    std::swap(lay.phi[i], lay.phi[k]);
  }
  return lay;
}

std::vector<long long> kept_slots(const CandidateLayout& lay, int n, int i) {
  const int mod = 1 << (i - 1);
  std::vector<long long> slots;
  for (int j = 0; j < n; ++j)
    if ((lay.phi[j] & (mod - 1)) == (lay.phi[0] & (mod - 1)))
      slots.push_back(lay.slot_of_internal[j]);
  std::sort(slots.begin(), slots.end());
  return slots;
}

Message counts_message(const CandidateLayout& lay) {
  std::map<long long, long long> counts;
  for (long long sym : lay.slot_sym) counts[sym] += 1;
  std::vector<long long> payload;
  payload.reserve(counts.size() * 2);
  for (const auto& [sym, c] : counts) {
    payload.push_back(sym);
    payload.push_back(c);
  }
  return Message::of(std::move(payload));
}

struct BobView {
  std::vector<long long> slot_sym;
  std::vector<long long> current;  // ascending slot ids
  int alice_messages = 0;
};

BobView parse_transcript(const Transcript& t) {
  BobView view;
  for (std::size_t i = 0; i < t.size(); i += 2) {
    const Message& msg = t[i];
    ++view.alice_messages;
    if (i == 0) {
      for (std::size_t k = 0; k + 1 < msg.payload.size(); k += 2) {
        const long long sym = msg.payload[k];
        const long long c = msg.payload[k + 1];
        for (long long r = 0; r < c; ++r) view.slot_sym.push_back(sym);
      }
      view.current.resize(view.slot_sym.size());
      std::iota(view.current.begin(), view.current.end(), 0);
    } else {
      view.current = msg.payload;
    }
  }
  return view;
}

// cache so that the engine's repeated act() calls within one branch do not
// rebuild the candidate layout every round
struct LayoutCache {
  std::uint64_t hash = 0;
  long long obs = -1;
  bool valid = false;
  CandidateLayout layout;
};

std::uint64_t hash_span(std::span<const long long> rnd) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (long long v : rnd) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

HalvingProtocol make_halving_protocol(const JointSource& source, int m,
                                      const StopRule& rule, bool exact_arithmetic) {
  if (m < 1 || m > 20) throw std::invalid_argument("halving protocol: m out of range");
  if (!(rule.eps > 0 && rule.eps < Rational(1, 2)))
    throw std::invalid_argument("halving protocol: need 0 < eps < 1/2");
  source.validate();
  const int n = 1 << m;
  const QuantileTable table = quantile_reduce(source);

  HalvingProtocol proto;
  proto.m = m;
  proto.eps = rule.eps;
  proto.options.round_cap = 2 * (m + 1) + 2;

  Party alice;
  const Dist px = source.marginal_x();
  for (int j = 0; j < n - 1; ++j) alice.rand_spaces.push_back(px);
  for (int i = 0; i < n - 1; ++i) alice.rand_spaces.push_back(Dist::uniform(n - i));
  alice.rand_spaces.push_back(Dist::uniform(n <= 8 ? lcm_up_to(n) : 1));

  auto cache = std::make_shared<LayoutCache>();
  alice.act = [n, m, cache](long long obs, std::span<const long long> rnd,
                            const Transcript& t) {
    const std::uint64_t h = hash_span(rnd);
    if (!cache->valid || cache->hash != h || cache->obs != obs) {
      cache->layout = build_layout(obs, rnd, n);
      cache->hash = h;
      cache->obs = obs;
      cache->valid = true;
    }
    const CandidateLayout& lay = cache->layout;
    const int sent = static_cast<int>(t.size()) / 2;
    if (sent == 0) return PartyAction::send(counts_message(lay));
    if (t.back().payload == std::vector<long long>{1}) {
      const std::vector<long long> slots = kept_slots(lay, n, sent);
      return PartyAction::stop(m - sent + 1, rank_in_set(slots, lay.true_slot));
    }
    return PartyAction::send(Message::of(kept_slots(lay, n, sent + 1)));
  };
  // Alice only samples the full spaces lazily in Monte Carlo runs; the
  // cumulative table avoids a per-draw scan over the alphabet
  auto px_cum = std::make_shared<std::vector<std::pair<double, long long>>>();
  {
    double acc = 0;
    for (const auto& [label, p] : px.support()) {
      acc += to_double(p);
      px_cum->emplace_back(acc, label);
    }
  }
  alice.sampler = [n, px_cum](std::mt19937_64& rng) {
    std::vector<long long> r;
    r.reserve(2 * (n - 1) + 1);
    for (int j = 0; j < n - 1; ++j) {
      const double u = next_unit_double(rng);
      auto it = std::lower_bound(px_cum->begin(), px_cum->end(), u,
                                 [](const auto& a, double v) { return a.first < v; });
      if (it == px_cum->end()) --it;
      r.push_back(it->second);
    }
    for (int i = 0; i < n - 1; ++i)
      r.push_back(static_cast<long long>(next_below(rng, n - i)));
    r.push_back(static_cast<long long>(rng() >> 1));
    return r;
  };

  Party bob;
  bob.memoizable = true;
  if (exact_arithmetic) {
    const Rational threshold = 1 - rule.eps;
    auto f = std::make_shared<QuantileTable>(table);
    bob.act = [f, threshold, m](long long y, std::span<const long long>,
                                const Transcript& t) {
      const BobView view = parse_transcript(t);
      Rational total = 0, best = -1;
      long long best_slot = -1;
      for (long long slot : view.current) {
        const Rational& weight = f->f[view.slot_sym[slot]][y];
        total += weight;
        if (weight > best) {
          best = weight;
          best_slot = slot;
        }
      }
      if (total == 0) throw contract_error("halving: all candidates have zero density");
      const bool done = !t.empty() && (t.size() % 2 == 0) &&
                        t.back().payload == std::vector<long long>{1};
      if (done) {
        const int sent = static_cast<int>(t.size()) / 2;
        return PartyAction::stop(m - sent + 1, rank_in_set(view.current, best_slot));
      }
      const bool stop = best >= threshold * total;
      return PartyAction::send(Message::of(stop ? 1 : 0));
    };
  } else {
    const double threshold = 1.0 - to_double(rule.eps);
    auto fd = std::make_shared<std::vector<std::vector<double>>>();
    fd->assign(table.nx, std::vector<double>(table.ny, 0.0));
    for (std::size_t x = 0; x < table.nx; ++x)
      for (std::size_t y = 0; y < table.ny; ++y)
        (*fd)[x][y] = to_double(table.f[x][y]);
    bob.act = [fd, threshold, m](long long y, std::span<const long long>,
                                 const Transcript& t) {
      const BobView view = parse_transcript(t);
      double total = 0, best = -1;
      long long best_slot = -1;
      for (long long slot : view.current) {
        const double weight = (*fd)[view.slot_sym[slot]][y];
        total += weight;
        if (weight > best) {
          best = weight;
          best_slot = slot;
        }
      }
      if (total <= 0) throw contract_error("halving: all candidates have zero density");
      const bool done = !t.empty() && (t.size() % 2 == 0) &&
                        t.back().payload == std::vector<long long>{1};
      if (done) {
        const int sent = static_cast<int>(t.size()) / 2;
        return PartyAction::stop(m - sent + 1, rank_in_set(view.current, best_slot));
      }
      const bool stop = best >= threshold * total;
      return PartyAction::send(Message::of(stop ? 1 : 0));
    };
  }

  proto.alice = std::move(alice);
  proto.bob = std::move(bob);
  return proto;
}

EntropyModelKeys run_halving_exact(const JointSource& source, int m,
                                   const StopRule& rule) {
  if (m > 3 || source.nx() > 8)
    throw enumeration_limit_error(
        "halving enumeration offered only for m <= 3 and |X| <= 8");
  HalvingProtocol proto = make_halving_protocol(source, m, rule, true);
  EntropyModelKeys keys;
  keys.law = enumerate_protocol(source, proto.alice, proto.bob, proto.options);
  keys.m = m;
  keys.eps = rule.eps;
  keys.exact = true;
  return keys;
}

double coinciding_entropy(const KeyLaw& law) {
  std::unordered_map<std::string, std::unordered_map<long long, Rational>> diag;
  for (const auto& o : law.outcomes) {
    if (o.a != o.b || o.p == 0) continue;
    diag[transcript_key(o.w)][o.a] += o.p;
  }
  double acc = 0.0;
  for (const auto& [key, m] : diag) {
    (void)key;
    Rational agree = 0;
    for (const auto& [k, p] : m) agree += p;
    std::vector<Rational> w;
    w.reserve(m.size());
    for (const auto& [k, p] : m) w.push_back(p);
    acc += to_double(agree) * entropy_of_weights(w);
  }
  return acc;
}

long long rank_in_set(const std::vector<long long>& slots_ascending, long long slot) {
  auto it = std::lower_bound(slots_ascending.begin(), slots_ascending.end(), slot);
  if (it == slots_ascending.end() || *it != slot)
    throw contract_error("rank_in_set: candidate not present");
  return static_cast<long long>(it - slots_ascending.begin()) + 1;
}

bool halving_plan_uniform(int m) {
  if (m < 1 || m > 3) throw std::invalid_argument("halving_plan_uniform: m must be 1..3");
  const int n = 1 << m;
  std::vector<int> phi(n);
  std::iota(phi.begin(), phi.end(), 0);
  // counts[(i, S_i, S_{i+1})] and totals[(i, S_i)]
  std::map<std::tuple<int, std::uint32_t, std::uint32_t>, std::uint64_t> counts;
  std::map<std::pair<int, std::uint32_t>, std::uint64_t> totals;
  do {
    std::uint32_t prev = (1u << n) - 1;
    for (int i = 2; i <= m + 1; ++i) {
      const int mod = 1 << (i - 1);
      std::uint32_t next = 0;
      for (int j = 0; j < n; ++j)
        if ((phi[j] & (mod - 1)) == (phi[0] & (mod - 1))) next |= 1u << j;
      counts[{i, prev, next}] += 1;
      totals[{i, prev}] += 1;
      prev = next;
    }
  } while (std::next_permutation(phi.begin(), phi.end()));

  for (const auto& [key, total] : totals) {
    const auto& [i, prev] = key;
    const int size = std::popcount(prev);
    // admissible subsets: half size, containing the true candidate (j = 0)
    std::uint64_t admissible = 1;
    {
      // C(size-1, size/2 - 1)
      const int a = size - 1, b = size / 2 - 1;
      admissible = 1;
      for (int r = 0; r < b; ++r) admissible = admissible * (a - r) / (r + 1);
    }
    std::uint64_t seen = 0;
    std::uint64_t expected = total / admissible;
    if (expected * admissible != total) return false;
    for (const auto& [ckey, c] : counts) {
      if (std::get<0>(ckey) != i || std::get<1>(ckey) != prev) continue;
      const std::uint32_t next = std::get<2>(ckey);
      if (!(next & 1u)) return false;                  // must contain the true candidate
      if ((next & ~prev) != 0) return false;           // must be a subset
      if (std::popcount(next) != size / 2) return false;
      if (c != expected) return false;
      ++seen;
    }
    if (seen != admissible) return false;
  }
  return true;
}

namespace {

struct ParsedRun {
  std::vector<std::vector<long long>> sets;  // slot ids per round (ascending)
  std::vector<long long> slot_sym;
  int stop_round = 0;
};

ParsedRun parse_run(const Transcript& w) {
  ParsedRun run;
  BobView view;
  for (std::size_t i = 0; i < w.size(); i += 2) {
    if (i == 0) {
      for (std::size_t k = 0; k + 1 < w[0].payload.size(); k += 2)
        for (long long r = 0; r < w[0].payload[k + 1]; ++r)
          view.slot_sym.push_back(w[0].payload[k]);
      view.current.resize(view.slot_sym.size());
      std::iota(view.current.begin(), view.current.end(), 0);
    } else {
      view.current = w[i].payload;
    }
    run.sets.push_back(view.current);
  }
  run.slot_sym = view.slot_sym;
  run.stop_round = static_cast<int>(run.sets.size());
  return run;
}

}  // namespace

HalvingMcResult run_halving_mc(const JointSource& source, int m,
                               const StopRule& rule, std::uint64_t seed,
                               std::uint64_t trials, std::uint64_t heq_trials) {
  if (trials < 1) throw std::invalid_argument("run_halving_mc: trials must be >= 1");
  HalvingProtocol proto = make_halving_protocol(source, m, rule, false);

  const QuantileTable table = quantile_reduce(source);
  std::vector<std::vector<double>> f(table.nx, std::vector<double>(table.ny, 0.0));
  for (std::size_t x = 0; x < table.nx; ++x)
    for (std::size_t y = 0; y < table.ny; ++y) f[x][y] = to_double(table.f[x][y]);
  const Dist py = source.marginal_y();
  const double threshold = 1.0 - to_double(rule.eps);

  // flat cumulative for source sampling (same derivation as sample_protocol)
  std::vector<double> cum;
  std::vector<std::pair<long long, long long>> cells;
  double acc = 0.0;
  for (std::size_t x = 0; x < source.nx(); ++x)
    for (std::size_t y = 0; y < source.ny(); ++y) {
      if (source.at(x, y) == 0) continue;
      acc += to_double(source.at(x, y));
      cum.push_back(acc);
      cells.emplace_back(x, y);
    }

  HalvingMcResult result;
  result.stats.trials = trials;
  std::uint64_t disagree = 0;
  double t_sum = 0;
  double h_sum = 0, h_sq = 0;
  std::uint64_t h_n = 0;

  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(derive_seed(seed, trial));
    const double u = next_unit_double(rng);
    const std::size_t cell = std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
    const auto [x, y] = cells[std::min(cell, cells.size() - 1)];
    const std::vector<long long> ra = proto.alice.sampler(rng);
    KeyOutcome out = run_interaction(x, y, ra, {}, proto.alice, proto.bob, proto.options);

    const int stop_round = static_cast<int>(out.w.size()) / 2;
    result.stats.stop_histogram[stop_round] += 1;
    t_sum += stop_round;
    if (out.a != out.b) ++disagree;

    if (h_n < heq_trials) {
      // exact per-transcript coinciding-entropy integrand: average the
      // stop-consistent posteriors over Y
      const ParsedRun run = parse_run(out.w);
      std::map<long long, double> key_mass;  // rank -> P(K_A = K_B = rank | w)
      double mass_w = 0.0;
      for (const auto& [ylab, pyv] : py.support()) {
        bool consistent = true;
        double best = -1, total = 0;
        long long best_slot = -1;
        for (int i = 1; i <= run.stop_round && consistent; ++i) {
          best = -1;
          total = 0;
          best_slot = -1;
          for (long long slot : run.sets[i - 1]) {
            const double wgt = f[run.slot_sym[slot]][ylab];
            total += wgt;
            if (wgt > best) {
              best = wgt;
              best_slot = slot;
            }
          }
          if (total <= 0) {
            consistent = false;
            break;
          }
          const bool stops = best >= threshold * total;
          if (stops != (i == run.stop_round)) consistent = false;
        }
        if (!consistent) continue;
        const double w_y = to_double(pyv);
        mass_w += w_y;
        const double post = best / total;
        const long long rank = rank_in_set(run.sets[run.stop_round - 1], best_slot);
        key_mass[rank] += w_y * post;
      }
      double integrand = 0.0;
      if (mass_w > 0) {
        double agree = 0;
        std::vector<double> weights;
        for (const auto& [rank, v] : key_mass) {
          agree += v / mass_w;
          weights.push_back(v);
        }
        integrand = agree * entropy_of_weights(weights);
      }
      h_sum += integrand;
      h_sq += integrand * integrand;
      ++h_n;
    }
  }

  result.stats.p_disagree = static_cast<double>(disagree) / trials;
  result.stats.e_stop_time = t_sum / trials;
  result.h_eq.trials = h_n;
  result.h_eq.value = h_n ? h_sum / h_n : 0.0;
  if (h_n > 1) {
    const double var = (h_sq - h_sum * h_sum / h_n) / (h_n - 1);
    result.h_eq.std_error = std::sqrt(std::max(var, 0.0) / h_n);
  }
  return result;
}

}  // namespace vlkey
