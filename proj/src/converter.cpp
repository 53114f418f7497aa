#include "vlkey/converter.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "vlkey/exact_log.hpp"

namespace vlkey {

LevelFn make_level_fn(const Rational& delta) {
  return [delta](const Rational& p) { return level_index(p, delta); };
}

LevelFn make_level_fn_eps_prime(const Rational& eps_prime) {
  return [eps_prime](const Rational& p) { return level_index_nats(p, eps_prime); };
}

std::vector<std::vector<long long>> build_level_partition(const Dist& cond_law,
                                                          const LevelFn& level) {
  // level classes, elements sorted by descending mass then key
  std::map<long long, std::vector<std::pair<Rational, long long>>> classes;
  for (const auto& [k, p] : cond_law.support()) classes[level(p)].push_back({p, k});

  std::vector<std::vector<long long>> subsets;
  for (auto& [lvl, members] : classes) {
    (void)lvl;
    std::sort(members.begin(), members.end(),
              [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
              });
    // binary decomposition of the class size, exponents descending
    std::size_t remaining = members.size();
    std::size_t offset = 0;
    for (int bit = 62; bit >= 0; --bit) {
      const std::size_t chunk = 1ull << bit;
      if (!(remaining & chunk)) continue;
      std::vector<long long> subset;
      subset.reserve(chunk);
      for (std::size_t i = 0; i < chunk; ++i) subset.push_back(members[offset + i].second);
      subsets.push_back(std::move(subset));
      offset += chunk;
    }
  }
  return subsets;
}

std::vector<std::vector<long long>> build_level_partition(const Dist& cond_law,
                                                          const Rational& delta) {
  return build_level_partition(cond_law, make_level_fn(delta));
}

long long choose_block_length(const Rational& eps, const Rational& rho,
                              long long size) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("choose_block_length: eps");
  if (!(rho > 0 && rho <= 1)) throw std::invalid_argument("choose_block_length: rho");
  if (size < 1 || (size & (size - 1)) != 0)
    throw std::invalid_argument("choose_block_length: size must be a power of two");
  const Rational v = eps * rho * size;
  if (v < 1) return 0;
  return std::max(floor_log2(v), 0LL);
}

namespace {

// conditional error of one candidate partition, as (error mass, match mass)
std::pair<Rational, Rational> partition_error(const RestrictedJoint& joint,
                                              const std::vector<std::vector<long long>>& blocks) {
  std::map<long long, std::size_t> block_of;
  for (std::size_t j = 0; j < blocks.size(); ++j)
    for (long long k : blocks[j]) block_of[k] = j;
  Rational err = 0, match = 0;
  for (const auto& [kk, p] : joint) {
    const auto ia = block_of.find(kk.first);
    const auto ib = block_of.find(kk.second);
    if (ia == block_of.end() || ib == block_of.end() || ia->second != ib->second)
      continue;
    match += p;
    if (kk.first != kk.second) err += p;
  }
  return {err, match};
}

bool error_ok(const std::pair<Rational, Rational>& em, const Rational& eps) {
  return em.first <= eps * em.second;  // vacuous when match mass is zero
}

// number of ways to split `size` elements into unordered blocks of `block`
BigInt partition_count(long long size, long long block) {
  BigInt num = 1;
  for (long long i = 2; i <= size; ++i) num *= i;
  BigInt bf = 1;
  for (long long i = 2; i <= block; ++i) bf *= i;
  BigInt den = 1;
  const long long nblocks = size / block;
  for (long long j = 0; j < nblocks; ++j) den *= bf;
  for (long long i = 2; i <= nblocks; ++i) den *= i;
  return num / den;
}

// enumerate all equal-size partitions: the smallest unused element anchors
// the next block
bool enumerate_partitions(const std::vector<long long>& items, long long block,
                          std::vector<std::vector<long long>>& current,
                          std::vector<bool>& used, std::size_t used_count,
                          const std::function<bool(const std::vector<std::vector<long long>>&)>& visit) {
  if (used_count == items.size()) return visit(current);
  std::size_t anchor = 0;
  while (used[anchor]) ++anchor;
  used[anchor] = true;
  std::vector<std::size_t> pool;
  for (std::size_t i = anchor + 1; i < items.size(); ++i)
    if (!used[i]) pool.push_back(i);
  // choose block-1 companions from the pool
  std::vector<std::size_t> pick(block - 1);
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t from,
                                                          std::size_t depth) -> bool {
    if (depth == static_cast<std::size_t>(block - 1)) {
      std::vector<long long> blk{items[anchor]};
      for (std::size_t i = 0; i < depth; ++i) blk.push_back(items[pool[pick[i]]]);
      for (std::size_t i = 0; i < depth; ++i) used[pool[pick[i]]] = true;
      current.push_back(blk);
      const bool done = enumerate_partitions(items, block, current, used,
                                             used_count + block, visit);
      current.pop_back();
      for (std::size_t i = 0; i < depth; ++i) used[pool[pick[i]]] = false;
      return done;
    }
    for (std::size_t i = from; i < pool.size(); ++i) {
      pick[depth] = i;
      if (rec(i + 1, depth + 1)) return true;
    }
    return false;
  };
  const bool done = rec(0, 0);
  used[anchor] = false;
  return done;
}

}  // namespace

SubblockResult find_subblock_partition(const RestrictedJoint& joint,
                                       const std::vector<long long>& subset,
                                       long long m_i, const Rational& eps,
                                       std::uint64_t seed) {
  const long long size = static_cast<long long>(subset.size());
  const long long block = 1LL << m_i;
  if (size % block != 0)
    throw std::invalid_argument("find_subblock_partition: size not divisible");

  SubblockResult best;
  best.achieved_error = 2;  // sentinel above any ratio

  auto consider = [&](const std::vector<std::vector<long long>>& blocks) {
    const auto em = partition_error(joint, blocks);
    const Rational ratio = em.second == 0 ? Rational(0) : em.first / em.second;
    if (!best.satisfied && (best.blocks.empty() || ratio < best.achieved_error)) {
      best.blocks = blocks;
      best.achieved_error = ratio;
    }
    if (error_ok(em, eps)) {
      best.blocks = blocks;
      best.achieved_error = ratio;
      best.satisfied = true;
      return true;
    }
    return false;
  };

  if (block == size || block == 1) {
    // single block, or singleton blocks: the partition is forced
    std::vector<std::vector<long long>> blocks;
    if (block == size) {
      blocks.push_back(subset);
    } else {
      for (long long k : subset) blocks.push_back({k});
    }
    consider(blocks);
    best.exhaustive = true;
    return best;
  }

  if (partition_count(size, block) <= 1000000) {
    best.exhaustive = true;
    std::vector<std::vector<long long>> current;
    std::vector<bool> used(subset.size(), false);
    enumerate_partitions(subset, block, current, used, 0, consider);
    return best;
  }

  std::mt19937_64 rng(seed);
  std::vector<long long> shuffled = subset;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    for (std::size_t i = shuffled.size(); i > 1; --i)
      std::swap(shuffled[i - 1], shuffled[next_below(rng, i)]);
    std::vector<std::vector<long long>> blocks;
    for (long long off = 0; off < size; off += block)
      blocks.emplace_back(shuffled.begin() + off, shuffled.begin() + off + block);
    if (consider(blocks)) return best;
  }
  return best;  // budget exhausted; flagged via `satisfied`
}

PartitionPlan build_partition_plan(const Dist& cond_eq, const RestrictedJoint& joint,
                                   const Rational& eps, const LevelFn& level,
                                   std::uint64_t seed) {
  PartitionPlan plan;
  plan.eps = eps;
  const auto subsets = build_level_partition(cond_eq, level);

  for (const auto& [k, p] : cond_eq.support()) {
    const long long lvl = level(p);
    plan.level_of[k] = lvl;
    plan.level_class_size[lvl] += 0;  // ensure key exists
  }
  for (const auto& [k, lvl] : plan.level_of) {
    (void)k;
    plan.level_class_size[lvl] += 1;
  }

  std::uint64_t salt = 0;
  for (const auto& subset : subsets) {
    SubsetPlan sp;
    sp.keys = subset;
    sp.level = plan.level_of.at(subset.front());

    // rho_i = P{K_A = K_B | K_A, K_B in S_i} under the restricted joint
    Rational both = 0, equal = 0;
    {
      std::set<long long> members(subset.begin(), subset.end());
      for (const auto& [kk, p] : joint) {
        if (!members.count(kk.first) || !members.count(kk.second)) continue;
        both += p;
        if (kk.first == kk.second) equal += p;
      }
    }
    if (both == 0)
      throw contract_error("partition plan: subset has zero joint mass");
    sp.rho = equal / both;
    sp.block_bits = choose_block_length(eps, sp.rho, subset.size());

    RestrictedJoint restricted;
    {
      std::set<long long> members(subset.begin(), subset.end());
      for (const auto& [kk, p] : joint)
        if (members.count(kk.first) && members.count(kk.second))
          restricted[kk] = p / both;
    }
    SubblockResult blocks = find_subblock_partition(
        restricted, subset, sp.block_bits, eps, derive_seed(seed, salt++));
    sp.blocks = std::move(blocks.blocks);
    sp.achieved_error = blocks.achieved_error == 2 ? Rational(0) : blocks.achieved_error;
    sp.error_bound_met = blocks.satisfied;
    plan.subsets.push_back(std::move(sp));
  }

  for (std::size_t i = 0; i < plan.subsets.size(); ++i)
    for (std::size_t j = 0; j < plan.subsets[i].blocks.size(); ++j)
      for (long long k : plan.subsets[i].blocks[j]) plan.index[k] = {i, j};
  return plan;
}

bool check_grouping_bound(const PartitionPlan& plan, const Dist& cond_eq) {
  // E[log2 |S_c(K)|] >= E[log2 |level class|] - 2, i.e.
  // sum p(k) log2( 4 |S_c(k)| / |class(k)| ) >= 0, decided exactly.
  std::vector<std::pair<Rational, Rational>> terms;
  for (const auto& [k, p] : cond_eq.support()) {
    const auto [i, j] = plan.index.at(k);
    (void)j;
    const long long subset_size = static_cast<long long>(plan.subsets[i].keys.size());
    const long long class_size = plan.level_class_size.at(plan.level_of.at(k));
    terms.emplace_back(p, Rational(4 * subset_size, class_size));
  }
  const LogCmp c = compare_weighted_log(terms, Rational(0));
  if (c == LogCmp::undecided) {
    double s = 0;
    for (const auto& [w, r] : terms) s += to_double(w) * std::log2(to_double(r));
    return s >= -1e-9;
  }
  return c != LogCmp::less;
}

ConverterOutput convert(const EntropyModelKeys& keys, const Rational& eps_prime,
                        std::uint64_t seed) {
  if (!(eps_prime > 0 && eps_prime < 1))
    throw std::invalid_argument("convert: eps' must be in (0,1)");
  if (!keys.exact)
    throw std::invalid_argument("convert: requires an exact input law");
  const Rational eps = Rational(3, 5) * eps_prime;
  const LevelFn level = make_level_fn_eps_prime(eps_prime);

  // group the input law by prior transcript
  std::map<std::string, std::vector<const KeyOutcome*>> groups;
  for (const auto& o : keys.law.outcomes) {
    if (o.p == 0) continue;  // zero-mass transcripts are skipped entirely
    groups[transcript_key(o.w)].push_back(&o);
  }

  ConverterOutput out;
  std::uint64_t group_index = 0;
  for (const auto& [wkey, members] : groups) {
    Rational w_mass = 0, agree_mass = 0;
    std::map<long long, Rational> diag;
    RestrictedJoint joint;
    for (const auto* o : members) {
      w_mass += o->p;
      joint[{o->a, o->b}] += o->p;
      if (o->a == o->b) {
        agree_mass += o->p;
        diag[o->a] += o->p;
      }
    }

    const Transcript& w0 = members.front()->w;
    if (agree_mass == 0) {
      // no conditional-equality law exists: both parties always fail
      for (const auto* o : members) {
        KeyOutcome fo;
        fo.w = w0;
        fo.w.push_back(Message::fail());
        fo.w.push_back(Message::fail());
        fo.L = 0;
        fo.a = 1;
        fo.b = 1;
        fo.p = o->p;
        out.law.outcomes.push_back(std::move(fo));
      }
      continue;
    }

    std::vector<std::pair<long long, Rational>> cond;
    for (const auto& [k, p] : diag) cond.emplace_back(k, p / agree_mass);
    const Dist cond_eq = Dist::from_pairs(std::move(cond));

    RestrictedJoint joint_cond;
    for (const auto& [kk, p] : joint) joint_cond[kk] = p / w_mass;

    PartitionPlan plan =
        build_partition_plan(cond_eq, joint_cond, eps, level, derive_seed(seed, group_index++));
    for (const auto& sp : plan.subsets)
      if (!sp.error_bound_met) out.all_partitions_ok = false;

    for (const auto* o : members) {
      KeyOutcome fo;
      fo.w = w0;
      const auto ia = plan.index.find(o->a);
      const auto ib = plan.index.find(o->b);
      const Message ma = ia == plan.index.end()
                             ? Message::fail()
                             : Message::of({static_cast<long long>(ia->second.first),
                                            static_cast<long long>(ia->second.second)});
      const Message mb = ib == plan.index.end()
                             ? Message::fail()
                             : Message::of({static_cast<long long>(ib->second.first),
                                            static_cast<long long>(ib->second.second)});
      fo.w.push_back(ma);
      fo.w.push_back(mb);
      if (!ma.failure && !mb.failure && ma == mb) {
        const auto [i, j] = ia->second;
        const auto& block = plan.subsets[i].blocks[j];
        fo.L = plan.subsets[i].block_bits;
        auto pos = [&block](long long k) {
          return static_cast<long long>(
                     std::find(block.begin(), block.end(), k) - block.begin()) + 1;
        };
        if (fo.L == 0) {
          fo.a = 1;
          fo.b = 1;
        } else {
          fo.a = pos(o->a);
          fo.b = pos(o->b);
        }
      } else {
        fo.L = 0;
        fo.a = 1;
        fo.b = 1;
      }
      fo.p = o->p;
      out.law.outcomes.push_back(std::move(fo));
    }
    out.plans.emplace(wkey, std::move(plan));
  }

  out.law.normalize();
  out.expected_length = out.law.expected_length();
  out.distance = distance_from_ideal(out.law);
  out.h_eq_input = coinciding_entropy(keys.law);
  const double h = out.h_eq_input;
  out.length_lower_bound =
      h - std::log2(h + 1) - 2 * std::log2(1.0 / to_double(eps_prime)) - 7.082;
  out.length_bound_satisfied =
      to_double(out.expected_length) >= out.length_lower_bound - 1e-9;
  out.error_bound_satisfied =
      out.law.prob_disagree_with_key() <= eps_prime * out.law.prob_length_positive();
  return out;
}

}  // namespace vlkey
