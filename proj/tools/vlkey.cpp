// vlkey: exact simulation and verification of variable-length secret key
// agreement schemes on finite pair sources.

#include <CLI11.hpp>
#include <iostream>

#include "vlkey/converter.hpp"
#include "vlkey/entropy_model.hpp"
#include "vlkey/json_io.hpp"
#include "vlkey/key_ops.hpp"
#include "vlkey/schemes.hpp"
#include "vlkey/verifier.hpp"

using namespace vlkey;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBoundViolation = 1;
constexpr int kExitUsage = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("VLKEY_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw CLI::ValidationError("VLKEY_SEED must be an unsigned integer");
    }
  }
  return 0;
}

struct SourceArgs {
  std::string path;
  std::string builtin;
  int m = 4;
  long long n = 4;
  std::string eps = "1/4";
};

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
        s.find('E') != std::string::npos)
      return rational_from_double(std::stod(s));
    return Rational(BigInt(s));
  }
  return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

void add_source_options(CLI::App* cmd, SourceArgs& args, bool with_m = true) {
  cmd->add_option("--source", args.path, "joint source JSON file");
  cmd->add_option("--builtin", args.builtin,
                  "builtin source: matched | erasure | identity")
      ->check(CLI::IsMember({"matched", "erasure", "identity"}));
  if (with_m) cmd->add_option("--m", args.m, "bit width for builtin sources");
  cmd->add_option("--n", args.n, "alphabet size for the identity source");
  cmd->add_option("--source-eps", args.eps, "erasure probability (rational)");
}

JointSource resolve_source(const SourceArgs& args) {
  if (!args.path.empty()) return load_source(args.path, &std::cerr).source;
  if (args.builtin == "matched" || args.builtin.empty())
    return matched_pair_source(args.m);
  if (args.builtin == "erasure")
    return erasure_pair_source(args.m, parse_rational(args.eps));
  return identity_source(args.n);
}

void emit(const Json& doc, bool csv) {
  if (!csv) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  // flatten: nested keys joined by '.', arrays by index
  std::function<void(const Json&, const std::string&)> walk =
      [&](const Json& j, const std::string& prefix) {
        if (j.is_object()) {
          for (const auto& [k, v] : j.items())
            walk(v, prefix.empty() ? k : prefix + "." + k);
        } else if (j.is_array()) {
          for (std::size_t i = 0; i < j.size(); ++i)
            walk(j[i], prefix + "[" + std::to_string(i) + "]");
        } else {
          std::cout << prefix << "," << j.dump() << "\n";
        }
      };
  walk(doc, "");
}

Json bound_report_json(const BoundReport& r) {
  Json j;
  j["name"] = r.name;
  j["inputs"] = r.inputs;
  j["bound"] = r.bound;
  j["measured"] = r.measured;
  j["kind"] = r.is_lower ? "lower" : "upper";
  j["satisfied"] = r.satisfied;
  j["slack"] = r.slack;
  if (r.advisory) j["advisory"] = true;
  return j;
}

bool all_satisfied(const std::vector<BoundReport>& reports) {
  for (const auto& r : reports)
    if (!r.advisory && !r.satisfied) return false;
  return true;
}

struct SchemeRun {
  KeyLaw law;
  Json doc;
};

SchemeRun run_scheme(const std::string& kind, const JointSource& src, int m, int t,
                     const Rational& eps, bool exact, std::uint64_t seed,
                     std::uint64_t trials) {
  SchemeRun run;
  if (kind == "prefix") {
    const PrefixSchemeConfig cfg{m, t};
    auto [alice, bob] = prefix_matching_scheme(cfg);
    run.law = exact ? enumerate_protocol(src, alice, bob, prefix_scheme_options(cfg))
                    : sample_protocol(src, alice, bob, seed, trials,
                                      prefix_scheme_options(cfg))
                          .empirical;
  } else if (kind == "erasure") {
    auto [alice, bob] = erasure_scheme(m, eps);
    run.law = exact ? enumerate_protocol(src, alice, bob)
                    : sample_protocol(src, alice, bob, seed, trials).empirical;
  } else {
    throw CLI::ValidationError("unknown scheme: " + kind);
  }
  const IdealDistance dist = distance_from_ideal(run.law);
  run.doc["scheme"] = kind;
  run.doc["mode"] = exact ? "exact" : "sampled";
  run.doc["distance"] = ideal_distance_to_json(dist);
  run.doc["E_L"] = to_double(run.law.expected_length());
  run.doc["E_L_exact"] = rational_to_json(run.law.expected_length());
  run.doc["I_XY"] = mutual_information(src);
  return run;
}

int cmd_exit(const std::vector<BoundReport>& reports) {
  return all_satisfied(reports) ? kExitOk : kExitBoundViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variable-length secret key agreement toolkit"};
  app.require_subcommand(1);
  bool csv = false;
  app.add_flag("--csv", csv, "emit flattened CSV instead of JSON");

  // ---- mi ----
  auto* mi_cmd = app.add_subcommand("mi", "mutual information of a source");
  SourceArgs mi_src;
  add_source_options(mi_cmd, mi_src);

  // ---- scheme ----
  auto* scheme_cmd = app.add_subcommand("scheme", "run a concrete scheme");
  std::string scheme_kind;
  scheme_cmd->add_option("kind", scheme_kind, "prefix | erasure")->required();
  SourceArgs scheme_src;
  add_source_options(scheme_cmd, scheme_src);
  int scheme_t = 1;
  scheme_cmd->add_option("--t", scheme_t, "prefix bits exchanged");
  bool scheme_exact = false;
  scheme_cmd->add_flag("--exact", scheme_exact, "exact enumeration");
  std::uint64_t scheme_trials = 100000, scheme_seed = default_seed();
  scheme_cmd->add_option("--trials", scheme_trials, "Monte Carlo trials");
  scheme_cmd->add_option("--seed", scheme_seed, "RNG seed");
  std::string scheme_out;
  scheme_cmd->add_option("--out", scheme_out, "write the key law as JSONL");

  // ---- entropy-model ----
  auto* em_cmd = app.add_subcommand("entropy-model",
                                    "candidate-halving protocol for tentative keys");
  SourceArgs em_src;
  add_source_options(em_cmd, em_src, false);
  int em_m = 2;
  em_cmd->add_option("--m,--protocol-m", em_m,
                     "halving stages (2^m candidates); also the builtin width");
  std::string em_eps = "1/20";
  em_cmd->add_option("--eps", em_eps, "posterior stopping threshold (rational)");
  bool em_exact = false;
  em_cmd->add_flag("--exact", em_exact, "exact enumeration (m <= 3, |X| <= 8)");
  std::uint64_t em_trials = 100000, em_seed = default_seed(), em_heq_trials = 2000;
  em_cmd->add_option("--trials", em_trials, "Monte Carlo trials");
  em_cmd->add_option("--heq-trials", em_heq_trials,
                     "transcripts used for the coinciding-entropy estimate");
  em_cmd->add_option("--seed", em_seed, "RNG seed");
  std::string em_out;
  em_cmd->add_option("--out", em_out, "write the exact key law as JSONL");

  // ---- convert ----
  auto* convert_cmd = app.add_subcommand(
      "convert", "turn tentative keys into a variable-length secret key");
  std::string convert_keys;
  convert_cmd->add_option("--keys", convert_keys, "exact key law JSONL")->required();
  std::string convert_epsp = "3/10";
  convert_cmd->add_option("--eps-prime", convert_epsp, "distance target (rational)");
  std::uint64_t convert_seed = default_seed();
  convert_cmd->add_option("--seed", convert_seed, "partition search seed");
  std::string convert_out;
  convert_cmd->add_option("--out", convert_out, "write the output law as JSONL");

  // ---- audit ----
  auto* audit_cmd = app.add_subcommand("audit", "measure a scheme against the bounds");
  SourceArgs audit_src;
  add_source_options(audit_cmd, audit_src);
  std::string audit_scheme_kind = "prefix";
  audit_cmd->add_option("--scheme", audit_scheme_kind, "prefix | erasure");
  int audit_t = 1;
  audit_cmd->add_option("--t", audit_t, "prefix bits exchanged");

  // ---- bounds ----
  auto* bounds_cmd = app.add_subcommand("bounds", "closed-form bound evaluation");
  double bounds_I = 0;
  bounds_cmd->add_option("--I", bounds_I, "mutual information in bits")->required();
  double bounds_eps = 0.1;
  bounds_cmd->add_option("--eps", bounds_eps, "distance budget");
  double bounds_lambda = 0, bounds_nu = 0, bounds_heq = -1;
  bounds_cmd->add_option("--lambda", bounds_lambda, "regime eps = I^-lambda");
  bounds_cmd->add_option("--nu", bounds_nu, "regime eps = 2^(-nu I)");
  bounds_cmd->add_option("--heq", bounds_heq,
                         "coinciding-entropy proxy for the key-length bounds");

  // ---- concat ----
  auto* concat_cmd = app.add_subcommand("concat", "concatenate two key laws");
  std::string concat_a, concat_b, concat_out;
  concat_cmd->add_option("--keys", concat_a, "first key law JSONL")->required();
  concat_cmd->add_option("--keys2", concat_b, "second key law JSONL")->required();
  concat_cmd->add_option("--out", concat_out, "write the combined law");

  // ---- code ----
  auto* code_cmd = app.add_subcommand("code", "binary code construction");
  int code_n = 7, code_k = 4, code_d = 3;
  std::uint64_t code_seed = default_seed();
  code_cmd->add_option("--n", code_n, "code length")->required();
  code_cmd->add_option("--k", code_k, "code dimension")->required();
  code_cmd->add_option("--d", code_d, "required minimum distance")->required();
  code_cmd->add_option("--seed", code_seed, "construction seed");

  // ---- split ----
  auto* split_cmd = app.add_subcommand("split", "split a key and play the payoff game");
  std::string split_keys;
  split_cmd->add_option("--keys", split_keys, "key law JSONL")->required();
  int split_t = 2;
  split_cmd->add_option("--t", split_t, "segment bits");
  std::string split_game = "guess";
  split_cmd->add_option("--game", split_game, "payoff game (guess)")
      ->check(CLI::IsMember({"guess"}));
  std::uint64_t split_trials = 100000, split_seed = default_seed();
  split_cmd->add_option("--trials", split_trials, "game trials");
  split_cmd->add_option("--seed", split_seed, "RNG seed");

  // ---- pipeline ----
  auto* pipe_cmd = app.add_subcommand(
      "pipeline", "entropy model, conversion and audit end to end");
  SourceArgs pipe_src;
  add_source_options(pipe_cmd, pipe_src, false);
  int pipe_m = 2;
  pipe_cmd->add_option("--m,--protocol-m", pipe_m,
                       "halving stages; also the builtin width");
  std::string pipe_eps = "1/10", pipe_epsp = "3/10";
  pipe_cmd->add_option("--eps", pipe_eps, "halving stop threshold");
  pipe_cmd->add_option("--eps-prime", pipe_epsp, "converter distance target");
  std::uint64_t pipe_seed = default_seed();
  pipe_cmd->add_option("--seed", pipe_seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (mi_cmd->parsed()) {
      const JointSource src = resolve_source(mi_src);
      Json doc;
      doc["I_XY"] = mutual_information(src);
      doc["H_X"] = entropy(src.marginal_x());
      doc["H_Y"] = entropy(src.marginal_y());
      emit(doc, csv);
      return kExitOk;
    }

    if (scheme_cmd->parsed()) {
      const JointSource src =
          !scheme_src.path.empty() || !scheme_src.builtin.empty()
              ? resolve_source(scheme_src)
              : (scheme_kind == "erasure"
                     ? erasure_pair_source(scheme_src.m, parse_rational(scheme_src.eps))
                     : matched_pair_source(scheme_src.m));
      SchemeRun run = run_scheme(scheme_kind, src, scheme_src.m, scheme_t,
                                 parse_rational(scheme_src.eps), scheme_exact,
                                 scheme_seed, scheme_trials);
      Json config;
      config["m"] = scheme_src.m;
      config["t"] = scheme_t;
      config["exact"] = scheme_exact;
      if (!scheme_exact) {
        config["trials"] = scheme_trials;
        config["seed"] = scheme_seed;
      }
      run.doc["config"] = config;
      if (!scheme_out.empty()) save_law(scheme_out, run.law);
      emit(run.doc, csv);
      return kExitOk;
    }

    if (em_cmd->parsed()) {
      em_src.m = em_m;
      const JointSource src = resolve_source(em_src);
      const StopRule rule{parse_rational(em_eps)};
      Json doc;
      Json config;
      config["protocol_m"] = em_m;
      config["eps"] = em_eps;
      config["exact"] = em_exact;
      if (em_exact) {
        const EntropyModelKeys keys = run_halving_exact(src, em_m, rule);
        doc["H_eq"] = coinciding_entropy(keys.law);
        doc["P_disagree"] = to_double(keys.law.prob_disagree());
        std::map<int, Rational> hist;
        Rational e_t = 0;
        for (const auto& o : keys.law.outcomes) {
          const int T = static_cast<int>(o.w.size()) / 2;
          hist[T] += o.p;
          e_t += T * o.p;
        }
        doc["E_T"] = to_double(e_t);
        Json h = Json::object();
        for (const auto& [T, p] : hist) h[std::to_string(T)] = to_double(p);
        doc["stop_histogram"] = h;
        if (!em_out.empty()) save_law(em_out, keys.law);
      } else {
        config["trials"] = em_trials;
        config["seed"] = em_seed;
        config["heq_trials"] = em_heq_trials;
        const HalvingMcResult mc =
            run_halving_mc(src, em_m, rule, em_seed, em_trials, em_heq_trials);
        doc["H_eq"] = mc.h_eq.value;
        doc["H_eq_std_error"] = mc.h_eq.std_error;
        doc["P_disagree"] = mc.stats.p_disagree;
        doc["E_T"] = mc.stats.e_stop_time;
        Json h = Json::object();
        for (const auto& [T, c] : mc.stats.stop_histogram)
          h[std::to_string(T)] = c;
        doc["stop_histogram"] = h;
        if (!em_out.empty())
          throw CLI::ValidationError("--out requires --exact (exact laws only)");
      }
      doc["config"] = config;
      emit(doc, csv);
      return kExitOk;
    }

    if (convert_cmd->parsed()) {
      EntropyModelKeys keys;
      keys.law = load_law(convert_keys);
      keys.exact = true;
      const Rational epsp = parse_rational(convert_epsp);
      const ConverterOutput out = convert(keys, epsp, convert_seed);
      const auto reports = audit_converter(out, epsp);
      Json doc;
      doc["E_L"] = to_double(out.expected_length);
      doc["E_L_exact"] = rational_to_json(out.expected_length);
      doc["sup_distance"] = to_double(out.distance.sup);
      doc["distance"] = ideal_distance_to_json(out.distance);
      doc["H_eq_input"] = out.h_eq_input;
      doc["length_lower_bound"] = out.length_lower_bound;
      doc["bound_satisfied"] = out.length_bound_satisfied;
      doc["error_bound_satisfied"] = out.error_bound_satisfied;
      Json rep = Json::array();
      for (const auto& r : reports) rep.push_back(bound_report_json(r));
      doc["reports"] = rep;
      if (!convert_out.empty()) save_law(convert_out, out.law);
      emit(doc, csv);
      return cmd_exit(reports);
    }

    if (audit_cmd->parsed()) {
      const JointSource src =
          !audit_src.path.empty() || !audit_src.builtin.empty()
              ? resolve_source(audit_src)
              : (audit_scheme_kind == "erasure"
                     ? erasure_pair_source(audit_src.m, parse_rational(audit_src.eps))
                     : matched_pair_source(audit_src.m));
      SchemeRun run =
          run_scheme(audit_scheme_kind, src, audit_src.m, audit_t,
                     parse_rational(audit_src.eps), true, 0, 0);
      const auto reports = audit_scheme(src, run.law);
      Json doc = run.doc;
      Json rep = Json::array();
      for (const auto& r : reports) rep.push_back(bound_report_json(r));
      doc["reports"] = rep;
      doc["all_bounds_ok"] = all_satisfied(reports);
      emit(doc, csv);
      return cmd_exit(reports);
    }

    if (bounds_cmd->parsed()) {
      Json doc;
      const auto [lo, hi] = expected_length_bounds_from_mi(bounds_I, bounds_eps);
      doc["I"] = bounds_I;
      doc["eps"] = bounds_eps;
      doc["expected_length_lower"] = lo;
      doc["expected_length_upper"] = hi;
      const auto [klo, khi] = coinciding_entropy_bounds_from_mi(bounds_I);
      doc["coinciding_entropy_lower"] = klo;
      doc["coinciding_entropy_upper"] = khi;
      if (bounds_lambda > 0) {
        const auto [rlo, rhi] =
            expected_length_bounds_regime(bounds_I, 1, bounds_lambda);
        doc["regime_lambda"] = {{"lower", rlo}, {"upper", rhi}};
      }
      if (bounds_nu > 0) {
        const auto [rlo, rhi] = expected_length_bounds_regime(bounds_I, 2, bounds_nu);
        doc["regime_nu"] = {{"lower", rlo}, {"upper", rhi}};
      }
      if (bounds_heq >= 0) {
        const auto [hlo, hhi] = expected_length_bounds_from_heq(bounds_heq, bounds_eps);
        doc["from_heq"] = {{"lower", hlo}, {"upper", hhi}, {"upper_advisory", true}};
      }
      emit(doc, csv);
      return kExitOk;
    }

    if (concat_cmd->parsed()) {
      const KeyLaw a = load_law(concat_a);
      const KeyLaw b = load_law(concat_b);
      const KeyLaw combined = concat_keys(a, b);
      const Rational eps =
          std::max(distance_from_ideal(a).sup, distance_from_ideal(b).sup);
      PerBitReport report = per_bit_guarantees(combined);
      check_per_bit_against(report, combined, eps);
      Json doc;
      doc["E_L"] = to_double(combined.expected_length());
      doc["component_eps"] = to_double(eps);
      doc["distance"] = ideal_distance_to_json(distance_from_ideal(combined));
      Json table = Json::array();
      for (const auto& [l, bits] : report.bit_error) {
        Json row;
        row["l"] = l;
        Json errs = Json::array();
        for (const auto& v : bits) errs.push_back(to_double(v));
        row["bit_error"] = errs;
        row["H_A"] = report.entropy_a.at(l);
        row["H_B"] = report.entropy_b.at(l);
        table.push_back(row);
      }
      doc["per_bit"] = table;
      doc["bit_errors_ok"] = report.bit_errors_ok;
      doc["entropies_ok"] = report.entropies_ok;
      if (!concat_out.empty()) save_law(concat_out, combined);
      emit(doc, csv);
      return report.bit_errors_ok && report.entropies_ok ? kExitOk
                                                         : kExitBoundViolation;
    }

    if (code_cmd->parsed()) {
      const BinaryCode code = gv_parity_check(code_n, code_k, code_d, code_seed);
      Json doc;
      doc["n"] = code.n;
      doc["k"] = code.k;
      doc["requested_d"] = code_d;
      doc["verified_min_distance"] = code.min_distance;
      Json rows = Json::array();
      for (const Word row : code.parity) rows.push_back(word_to_bits(row, code.n));
      doc["parity_check"] = rows;
      Json gen = Json::array();
      for (const Word row : code.generator) gen.push_back(word_to_bits(row, code.n));
      doc["generator"] = gen;
      emit(doc, csv);
      return kExitOk;
    }

    if (split_cmd->parsed()) {
      const KeyLaw law = load_law(split_keys);
      const PayoffGame game = guessing_game(split_t);
      Json doc;
      doc["t"] = split_t;
      doc["g_star"] = game_value_ideal(game);
      doc["E_L"] = to_double(law.expected_length());
      Json runs = Json::array();
      bool all_ok = true;
      for (const Adversary& adv :
           {fixed_guess_adversary(1), replay_adversary(1),
            random_adversary(game.actions)}) {
        const GameResult r = run_payoff_game(law, game, adv, split_seed, split_trials);
        Json row;
        row["adversary"] = adv.name;
        row["mean_payoff"] = r.mean_payoff;
        row["std_error"] = r.std_error;
        row["bound"] = r.bound;
        row["bound_holds_3sigma"] = r.bound_holds_3sigma;
        row["mean_rounds"] = r.mean_rounds;
        runs.push_back(row);
        all_ok = all_ok && r.bound_holds_3sigma;
      }
      doc["games"] = runs;
      emit(doc, csv);
      return all_ok ? kExitOk : kExitBoundViolation;
    }

    if (pipe_cmd->parsed()) {
      pipe_src.m = pipe_m;
      const JointSource src = resolve_source(pipe_src);
      const StopRule rule{parse_rational(pipe_eps)};
      const Rational epsp = parse_rational(pipe_epsp);
      const EntropyModelKeys keys = run_halving_exact(src, pipe_m, rule);
      const ConverterOutput out = convert(keys, epsp, pipe_seed);
      const auto conv_reports = audit_converter(out, epsp);
      const auto scheme_reports = audit_scheme(src, out.law);
      Json doc;
      Json config;
      config["protocol_m"] = pipe_m;
      config["eps"] = pipe_eps;
      config["eps_prime"] = pipe_epsp;
      config["seed"] = pipe_seed;
      doc["config"] = config;
      doc["entropy_model"] = {{"H_eq", coinciding_entropy(keys.law)},
                              {"P_disagree", to_double(keys.law.prob_disagree())}};
      doc["converter"] = {{"E_L", to_double(out.expected_length)},
                          {"sup_distance", to_double(out.distance.sup)},
                          {"bound_satisfied", out.length_bound_satisfied},
                          {"error_bound_satisfied", out.error_bound_satisfied}};
      Json rep = Json::array();
      for (const auto& r : conv_reports) rep.push_back(bound_report_json(r));
      for (const auto& r : scheme_reports) rep.push_back(bound_report_json(r));
      doc["reports"] = rep;
      bool ok = all_satisfied(conv_reports) && all_satisfied(scheme_reports);
      doc["all_bounds_ok"] = ok;
      emit(doc, csv);
      return ok ? kExitOk : kExitBoundViolation;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const enumeration_limit_error& e) {
    std::cerr << "error: " << e.what()
              << "\nhint: this instance exceeds the exact-enumeration limits; "
                 "rerun in sampled mode (--trials N --seed S)\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
