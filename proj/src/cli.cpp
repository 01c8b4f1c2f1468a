#include "pmult/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "pmult/charlike.hpp"
#include "pmult/constructor_general.hpp"
#include "pmult/constructor_small.hpp"
#include "pmult/search.hpp"
#include "pmult/sequence_io.hpp"
#include "pmult/verifier.hpp"

namespace pmult {

namespace {

using json = nlohmann::ordered_json;

struct Globals {
  unsigned threads = 1;
  u64 rng_seed = 0;
  bool error_json = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

i64 parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw UsageError("bad " + what + " '" + s + "'");
  }
}

std::vector<int> parse_signs(const std::string& s, std::size_t count, const std::string& what) {
  std::vector<int> out;
  for (const auto& part : split(s, ',')) {
    const i64 v = parse_int(part, what);
    if (v != 1 && v != -1) throw UsageError(what + " must be +1 or -1");
    out.push_back(static_cast<int>(v));
  }
  if (out.size() != count) throw UsageError(what + " needs " + std::to_string(count) + " values");
  return out;
}

PrimeSet parse_primes(const std::string& s) {
  std::vector<u64> ps;
  for (const auto& part : split(s, ',')) {
    const i64 v = parse_int(part, "prime");
    if (v < 2) throw UsageError("bad prime '" + part + "'");
    ps.push_back(static_cast<u64>(v));
  }
  return PrimeSet(std::move(ps));
}

SequenceFormat parse_format(const std::string& f, const std::string& path) {
  if (f.empty()) return format_from_path(path);
  if (f == "csv") return SequenceFormat::Csv;
  if (f == "binary") return SequenceFormat::Binary;
  throw UsageError("format must be csv or binary");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  return f;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

std::string general_rule_name(const Relation& r) {
  if (r.kind == RuleKind::Chain) return "chain";
  static constexpr const char* steps[] = {"base", "lift", "shift", "absorb"};
  return "level" + std::to_string(r.tag / 4) + "_" + steps[r.tag % 4];
}

bool is_set(const PrimeSet& p, std::initializer_list<u64> want) { return p == PrimeSet(want); }

// ---------------------------------------------------------------------------

struct ConstructOpts {
  std::string primes;
  u64 n = 0;
  std::string out;
  std::string format;
  std::string method = "auto";
  std::string signs;
  std::string seeds;
  int f17 = 1;
  unsigned l_pairs = 15;
  bool printed_j_list = false;
  std::string free_values = "plus";
  std::string trace;
  std::string dump_levels;
  std::string program;
};

int cmd_construct(const ConstructOpts& o, const Globals& g, std::ostream& out) {
  const PrimeSet primes = parse_primes(o.primes);
  if (o.n == 0) throw UsageError("--n must be >= 1");
  const bool p23 = is_set(primes, {2, 3});
  const bool p235 = is_set(primes, {2, 3, 5});
  std::string method = o.method;
  if (method == "auto") method = p23 || p235 ? "small" : "general";
  if (method == "small" && !p23 && !p235) throw UsageError("--method small supports only 2,3 and 2,3,5");
  if (method == "general" && primes.size() < 3) throw UsageError("--method general needs at least three primes");
  if (!o.dump_levels.empty() && method != "general") throw UsageError("--dump-levels needs --method general");

  SignSequence seq;
  json summary;
  summary["primes"] = std::vector<u64>(primes.primes().begin(), primes.primes().end());
  summary["n"] = o.n;
  summary["method"] = method;
  std::vector<std::string> trace_rows;

  if (method == "small" && p23) {
    Seeds23 seeds;
    if (!o.seeds.empty()) {
      const auto v = parse_signs(o.seeds, 4, "--seeds (f1,f2,f3,f5)");
      seeds = {v[0], v[1], v[2], v[3]};
    }
    std::vector<TraceEntry> trace;
    seq = construct_p23(o.n, seeds, nullptr, o.trace.empty() ? nullptr : &trace);
    for (const auto& t : trace)
      if (t.target <= o.n)
        trace_rows.push_back(std::to_string(t.target) + "," + std::to_string(t.source) + "," + std::string(t.rule));
    summary["period"] = 6;
  } else if (method == "small") {
    Program235 prog;
    if (!o.signs.empty()) {
      const auto v = parse_signs(o.signs, 3, "--signs");
      std::copy(v.begin(), v.end(), prog.prime_signs.begin());
    }
    prog.f17 = o.f17;
    prog.l_pair_count = o.l_pairs;
    if (o.printed_j_list) prog.j_list = kJListPrinted;
    std::vector<TraceEntry> trace;
    seq = construct_p235(o.n, prog, o.trace.empty() ? nullptr : &trace);
    for (const auto& t : trace)
      trace_rows.push_back(std::to_string(t.target) + "," + std::to_string(t.source) + "," + std::string(t.rule));
    if (!o.program.empty()) {
      auto f = open_out(o.program);
      write_program_csv(prog.rules(o.n), f);
    }
    summary["period"] = 1920;
  } else {
    const Construction c = build_levels(primes);
    std::vector<int> signs(primes.size(), 1);
    if (!o.signs.empty()) signs = parse_signs(o.signs, primes.size(), "--signs");
    FreeValueFn seed_value;
    std::mt19937_64 rng;
    if (o.free_values == "random") {
      std::seed_seq sq{static_cast<std::uint32_t>(g.rng_seed), static_cast<std::uint32_t>(g.rng_seed >> 32)};
      rng.seed(sq);
      seed_value = [&rng](u64) { return rng() & 1 ? 1 : -1; };
    } else if (o.free_values != "plus") {
      throw UsageError("--free must be plus or random");
    }
    const RuleProgram prog = finalize(c, signs, seed_value, o.n);
    seq = materialize(prog, o.n);
    if (!o.trace.empty())
      for (const Relation& r : application_order(prog.relations, o.n))
        trace_rows.push_back(std::to_string(r.target) + "," + std::to_string(r.source) + "," + general_rule_name(r));
    if (!o.dump_levels.empty()) {
      auto f = open_out(o.dump_levels);
      write_levels_csv(c, o.n, f);
    }
    if (!o.program.empty()) {
      auto f = open_out(o.program);
      write_program_csv(prog, f);
    }
    json levels = json::array();
    for (const LevelState& l : c.levels)
      levels.push_back({{"level", l.level}, {"b", l.modulus}, {"a", l.exponent}, {"free_per_block", l.free_offsets.size()}});
    summary["levels"] = levels;
    summary["period"] = c.period();
  }
  if (!o.trace.empty()) {
    auto f = open_out(o.trace);
    std::string buf = "target,source,rule\n";
    for (const auto& row : trace_rows) buf += row + "\n";
    f << buf;
  }
  if (!o.out.empty()) save_sequence(seq, o.out, parse_format(o.format, o.out));
  const PartialSumProfile prof = prefix_sums(seq, o.n);
  summary["final_sum"] = prof.final_sum;
  summary["sup_abs"] = prof.sup_abs;
  summary["argmax"] = prof.argmax;
  json ps;
  for (u64 p : primes.primes()) ps[std::to_string(p)] = seq.prime_sign(p);
  summary["prime_signs"] = ps;
  if (!o.out.empty()) summary["out"] = o.out;
  emit(out, summary);
  return 0;
}

// ---------------------------------------------------------------------------

struct VerifyOpts {
  std::string in;
  std::string primes;
  std::string format;
  std::optional<i64> bound;
  std::optional<u64> period;
  std::string windows = "halves";
  u64 first_window = 1000;
  u64 settle = 0;
  std::string construction = "none";
  std::string signs;
  unsigned trials = 100;
  u64 v_horizon = 0;
  std::string report;
};

int cmd_verify(const VerifyOpts& o, const Globals& g, std::ostream& out) {
  const PrimeSet primes = parse_primes(o.primes);
  const SignSequence seq = load_sequence(o.in, primes, parse_format(o.format, o.in));
  const u64 n = seq.horizon();
  VerificationReport rep = check_multiplicativity(seq, g.threads);

  std::vector<Window> windows;
  if (o.windows == "halves")
    windows = n >= 2 ? std::vector<Window>{{1, n / 2}, {n / 2, n}} : std::vector<Window>{{1, n}};
  else if (o.windows == "dyadic")
    windows = dyadic_windows(n, o.first_window);
  else
    throw UsageError("--windows must be halves or dyadic");
  rep.append(check_bounded(seq, windows, o.settle));
  if (o.bound) rep.append(check_partial_sum_bound(seq, *o.bound));
  if (o.period) rep.append(check_zero_at_multiples(seq, *o.period));

  if (o.construction == "p235") {
    if (!is_set(primes, {2, 3, 5})) throw UsageError("--construction p235 needs --primes 2,3,5");
    Program235 prog;
    if (!o.signs.empty()) {
      const auto v = parse_signs(o.signs, 3, "--signs");
      std::copy(v.begin(), v.end(), prog.prime_signs.begin());
    }
    const RuleProgram rules = prog.rules(n);
    rep.append(check_relations(seq, rules.relations, "program235_relations"));
  } else if (o.construction == "general") {
    const Construction c = build_levels(primes);
    auto rel = relations_through(c, 1, n);
    const auto chain = c.levels.back().free_elements(n);
    for (std::size_t i = 1; i < chain.size(); ++i) rel.push_back({chain[i - 1], chain[i], RuleKind::Chain, 0});
    rep.append(check_relations(seq, rel, "construction_relations"));
    rep.append(check_conditions(c, n));
    const u64 vh = o.v_horizon ? o.v_horizon : std::min(n, 4 * c.period());
    for (const LevelState& l : c.levels)
      rep.append(check_condition_V(c, l.level, o.trials, g.rng_seed, vh, g.threads));
    for (const LevelState& l : c.levels)
      if (l.level < c.top_level()) rep.append(check_telescoping(seq, c, l.level));
  } else if (o.construction != "none") {
    throw UsageError("--construction must be none, p235 or general");
  }

  const json j = to_json(rep);
  if (!o.report.empty()) {
    auto f = open_out(o.report);
    emit(f, j);
  } else {
    emit(out, j);
  }
  return rep.passed() ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct SearchOpts {
  std::string primes;
  std::string bound = "inf";
  u64 n = 0;
  u64 budget = 10'000'000;
  std::string out;
  std::string format;
  bool scan = false;
};

int cmd_search(const SearchOpts& o, std::ostream& out) {
  const PrimeSet primes = parse_primes(o.primes);
  std::optional<i64> bound;
  if (o.bound != "inf") bound = parse_int(o.bound, "--bound");
  if (o.n == 0) throw UsageError("--n must be >= 1");
  if (o.scan) {
    if (!bound) throw UsageError("--scan needs a finite --bound");
    const HorizonScan s = max_satisfiable_horizon(primes, *bound, o.n, o.budget);
    json j;
    j["primes"] = std::vector<u64>(primes.primes().begin(), primes.primes().end());
    j["bound"] = *bound;
    j["max_sat"] = s.max_sat;
    j["first_unsat"] = s.first_unsat ? json(*s.first_unsat) : json(nullptr);
    j["exhausted"] = s.exhausted;
    j["nodes_explored"] = s.nodes_explored;
    emit(out, j);
    return s.exhausted ? 1 : 0;
  }
  const SearchResult r = brute_force_search(primes, bound, o.n, o.budget);
  if (r.witness && !o.out.empty()) save_sequence(*r.witness, o.out, parse_format(o.format, o.out));
  emit(out, to_json(r, primes, bound, o.n));
  return r.status == SearchStatus::Sat ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct CharlikeOpts {
  std::optional<u64> modulus;
  std::string character;
  std::vector<std::string> overrides;
  u64 x = 1'000'000;
  std::string emit_path;
  u64 stride = 10;
  std::string witness;
  unsigned digits = 8;
  unsigned m_max = 20;
  std::optional<u64> prime;
  std::optional<u64> p_prime;
  std::optional<u64> k;
  u64 k_max = 10'000;
  std::string method = "best";
  unsigned mobius = 0;
};

int cmd_charlike(const CharlikeOpts& o, const Globals& g, std::ostream& out) {
  if (o.modulus.has_value() == !o.character.empty()) throw UsageError("give exactly one of --modulus and --character");
  DirichletCharacter chi = [&] {
    if (o.modulus) return DirichletCharacter::quadratic(*o.modulus);
    std::ifstream f(o.character);
    if (!f) throw UsageError("cannot read " + o.character);
    nlohmann::json j;
    try {
      f >> j;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("bad character JSON: ") + e.what());
    }
    return DirichletCharacter::from_json(j);
  }();
  std::map<u64, UnitValue> overrides;
  for (const auto& s : o.overrides) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw UsageError("--override expects p=value");
    const i64 p = parse_int(s.substr(0, eq), "override prime");
    if (p < 2) throw UsageError("bad override prime");
    overrides[static_cast<u64>(p)] = parse_unit(s.substr(eq + 1));
  }
  const CharLikeFunction f(chi, overrides);

  json summary;
  summary["modulus"] = chi.modulus();
  summary["character_like"] = f.is_character_like();
  summary["order"] = f.order();
  summary["x"] = o.x;
  const auto s = fast_sum(f, o.x).to_complex();
  summary["sum"] = {{"re", s.real()}, {"im", s.imag()}};
  summary["abs"] = std::abs(s);

  if (!o.emit_path.empty()) {
    const auto rows = growth_profile(f, o.x, o.stride);
    auto file = open_out(o.emit_path);
    write_growth_csv(rows, file);
    summary["growth_rows"] = rows.size();
    summary["running_max_abs"] = rows.back().running_max_abs;
  }

  if (o.mobius) {
    u64 pp = 1;
    for (u64 p : f.primes().primes()) pp *= p;
    if (o.p_prime) pp = *o.p_prime;
    const PrefixSums full(f, o.x);
    const PrefixSums restricted(f, o.x, pp);
    std::seed_seq sq{static_cast<std::uint32_t>(g.rng_seed), static_cast<std::uint32_t>(g.rng_seed >> 32)};
    std::mt19937_64 rng(sq);
    unsigned with = 0, without = 0;
    for (unsigned t = 0; t < o.mobius; ++t) {
      const u64 x = 1 + rng() % o.x;
      const MobiusResult r = mobius_decompose(f, pp, x, full, restricted);
      with += r.with_factor_holds;
      without += r.without_factor_holds;
    }
    summary["mobius"] = {{"p_prime", pp}, {"trials", o.mobius}, {"with_factor_holds", with},
                         {"without_factor_holds", without}};
  }

  if (!o.witness.empty()) {
    u64 p = 0;
    if (o.prime) {
      p = *o.prime;
    } else {
      for (u64 q : f.primes().primes())
        if (!f(q).is_zero()) {
          p = q;
          break;
        }
      if (p == 0) throw UsageError("f vanishes at every prime of the modulus; give --prime");
    }
    if (!f.primes().contains(p)) throw UsageError("--prime must divide the modulus");
    u64 pp = 1;
    for (u64 q : f.primes().primes())
      if (q != p) pp *= q;
    if (o.p_prime) pp = *o.p_prime;
    const CharLikeFunction restricted = f.restricted(pp);
    const u64 k = o.k ? *o.k : find_k(restricted, pp, o.k_max);
    WitnessMethod m;
    if (o.method == "greedy") m = WitnessMethod::Greedy;
    else if (o.method == "exhaustive") m = WitnessMethod::Exhaustive;
    else if (o.method == "best") m = WitnessMethod::Best;
    else throw UsageError("--method must be greedy, exhaustive or best");
    const Witness w = witness_search(restricted, k, pp, p, o.digits, o.m_max, m);
    auto file = open_out(o.witness);
    emit(file, to_json(w));
    summary["witness"] = to_json(w);
  }
  emit(out, summary);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Globals g;
  CLI::App app{"P-multiplicative sequences with bounded partial sums, and character-like functions"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", g.threads, "worker threads for verification")->check(CLI::Range(1u, 256u));
  app.add_option("--rng-seed", g.rng_seed, "seed for every random choice");
  app.add_flag("--error-json", g.error_json, "print errors as JSON on stdout");

  ConstructOpts co;
  auto* construct = app.add_subcommand("construct", "build a sequence");
  construct->add_option("--primes", co.primes, "comma separated, ascending")->required();
  construct->add_option("--n", co.n, "horizon N")->required();
  construct->add_option("--out", co.out, "sequence file (.csv or .bin)");
  construct->add_option("--format", co.format)->check(CLI::IsMember({"csv", "binary"}));
  construct->add_option("--method", co.method)->check(CLI::IsMember({"auto", "small", "general"}));
  construct->add_option("--signs", co.signs, "f(p) per prime, e.g. --signs=-1,-1,1");
  construct->add_option("--seeds", co.seeds, "f(1),f(2),f(3),f(5) for primes 2,3");
  construct->add_option("--f17", co.f17, "f(17) for primes 2,3,5")->check(CLI::IsMember({-1, 1}));
  construct->add_option("--l-pairs", co.l_pairs, "j-list entries paired with l_i (2,3,5)");
  construct->add_flag("--printed-j-list", co.printed_j_list, "use 45 in place of 43 (2,3,5)");
  construct->add_option("--free", co.free_values, "free values: plus or random (general)");
  construct->add_option("--trace", co.trace, "CSV target,source,rule");
  construct->add_option("--dump-levels", co.dump_levels, "CSV level,b,a,block,free_count,relation_count");
  construct->add_option("--program", co.program, "CSV kind,x,y");

  VerifyOpts vo;
  auto* verify = app.add_subcommand("verify", "check a sequence file");
  verify->add_option("--in", vo.in)->required();
  verify->add_option("--primes", vo.primes)->required();
  verify->add_option("--format", vo.format)->check(CLI::IsMember({"csv", "binary"}));
  verify->add_option("--bound", vo.bound, "require |S(n)| <= C");
  verify->add_option("--period", vo.period, "require S(m * period) = 0");
  verify->add_option("--windows", vo.windows, "halves or dyadic")->check(CLI::IsMember({"halves", "dyadic"}));
  verify->add_option("--first-window", vo.first_window);
  verify->add_option("--settle", vo.settle, "windows ending before this only set the reference sup");
  verify->add_option("--construction", vo.construction, "none, p235 or general")
      ->check(CLI::IsMember({"none", "p235", "general"}));
  verify->add_option("--signs", vo.signs, "prime signs of the p235 program");
  verify->add_option("--trials", vo.trials, "random functions per level for condition V");
  verify->add_option("--v-horizon", vo.v_horizon, "horizon for condition V (default min(N, 4 b_1))");
  verify->add_option("--report", vo.report, "JSON report path (default stdout)");

  SearchOpts so;
  auto* search = app.add_subcommand("search", "depth-first search for bounded sequences");
  search->add_option("--primes", so.primes)->required();
  search->add_option("--bound", so.bound, "C, or inf");
  search->add_option("--n", so.n)->required();
  search->add_option("--budget", so.budget, "node limit");
  search->add_option("--out", so.out, "witness sequence file");
  search->add_option("--format", so.format)->check(CLI::IsMember({"csv", "binary"}));
  search->add_flag("--scan", so.scan, "find the largest satisfiable N <= --n");

  CharlikeOpts cho;
  auto* charlike = app.add_subcommand("charlike", "character-like functions");
  charlike->add_option("--modulus", cho.modulus, "quadratic character mod q (odd q)");
  charlike->add_option("--character", cho.character, "character table JSON");
  charlike->add_option("--override", cho.overrides, "p=value, value 0, 1, -1 or num/order")->take_all();
  charlike->add_option("--x", cho.x);
  charlike->add_option("--emit", cho.emit_path, "growth CSV");
  charlike->add_option("--stride", cho.stride, "geometric checkpoint factor");
  charlike->add_option("--witness", cho.witness, "witness JSON");
  charlike->add_option("--digits", cho.digits);
  charlike->add_option("--mmax", cho.m_max);
  charlike->add_option("--prime", cho.prime);
  charlike->add_option("--pprime", cho.p_prime, "P'");
  charlike->add_option("--k", cho.k);
  charlike->add_option("--kmax", cho.k_max);
  charlike->add_option("--method", cho.method, "greedy, exhaustive or best");
  charlike->add_option("--mobius", cho.mobius, "random x <= X for the decomposition check");

  auto fail = [&](const char* kind, const std::string& msg, int code) {
    err << "error: " << kind << ": " << msg << "\n";
    if (g.error_json) emit(out, json{{"error", kind}, {"message", msg}, {"exit_code", code}});
    return code;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return fail("UsageError", e.what(), 2);
  }

  try {
    if (*construct) return cmd_construct(co, g, out);
    if (*verify) return cmd_verify(vo, g, out);
    if (*search) return cmd_search(so, out);
    return cmd_charlike(cho, g, out);
  } catch (const UsageError& e) {
    return fail(e.kind(), e.what(), 2);
  } catch (const OverflowError& e) {
    return fail(e.kind(), e.what(), 2);
  } catch (const NotFound& e) {
    return fail(e.kind(), e.what(), 1);
  } catch (const Error& e) {
    return fail(e.kind(), e.what(), 3);
  } catch (const std::exception& e) {
    return fail("InternalError", e.what(), 3);
  }
}

}  // namespace pmult
