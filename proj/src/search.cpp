#include "pmult/search.hpp"

#include <algorithm>
#include <iterator>
#include <string>

namespace pmult {

const char* status_name(SearchStatus s) {
  switch (s) {
    case SearchStatus::Sat: return "SAT";
    case SearchStatus::Unsat: return "UNSAT";
    case SearchStatus::ExhaustedBudget: return "EXHAUSTED-BUDGET";
  }
  return "?";
}

namespace {

class Dfs {
 public:
  Dfs(const PrimeSet& primes, std::optional<i64> bound, u64 horizon, u64 budget)
      : primes_(primes), bound_(bound), n_max_(horizon), budget_(budget) {
    const auto ps = primes.primes();
    rough_.assign(n_max_ + 1, 1);
    top_.assign(n_max_ + 1, 0);
    parity_.assign(n_max_ + 1, 0);
    prime_index_.assign(n_max_ + 1, -1);
    for (std::size_t i = 0; i < ps.size(); ++i)
      if (ps[i] <= n_max_) prime_index_[ps[i]] = static_cast<int>(i);
    for (u64 m = 1; m <= n_max_; ++m) {
      u64 r = m;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        unsigned e = 0;
        while (r % ps[i] == 0) r /= ps[i], ++e;
        if (e) top_[m] = ps[i];
        if (e % 2) parity_[m] |= 1u << i;
      }
      rough_[m] = r;
    }
    val_.assign(n_max_ + 1, 0);
    sum_.assign(n_max_ + 1, 0);
    psign_.assign(ps.size(), 0);
    stamp_.assign(n_max_ + 1, 0);
    lookahead_ = bound_ && *bound_ <= 31;
    if (lookahead_) full_ = (std::uint64_t{1} << (2 * *bound_ + 1)) - 1;
    paired_ = bound_ && *bound_ <= 3 && !ps.empty();
    if (paired_) {
      const unsigned w = static_cast<unsigned>(2 * *bound_ + 1);
      pair_full_ = (std::uint64_t{1} << (w * w)) - 1;
      for (unsigned i = 0; i < w; ++i) {
        pair_low_ |= std::uint64_t{1} << (i * w);
        pair_high_ |= std::uint64_t{1} << (i * w + w - 1);
      }
    }
  }

  SearchResult run() {
    val_[1] = 1;
    sum_[1] = 1;
    if (!within(1)) {
      out_.status = SearchStatus::Unsat;
      return out_;
    }
    u64 n = 1;
    while (n < n_max_) {
      ++n;
      std::vector<u64> conflict;
      if (is_decision(n)) {
        if (out_.nodes_explored >= budget_) return out_;
        ++out_.nodes_explored;
        stack_.push_back({n, -1, {}});
        decide(n, -1);
        if (check(n, conflict)) continue;
      } else {
        assign(n, derived(n));
        if (within(n)) continue;
        conflict = all_decisions();
      }
      // Conflict-directed backjumping: `conflict` lists decisions whose
      // current values already rule out every completion.
      for (;;) {
        if (conflict.empty()) {
          out_.status = SearchStatus::Unsat;
          return out_;
        }
        const u64 h = conflict.back();
        while (stack_.back().index != h) stack_.pop_back();
        Level& top = stack_.back();
        conflict.pop_back();
        merge(top.conflict, conflict);
        if (top.value == 1) {
          conflict = std::move(top.conflict);
          stack_.pop_back();
          continue;
        }
        if (out_.nodes_explored >= budget_) return out_;
        ++out_.nodes_explored;
        ++out_.backtracks;
        top.value = 1;
        n = h;
        decide(h, 1);
        std::vector<u64> again;
        if (check(h, again)) break;
        if (!again.empty() && again.back() == h) again.pop_back();
        merge(stack_.back().conflict, again);
        conflict = std::move(stack_.back().conflict);
        stack_.pop_back();
      }
    }
    out_.status = SearchStatus::Sat;
    for (const Level& l : stack_) out_.decisions.emplace_back(l.index, l.value);
    SignSequence seq(primes_, n_max_);
    for (u64 m = 1; m <= n_max_; ++m) seq.set(m, val_[m]);
    for (std::size_t i = 0; i < primes_.size(); ++i)
      seq.set_prime_sign(primes_[i], primes_[i] <= n_max_ ? psign_[i] : -1);
    out_.witness = std::move(seq);
    return out_;
  }

 private:
  struct Level {
    u64 index;
    int value;
    std::vector<u64> conflict;  // ascending
  };

  bool is_decision(u64 n) const { return rough_[n] == n || prime_index_[n] >= 0; }

  int derived(u64 m) const {
    int v = val_[rough_[m]];
    for (std::size_t i = 0; i < psign_.size(); ++i)
      if (parity_[m] >> i & 1u) v *= psign_[i];
    return v;
  }

  void assign(u64 n, int v) {
    val_[n] = static_cast<Sign>(v);
    sum_[n] = sum_[n - 1] + v;
  }

  void decide(u64 n, int v) {
    if (prime_index_[n] >= 0) psign_[static_cast<std::size_t>(prime_index_[n])] = v;
    assign(n, v);
  }

  bool within(u64 n) const { return !bound_ || (sum_[n] <= *bound_ && -sum_[n] <= *bound_); }

  static void merge(std::vector<u64>& into, const std::vector<u64>& from) {
    std::vector<u64> out;
    std::set_union(into.begin(), into.end(), from.begin(), from.end(), std::back_inserter(out));
    into = std::move(out);
  }

  std::vector<u64> all_decisions() const {
    std::vector<u64> out;
    for (const Level& l : stack_) out.push_back(l.index);
    return out;
  }

  // Entry m is fixed once its rough part and every prime of P dividing it are decided.
  bool known(u64 m, u64 n) const { return m <= n || (rough_[m] <= n && top_[m] <= n); }

  int value(u64 m, u64 n) const { return m <= n ? val_[m] : derived(m); }

  // After deciding index n: some relaxed completion (undetermined entries
  // free) must keep |S| <= C up to N. On failure `conflict` receives the
  // decisions that fix the entries of a window no path can cross.
  bool check(u64 n, std::vector<u64>& conflict) {
    if (!bound_) return true;
    if (!lookahead_) {
      if (within(n)) return true;
      conflict = all_decisions();
      return false;
    }
    const i64 c = *bound_;
    u64 fail_at = n;
    if (within(n)) {
      std::uint64_t reach = std::uint64_t{1} << (sum_[n] + c);
      for (fail_at = n + 1; fail_at <= n_max_; ++fail_at) {
        if (!known(fail_at, n))
          reach = ((reach << 1) | (reach >> 1)) & full_;
        else if (value(fail_at, n) == 1)
          reach = (reach << 1) & full_;
        else
          reach = reach >> 1;
        if (!reach) break;
      }
      if (fail_at > n_max_) {
        if (paired_feasible(n)) return true;
        conflict = all_decisions();
        return false;
      }
    }
    // Shortest window (a, fail_at] that no starting sum in [-C, C] survives.
    std::uint64_t good = full_;
    u64 a = fail_at;
    while (a > 0 && good) {
      if (!known(a, n))
        good = ((good >> 1) | (good << 1)) & full_;
      else if (value(a, n) == 1)
        good = good >> 1;
      else
        good = (good << 1) & full_;
      --a;
    }
    ++epoch_;
    auto mark = [&](u64 d) {
      if (stamp_[d] != epoch_) stamp_[d] = epoch_, conflict.push_back(d);
    };
    for (u64 m = a + 1; m <= fail_at; ++m) {
      if (!known(m, n)) continue;
      if (rough_[m] > 1) mark(rough_[m]);
      for (std::size_t i = 0; i < psign_.size(); ++i)
        if (parity_[m] >> i & 1u) mark(primes_[i]);
    }
    std::sort(conflict.begin(), conflict.end());
    return false;
  }

  // Joint walk of (S(y), S(p y)) for y > n, p the smallest prime of P: the
  // entry p (y+1) is tied to y+1 through f(p). The start g = S(p n) is
  // guessed and later matched against the first walk.
  bool paired_feasible(u64 n) const {
    if (!paired_) return true;
    const u64 p = primes_[0];
    if (p > n || p * n >= n_max_) return true;
    const int a = psign_[0];
    const i64 c = *bound_;
    const unsigned w = static_cast<unsigned>(2 * c + 1);
    const u64 last = n_max_ / p;
    auto shift_outer = [&](std::uint64_t m, int v) { return v > 0 ? (m << w) & pair_full_ : m >> w; };
    auto shift_inner = [&](std::uint64_t m, int v) { return v > 0 ? (m & ~pair_high_) << 1 : (m & ~pair_low_) >> 1; };
    auto step_inner = [&](std::uint64_t m, u64 q) {
      if (!known(q, n)) return shift_inner(m, 1) | shift_inner(m, -1);
      return shift_inner(m, value(q, n));
    };
    const std::uint64_t row = (std::uint64_t{1} << w) - 1;
    for (i64 g = -c; g <= c; ++g) {
      const unsigned gi = static_cast<unsigned>(g + c);
      std::uint64_t state = std::uint64_t{1} << (static_cast<unsigned>(sum_[n] + c) * w + gi);
      for (u64 y = n; y < last && state; ++y) {
        std::uint64_t next = 0;
        const bool fixed = known(y + 1, n);
        for (int v = -1; v <= 1; v += 2) {
          if (fixed && v != value(y + 1, n)) continue;
          std::uint64_t m = shift_outer(state, v);
          for (u64 t = 1; t < p && m; ++t) m = step_inner(m, p * y + t);
          next |= shift_inner(m, a * v);
        }
        state = next;
        if (y + 1 == p * n) state &= row << (gi * w);
      }
      if (!state) continue;
      if (p * n <= last) return true;
      std::uint64_t reach = 0;
      for (unsigned i = 0; i < w; ++i)
        if (state & (row << (i * w))) reach |= std::uint64_t{1} << i;
      for (u64 q = last + 1; q <= p * n && reach; ++q) {
        if (!known(q, n)) reach = ((reach << 1) | (reach >> 1)) & row;
        else reach = (value(q, n) > 0 ? reach << 1 : reach >> 1) & row;
      }
      if (reach & (std::uint64_t{1} << gi)) return true;
    }
    return false;
  }

  const PrimeSet& primes_;
  std::optional<i64> bound_;
  u64 n_max_;
  u64 budget_;
  bool lookahead_ = false;
  std::uint64_t full_ = 0;
  bool paired_ = false;
  std::uint64_t pair_full_ = 0;
  std::uint64_t pair_low_ = 0;
  std::uint64_t pair_high_ = 0;
  std::vector<u64> rough_;
  std::vector<u64> top_;
  std::vector<std::uint32_t> parity_;
  std::vector<int> prime_index_;
  std::vector<Sign> val_;
  std::vector<i64> sum_;
  std::vector<int> psign_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<Level> stack_;
  SearchResult out_;
};

}  // namespace

SearchResult brute_force_search(const PrimeSet& primes, std::optional<i64> bound, u64 horizon, u64 budget) {
  if (horizon < 1) throw UsageError("search needs N >= 1");
  if (bound && *bound < 0) throw UsageError("search bound must be >= 0");
  if (primes.size() > 32) throw UsageError("search supports at most 32 primes");
  return Dfs(primes, bound, horizon, budget).run();
}

std::optional<u64> replay_rejects(const SignSequence& seq, i64 bound, u64 horizon) {
  if (horizon > seq.horizon()) throw UsageError("replay horizon exceeds the sequence");
  if (horizon >= 1 && seq.at(1) != 1) return 1;
  i64 s = 0;
  for (u64 n = 1; n <= horizon; ++n) {
    for (u64 p : seq.primes().primes())
      if (n % p == 0 && n > p && seq.at(n) != seq.prime_sign(p) * seq.at(n / p)) return n;
    s += seq.at(n);
    if (s > bound || -s > bound) return n;
  }
  return std::nullopt;
}

HorizonScan max_satisfiable_horizon(const PrimeSet& primes, i64 bound, u64 n_max, u64 budget) {
  HorizonScan scan;
  for (u64 n = 1; n <= n_max; ++n) {
    const SearchResult r = brute_force_search(primes, bound, n, budget);
    scan.nodes_explored += r.nodes_explored;
    if (r.status == SearchStatus::Sat) {
      scan.max_sat = n;
      continue;
    }
    if (r.status == SearchStatus::Unsat)
      scan.first_unsat = n;
    else
      scan.exhausted = true;
    break;
  }
  return scan;
}

nlohmann::ordered_json to_json(const SearchResult& r, const PrimeSet& primes, std::optional<i64> bound, u64 horizon) {
  nlohmann::ordered_json j;
  j["primes"] = std::vector<u64>(primes.primes().begin(), primes.primes().end());
  j["bound"] = bound ? nlohmann::ordered_json(*bound) : nlohmann::ordered_json(nullptr);
  j["n"] = horizon;
  j["status"] = status_name(r.status);
  j["nodes_explored"] = r.nodes_explored;
  j["backtracks"] = r.backtracks;
  if (r.witness) {
    nlohmann::ordered_json signs;
    for (u64 p : primes.primes()) signs[std::to_string(p)] = r.witness->prime_sign(p);
    j["prime_signs"] = signs;
    j["decisions"] = r.decisions.size();
    j["sup_abs"] = prefix_sums(*r.witness, horizon).sup_abs;
  }
  return j;
}

}  // namespace pmult
