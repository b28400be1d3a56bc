// universality.hpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// A protocol language whose regular realizability problem is Turing
// equivalent to an arbitrary oracle X over {0,1}. Binary words are plain
// std::strings of '0' and '1'.
//
// The language L over {0,1} is fixed by a rule cascade:
//   w in W                 in L iff w is the odd-exponent word of its triple
//   w = sq(x)              in L iff x in X
//   |w| odd                in L
//   w = uu                 in L
//   w = uv, |u| = |v|      in L iff u < v lexicographically
// W holds two words a b^{2r} c and a b^{2q+1} c per triple of non-empty
// words, with lengths in [2^{3|abc|+3}, 2^{3|abc|+4}).

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adsa/nfa.hpp"
#include "adsa/protocol.hpp"

namespace adsa {

using BinaryWord = std::string;

inline bool is_binary(std::string_view w) {
  return std::all_of(w.begin(), w.end(), [](char c) { return c == '0' || c == '1'; });
}

inline void require_binary(std::string_view w, const char* who) {
  if (!is_binary(w)) throw InvalidArgument(std::string(who) + ": '" + std::string(w) + "' is not a binary word");
}

// ---------------------------------------------------------------------------
// The sq encoding.

inline BinaryWord beta(std::string_view x) {
  require_binary(x, "beta");
  BinaryWord out;
  out.reserve(2 * x.size());
  for (char c : x) out += c == '0' ? "01" : "10";
  return out;
}

inline BinaryWord sq(std::string_view x) {
  BinaryWord half = beta(x) + "11";
  return half + half;
}

inline std::optional<BinaryWord> sq_decode(std::string_view w) {
  if (w.size() < 4 || w.size() % 4 != 0) return std::nullopt;
  const std::size_t h = w.size() / 2;
  if (w.substr(0, h) != w.substr(h) || w.substr(h - 2, 2) != "11") return std::nullopt;
  BinaryWord x;
  for (std::size_t i = 0; i + 2 < h; i += 2) {
    auto pair = w.substr(i, 2);
    if (pair == "01")
      x += '0';
    else if (pair == "10")
      x += '1';
    else
      return std::nullopt;
  }
  return x;
}

// ---------------------------------------------------------------------------
// The sparse language W.

/// Length window for triples of total length n is
/// [2^{mult*n + add}, 2^{mult*n + add + 1}). The default is the real
/// language; tests shrink the window to reach W with small automata.
struct WConfig {
  int mult = 3;
  int add = 3;
  int max_triple_length = 10;
};

struct WEntry {
  BinaryWord a, b, c;
  std::uint64_t r = 0;  // a b^{2r} c is in W and not in L
  std::uint64_t q = 0;  // a b^{2q+1} c is in W and in L

  std::uint64_t r_length() const { return a.size() + c.size() + 2 * r * b.size(); }
  std::uint64_t q_length() const { return a.size() + c.size() + (2 * q + 1) * b.size(); }
  BinaryWord word(std::uint64_t exponent) const {
    BinaryWord w = a;
    w.reserve(a.size() + c.size() + exponent * b.size());
    for (std::uint64_t i = 0; i < exponent; ++i) w += b;
    return w + c;
  }
  BinaryWord r_word() const { return word(2 * r); }
  BinaryWord q_word() const { return word(2 * q + 1); }

  /// Whether w = a b^k c for the given k, without building the word.
  bool spells(std::string_view w, std::uint64_t k) const {
    if (w.size() != a.size() + c.size() + k * b.size()) return false;
    if (w.substr(0, a.size()) != a || w.substr(w.size() - c.size()) != c) return false;
    for (std::size_t i = a.size(); i + c.size() < w.size(); i += b.size())
      if (w.substr(i, b.size()) != b) return false;
    return true;
  }
};

struct WHit {
  WEntry entry;
  bool in_l = false;  // true for the odd-exponent word
};

/// Memoized construction of W, one level per total triple length. Levels
/// are independent because their length windows are disjoint.
class WCache {
 public:
  explicit WCache(WConfig cfg = {}) : cfg_(cfg) {
    if (cfg.mult < 1 || cfg.add < 0) throw InvalidArgument("WConfig: mult must be positive and add non-negative");
  }

  const WConfig& config() const noexcept { return cfg_; }

  std::uint64_t window_low(int n) const { return std::uint64_t{1} << exponent(n); }
  std::uint64_t window_high(int n) const { return std::uint64_t{1} << (exponent(n) + 1); }

  /// Entries for every triple with |abc| = n, in construction order.
  const std::vector<WEntry>& level(int n) const {
    if (n < 3) throw InvalidArgument("W: triples have total length at least 3");
    if (n > cfg_.max_triple_length)
      throw ResourceLimit("W: triples of total length " + std::to_string(n) + " exceed the configured maximum " +
                          std::to_string(cfg_.max_triple_length));
    std::lock_guard lock(mu_);
    auto it = levels_.find(n);
    if (it == levels_.end()) it = levels_.emplace(n, build(n)).first;
    return it->second;
  }

  /// The level whose window contains `length`, if any.
  std::optional<int> level_for_length(std::uint64_t length) const {
    if (length == 0) return std::nullopt;
    int k = 63 - __builtin_clzll(length);
    if (k < cfg_.add || (k - cfg_.add) % cfg_.mult != 0) return std::nullopt;
    int n = (k - cfg_.add) / cfg_.mult;
    if (n < 3) return std::nullopt;
    return n;
  }

 private:
  int exponent(int n) const {
    int e = cfg_.mult * n + cfg_.add;
    if (e > 61) throw ResourceLimit("W: length window 2^" + std::to_string(e) + " is too large");
    return e;
  }

  static std::vector<BinaryWord> words_of_length(int len) {
    std::vector<BinaryWord> out;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      BinaryWord w(static_cast<std::size_t>(len), '0');
      for (int i = 0; i < len; ++i)
        if (v >> (len - 1 - i) & 1) w[static_cast<std::size_t>(i)] = '1';
      out.push_back(std::move(w));
    }
    return out;
  }

  std::vector<WEntry> build(int n) const {
    const std::uint64_t lo = window_low(n), hi = window_high(n);
    std::set<std::uint64_t> used;
    std::vector<WEntry> out;
    // Smallest j >= 0 with base + step*j >= lo whose length is still free.
    auto pick = [&](std::uint64_t base, std::uint64_t step, const WEntry& e, const char* set) {
      std::uint64_t j = lo > base ? (lo - base + step - 1) / step : 0;
      while (base + step * j < hi && used.contains(base + step * j)) ++j;
      if (base + step * j >= hi)
        throw Error(std::string("W: the set ") + set + " is empty for (" + e.a + "," + e.b + "," + e.c + ")");
      used.insert(base + step * j);
      return j;
    };
    for (int la = 1; la <= n - 2; ++la)
      for (const auto& a : words_of_length(la))
        for (int lb = 1; lb <= n - 1 - la; ++lb)
          for (const auto& b : words_of_length(lb))
            for (const auto& c : words_of_length(n - la - lb)) {
              WEntry e{a, b, c, 0, 0};
              const std::uint64_t ac = a.size() + c.size(), bl = b.size();
              e.r = pick(ac, 2 * bl, e, "E");
              e.q = pick(ac + bl, 2 * bl, e, "O");
              out.push_back(std::move(e));
            }
    return out;
  }

  WConfig cfg_;
  mutable std::mutex mu_;
  mutable std::map<int, std::vector<WEntry>> levels_;
};

inline WCache& default_w_cache() {
  static WCache cache;
  return cache;
}

inline WEntry w_params(const BinaryWord& a, const BinaryWord& b, const BinaryWord& c,
                       const WCache& cache = default_w_cache()) {
  for (const auto* w : {&a, &b, &c}) {
    require_binary(*w, "w_params");
    if (w->empty()) throw InvalidArgument("w_params: triple words must be non-empty");
  }
  for (const auto& e : cache.level(static_cast<int>(a.size() + b.size() + c.size())))
    if (e.a == a && e.b == b && e.c == c) return e;
  throw Error("internal error: triple missing from its W level");
}

namespace detail {

inline void check_not_sq(std::string_view w) {
  if (sq_decode(w)) throw Error("internal error: a W word is an sq image");
}

}  // namespace detail

inline std::optional<WHit> w_membership(std::string_view w, const WCache& cache = default_w_cache()) {
  if (!is_binary(w)) return std::nullopt;
  auto n = cache.level_for_length(w.size());
  if (!n) return std::nullopt;
  for (const auto& e : cache.level(*n)) {
    if (e.r_length() == w.size() && e.spells(w, 2 * e.r)) {
      detail::check_not_sq(w);
      return WHit{e, false};
    }
    if (e.q_length() == w.size() && e.spells(w, 2 * e.q + 1)) {
      detail::check_not_sq(w);
      return WHit{e, true};
    }
  }
  return std::nullopt;
}

/// Every word of W with length at most max_len, paired with its L bit.
inline std::vector<std::pair<BinaryWord, bool>> w_words_up_to(std::uint64_t max_len,
                                                              const WCache& cache = default_w_cache()) {
  std::vector<std::pair<BinaryWord, bool>> out;
  for (int n = 3; cache.window_low(n) <= max_len; ++n)
    for (const auto& e : cache.level(n)) {
      if (e.r_length() <= max_len) out.emplace_back(e.r_word(), false);
      if (e.q_length() <= max_len) out.emplace_back(e.q_word(), true);
    }
  for (const auto& [w, bit] : out) detail::check_not_sq(w);
  return out;
}

// ---------------------------------------------------------------------------
// The oracle X and the language L.

/// Membership predicate for X with a call counter. Not thread-safe.
class OracleX {
 public:
  explicit OracleX(std::function<bool(const BinaryWord&)> pred) : pred_(std::move(pred)) {}

  static OracleX from_set(std::set<BinaryWord> members) {
    for (const auto& m : members) require_binary(m, "OracleX");
    return OracleX([s = std::move(members)](const BinaryWord& x) { return s.contains(x); });
  }

  bool member(const BinaryWord& x) const {
    ++calls_;
    return pred_(x);
  }
  std::size_t calls() const noexcept { return calls_; }
  void reset_calls() noexcept { calls_ = 0; }

 private:
  std::function<bool(const BinaryWord&)> pred_;
  mutable std::size_t calls_ = 0;
};

inline bool l_membership(std::string_view w, const OracleX& x, const WCache& cache = default_w_cache()) {
  require_binary(w, "l_membership");
  if (auto hit = w_membership(w, cache)) return hit->in_l;
  if (auto pre = sq_decode(w)) return x.member(*pre);
  if (w.size() % 2 == 1) return true;
  const std::size_t h = w.size() / 2;
  auto u = w.substr(0, h), v = w.substr(h);
  if (u == v) return true;
  return u < v;
}

/// Storage-free protocol: "u # +" for u in L, "u # -" otherwise, and the
/// reset block "r r" with an empty write word.
class ProtXOracle : public ProtocolOracle {
 public:
  explicit ProtXOracle(std::shared_ptr<const OracleX> x, const WCache& cache = default_w_cache())
      : x_(std::move(x)), cache_(cache), pa_(Alphabet{"0", "1"}, Alphabet{"#", "r"}, Alphabet{"+", "-", "r"},
                                             {{"#", "+"}, {"#", "-"}, {"r", "r"}}) {}

  const ProtocolAlphabet& alphabet() const override { return pa_; }
  std::string name() const override { return "protx"; }

  std::optional<Response> respond(const OracleState&, const Word& u, const Symbol& q) const override {
    if (q == "#") return Response{l_membership(join(u, ""), *x_, cache_) ? "+" : "-", {}};
    if (q == "r" && u.empty()) return Response{"r", {}};
    return std::nullopt;
  }

  std::optional<std::pair<Symbol, Symbol>> reset_symbols() const override { return std::make_pair("r", "r"); }

 private:
  std::shared_ptr<const OracleX> x_;
  const WCache& cache_;
  ProtocolAlphabet pa_;
};

inline OraclePtr prot_x_oracle(std::shared_ptr<const OracleX> x, const WCache& cache = default_w_cache()) {
  return std::make_shared<ProtXOracle>(std::move(x), cache);
}

inline Alphabet protx_alphabet() { return Alphabet{"0", "1", "#", "r", "+", "-"}; }

/// The protocol sq(x) # + as tokens.
inline Word forward_reduce(std::string_view x) { return concat(chars(sq(x)), Word{"#", "+"}); }

// ---------------------------------------------------------------------------
// Path lengths and lexicographic extremes in acyclic automata.

/// For every pair (s1, s2), the set of lengths of paths from s1 to s2.
class LengthSets {
 public:
  explicit LengthSets(const Nfa& a) : n_(a.num_states()), bits_(n_ * n_, std::vector<bool>(n_ + 1, false)) {
    if (a.has_epsilon()) throw InvalidArgument("length_sets: automaton has epsilon moves");
    // Reverse topological order by iterative DFS; a back edge is a cycle.
    std::vector<int> color(n_, 0), order;
    for (std::size_t root = 0; root < n_; ++root) {
      if (color[root]) continue;
      std::vector<std::pair<int, std::size_t>> stack{{static_cast<int>(root), 0}};
      color[root] = 1;
      while (!stack.empty()) {
        auto& [s, i] = stack.back();
        const auto& es = a.edges(s);
        if (i < es.size()) {
          int t = es[i++].target;
          if (color[static_cast<std::size_t>(t)] == 1) throw InvalidArgument("length_sets: automaton has a cycle");
          if (color[static_cast<std::size_t>(t)] == 0) {
            color[static_cast<std::size_t>(t)] = 1;
            stack.emplace_back(t, 0);
          }
        } else {
          color[static_cast<std::size_t>(s)] = 2;
          order.push_back(s);
          stack.pop_back();
        }
      }
    }
    for (int s1 : order) {
      at(s1, s1)[0] = true;
      for (const auto& e : a.edges(s1))
        for (std::size_t s2 = 0; s2 < n_; ++s2) {
          const auto& from = at(e.target, static_cast<int>(s2));
          auto& to = at(s1, static_cast<int>(s2));
          for (std::size_t k = 0; k < n_; ++k)
            if (from[k]) to[k + 1] = true;
        }
    }
  }

  std::size_t num_states() const noexcept { return n_; }

  bool contains(int s1, int s2, std::size_t k) const { return k <= n_ && at(s1, s2)[k]; }
  bool contains(int s1, const StateSet& targets, std::size_t k) const {
    return std::any_of(targets.begin(), targets.end(), [&](int t) { return contains(s1, t, k); });
  }
  std::vector<std::size_t> lengths(int s1, int s2) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k <= n_; ++k)
      if (at(s1, s2)[k]) out.push_back(k);
    return out;
  }

 private:
  std::vector<bool>& at(int s1, int s2) { return bits_[static_cast<std::size_t>(s1) * n_ + static_cast<std::size_t>(s2)]; }
  const std::vector<bool>& at(int s1, int s2) const {
    return bits_.at(static_cast<std::size_t>(s1) * n_ + static_cast<std::size_t>(s2));
  }

  std::size_t n_;
  std::vector<std::vector<bool>> bits_;
};

inline LengthSets length_sets(const Nfa& a) { return LengthSets(a); }

/// Min0/Max0 range over words of length l from the initial state to s;
/// Min1/Max1 over words of length l from s to an accepting state.
enum class Extreme { Min0, Max0, Min1, Max1 };

inline std::optional<BinaryWord> lex_extreme(const Nfa& a, const LengthSets& ls, int s, std::size_t l, Extreme kind) {
  for (const auto& sym : a.alphabet().symbols())
    if (sym != "0" && sym != "1") throw InvalidArgument("lex_extreme: alphabet must be {0,1}");
  const bool left = kind == Extreme::Min0 || kind == Extreme::Max0;
  const bool minimal = kind == Extreme::Min0 || kind == Extreme::Min1;
  const StateSet finals = a.accepting_states();
  auto fits = [&](int from, std::size_t rest) { return left ? ls.contains(from, s, rest) : ls.contains(from, finals, rest); };
  StateSet cur{left ? a.initial() : s};
  if (!fits(cur.front(), l)) return std::nullopt;
  std::vector<int> order;
  for (const char* c : minimal ? std::vector<const char*>{"0", "1"} : std::vector<const char*>{"1", "0"})
    if (auto idx = a.alphabet().find(c)) order.push_back(*idx);
  BinaryWord u;
  for (std::size_t k = 0; k < l; ++k) {
    bool moved = false;
    for (int sym : order) {
      StateSet next = step(a, cur, sym);
      if (std::any_of(next.begin(), next.end(), [&](int t) { return fits(t, l - k - 1); })) {
        u += a.alphabet()[sym];
        cur = std::move(next);
        moved = true;
        break;
      }
    }
    if (!moved) return std::nullopt;
  }
  return u;
}

inline std::optional<BinaryWord> lex_extreme(const Nfa& a, int s, std::size_t l, Extreme kind) {
  return lex_extreme(a, LengthSets(a), s, l, kind);
}

// ---------------------------------------------------------------------------
// L- and co-L-transitions.

struct DeltaSets {
  StateSet plus;   // reachable by some word of L
  StateSet minus;  // reachable by some word outside L
};

namespace detail {

/// Memoizing front for X so that repeated sq tests cost one call.
class XMemo {
 public:
  explicit XMemo(const OracleX& x) : x_(x) {}
  bool member(const BinaryWord& w) {
    auto it = memo_.find(w);
    if (it == memo_.end()) it = memo_.emplace(w, x_.member(w)).first;
    return it->second;
  }

 private:
  const OracleX& x_;
  std::map<BinaryWord, bool> memo_;
};

/// a restricted to the words that avoid W. Pairs (state, prefix) where the
/// prefix is tracked while it may still complete a W word.
inline Nfa avoid_w(const Nfa& t, const std::vector<std::pair<BinaryWord, bool>>& wwords) {
  std::set<BinaryWord> prefixes, full;
  for (const auto& [w, bit] : wwords) {
    full.insert(w);
    for (std::size_t i = 0; i <= w.size(); ++i) prefixes.insert(w.substr(0, i));
  }
  Nfa out(t.alphabet());
  std::map<std::pair<int, std::optional<BinaryWord>>, int> ids;
  std::deque<std::pair<int, std::optional<BinaryWord>>> queue;
  auto get = [&](int s, std::optional<BinaryWord> p) {
    auto key = std::make_pair(s, p);
    if (auto it = ids.find(key); it != ids.end()) return it->second;
    int id = out.add_state("(" + t.state_name(s) + "," + (p ? (p->empty() ? "eps" : *p) : "_") + ")");
    if (t.is_accepting(s) && (!p || !full.contains(*p))) out.set_accepting(id);
    ids.emplace(key, id);
    queue.push_back(std::move(key));
    return id;
  };
  out.set_initial(get(t.initial(), prefixes.empty() ? std::nullopt : std::optional<BinaryWord>("")));
  while (!queue.empty()) {
    auto [s, p] = queue.front();
    queue.pop_front();
    int src = ids.at({s, p});
    for (const auto& e : t.edges(s)) {
      std::optional<BinaryWord> np;
      if (p) {
        BinaryWord ext = *p + t.alphabet()[e.symbol];
        if (prefixes.contains(ext)) np = std::move(ext);
      }
      out.add_transition(src, e.symbol, get(e.target, np));
    }
  }
  return out;
}

/// Words of a of the given parity (0 even, 1 odd).
inline Nfa with_parity(const Nfa& a, int parity) {
  Nfa out(a.alphabet());
  for (int f = 0; f < 2; ++f)
    for (std::size_t s = 0; s < a.num_states(); ++s) {
      int id = out.add_state("(" + a.state_name(static_cast<int>(s)) + "," + std::to_string(f) + ")");
      if (f == parity && a.is_accepting(static_cast<int>(s))) out.set_accepting(id);
    }
  const int n = static_cast<int>(a.num_states());
  out.set_initial(a.initial());
  for (int f = 0; f < 2; ++f)
    for (int s = 0; s < n; ++s)
      for (const auto& e : a.edges(s)) out.add_transition(f * n + s, e.symbol, (1 - f) * n + e.target);
  return out;
}

/// Same language minus the empty word, with one accepting state that has
/// no outgoing moves.
inline Nfa single_final(const Nfa& a) {
  Nfa out(a.alphabet());
  for (std::size_t s = 0; s < a.num_states(); ++s) out.add_state(a.state_name(static_cast<int>(s)));
  int f = out.add_state("final");
  out.set_accepting(f);
  out.set_initial(a.initial());
  for (std::size_t s = 0; s < a.num_states(); ++s)
    for (const auto& e : a.edges(static_cast<int>(s))) {
      out.add_transition(static_cast<int>(s), e.symbol, e.target);
      if (a.is_accepting(e.target)) out.add_transition(static_cast<int>(s), e.symbol, f);
    }
  return out;
}

/// The even-length, W-free case: decides membership of the target in the
/// L and co-L sets through lexicographic extremes at each split point.
inline void even_case(const Nfa& even, XMemo& x, bool& plus, bool& minus) {
  if (is_empty(even)) return;
  if (even.is_accepting(even.initial())) plus = true;  // the empty word is uu
  Nfa t = trim(single_final(even));
  if (is_empty(t)) return;
  LengthSets ls(t);
  const int f = t.accepting_states().front();
  const std::size_t max_half = t.num_states() / 2;
  for (std::size_t si = 0; si < t.num_states() && !(plus && minus); ++si) {
    int s = static_cast<int>(si);
    for (std::size_t l = 1; l <= max_half && !(plus && minus); ++l) {
      if (!ls.contains(t.initial(), s, l) || !ls.contains(s, f, l)) continue;
      auto min0 = *lex_extreme(t, ls, s, l, Extreme::Min0);
      auto max0 = *lex_extreme(t, ls, s, l, Extreme::Max0);
      auto min1 = *lex_extreme(t, ls, s, l, Extreme::Min1);
      auto max1 = *lex_extreme(t, ls, s, l, Extreme::Max1);
      if (!plus) {
        if (min0 < max1) {
          plus = true;
        } else if (min0 == max1) {
          auto pre = sq_decode(min0 + max1);
          plus = pre ? x.member(*pre) : true;
        }
      }
      if (!minus) {
        if (min1 < max0) {
          minus = true;
        } else if (min1 == max0) {
          auto pre = sq_decode(min1 + max0);
          minus = pre && !x.member(*pre);
        }
      }
    }
  }
}

inline DeltaSets delta_sets(const Nfa& a, int s, XMemo& x, const WCache& cache) {
  for (const auto& sym : a.alphabet().symbols())
    if (sym != "0" && sym != "1") throw InvalidArgument("delta_L: alphabet must be {0,1}");
  DeltaSets out;
  for (std::size_t ti = 0; ti < a.num_states(); ++ti) {
    int target = static_cast<int>(ti);
    Nfa t = trim(remove_epsilon(sub_automaton(a, s, target)));
    if (is_empty(t)) continue;
    bool plus = false, minus = false;
    if (has_symbol_cycle(t)) {
      plus = minus = true;
    } else {
      auto wwords = w_words_up_to(t.num_states(), cache);
      for (const auto& [w, in_l] : wwords)
        if (accepts(t, chars(w))) (in_l ? plus : minus) = true;
      Nfa free_of_w = avoid_w(t, wwords);
      if (!plus && !is_empty(with_parity(free_of_w, 1))) plus = true;
      if (!(plus && minus)) even_case(trim(with_parity(free_of_w, 0)), x, plus, minus);
    }
    if (plus) out.plus.push_back(target);
    if (minus) out.minus.push_back(target);
  }
  return out;
}

}  // namespace detail

inline DeltaSets delta_sets(const Nfa& a, int s, const OracleX& x, const WCache& cache = default_w_cache()) {
  detail::XMemo memo(x);
  return detail::delta_sets(a, s, memo, cache);
}

inline StateSet delta_L(const Nfa& a, int s, const OracleX& x, const WCache& cache = default_w_cache()) {
  return delta_sets(a, s, x, cache).plus;
}

inline StateSet delta_Lbar(const Nfa& a, int s, const OracleX& x, const WCache& cache = default_w_cache()) {
  return delta_sets(a, s, x, cache).minus;
}

// ---------------------------------------------------------------------------
// The decision procedure.

struct UniversalityAnswer {
  bool nonempty = false;
  std::size_t oracle_calls = 0;
  std::optional<Word> pattern;  // word of R over {y, n, #, +, -, r}
};

/// Decides whether L(a) meets the ProtX protocol language using X only
/// through membership calls.
inline UniversalityAnswer universality_decide(const Nfa& a, const OracleX& x, const WCache& cache = default_w_cache()) {
  const Alphabet full = protx_alphabet();
  if (!full.includes(a.alphabet())) throw InvalidArgument("universality_decide: alphabet must be within {0,1,#,r,+,-}");
  const std::size_t calls_before = x.calls();
  Nfa e = remove_epsilon(a);
  const int n = static_cast<int>(e.num_states());

  Nfa bin(Alphabet{"0", "1"});
  for (int s = 0; s < n; ++s) bin.add_state(e.state_name(s));
  bin.set_initial(e.initial());
  for (int s = 0; s < n; ++s)
    for (const auto& ed : e.edges(s)) {
      const auto& sym = e.alphabet()[ed.symbol];
      if (sym == "0" || sym == "1") bin.add_transition(s, bin.alphabet().index_of(sym), ed.target);
    }

  Nfa b(Alphabet{"y", "n", "#", "+", "-", "r"});
  for (int s = 0; s < n; ++s) {
    b.add_state(e.state_name(s));
    if (e.is_accepting(s)) b.set_accepting(s);
  }
  b.set_initial(e.initial());
  detail::XMemo memo(x);
  for (int s = 0; s < n; ++s) {
    auto d = detail::delta_sets(bin, s, memo, cache);
    for (int t : d.plus) b.add_transition(s, b.alphabet().index_of("y"), t);
    for (int t : d.minus) b.add_transition(s, b.alphabet().index_of("n"), t);
    for (const auto& ed : e.edges(s)) {
      const auto& sym = e.alphabet()[ed.symbol];
      if (sym != "0" && sym != "1") b.add_transition(s, b.alphabet().index_of(sym), ed.target);
    }
  }

  // (y#+ | n#- | rr)*
  Nfa shape(b.alphabet());
  for (const char* name : {"p", "y", "n", "y#", "n#", "r"}) shape.add_state(name);
  shape.set_accepting(0);
  shape.add_transition("p", "y", "y");
  shape.add_transition("y", "#", "y#");
  shape.add_transition("y#", "+", "p");
  shape.add_transition("p", "n", "n");
  shape.add_transition("n", "#", "n#");
  shape.add_transition("n#", "-", "p");
  shape.add_transition("p", "r", "r");
  shape.add_transition("r", "r", "p");

  Nfa r = product_intersect(b, shape);
  UniversalityAnswer ans;
  // Shortest accepted word by breadth-first search.
  std::vector<int> parent(r.num_states(), -2), via(r.num_states(), kEps);
  std::deque<int> queue{r.initial()};
  parent[static_cast<std::size_t>(r.initial())] = -1;
  while (!queue.empty() && !ans.nonempty) {
    int s = queue.front();
    queue.pop_front();
    if (r.is_accepting(s)) {
      Word w;
      for (int i = s; parent[static_cast<std::size_t>(i)] >= 0; i = parent[static_cast<std::size_t>(i)])
        w.push_back(r.alphabet()[via[static_cast<std::size_t>(i)]]);
      std::reverse(w.begin(), w.end());
      ans.nonempty = true;
      ans.pattern = std::move(w);
      break;
    }
    for (const auto& ed : r.edges(s))
      if (parent[static_cast<std::size_t>(ed.target)] == -2) {
        parent[static_cast<std::size_t>(ed.target)] = s;
        via[static_cast<std::size_t>(ed.target)] = ed.symbol;
        queue.push_back(ed.target);
      }
  }
  ans.oracle_calls = x.calls() - calls_before;
  return ans;
}

}  // namespace adsa
