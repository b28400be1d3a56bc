// nfa.hpp
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
// \file
// Finite automata over token alphabets and the graph algorithms the rest of
// the library is built on: epsilon closure, trimming, products, emptiness,
// finiteness and bounded enumeration.

#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "adsa/alphabet.hpp"
#include "adsa/error.hpp"

namespace adsa {

/// Symbol index of an epsilon move.
inline constexpr int kEps = -1;

/// Sorted, duplicate-free list of state indices.
using StateSet = std::vector<int>;

struct Edge {
  int symbol;  // index into the alphabet, or kEps
  int target;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Nondeterministic finite automaton with epsilon moves. States carry opaque
/// string names; algorithms work on their dense indices. A DFA is an Nfa for
/// which is_deterministic() holds.
class Nfa {
 public:
  Nfa() = default;
  explicit Nfa(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t num_states() const noexcept { return names_.size(); }

  const std::string& state_name(int s) const { return names_.at(static_cast<std::size_t>(s)); }

  std::optional<int> find_state(std::string_view name) const {
    if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
    return std::nullopt;
  }

  int state(std::string_view name) const {
    if (auto s = find_state(name)) return *s;
    throw InvalidArgument("unknown state '" + std::string(name) + "'");
  }

  int add_state(std::string name) {
    if (name.empty()) throw InvalidArgument("state ids must be non-empty");
    if (index_.contains(name)) throw InvalidArgument("duplicate state '" + name + "'");
    int id = static_cast<int>(names_.size());
    index_.emplace(name, id);
    names_.push_back(std::move(name));
    out_.emplace_back();
    accepting_.push_back(false);
    if (initial_ < 0) initial_ = id;
    return id;
  }

  int ensure_state(const std::string& name) {
    if (auto s = find_state(name)) return *s;
    return add_state(name);
  }

  int initial() const {
    if (initial_ < 0) throw InvalidArgument("automaton has no states");
    return initial_;
  }
  void set_initial(int s) {
    check_state(s);
    initial_ = s;
  }

  bool is_accepting(int s) const { return accepting_.at(static_cast<std::size_t>(s)); }
  void set_accepting(int s, bool value = true) {
    check_state(s);
    accepting_[static_cast<std::size_t>(s)] = value;
  }
  StateSet accepting_states() const {
    StateSet out;
    for (std::size_t s = 0; s < accepting_.size(); ++s)
      if (accepting_[s]) out.push_back(static_cast<int>(s));
    return out;
  }

  /// Adds src --symbol--> dst; duplicates are ignored.
  void add_transition(int src, int symbol, int dst) {
    check_state(src);
    check_state(dst);
    if (symbol != kEps && (symbol < 0 || static_cast<std::size_t>(symbol) >= alphabet_.size()))
      throw InvalidArgument("transition symbol index out of range");
    auto& edges = out_[static_cast<std::size_t>(src)];
    Edge e{symbol, dst};
    if (std::find(edges.begin(), edges.end(), e) == edges.end()) edges.push_back(e);
  }

  /// Name-based variant; `symbol` may be the reserved "eps".
  void add_transition(std::string_view src, std::string_view symbol, std::string_view dst) {
    int sym = symbol == kEpsilonToken ? kEps : alphabet_.index_of(symbol);
    add_transition(state(src), sym, state(dst));
  }

  const std::vector<Edge>& edges(int s) const { return out_.at(static_cast<std::size_t>(s)); }

  std::size_t num_transitions() const {
    std::size_t n = 0;
    for (const auto& e : out_) n += e.size();
    return n;
  }

  bool has_epsilon() const {
    for (const auto& edges : out_)
      for (const auto& e : edges)
        if (e.symbol == kEps) return true;
    return false;
  }

  bool is_deterministic() const {
    for (const auto& edges : out_) {
      std::vector<int> seen;
      for (const auto& e : edges) {
        if (e.symbol == kEps) return false;
        if (std::find(seen.begin(), seen.end(), e.symbol) != seen.end()) return false;
        seen.push_back(e.symbol);
      }
    }
    return true;
  }

  /// Maps a token word to symbol indices; throws on undeclared symbols.
  std::vector<int> encode(const Word& w) const {
    std::vector<int> out;
    out.reserve(w.size());
    for (const auto& t : w) out.push_back(alphabet_.index_of(t));
    return out;
  }

 private:
  void check_state(int s) const {
    if (s < 0 || static_cast<std::size_t>(s) >= names_.size())
      throw InvalidArgument("state index out of range");
  }

  Alphabet alphabet_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<Edge>> out_;
  std::vector<bool> accepting_;
  int initial_ = -1;
};

// ---------------------------------------------------------------------------
// Set-based stepping

inline StateSet normalize(StateSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline StateSet epsilon_closure(const Nfa& a, StateSet set) {
  std::vector<bool> seen(a.num_states(), false);
  std::vector<int> stack;
  for (int s : set) {
    if (!seen[static_cast<std::size_t>(s)]) {
      seen[static_cast<std::size_t>(s)] = true;
      stack.push_back(s);
    }
  }
  StateSet out;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    out.push_back(s);
    for (const auto& e : a.edges(s)) {
      if (e.symbol == kEps && !seen[static_cast<std::size_t>(e.target)]) {
        seen[static_cast<std::size_t>(e.target)] = true;
        stack.push_back(e.target);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Symbol successors of `set` without closure.
inline StateSet step(const Nfa& a, const StateSet& set, int symbol) {
  StateSet out;
  for (int s : set)
    for (const auto& e : a.edges(s))
      if (e.symbol == symbol) out.push_back(e.target);
  return normalize(std::move(out));
}

/// Symbol successors followed by epsilon closure.
inline StateSet advance(const Nfa& a, const StateSet& set, int symbol) {
  return epsilon_closure(a, step(a, set, symbol));
}

inline StateSet initial_closure(const Nfa& a) { return epsilon_closure(a, {a.initial()}); }

inline bool any_accepting(const Nfa& a, const StateSet& set) {
  return std::any_of(set.begin(), set.end(), [&](int s) { return a.is_accepting(s); });
}

/// Runs the subset simulation over already-encoded symbols.
inline StateSet run(const Nfa& a, StateSet from, const std::vector<int>& symbols) {
  StateSet cur = epsilon_closure(a, std::move(from));
  for (int sym : symbols) {
    if (cur.empty()) break;
    cur = advance(a, cur, sym);
  }
  return cur;
}

inline bool accepts(const Nfa& a, const Word& w) {
  return any_accepting(a, run(a, {a.initial()}, a.encode(w)));
}

// ---------------------------------------------------------------------------
// Reachability and trimming

inline std::vector<bool> reachable_from(const Nfa& a, const StateSet& sources) {
  std::vector<bool> seen(a.num_states(), false);
  std::vector<int> stack;
  for (int s : sources) {
    if (!seen[static_cast<std::size_t>(s)]) {
      seen[static_cast<std::size_t>(s)] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (const auto& e : a.edges(s)) {
      if (!seen[static_cast<std::size_t>(e.target)]) {
        seen[static_cast<std::size_t>(e.target)] = true;
        stack.push_back(e.target);
      }
    }
  }
  return seen;
}

inline std::vector<std::vector<int>> reverse_adjacency(const Nfa& a) {
  std::vector<std::vector<int>> rev(a.num_states());
  for (std::size_t s = 0; s < a.num_states(); ++s)
    for (const auto& e : a.edges(static_cast<int>(s)))
      rev[static_cast<std::size_t>(e.target)].push_back(static_cast<int>(s));
  return rev;
}

/// States from which some state of `targets` is reachable.
inline std::vector<bool> coreachable_to(const Nfa& a, const StateSet& targets) {
  auto rev = reverse_adjacency(a);
  std::vector<bool> seen(a.num_states(), false);
  std::vector<int> stack;
  for (int s : targets) {
    if (!seen[static_cast<std::size_t>(s)]) {
      seen[static_cast<std::size_t>(s)] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int p : rev[static_cast<std::size_t>(s)]) {
      if (!seen[static_cast<std::size_t>(p)]) {
        seen[static_cast<std::size_t>(p)] = true;
        stack.push_back(p);
      }
    }
  }
  return seen;
}

inline std::vector<bool> coreachable(const Nfa& a) { return coreachable_to(a, a.accepting_states()); }

/// One non-accepting state, no transitions.
inline Nfa empty_language(const Alphabet& alphabet, const std::string& name = "empty") {
  Nfa out(alphabet);
  out.add_state(name);
  return out;
}

/// Restriction of `a` to the states marked in `keep`, which must contain the
/// initial state. State names and their relative order are preserved.
inline Nfa restrict_states(const Nfa& a, const std::vector<bool>& keep) {
  Nfa out(a.alphabet());
  std::vector<int> map(a.num_states(), -1);
  for (std::size_t s = 0; s < a.num_states(); ++s)
    if (keep[s]) map[s] = out.add_state(a.state_name(static_cast<int>(s)));
  out.set_initial(map[static_cast<std::size_t>(a.initial())]);
  for (std::size_t s = 0; s < a.num_states(); ++s) {
    if (!keep[s]) continue;
    if (a.is_accepting(static_cast<int>(s))) out.set_accepting(map[s]);
    for (const auto& e : a.edges(static_cast<int>(s)))
      if (keep[static_cast<std::size_t>(e.target)])
        out.add_transition(map[s], e.symbol, map[static_cast<std::size_t>(e.target)]);
  }
  return out;
}

/// Keeps exactly the states that are reachable and coreachable. An automaton
/// with empty language becomes the canonical one-state empty automaton.
inline Nfa trim(const Nfa& a) {
  auto reach = reachable_from(a, {a.initial()});
  auto coreach = coreachable(a);
  std::vector<bool> keep(a.num_states());
  for (std::size_t s = 0; s < a.num_states(); ++s) keep[s] = reach[s] && coreach[s];
  if (!keep[static_cast<std::size_t>(a.initial())]) return empty_language(a.alphabet(), a.state_name(a.initial()));
  return restrict_states(a, keep);
}

inline bool is_empty(const Nfa& a) {
  auto reach = reachable_from(a, {a.initial()});
  for (std::size_t s = 0; s < a.num_states(); ++s)
    if (reach[s] && a.is_accepting(static_cast<int>(s))) return false;
  return true;
}

/// Strongly connected component id for every state (iterative Kosaraju).
inline std::vector<int> scc_ids(const Nfa& a) {
  const std::size_t n = a.num_states();
  std::vector<int> order;
  order.reserve(n);
  std::vector<bool> seen(n, false);
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<std::pair<int, std::size_t>> stack{{static_cast<int>(root), 0}};
    seen[root] = true;
    while (!stack.empty()) {
      auto& [s, i] = stack.back();
      const auto& edges = a.edges(s);
      if (i < edges.size()) {
        int t = edges[i++].target;
        if (!seen[static_cast<std::size_t>(t)]) {
          seen[static_cast<std::size_t>(t)] = true;
          stack.emplace_back(t, 0);
        }
      } else {
        order.push_back(s);
        stack.pop_back();
      }
    }
  }
  auto rev = reverse_adjacency(a);
  std::vector<int> comp(n, -1);
  int next = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[static_cast<std::size_t>(*it)] >= 0) continue;
    std::vector<int> stack{*it};
    comp[static_cast<std::size_t>(*it)] = next;
    while (!stack.empty()) {
      int s = stack.back();
      stack.pop_back();
      for (int p : rev[static_cast<std::size_t>(s)]) {
        if (comp[static_cast<std::size_t>(p)] < 0) {
          comp[static_cast<std::size_t>(p)] = next;
          stack.push_back(p);
        }
      }
    }
    ++next;
  }
  return comp;
}

/// True iff some cycle of `a` carries a symbol (epsilon-only cycles do not
/// make a language infinite).
inline bool has_symbol_cycle(const Nfa& a) {
  auto comp = scc_ids(a);
  for (std::size_t s = 0; s < a.num_states(); ++s)
    for (const auto& e : a.edges(static_cast<int>(s)))
      if (e.symbol != kEps && comp[s] == comp[static_cast<std::size_t>(e.target)]) return true;
  return false;
}

/// Finite iff the trimmed automaton has no symbol-carrying cycle.
inline bool is_finite(const Nfa& a) { return !has_symbol_cycle(trim(a)); }

// ---------------------------------------------------------------------------
// Bounded enumeration

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

/// Shortest distance (in symbols) from each state to acceptance; -1 if none.
inline std::vector<int> distance_to_accept(const Nfa& a) {
  const std::size_t n = a.num_states();
  std::vector<std::vector<std::pair<int, int>>> rev(n);
  for (std::size_t s = 0; s < n; ++s)
    for (const auto& e : a.edges(static_cast<int>(s)))
      rev[static_cast<std::size_t>(e.target)].emplace_back(static_cast<int>(s), e.symbol == kEps ? 0 : 1);
  std::vector<int> dist(n, -1);
  std::deque<int> queue;
  for (int f : a.accepting_states()) {
    dist[static_cast<std::size_t>(f)] = 0;
    queue.push_back(f);
  }
  // 0-1 BFS.
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (auto [p, w] : rev[static_cast<std::size_t>(s)]) {
      int nd = dist[static_cast<std::size_t>(s)] + w;
      int& pd = dist[static_cast<std::size_t>(p)];
      if (pd < 0 || nd < pd) {
        pd = nd;
        if (w == 0)
          queue.push_front(p);
        else
          queue.push_back(p);
      }
    }
  }
  return dist;
}

/// L(a) restricted to words of length <= max_len, ordered by length and then
/// lexicographically by alphabet declaration order. Throws ResourceLimit when
/// more than `cap` words (or live prefixes) would be produced.
inline std::vector<Word> enumerate_words(const Nfa& a, std::size_t max_len,
                                         std::size_t cap = kDefaultEnumerationCap) {
  auto dist = distance_to_accept(a);
  auto min_dist = [&](const StateSet& set) {
    int best = -1;
    for (int s : set) {
      int d = dist[static_cast<std::size_t>(s)];
      if (d >= 0 && (best < 0 || d < best)) best = d;
    }
    return best;
  };

  std::vector<Word> out;
  std::vector<std::pair<std::vector<int>, StateSet>> level;
  StateSet start = initial_closure(a);
  if (int d = min_dist(start); d >= 0 && static_cast<std::size_t>(d) <= max_len) level.emplace_back(std::vector<int>{}, start);

  for (std::size_t len = 0; !level.empty(); ++len) {
    for (const auto& [w, set] : level) {
      if (any_accepting(a, set)) {
        Word word;
        word.reserve(w.size());
        for (int sym : w) word.push_back(a.alphabet()[sym]);
        out.push_back(std::move(word));
        if (out.size() > cap) throw ResourceLimit("enumerate_words: more than " + std::to_string(cap) + " words");
      }
    }
    if (len == max_len) break;
    std::vector<std::pair<std::vector<int>, StateSet>> next;
    for (const auto& [w, set] : level) {
      for (int sym = 0; sym < static_cast<int>(a.alphabet().size()); ++sym) {
        StateSet succ = advance(a, set, sym);
        int d = min_dist(succ);
        if (d < 0 || len + 1 + static_cast<std::size_t>(d) > max_len) continue;
        auto nw = w;
        nw.push_back(sym);
        next.emplace_back(std::move(nw), std::move(succ));
        if (next.size() > cap) throw ResourceLimit("enumerate_words: frontier exceeds cap");
      }
    }
    level = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constructions

/// Pair construction. Epsilon moves of either side advance that side alone.
inline Nfa product_intersect(const Nfa& a, const Nfa& b) {
  if (!a.alphabet().same_symbols(b.alphabet())) throw InvalidArgument("product_intersect: alphabet mismatch");
  Nfa out(a.alphabet());
  std::unordered_map<long long, int> ids;
  std::vector<std::pair<int, int>> pending;
  const long long nb = static_cast<long long>(b.num_states());
  auto get = [&](int p, int q) {
    long long key = static_cast<long long>(p) * nb + q;
    if (auto it = ids.find(key); it != ids.end()) return it->second;
    int id = out.add_state("(" + a.state_name(p) + "," + b.state_name(q) + ")");
    if (a.is_accepting(p) && b.is_accepting(q)) out.set_accepting(id);
    ids.emplace(key, id);
    pending.emplace_back(p, q);
    return id;
  };
  // b's symbol indices may be ordered differently.
  std::vector<int> to_b(a.alphabet().size());
  for (std::size_t i = 0; i < to_b.size(); ++i) to_b[i] = b.alphabet().index_of(a.alphabet()[static_cast<int>(i)]);

  out.set_initial(get(a.initial(), b.initial()));
  while (!pending.empty()) {
    auto [p, q] = pending.back();
    pending.pop_back();
    int src = ids.at(static_cast<long long>(p) * nb + q);
    for (const auto& ea : a.edges(p)) {
      if (ea.symbol == kEps) {
        out.add_transition(src, kEps, get(ea.target, q));
        continue;
      }
      for (const auto& eb : b.edges(q))
        if (eb.symbol == to_b[static_cast<std::size_t>(ea.symbol)]) out.add_transition(src, ea.symbol, get(ea.target, eb.target));
    }
    for (const auto& eb : b.edges(q))
      if (eb.symbol == kEps) out.add_transition(src, kEps, get(p, eb.target));
  }
  return out;
}

/// Same states and transitions, initial s1, sole accepting state s2.
inline Nfa sub_automaton(const Nfa& a, int s1, int s2) {
  if (s1 < 0 || s2 < 0 || static_cast<std::size_t>(s1) >= a.num_states() ||
      static_cast<std::size_t>(s2) >= a.num_states())
    throw InvalidArgument("sub_automaton: unknown state");
  Nfa out(a.alphabet());
  for (std::size_t s = 0; s < a.num_states(); ++s) out.add_state(a.state_name(static_cast<int>(s)));
  for (std::size_t s = 0; s < a.num_states(); ++s)
    for (const auto& e : a.edges(static_cast<int>(s))) out.add_transition(static_cast<int>(s), e.symbol, e.target);
  out.set_initial(s1);
  out.set_accepting(s2);
  return out;
}

inline Nfa sub_automaton(const Nfa& a, std::string_view s1, std::string_view s2) {
  return sub_automaton(a, a.state(s1), a.state(s2));
}

/// One accepting state looping on every symbol.
inline Nfa universal(const Alphabet& alphabet) {
  Nfa out(alphabet);
  int s = out.add_state("u");
  out.set_accepting(s);
  for (int i = 0; i < static_cast<int>(alphabet.size()); ++i) out.add_transition(s, i, s);
  return out;
}

/// Alternation of literal words, built as a prefix tree.
inline Nfa from_words(const Alphabet& alphabet, const std::vector<Word>& words) {
  Nfa out(alphabet);
  int root = out.add_state("t0");
  std::unordered_map<std::string, int> node{{"", root}};
  int fresh = 1;
  for (const auto& w : words) {
    int cur = root;
    std::string path;
    for (const auto& tok : w) {
      path += tok;
      path += '\x1f';
      auto it = node.find(path);
      if (it == node.end()) {
        int nxt = out.add_state("t" + std::to_string(fresh++));
        out.add_transition(cur, alphabet.index_of(tok), nxt);
        it = node.emplace(path, nxt).first;
      }
      cur = it->second;
    }
    out.set_accepting(cur);
  }
  return out;
}

/// Epsilon-free automaton on the same states: s --a--> t iff t is reachable
/// from the closure of s by `a` followed by closure; s accepts iff its closure
/// meets an accepting state.
inline Nfa remove_epsilon(const Nfa& a) {
  Nfa out(a.alphabet());
  for (std::size_t s = 0; s < a.num_states(); ++s) out.add_state(a.state_name(static_cast<int>(s)));
  out.set_initial(a.initial());
  for (std::size_t s = 0; s < a.num_states(); ++s) {
    StateSet cl = epsilon_closure(a, {static_cast<int>(s)});
    if (any_accepting(a, cl)) out.set_accepting(static_cast<int>(s));
    for (int sym = 0; sym < static_cast<int>(a.alphabet().size()); ++sym)
      for (int t : advance(a, cl, sym)) out.add_transition(static_cast<int>(s), sym, t);
  }
  return out;
}

/// Copy of `a` whose state names carry `prefix`.
inline Nfa with_prefix(const Nfa& a, const std::string& prefix) {
  Nfa out(a.alphabet());
  for (std::size_t s = 0; s < a.num_states(); ++s) out.add_state(prefix + a.state_name(static_cast<int>(s)));
  if (a.num_states() > 0) out.set_initial(a.initial());
  for (std::size_t s = 0; s < a.num_states(); ++s) {
    if (a.is_accepting(static_cast<int>(s))) out.set_accepting(static_cast<int>(s));
    for (const auto& e : a.edges(static_cast<int>(s))) out.add_transition(static_cast<int>(s), e.symbol, e.target);
  }
  return out;
}

/// Same language over a larger alphabet (symbols are re-indexed by name).
inline Nfa widen_alphabet(const Nfa& a, const Alphabet& alphabet) {
  if (!alphabet.includes(a.alphabet())) throw InvalidArgument("widen_alphabet: target alphabet lacks symbols");
  Nfa out(alphabet);
  for (std::size_t s = 0; s < a.num_states(); ++s) out.add_state(a.state_name(static_cast<int>(s)));
  out.set_initial(a.initial());
  for (std::size_t s = 0; s < a.num_states(); ++s) {
    if (a.is_accepting(static_cast<int>(s))) out.set_accepting(static_cast<int>(s));
    for (const auto& e : a.edges(static_cast<int>(s)))
      out.add_transition(static_cast<int>(s), e.symbol == kEps ? kEps : alphabet.index_of(a.alphabet()[e.symbol]),
                         e.target);
  }
  return out;
}

}  // namespace adsa
