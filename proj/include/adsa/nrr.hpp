// nrr.hpp
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
// Deciders for "does L(A) meet the filter F?". The generic decider runs a
// breadth-first search over pairs (automaton state, filter state) where the
// filter is a protocol storage or Per_k; it is complete whenever the
// reachable pairs fit the bounds. The Dyck decider is a complete
// summary-based saturation.

#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "adsa/nfa.hpp"
#include "adsa/oracles.hpp"
#include "adsa/protocol.hpp"
#include "adsa/verdict.hpp"

namespace adsa {

struct NrrAnswer {
  Verdict verdict = Verdict::Reject;
  std::optional<Word> witness;  // set exactly when verdict is Accept
  std::size_t configs = 0;
};

// ---------------------------------------------------------------------------
// Filters as token-at-a-time automata with explicit states.

/// Reads a flattened protocol word one token at a time and checks every
/// response against the storage.
class ProtocolFilter {
 public:
  struct State {
    OracleState storage;
    std::vector<Symbol> pending;  // write word of the open block
    std::optional<Symbol> expect;  // response owed to the last query
    OracleState after;  // storage once the owed response is read
    std::size_t blocks = 0;
  };

  ProtocolFilter(const ProtocolOracle& o, const SearchBounds& b) : o_(o), bounds_(b) {}

  State initial() const { return State{o_.initial_state(), {}, std::nullopt, {}, 0}; }

  std::string key(const State& s) const {
    std::string k = s.expect ? "R" + *s.expect + '\x1e' + o_.canonical_key(s.after) : "W" + o_.canonical_key(s.storage);
    k += '\x1e';
    for (const auto& t : s.pending) k += t + '\x1d';
    return k;
  }

  bool accepting(const State& s) const { return !s.expect && s.pending.empty() && o_.final_ok(s.storage); }

  /// nullopt = dead; sets `hit` when a bound cut the step.
  std::optional<State> step(const State& s, const Symbol& x, bool& hit) const {
    const auto& pa = o_.alphabet();
    if (s.expect) {
      if (x != *s.expect) return std::nullopt;
      State n{s.after, {}, std::nullopt, {}, s.blocks + 1};
      return n;
    }
    if (pa.wr().contains(x)) {
      if (s.pending.size() + 1 > bounds_.max_tape) {
        hit = true;
        return std::nullopt;
      }
      State n = s;
      n.pending.push_back(x);
      return n;
    }
    if (pa.query().contains(x)) {
      if (s.blocks + 1 > bounds_.max_blocks) {
        hit = true;
        return std::nullopt;
      }
      auto r = o_.respond(s.storage, s.pending, x);
      if (!r) return std::nullopt;
      return State{s.storage, {}, r->symbol, std::move(r->next), s.blocks};
    }
    return std::nullopt;
  }

  bool member(const Word& w) const { return membership(o_, w); }

 private:
  const ProtocolOracle& o_;
  SearchBounds bounds_;
};

/// Per_k = { (v #)^k }: the first block records v, later blocks compare.
class PerKFilter {
 public:
  struct State {
    std::vector<Symbol> v;  // the word of the first block
    std::size_t done = 0;  // completed blocks
    std::size_t pos = 0;  // position inside the current block (blocks >= 1)
  };

  PerKFilter(int k, const SearchBounds& b) : k_(k), bounds_(b) {
    if (k < 1) throw InvalidArgument("Per_k needs k >= 1");
  }

  State initial() const { return {}; }

  std::string key(const State& s) const {
    std::string k = std::to_string(s.done) + ':' + std::to_string(s.pos) + ':';
    for (const auto& t : s.v) k += t + '\x1d';
    return k;
  }

  bool accepting(const State& s) const { return s.done == static_cast<std::size_t>(k_); }

  std::optional<State> step(const State& s, const Symbol& x, bool& hit) const {
    if (s.done == static_cast<std::size_t>(k_)) return std::nullopt;
    State n = s;
    if (x == "#") {
      if (s.done > 0 && s.pos != s.v.size()) return std::nullopt;
      ++n.done;
      n.pos = 0;
      return n;
    }
    if (s.done == 0) {
      if (s.v.size() + 1 > bounds_.max_tape) {
        hit = true;
        return std::nullopt;
      }
      n.v.push_back(x);
      return n;
    }
    if (s.pos >= s.v.size() || s.v[s.pos] != x) return std::nullopt;
    ++n.pos;
    return n;
  }

  bool member(const Word& w) const { return per_k_membership(w, k_); }

 private:
  int k_;
  SearchBounds bounds_;
};

/// Breadth-first search over (automaton state, filter state) pairs. Epsilon
/// moves of the automaton leave the filter unchanged. States that cannot
/// reach acceptance are never entered.
template <class Filter>
NrrAnswer nreg_search(const Nfa& a, const Filter& f, const SearchBounds& bounds) {
  bounds.validate();
  using FState = typename Filter::State;
  struct Node {
    int q;
    FState fs;
    int parent;
    int symbol;
  };
  auto live = coreachable(a);
  std::vector<Node> nodes;
  std::unordered_map<std::string, int> seen;
  std::deque<int> queue;
  bool hit = false;
  NrrAnswer ans;

  auto push = [&](int q, FState fs, int parent, int symbol) {
    if (!live[static_cast<std::size_t>(q)]) return;
    std::string k = std::to_string(q) + '\x1c' + f.key(fs);
    if (seen.contains(k)) return;
    if (seen.size() >= bounds.max_configs) {
      hit = true;
      return;
    }
    seen.emplace(std::move(k), static_cast<int>(nodes.size()));
    nodes.push_back({q, std::move(fs), parent, symbol});
    queue.push_back(static_cast<int>(nodes.size()) - 1);
  };

  push(a.initial(), f.initial(), -1, kEps);
  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    const Node n = nodes[static_cast<std::size_t>(id)];
    if (a.is_accepting(n.q) && f.accepting(n.fs)) {
      Word w;
      for (int i = id; i >= 0; i = nodes[static_cast<std::size_t>(i)].parent)
        if (nodes[static_cast<std::size_t>(i)].symbol != kEps) w.push_back(a.alphabet()[nodes[static_cast<std::size_t>(i)].symbol]);
      std::reverse(w.begin(), w.end());
      if (!accepts(a, w) || !f.member(w)) throw Error("internal error: witness " + show(w) + " does not re-validate");
      ans.verdict = Verdict::Accept;
      ans.witness = std::move(w);
      ans.configs = seen.size();
      return ans;
    }
    for (const auto& e : a.edges(n.q)) {
      if (e.symbol == kEps) {
        push(e.target, n.fs, id, kEps);
        continue;
      }
      auto next = f.step(n.fs, a.alphabet()[e.symbol], hit);
      if (next) push(e.target, std::move(*next), id, e.symbol);
    }
  }
  ans.verdict = hit ? Verdict::Unknown : Verdict::Reject;
  ans.configs = seen.size();
  return ans;
}

inline NrrAnswer nreg_generic(const Nfa& a, const ProtocolOracle& o, const SearchBounds& bounds = {}) {
  return nreg_search(a, ProtocolFilter(o, bounds), bounds);
}

inline NrrAnswer nreg_perk(const Nfa& a, int k, const SearchBounds& bounds = {}) {
  return nreg_search(a, PerKFilter(k, bounds), bounds);
}

// ---------------------------------------------------------------------------
// Dyck saturation

namespace detail {

/// Derivation of a summary pair (p, q): p reaches q reading a balanced
/// sequence of blocks.
struct Summary {
  enum Kind { None, Closure, Concat, Wrap } kind = None;
  int mid = -1;  // Concat: the split state
  int bracket = -1;  // Wrap: 0 for "(", 1 for "["
  int inner_from = -1, inner_to = -1;  // Wrap: the enclosed summary
};

}  // namespace detail

/// Complete decision for the two-bracket storage. Blocks are the four words
/// "push( (", "push[ [", "pop )", "pop ]". With `exact` the word must be
/// balanced, otherwise unmatched pushes may remain open at the end.
inline NrrAnswer nreg_dyck(const Nfa& a, bool exact) {
  static const DyckOracle dyck;
  const Alphabet& flat = dyck.alphabet().flattened();
  for (const auto& s : a.alphabet().symbols())
    if (!flat.contains(s)) throw InvalidArgument("nreg_dyck: symbol '" + s + "' is not in the two-bracket alphabet");

  const int n = static_cast<int>(a.num_states());
  auto sym = [&](const char* t) { return a.alphabet().find(t); };
  // block[x][0][p]: states after a push block of bracket x from p; [1] for pop.
  const char* queries[2][2] = {{"push(", "pop"}, {"push[", "pop"}};
  const char* resps[2][2] = {{"(", ")"}, {"[", "]"}};
  std::vector<std::vector<std::vector<StateSet>>> block(2, std::vector<std::vector<StateSet>>(2, std::vector<StateSet>(n)));
  for (int x = 0; x < 2; ++x)
    for (int k = 0; k < 2; ++k) {
      auto q = sym(queries[x][k]);
      auto r = sym(resps[x][k]);
      if (!q || !r) continue;
      for (int p = 0; p < n; ++p) block[x][k][p] = advance(a, advance(a, epsilon_closure(a, {p}), *q), *r);
    }

  std::vector<std::vector<detail::Summary>> S(n, std::vector<detail::Summary>(n));
  std::vector<std::pair<int, int>> work;
  auto add = [&](int p, int q, detail::Summary d) {
    if (S[p][q].kind != detail::Summary::None) return;
    S[p][q] = d;
    work.emplace_back(p, q);
  };
  for (int p = 0; p < n; ++p)
    for (int q : epsilon_closure(a, {p})) add(p, q, {detail::Summary::Closure});
  while (!work.empty()) {
    auto [p, q] = work.back();
    work.pop_back();
    for (int r = 0; r < n; ++r) {
      if (S[q][r].kind != detail::Summary::None) add(p, r, {detail::Summary::Concat, q});
      if (S[r][p].kind != detail::Summary::None) add(r, q, {detail::Summary::Concat, p});
    }
    for (int x = 0; x < 2; ++x)
      for (int z = 0; z < n; ++z) {
        const auto& pushes = block[x][0][z];
        if (!std::binary_search(pushes.begin(), pushes.end(), p)) continue;
        for (int t : block[x][1][q]) add(z, t, {detail::Summary::Wrap, -1, x, p, q});
      }
  }

  std::function<void(int, int, Word&)> spell = [&](int p, int q, Word& out) {
    const auto& d = S[p][q];
    switch (d.kind) {
      case detail::Summary::Closure:
      case detail::Summary::None:
        return;
      case detail::Summary::Concat:
        spell(p, d.mid, out);
        spell(d.mid, q, out);
        return;
      case detail::Summary::Wrap:
        out.push_back(queries[d.bracket][0]);
        out.push_back(resps[d.bracket][0]);
        spell(d.inner_from, d.inner_to, out);
        out.push_back(queries[d.bracket][1]);
        out.push_back(resps[d.bracket][1]);
        return;
    }
  };

  NrrAnswer ans;
  const int init = a.initial();
  std::optional<Word> witness;
  if (exact) {
    for (int f : a.accepting_states())
      if (S[init][f].kind != detail::Summary::None) {
        Word w;
        spell(init, f, w);
        witness = std::move(w);
        break;
      }
  } else {
    // Reachability through summaries and unmatched pushes.
    struct Step {
      int from = -1;
      int push = -1;  // -1: summary step, else bracket index
    };
    std::vector<Step> parent(n);
    std::vector<bool> seen(n, false);
    std::deque<int> queue{init};
    seen[init] = true;
    while (!queue.empty()) {
      int p = queue.front();
      queue.pop_front();
      auto visit = [&](int q, Step s) {
        if (seen[q]) return;
        seen[q] = true;
        parent[q] = s;
        queue.push_back(q);
      };
      for (int q = 0; q < n; ++q)
        if (S[p][q].kind != detail::Summary::None) visit(q, {p, -1});
      for (int x = 0; x < 2; ++x)
        for (int q : block[x][0][p]) visit(q, {p, x});
    }
    for (int f : a.accepting_states()) {
      if (!seen[f]) continue;
      std::vector<std::pair<int, Step>> chain;
      for (int q = f; q != init; q = parent[q].from) chain.emplace_back(q, parent[q]);
      std::reverse(chain.begin(), chain.end());
      Word w;
      for (const auto& [q, s] : chain) {
        if (s.push < 0) {
          spell(s.from, q, w);
        } else {
          w.push_back(queries[s.push][0]);
          w.push_back(resps[s.push][0]);
        }
      }
      witness = std::move(w);
      break;
    }
  }
  if (witness) {
    if (!accepts(a, *witness) || !membership(DyckOracle(exact), *witness))
      throw Error("internal error: Dyck witness " + show(*witness) + " does not re-validate");
    ans.verdict = Verdict::Accept;
    ans.witness = std::move(witness);
  }
  ans.configs = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  return ans;
}

}  // namespace adsa
