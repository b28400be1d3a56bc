// reductions.hpp
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

#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "adsa/ads_constructions.hpp"
#include "adsa/fst.hpp"
#include "adsa/nrr.hpp"
#include "adsa/oracles.hpp"

namespace adsa {

/// NFA for T_M(input*): L(m) is non-empty iff this NFA meets the protocol
/// language.
inline Nfa nonemptiness_to_nrr(const AdsAutomaton& m) {
  return image_nfa(extractor(m), universal(m.input_alphabet()));
}

/// ADS automaton accepting exactly the correct protocols in L(a).
inline AdsAutomaton nrr_to_nonemptiness(const Nfa& a, const ProtocolAlphabet& pa) {
  if (!pa.flattened().includes(a.alphabet()))
    throw InvalidArgument("nrr_to_nonemptiness: automaton uses symbols outside the protocol alphabet");
  return compose_with_fst(m_prot(pa), id_on(widen_alphabet(a, pa.flattened())));
}

inline constexpr std::size_t kMaxSilentSteps = 100'000;

/// DFA over the flattened protocol alphabet accepting the protocol words
/// that a deterministic m would produce on w for some sequence of
/// responses, up to a point where m accepts. Meeting the protocol language
/// is then equivalent to w in L(m).
///
/// States: "S(s,i)" after a response (tape empty, m in state s at input
/// position i), "P(s,i,k)" after k tokens of the write word of the next
/// query, and "A(s,i)" after the query symbol, waiting for a response.
inline Nfa membership_to_reg(const AdsAutomaton& m, const Word& w) {
  if (!is_deterministic(m)) throw InvalidArgument("membership_to_reg: automaton is not deterministic");
  const auto& pa = m.protocol();
  const Alphabet& flat = pa.flattened();
  const bool aware = m.endmarker_aware();
  const std::vector<int> seq = detail::framed_input(m, w, aware);

  // Runs m from (s, i) with an empty tape until it reaches a query state.
  struct Chain {
    bool accepts = false;
    bool queries = false;
    int state = -1;  // the query state reached
    std::size_t pos = 0;
    std::vector<int> tape;
  };
  auto run_chain = [&](int s, std::size_t i) {
    Chain c;
    std::vector<int> tape;
    std::set<std::pair<int, std::size_t>> seen;
    for (std::size_t steps = 0; steps < kMaxSilentSteps; ++steps) {
      if (m.is_accepting(s) && i == seq.size() && tape.empty()) c.accepts = true;
      if (m.is_query(s)) {
        c.queries = !m.query_moves(s).empty();
        c.state = s;
        c.pos = i;
        c.tape = tape;
        return c;
      }
      // Epsilon loops that consume nothing never reach a query.
      if (!seen.insert({s, i}).second) return c;
      const WriteMove* move = nullptr;
      for (const auto& wm : m.write_moves(s))
        if (wm.input == kEps || (i < seq.size() && seq[i] == wm.input)) {
          move = &wm;
          break;
        }
      if (!move) return c;
      tape.insert(tape.end(), move->output.begin(), move->output.end());
      if (move->input != kEps) ++i;
      s = move->target;
    }
    throw ResourceLimit("membership_to_reg: silent run too long");
  };

  std::vector<int> wr_to_flat(pa.wr().size());
  for (std::size_t x = 0; x < wr_to_flat.size(); ++x) wr_to_flat[x] = flat.index_of(pa.wr()[static_cast<int>(x)]);

  Nfa out(flat);
  std::map<std::pair<int, std::size_t>, int> starts;
  std::vector<std::pair<int, std::size_t>> pending;
  auto start_state = [&](int s, std::size_t i) {
    auto key = std::make_pair(s, i);
    if (auto it = starts.find(key); it != starts.end()) return it->second;
    int id = out.add_state("S(" + m.state_name(s) + "," + std::to_string(i) + ")");
    starts.emplace(key, id);
    pending.push_back(key);
    return id;
  };
  out.set_initial(start_state(m.initial(), 0));
  std::map<std::pair<int, std::size_t>, int> waits;
  while (!pending.empty()) {
    auto [s, i] = pending.back();
    pending.pop_back();
    int id = starts.at({s, i});
    Chain c = run_chain(s, i);
    if (c.accepts) out.set_accepting(id);
    if (!c.queries) continue;
    const std::string tag = m.state_name(c.state) + "," + std::to_string(c.pos);
    int cur = id;
    for (std::size_t k = 0; k < c.tape.size(); ++k) {
      int next = out.add_state("P(" + tag + "," + std::to_string(k + 1) + ")#" + std::to_string(id));
      out.add_transition(cur, wr_to_flat[static_cast<std::size_t>(c.tape[k])], next);
      cur = next;
    }
    auto wkey = std::make_pair(c.state, c.pos);
    int wait;
    if (auto it = waits.find(wkey); it != waits.end()) {
      wait = it->second;
    } else {
      wait = out.add_state("A(" + tag + ")");
      waits.emplace(wkey, wait);
      for (const auto& qm : m.query_moves(c.state))
        out.add_transition(wait, flat.index_of(qm.response), start_state(qm.target, c.pos));
    }
    out.add_transition(cur, flat.index_of(m.query_moves(c.state).front().query), wait);
  }
  return out;
}

/// For F1 = t(F2): L(a) meets F1 iff the returned automaton meets F2.
inline Nfa filter_transfer(const Nfa& a, const Fst& t) { return preimage_nfa(t, a); }

// ---------------------------------------------------------------------------
// Per_k and the single-insert storage.

/// Maps "w ins + w test + ... w test +" (k blocks) to (w #)^k and is
/// undefined on every other block pattern.
inline Fst spk_to_perk_fst(const Alphabet& letters, int k) {
  if (k < 1) throw InvalidArgument("spk_to_perk_fst: k must be at least 1");
  SingleInsertOracle sis(letters);
  const Alphabet& in = sis.alphabet().flattened();
  Alphabet out_alpha = per_k_alphabet(letters);
  Fst t(in, out_alpha);
  const int hash = out_alpha.index_of("#");
  std::vector<int> copy_state(static_cast<std::size_t>(k) + 1);
  for (int b = 0; b <= k; ++b) copy_state[static_cast<std::size_t>(b)] = t.add_state("b" + std::to_string(b));
  t.set_initial(copy_state[0]);
  t.set_accepting(copy_state[static_cast<std::size_t>(k)]);
  for (int b = 0; b < k; ++b) {
    int s = copy_state[static_cast<std::size_t>(b)];
    int q = t.add_state("q" + std::to_string(b));
    for (int x = 0; x < static_cast<int>(letters.size()); ++x)
      t.add_arc(s, in.index_of(letters[x]), {out_alpha.index_of(letters[x])}, s);
    t.add_arc(s, in.index_of(b == 0 ? "ins" : "test"), {}, q);
    t.add_arc(q, in.index_of("+"), {hash}, copy_state[static_cast<std::size_t>(b) + 1]);
  }
  return t;
}

inline Fst spk_to_perk_fst(int k) { return spk_to_perk_fst(digit_alphabet(k), k); }

/// Maps each block "w #" of its input to one single-insert query block.
/// The written word is either w itself (copy) or, through one of three edit
/// modes, any word different from w:
///   change  copy a prefix, replace one letter by another, then anything;
///   erase   copy a prefix, drop everything after it (at least one letter);
///   add     copy w, then append at least one letter.
/// The query and response follow the storage: before the insertion a copy
/// may insert (ins +) or test (test -), an edit tests (test -); afterwards a
/// copy answers test + or ins -, an edit test - or ins -.
inline Fst perk_to_spk_fst(const Alphabet& letters) {
  SingleInsertOracle sis(letters);
  const Alphabet& out_alpha = sis.alphabet().flattened();
  Alphabet in = per_k_alphabet(letters);
  Fst t(in, out_alpha);
  const int hash = in.index_of("#");
  const int n = static_cast<int>(letters.size());
  auto o = [&](const char* s) { return out_alpha.index_of(s); };
  auto li = [&](int x) { return in.index_of(letters[x]); };
  auto lo = [&](int x) { return out_alpha.index_of(letters[x]); };

  int block[2];
  for (int f = 0; f < 2; ++f) {
    const std::string sf = std::to_string(f);
    block[f] = t.add_state("B" + sf);
    t.set_accepting(block[f]);
  }
  t.set_initial(block[0]);
  for (int f = 0; f < 2; ++f) {
    const std::string sf = std::to_string(f);
    int copy = t.add_state("copy" + sf);
    int change = t.add_state("change" + sf);
    int loose = t.add_state("loose" + sf);
    int erase = t.add_state("erase" + sf);
    int drop = t.add_state("drop" + sf);
    int add = t.add_state("add" + sf);
    int grow = t.add_state("grow" + sf);
    for (int s : {copy, change, erase, add}) t.add_arc(block[f], kEps, {}, s);
    for (int x = 0; x < n; ++x) {
      for (int s : {copy, change, erase, add}) t.add_arc(s, li(x), {lo(x)}, s);
      for (int y = 0; y < n; ++y) {
        if (y != x) t.add_arc(change, li(x), {lo(y)}, loose);
        t.add_arc(loose, li(x), {lo(y)}, loose);
      }
      t.add_arc(loose, li(x), {}, loose);
      t.add_arc(loose, kEps, {lo(x)}, loose);
      t.add_arc(erase, li(x), {}, drop);
      t.add_arc(drop, li(x), {}, drop);
      t.add_arc(add, kEps, {lo(x)}, grow);
      t.add_arc(grow, kEps, {lo(x)}, grow);
    }
    if (f == 0) {
      t.add_arc(copy, hash, {o("ins"), o("+")}, block[1]);
      t.add_arc(copy, hash, {o("test"), o("-")}, block[0]);
    } else {
      t.add_arc(copy, hash, {o("test"), o("+")}, block[1]);
      t.add_arc(copy, hash, {o("ins"), o("-")}, block[1]);
    }
    for (int s : {loose, drop, grow}) {
      t.add_arc(s, hash, {o("test"), o("-")}, block[f]);
      if (f == 1) t.add_arc(s, hash, {o("ins"), o("-")}, block[1]);
    }
  }
  return t;
}

inline Fst perk_to_spk_fst(int k) { return perk_to_spk_fst(digit_alphabet(k)); }

}  // namespace adsa
