// fst.hpp
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

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "adsa/nfa.hpp"

namespace adsa {

/// Transition of a transducer: reads one input symbol (or nothing) and
/// writes a possibly empty word.
struct Arc {
  int input;  // kEps or an input symbol index
  std::vector<int> output;
  int target;
  friend bool operator==(const Arc&, const Arc&) = default;
};

class Fst {
 public:
  Fst() = default;
  Fst(Alphabet input, Alphabet output) : in_(std::move(input)), out_alpha_(std::move(output)) {}

  const Alphabet& input_alphabet() const noexcept { return in_; }
  const Alphabet& output_alphabet() const noexcept { return out_alpha_; }
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
    arcs_.emplace_back();
    accepting_.push_back(false);
    if (initial_ < 0) initial_ = id;
    return id;
  }
  int ensure_state(const std::string& name) {
    if (auto s = find_state(name)) return *s;
    return add_state(name);
  }

  int initial() const {
    if (initial_ < 0) throw InvalidArgument("transducer has no states");
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

  void add_arc(int src, int input, std::vector<int> output, int dst) {
    check_state(src);
    check_state(dst);
    if (input != kEps && (input < 0 || static_cast<std::size_t>(input) >= in_.size()))
      throw InvalidArgument("input symbol index out of range");
    for (int o : output)
      if (o < 0 || static_cast<std::size_t>(o) >= out_alpha_.size())
        throw InvalidArgument("output symbol index out of range");
    Arc arc{input, std::move(output), dst};
    auto& arcs = arcs_[static_cast<std::size_t>(src)];
    if (std::find(arcs.begin(), arcs.end(), arc) == arcs.end()) arcs.push_back(std::move(arc));
  }

  /// Name-based variant; `input` may be "eps".
  void add_arc(std::string_view src, std::string_view input, const Word& output, std::string_view dst) {
    int in = input == kEpsilonToken ? kEps : in_.index_of(input);
    std::vector<int> out;
    for (const auto& t : output) out.push_back(out_alpha_.index_of(t));
    add_arc(state(src), in, std::move(out), state(dst));
  }

  const std::vector<Arc>& arcs(int s) const { return arcs_.at(static_cast<std::size_t>(s)); }

  std::size_t num_arcs() const {
    std::size_t n = 0;
    for (const auto& a : arcs_) n += a.size();
    return n;
  }

  /// No epsilon-input arcs and at most one arc per (state, input symbol).
  /// Always computed from the current arcs.
  bool is_deterministic() const {
    for (const auto& arcs : arcs_) {
      std::vector<int> seen;
      for (const auto& a : arcs) {
        if (a.input == kEps) return false;
        if (std::find(seen.begin(), seen.end(), a.input) != seen.end()) return false;
        seen.push_back(a.input);
      }
    }
    return true;
  }

  Word decode_output(const std::vector<int>& w) const {
    Word out;
    for (int s : w) out.push_back(out_alpha_[s]);
    return out;
  }

 private:
  void check_state(int s) const {
    if (s < 0 || static_cast<std::size_t>(s) >= names_.size()) throw InvalidArgument("state index out of range");
  }

  Alphabet in_;
  Alphabet out_alpha_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<Arc>> arcs_;
  std::vector<bool> accepting_;
  int initial_ = -1;
};

// ---------------------------------------------------------------------------

/// Equivalent transducer whose arcs write at most one symbol. Longer outputs
/// are spread over a chain of fresh states "~k" whose first link reads the
/// input symbol and whose later links read nothing.
inline Fst split_outputs(const Fst& t) {
  Fst out(t.input_alphabet(), t.output_alphabet());
  for (std::size_t s = 0; s < t.num_states(); ++s) out.add_state(t.state_name(static_cast<int>(s)));
  out.set_initial(t.initial());
  for (int s : t.accepting_states()) out.set_accepting(s);
  int fresh = 0;
  for (std::size_t s = 0; s < t.num_states(); ++s) {
    for (const auto& a : t.arcs(static_cast<int>(s))) {
      if (a.output.size() <= 1) {
        out.add_arc(static_cast<int>(s), a.input, a.output, a.target);
        continue;
      }
      int cur = static_cast<int>(s);
      for (std::size_t i = 0; i < a.output.size(); ++i) {
        int next = i + 1 == a.output.size() ? a.target : out.add_state("~" + std::to_string(fresh++));
        out.add_arc(cur, i == 0 ? a.input : kEps, {a.output[i]}, next);
        cur = next;
      }
    }
  }
  return out;
}

/// Relational composition: u (t2 . t1) v iff u t1 w and w t2 v for some w.
/// States are pairs of a state of split_outputs(t1) and a state of t2.
inline Fst compose(const Fst& t1, const Fst& t2) {
  if (!t1.output_alphabet().same_symbols(t2.input_alphabet()))
    throw InvalidArgument("compose: output alphabet of the first transducer differs from input of the second");
  Fst a = split_outputs(t1);
  Fst out(a.input_alphabet(), t2.output_alphabet());
  std::vector<int> to_t2(a.output_alphabet().size());
  for (std::size_t i = 0; i < to_t2.size(); ++i)
    to_t2[i] = t2.input_alphabet().index_of(a.output_alphabet()[static_cast<int>(i)]);

  std::map<std::pair<int, int>, int> ids;
  std::vector<std::pair<int, int>> pending;
  auto get = [&](int p, int q) {
    auto key = std::make_pair(p, q);
    if (auto it = ids.find(key); it != ids.end()) return it->second;
    int id = out.add_state("(" + a.state_name(p) + "," + t2.state_name(q) + ")");
    if (a.is_accepting(p) && t2.is_accepting(q)) out.set_accepting(id);
    ids.emplace(key, id);
    pending.push_back(key);
    return id;
  };
  out.set_initial(get(a.initial(), t2.initial()));
  while (!pending.empty()) {
    auto [p, q] = pending.back();
    pending.pop_back();
    int src = ids.at({p, q});
    for (const auto& e : a.arcs(p)) {
      if (e.output.empty()) {
        out.add_arc(src, e.input, {}, get(e.target, q));
        continue;
      }
      int mid = to_t2[static_cast<std::size_t>(e.output[0])];
      for (const auto& f : t2.arcs(q))
        if (f.input == mid) out.add_arc(src, e.input, f.output, get(e.target, f.target));
    }
    for (const auto& f : t2.arcs(q))
      if (f.input == kEps) out.add_arc(src, kEps, f.output, get(p, f.target));
  }
  return out;
}

/// Inverse relation. Multi-symbol outputs become chains of input reads
/// through fresh states "~k"; the original input symbol is written on the
/// first link.
inline Fst invert(const Fst& t) {
  Fst out(t.output_alphabet(), t.input_alphabet());
  for (std::size_t s = 0; s < t.num_states(); ++s) out.add_state(t.state_name(static_cast<int>(s)));
  out.set_initial(t.initial());
  for (int s : t.accepting_states()) out.set_accepting(s);
  int fresh = 0;
  for (std::size_t s = 0; s < t.num_states(); ++s) {
    for (const auto& a : t.arcs(static_cast<int>(s))) {
      std::vector<int> written;
      if (a.input != kEps) written.push_back(a.input);
      if (a.output.size() <= 1) {
        out.add_arc(static_cast<int>(s), a.output.empty() ? kEps : a.output[0], written, a.target);
        continue;
      }
      int cur = static_cast<int>(s);
      for (std::size_t i = 0; i < a.output.size(); ++i) {
        int next = i + 1 == a.output.size() ? a.target : out.add_state("~" + std::to_string(fresh++));
        out.add_arc(cur, a.output[i], i == 0 ? written : std::vector<int>{}, next);
        cur = next;
      }
    }
  }
  return out;
}

/// NFA for { u : t(u) meets L(a) }. States are pairs (t-state, a-state); a
/// t-arc writing x moves the a-component along every run of a over x.
inline Nfa preimage_nfa(const Fst& t, const Nfa& a) {
  if (!t.output_alphabet().same_symbols(a.alphabet()))
    throw InvalidArgument("preimage_nfa: transducer output alphabet differs from automaton alphabet");
  std::vector<int> to_a(t.output_alphabet().size());
  for (std::size_t i = 0; i < to_a.size(); ++i) to_a[i] = a.alphabet().index_of(t.output_alphabet()[static_cast<int>(i)]);

  Nfa out(t.input_alphabet());
  std::map<std::pair<int, int>, int> ids;
  std::vector<std::pair<int, int>> pending;
  auto get = [&](int p, int q) {
    auto key = std::make_pair(p, q);
    if (auto it = ids.find(key); it != ids.end()) return it->second;
    int id = out.add_state("(" + t.state_name(p) + "," + a.state_name(q) + ")");
    if (t.is_accepting(p) && a.is_accepting(q)) out.set_accepting(id);
    ids.emplace(key, id);
    pending.push_back(key);
    return id;
  };
  out.set_initial(get(t.initial(), a.initial()));
  while (!pending.empty()) {
    auto [p, q] = pending.back();
    pending.pop_back();
    int src = ids.at({p, q});
    for (const auto& e : a.edges(q))
      if (e.symbol == kEps) out.add_transition(src, kEps, get(p, e.target));
    for (const auto& arc : t.arcs(p)) {
      std::vector<int> word;
      for (int o : arc.output) word.push_back(to_a[static_cast<std::size_t>(o)]);
      for (int r : run(a, {q}, word)) out.add_transition(src, arc.input, get(arc.target, r));
    }
  }
  return out;
}

/// NFA for t(L(a)).
inline Nfa image_nfa(const Fst& t, const Nfa& a) {
  if (!t.input_alphabet().same_symbols(a.alphabet()))
    throw InvalidArgument("image_nfa: transducer input alphabet differs from automaton alphabet");
  return preimage_nfa(invert(t), a);
}

/// Identity relation restricted to L(a).
inline Fst id_on(const Nfa& a) {
  Fst out(a.alphabet(), a.alphabet());
  for (std::size_t s = 0; s < a.num_states(); ++s) out.add_state(a.state_name(static_cast<int>(s)));
  out.set_initial(a.initial());
  for (std::size_t s = 0; s < a.num_states(); ++s) {
    if (a.is_accepting(static_cast<int>(s))) out.set_accepting(static_cast<int>(s));
    for (const auto& e : a.edges(static_cast<int>(s)))
      out.add_arc(static_cast<int>(s), e.symbol, e.symbol == kEps ? std::vector<int>{} : std::vector<int>{e.symbol},
                  e.target);
  }
  return out;
}

/// Input automaton of t: accepts the domain of the relation.
inline Nfa domain_nfa(const Fst& t) { return preimage_nfa(t, universal(t.output_alphabet())); }

// ---------------------------------------------------------------------------
// Bounded application

struct ApplyResult {
  std::set<Word> outputs;
  bool truncated = false;  // some run was cut because its output exceeded the cap
};

inline constexpr std::size_t kDefaultApplyConfigs = 2'000'000;

/// All v with u t v and |v| <= output_cap. Runs whose output grows past the
/// cap are cut and reported through `truncated`. Throws ResourceLimit when the
/// search visits more than `max_configs` configurations.
inline ApplyResult apply(const Fst& t, const Word& u, std::size_t output_cap,
                         std::size_t max_configs = kDefaultApplyConfigs) {
  std::vector<int> input;
  for (const auto& s : u) input.push_back(t.input_alphabet().index_of(s));

  using Config = std::tuple<int, std::size_t, std::vector<int>>;
  std::set<Config> seen;
  std::vector<Config> stack;
  ApplyResult result;
  auto push = [&](Config c) {
    if (seen.insert(c).second) {
      if (seen.size() > max_configs) throw ResourceLimit("apply: configuration limit exceeded");
      stack.push_back(std::move(c));
    }
  };
  push({t.initial(), 0, {}});
  while (!stack.empty()) {
    auto [s, pos, out] = std::move(stack.back());
    stack.pop_back();
    if (pos == input.size() && t.is_accepting(s)) result.outputs.insert(t.decode_output(out));
    for (const auto& arc : t.arcs(s)) {
      std::size_t npos = pos;
      if (arc.input != kEps) {
        if (pos == input.size() || input[pos] != arc.input) continue;
        npos = pos + 1;
      }
      if (out.size() + arc.output.size() > output_cap) {
        result.truncated = true;
        continue;
      }
      auto nout = out;
      nout.insert(nout.end(), arc.output.begin(), arc.output.end());
      push({arc.target, npos, std::move(nout)});
    }
  }
  return result;
}

}  // namespace adsa
