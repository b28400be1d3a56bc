// ads_automaton.hpp
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
// One-way automata with a query tape connected to a storage. Write states
// read the input and append words to the query tape; query states issue a
// query with the tape contents, erase the tape and branch on the response.

#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "adsa/alphabet.hpp"
#include "adsa/nfa.hpp"
#include "adsa/protocol.hpp"
#include "adsa/verdict.hpp"

namespace adsa {

/// Input codes of write moves besides symbol indices and kEps.
inline constexpr int kLeftEnd = -2;
inline constexpr int kRightEnd = -3;
inline constexpr std::string_view kLeftEndToken = "lm";
inline constexpr std::string_view kRightEndToken = "rm";

enum class StateKind { Write, Query };

struct WriteMove {
  int input;  // symbol index, kEps, kLeftEnd or kRightEnd
  std::vector<int> output;  // indices into the write alphabet
  int target;
  friend bool operator==(const WriteMove&, const WriteMove&) = default;
};

struct QueryMove {
  Symbol query;
  Symbol response;
  int target;
  friend bool operator==(const QueryMove&, const QueryMove&) = default;
};

class AdsAutomaton {
 public:
  AdsAutomaton() = default;
  AdsAutomaton(Alphabet input, ProtocolAlphabet protocol)
      : input_(std::move(input)), protocol_(std::move(protocol)) {}

  const Alphabet& input_alphabet() const noexcept { return input_; }
  const ProtocolAlphabet& protocol() const noexcept { return protocol_; }
  const Alphabet& write_alphabet() const noexcept { return protocol_.wr(); }

  std::size_t num_states() const noexcept { return names_.size(); }
  const std::string& state_name(int s) const { return names_.at(static_cast<std::size_t>(s)); }
  StateKind kind(int s) const { return kinds_.at(static_cast<std::size_t>(s)); }
  bool is_query(int s) const { return kind(s) == StateKind::Query; }

  std::optional<int> find_state(std::string_view name) const {
    if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
    return std::nullopt;
  }
  int state(std::string_view name) const {
    if (auto s = find_state(name)) return *s;
    throw InvalidArgument("unknown state '" + std::string(name) + "'");
  }

  int add_state(std::string name, StateKind kind) {
    if (name.empty()) throw InvalidArgument("state ids must be non-empty");
    if (index_.contains(name)) throw InvalidArgument("duplicate state '" + name + "'");
    int id = static_cast<int>(names_.size());
    index_.emplace(name, id);
    names_.push_back(std::move(name));
    kinds_.push_back(kind);
    accepting_.push_back(false);
    wmoves_.emplace_back();
    qmoves_.emplace_back();
    if (initial_ < 0) initial_ = id;
    return id;
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
  void set_accepting(int s, bool v = true) {
    check_state(s);
    accepting_[static_cast<std::size_t>(s)] = v;
  }
  StateSet accepting_states() const {
    StateSet out;
    for (std::size_t s = 0; s < accepting_.size(); ++s)
      if (accepting_[s]) out.push_back(static_cast<int>(s));
    return out;
  }

  void add_write_move(int src, int input, std::vector<int> output, int dst) {
    check_state(src);
    check_state(dst);
    if (is_query(src)) throw InvalidArgument("write move from query state '" + state_name(src) + "'");
    if (input < kRightEnd || (input >= 0 && static_cast<std::size_t>(input) >= input_.size()))
      throw InvalidArgument("write move input out of range");
    for (int x : output)
      if (x < 0 || static_cast<std::size_t>(x) >= write_alphabet().size())
        throw InvalidArgument("write move output symbol out of range");
    WriteMove m{input, std::move(output), dst};
    auto& v = wmoves_[static_cast<std::size_t>(src)];
    if (std::find(v.begin(), v.end(), m) == v.end()) v.push_back(std::move(m));
  }

  /// Name-based variant; input may be a symbol, "eps", "lm" or "rm".
  void add_write_move(std::string_view src, std::string_view input, const Word& output, std::string_view dst) {
    std::vector<int> out;
    for (const auto& x : output) out.push_back(write_alphabet().index_of(x));
    add_write_move(state(src), input_code(input), std::move(out), state(dst));
  }

  void add_query_move(int src, const Symbol& q, const Symbol& r, int dst) {
    check_state(src);
    check_state(dst);
    if (!is_query(src)) throw InvalidArgument("query move from write state '" + state_name(src) + "'");
    if (is_query(dst)) throw InvalidArgument("query move must land in a write state, not '" + state_name(dst) + "'");
    if (!protocol_.is_valid(q, r)) throw InvalidArgument("query move uses invalid pair (" + q + ", " + r + ")");
    QueryMove m{q, r, dst};
    auto& v = qmoves_[static_cast<std::size_t>(src)];
    if (std::find(v.begin(), v.end(), m) == v.end()) v.push_back(std::move(m));
  }

  void add_query_move(std::string_view src, const Symbol& q, const Symbol& r, std::string_view dst) {
    add_query_move(state(src), q, r, state(dst));
  }

  const std::vector<WriteMove>& write_moves(int s) const { return wmoves_.at(static_cast<std::size_t>(s)); }
  const std::vector<QueryMove>& query_moves(int s) const { return qmoves_.at(static_cast<std::size_t>(s)); }

  int input_code(std::string_view tok) const {
    if (tok == kEpsilonToken) return kEps;
    if (tok == kLeftEndToken) return kLeftEnd;
    if (tok == kRightEndToken) return kRightEnd;
    return input_.index_of(tok);
  }
  std::string input_text(int code) const {
    if (code == kEps) return std::string(kEpsilonToken);
    if (code == kLeftEnd) return std::string(kLeftEndToken);
    if (code == kRightEnd) return std::string(kRightEndToken);
    return input_[code];
  }

  /// True when some move reads an endmarker. Automata without endmarker
  /// moves run on w directly; the markers are consumed implicitly.
  bool endmarker_aware() const {
    for (const auto& v : wmoves_)
      for (const auto& m : v)
        if (m.input == kLeftEnd || m.input == kRightEnd) return true;
    return false;
  }

  Word decode_write(const std::vector<int>& w) const {
    Word out;
    for (int x : w) out.push_back(write_alphabet()[x]);
    return out;
  }

 private:
  void check_state(int s) const {
    if (s < 0 || static_cast<std::size_t>(s) >= names_.size()) throw InvalidArgument("state index out of range");
  }

  Alphabet input_;
  ProtocolAlphabet protocol_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<StateKind> kinds_;
  std::vector<bool> accepting_;
  std::vector<std::vector<WriteMove>> wmoves_;
  std::vector<std::vector<QueryMove>> qmoves_;
  int initial_ = -1;
};

/// Syntactic determinism: write states never mix epsilon and reading moves,
/// have at most one move per input code, and query states issue one query
/// and branch on distinct responses.
inline bool is_deterministic(const AdsAutomaton& m) {
  for (std::size_t s = 0; s < m.num_states(); ++s) {
    int i = static_cast<int>(s);
    if (m.is_query(i)) {
      const auto& qs = m.query_moves(i);
      for (std::size_t a = 0; a < qs.size(); ++a) {
        if (qs[a].query != qs[0].query) return false;
        for (std::size_t b = a + 1; b < qs.size(); ++b)
          if (qs[a].response == qs[b].response) return false;
      }
    } else {
      const auto& ws = m.write_moves(i);
      bool eps = false, reads = false;
      std::vector<int> seen;
      for (const auto& w : ws) {
        (w.input == kEps ? eps : reads) = true;
        if (std::find(seen.begin(), seen.end(), w.input) != seen.end()) return false;
        seen.push_back(w.input);
      }
      if (eps && reads) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Simulation

struct SimulateResult {
  Verdict verdict = Verdict::Reject;
  std::size_t configs = 0;
  std::optional<ProtocolWord> protocol;  // protocol of an accepting run
};

namespace detail {

inline std::vector<int> framed_input(const AdsAutomaton& m, const Word& w, bool aware) {
  std::vector<int> seq;
  if (aware) seq.push_back(kLeftEnd);
  for (const auto& t : w) seq.push_back(m.input_alphabet().index_of(t));
  if (aware) seq.push_back(kRightEnd);
  return seq;
}

}  // namespace detail

/// Breadth-first search of the configuration graph of m on w with storage o.
/// Configurations are deduplicated on (state, position, tape, storage key).
/// Accept needs an accepting state, all input read, an empty tape and
/// o.final_ok on the storage.
inline SimulateResult simulate(const AdsAutomaton& m, const Word& w, const ProtocolOracle& o,
                               const SearchBounds& bounds = {}) {
  bounds.validate();
  const bool aware = m.endmarker_aware();
  const std::vector<int> seq = detail::framed_input(m, w, aware);

  struct Config {
    int state;
    std::size_t pos;
    std::vector<int> tape;
    OracleState storage;
    std::size_t blocks;
    int parent;
    std::optional<ProtocolBlock> block;  // block completed by the move into this config
  };
  std::vector<Config> nodes;
  std::unordered_set<std::string> seen;
  std::deque<int> queue;
  bool hit = false;

  auto key_of = [&](const Config& c) {
    std::string k = std::to_string(c.state) + '|' + std::to_string(c.pos) + '|';
    for (int x : c.tape) k += std::to_string(x) + ',';
    k += '|';
    k += o.canonical_key(c.storage);
    return k;
  };
  auto push = [&](Config c) {
    if (c.tape.size() > bounds.max_tape || c.blocks > bounds.max_blocks) {
      hit = true;
      return;
    }
    if (seen.size() >= bounds.max_configs) {
      hit = true;
      return;
    }
    if (!seen.insert(key_of(c)).second) return;
    nodes.push_back(std::move(c));
    queue.push_back(static_cast<int>(nodes.size()) - 1);
  };

  SimulateResult res;
  push({m.initial(), 0, {}, o.initial_state(), 0, -1, std::nullopt});
  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    const Config c = nodes[static_cast<std::size_t>(id)];
    if (c.pos == seq.size() && m.is_accepting(c.state) && c.tape.empty() && o.final_ok(c.storage)) {
      res.verdict = Verdict::Accept;
      ProtocolWord p;
      for (int n = id; n >= 0; n = nodes[static_cast<std::size_t>(n)].parent)
        if (nodes[static_cast<std::size_t>(n)].block) p.push_back(*nodes[static_cast<std::size_t>(n)].block);
      std::reverse(p.begin(), p.end());
      res.protocol = std::move(p);
      res.configs = seen.size();
      return res;
    }
    if (m.is_query(c.state)) {
      std::vector<Symbol> asked;
      for (const auto& qm : m.query_moves(c.state)) {
        if (std::find(asked.begin(), asked.end(), qm.query) != asked.end()) continue;
        asked.push_back(qm.query);
        Word u = m.decode_write(c.tape);
        auto r = o.respond(c.storage, u, qm.query);
        if (!r) continue;
        for (const auto& qm2 : m.query_moves(c.state))
          if (qm2.query == qm.query && qm2.response == r->symbol)
            push({qm2.target, c.pos, {}, r->next, c.blocks + 1, id, ProtocolBlock{u, qm.query, r->symbol}});
      }
      continue;
    }
    for (const auto& wm : m.write_moves(c.state)) {
      std::size_t npos = c.pos;
      if (wm.input != kEps) {
        if (c.pos >= seq.size() || seq[c.pos] != wm.input) continue;
        ++npos;
      }
      auto tape = c.tape;
      tape.insert(tape.end(), wm.output.begin(), wm.output.end());
      push({wm.target, npos, std::move(tape), c.storage, c.blocks, id, std::nullopt});
    }
  }
  res.configs = seen.size();
  res.verdict = hit ? Verdict::Unknown : Verdict::Reject;
  return res;
}

inline SimulateResult simulate(const AdsAutomaton& m, const Word& w, const OraclePtr& o,
                               const SearchBounds& bounds = {}) {
  return simulate(m, w, *o, bounds);
}

}  // namespace adsa
