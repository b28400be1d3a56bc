// protocol.hpp
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
// Protocol words are sequences of query blocks u q r: a word u over the
// write alphabet, a query symbol q and the response r the storage gave.
// A ProtocolOracle answers queries from an explicit storage state, so
// membership of a protocol word is a replay.

#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "adsa/alphabet.hpp"
#include "adsa/error.hpp"

namespace adsa {

/// Write, query and response alphabets plus the valid (query, response)
/// pairs. The write alphabet is disjoint from the other two. A token may be
/// both a query and a response; block parsing is positional so this stays
/// unambiguous.
class ProtocolAlphabet {
 public:
  ProtocolAlphabet() = default;
  ProtocolAlphabet(Alphabet wr, Alphabet query, Alphabet resp, std::set<std::pair<Symbol, Symbol>> valid)
      : wr_(std::move(wr)), query_(std::move(query)), resp_(std::move(resp)), valid_(std::move(valid)) {
    if (query_.empty() || resp_.empty()) throw InvalidArgument("query and response alphabets must be non-empty");
    for (const auto& s : wr_.symbols())
      if (query_.contains(s) || resp_.contains(s))
        throw InvalidArgument("write symbol '" + s + "' also used as query or response");
    for (const auto& [q, r] : valid_)
      if (!query_.contains(q) || !resp_.contains(r)) throw InvalidArgument("valid pair uses undeclared symbols");
    for (const auto& s : wr_.symbols()) flat_.add(s);
    for (const auto& s : query_.symbols()) flat_.add(s);
    for (const auto& s : resp_.symbols()) flat_.add(s);
  }

  const Alphabet& wr() const noexcept { return wr_; }
  const Alphabet& query() const noexcept { return query_; }
  const Alphabet& resp() const noexcept { return resp_; }
  const std::set<std::pair<Symbol, Symbol>>& valid() const noexcept { return valid_; }

  /// Union of the three alphabets in write, query, response order.
  const Alphabet& flattened() const noexcept { return flat_; }

  bool is_valid(const Symbol& q, const Symbol& r) const { return valid_.contains({q, r}); }

  std::vector<Symbol> responses_for(const Symbol& q) const {
    std::vector<Symbol> out;
    for (const auto& r : resp_.symbols())
      if (is_valid(q, r)) out.push_back(r);
    return out;
  }

 private:
  Alphabet wr_, query_, resp_, flat_;
  std::set<std::pair<Symbol, Symbol>> valid_;
};

struct ProtocolBlock {
  Word u;
  Symbol q;
  Symbol r;
  friend bool operator==(const ProtocolBlock&, const ProtocolBlock&) = default;
};

using ProtocolWord = std::vector<ProtocolBlock>;

inline Word flatten(const ProtocolWord& p) {
  Word out;
  for (const auto& b : p) {
    out.insert(out.end(), b.u.begin(), b.u.end());
    out.push_back(b.q);
    out.push_back(b.r);
  }
  return out;
}

/// Factorizes w into blocks u q r. Throws ParseError on a malformed shape or
/// an invalid (q, r) pair.
inline ProtocolWord parse_blocks(const ProtocolAlphabet& pa, const Word& w) {
  ProtocolWord out;
  std::size_t i = 0;
  while (i < w.size()) {
    ProtocolBlock b;
    while (i < w.size() && pa.wr().contains(w[i])) b.u.push_back(w[i++]);
    if (i == w.size()) throw ParseError("missing query after write word at position " + std::to_string(i));
    if (!pa.query().contains(w[i]))
      throw ParseError("expected a query symbol at position " + std::to_string(i) + ", got '" + w[i] + "'");
    b.q = w[i++];
    if (i == w.size()) throw ParseError("missing response to '" + b.q + "'");
    if (!pa.resp().contains(w[i]))
      throw ParseError("expected a response symbol at position " + std::to_string(i) + ", got '" + w[i] + "'");
    b.r = w[i++];
    if (!pa.is_valid(b.q, b.r)) throw ParseError("response '" + b.r + "' is not valid for query '" + b.q + "'");
    out.push_back(std::move(b));
  }
  return out;
}

/// Storage state as an opaque value. Oracles choose the encoding.
using OracleState = std::vector<std::string>;

struct Response {
  Symbol symbol;
  OracleState next;
};

/// A language of correct protocols given by a deterministic storage.
/// Implementations must be stateless: every call receives and returns
/// explicit storage states.
class ProtocolOracle {
 public:
  virtual ~ProtocolOracle() = default;

  virtual const ProtocolAlphabet& alphabet() const = 0;
  virtual std::string name() const = 0;
  virtual OracleState initial_state() const { return {}; }

  /// The unique response to query q after writing u, or nullopt when no
  /// response exists.
  virtual std::optional<Response> respond(const OracleState& state, const Word& u, const Symbol& q) const = 0;

  /// Equal keys imply identical behavior on every future block sequence.
  virtual std::string canonical_key(const OracleState& state) const {
    std::string key;
    for (const auto& s : state) {
      key += '\x1f';
      key += s;
    }
    return key;
  }

  /// Extra condition on the storage state at the end of a protocol word.
  virtual bool final_ok(const OracleState&) const { return true; }

  /// (query, response) pair that resets the storage to its initial state,
  /// when the storage has one.
  virtual std::optional<std::pair<Symbol, Symbol>> reset_symbols() const { return std::nullopt; }
};

using OraclePtr = std::shared_ptr<const ProtocolOracle>;

/// Storage state after replaying p, or nullopt if some recorded response
/// disagrees with the oracle. Does not apply final_ok.
inline std::optional<OracleState> replay(const ProtocolOracle& o, const ProtocolWord& p) {
  OracleState state = o.initial_state();
  for (const auto& b : p) {
    auto r = o.respond(state, b.u, b.q);
    if (!r || r->symbol != b.r) return std::nullopt;
    state = std::move(r->next);
  }
  return state;
}

inline bool membership(const ProtocolOracle& o, const ProtocolWord& p) {
  auto state = replay(o, p);
  return state && o.final_ok(*state);
}

inline bool membership(const ProtocolOracle& o, const Word& w) {
  ProtocolWord p;
  try {
    p = parse_blocks(o.alphabet(), w);
  } catch (const ParseError&) {
    return false;
  }
  return membership(o, p);
}

}  // namespace adsa
