// axiom_fuzz.hpp
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
// Randomized checks of the six protocol-language axioms:
//   i    the empty word is a member
//   ii   members factor into blocks u q r
//   iii  block prefixes of members are members
//   iv   after any member and any write word, every query has a response
//   v    that response is unique
//   vi   the reset block may join any two members (only with reset_symbols)

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "adsa/protocol.hpp"

namespace adsa {

enum class Axiom { I = 1, II, III, IV, V, VI };

inline std::string axiom_name(Axiom a) {
  static const char* names[] = {"", "i", "ii", "iii", "iv", "v", "vi"};
  return names[static_cast<int>(a)];
}

inline Axiom parse_axiom(const std::string& s) {
  for (int i = 1; i <= 6; ++i)
    if (axiom_name(static_cast<Axiom>(i)) == s) return static_cast<Axiom>(i);
  throw InvalidArgument("unknown axiom '" + s + "' (expected i..vi)");
}

struct FuzzViolation {
  std::size_t trial;
  std::string detail;
};

struct FuzzReport {
  Axiom axiom{};
  std::size_t trials = 0;
  bool applicable = true;  // false for vi without a reset pair
  std::vector<FuzzViolation> violations;
};

struct FuzzOptions {
  std::size_t trials = 1000;
  std::size_t max_blocks = 50;
  std::size_t max_write = 4;  // length bound of random write words
  std::uint64_t seed = 1;
};

/// Generator used by trial `trial`; tests may rebuild it to regenerate the
/// exact member a trial examined.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

inline Word random_write_word(const ProtocolAlphabet& pa, std::mt19937_64& rng, std::size_t max_len) {
  Word u;
  if (pa.wr().empty()) return u;
  std::size_t len = std::uniform_int_distribution<std::size_t>(0, max_len)(rng);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(pa.wr().size()) - 1);
  for (std::size_t i = 0; i < len; ++i) u.push_back(pa.wr()[pick(rng)]);
  return u;
}

/// Random member with a uniformly drawn number of blocks in [0, max_blocks].
/// Write words are reused from earlier blocks half of the time so that
/// storage lookups hit. Queries without a response are skipped. The result
/// ignores final_ok.
inline ProtocolWord random_member(const ProtocolOracle& o, std::mt19937_64& rng, std::size_t max_blocks,
                                  std::size_t max_write) {
  const auto& pa = o.alphabet();
  std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_blocks)(rng);
  ProtocolWord p;
  std::vector<Word> used;
  OracleState state = o.initial_state();
  std::uniform_int_distribution<int> pick_q(0, static_cast<int>(pa.query().size()) - 1);
  for (std::size_t b = 0; b < n; ++b) {
    Word u;
    if (!used.empty() && std::uniform_int_distribution<int>(0, 1)(rng) == 0)
      u = used[std::uniform_int_distribution<std::size_t>(0, used.size() - 1)(rng)];
    else
      u = random_write_word(pa, rng, max_write);
    Symbol q = pa.query()[pick_q(rng)];
    auto r = o.respond(state, u, q);
    if (!r) continue;
    used.push_back(u);
    p.push_back({u, q, r->symbol});
    state = std::move(r->next);
  }
  return p;
}

inline std::string show_protocol(const ProtocolWord& p) { return show(flatten(p)); }

/// Member check that ignores the end condition, which is how prefixes and
/// extensions are judged for every axiom except i.
inline bool replays(const ProtocolOracle& o, const ProtocolWord& p) { return replay(o, p).has_value(); }

inline FuzzReport axiom_fuzz(const ProtocolOracle& o, Axiom axiom, const FuzzOptions& opt = {}) {
  FuzzReport rep;
  rep.axiom = axiom;
  rep.trials = opt.trials;
  const auto& pa = o.alphabet();
  auto violate = [&](std::size_t t, std::string d) { rep.violations.push_back({t, std::move(d)}); };

  if (axiom == Axiom::VI && !o.reset_symbols()) {
    rep.applicable = false;
    return rep;
  }
  for (std::size_t t = 0; t < opt.trials; ++t) {
    auto rng = trial_rng(opt.seed, t);
    ProtocolWord p = random_member(o, rng, opt.max_blocks, opt.max_write);
    switch (axiom) {
      case Axiom::I:
        if (!membership(o, Word{})) violate(t, "empty word rejected");
        break;
      case Axiom::II: {
        Word flat = flatten(p);
        try {
          if (parse_blocks(pa, flat) != p) violate(t, "block factorization differs: " + show(flat));
        } catch (const ParseError& e) {
          violate(t, show(flat) + ": " + e.what());
        }
        if (!replays(o, p)) violate(t, "generated word does not replay: " + show(flat));
        break;
      }
      case Axiom::III: {
        ProtocolWord prefix;
        for (const auto& b : p) {
          if (!replays(o, prefix)) {
            violate(t, "prefix rejected: " + show_protocol(prefix));
            break;
          }
          prefix.push_back(b);
        }
        if (!replays(o, p)) violate(t, "member rejected: " + show_protocol(p));
        break;
      }
      case Axiom::IV: {
        Word u = random_write_word(pa, rng, opt.max_write);
        for (const auto& q : pa.query().symbols()) {
          bool ok = false;
          for (const auto& r : pa.responses_for(q)) {
            auto ext = p;
            ext.push_back({u, q, r});
            if (replays(o, ext)) ok = true;
          }
          if (!ok) violate(t, "no response to '" + q + "' after " + show_protocol(p) + " with write word " + show(u));
        }
        break;
      }
      case Axiom::V: {
        auto first = replay(o, p);
        auto second = replay(o, p);
        if (!first || !second || o.canonical_key(*first) != o.canonical_key(*second))
          violate(t, "replay is not reproducible: " + show_protocol(p));
        ProtocolWord prefix;
        for (const auto& b : p) {
          for (const auto& r : pa.responses_for(b.q)) {
            if (r == b.r) continue;
            auto alt = prefix;
            alt.push_back({b.u, b.q, r});
            if (replays(o, alt)) violate(t, "two responses '" + b.r + "' and '" + r + "' after " + show_protocol(prefix));
          }
          prefix.push_back(b);
        }
        break;
      }
      case Axiom::VI: {
        auto [rq, rr] = *o.reset_symbols();
        ProtocolWord p2 = random_member(o, rng, opt.max_blocks, opt.max_write);
        auto joined = p;
        joined.push_back({{}, rq, rr});
        joined.insert(joined.end(), p2.begin(), p2.end());
        if (!replays(o, joined)) violate(t, "reset join rejected: " + show_protocol(joined));
        auto after = replay(o, ProtocolWord(joined.begin(), joined.begin() + static_cast<long>(p.size()) + 1));
        if (after && o.canonical_key(*after) != o.canonical_key(o.initial_state()))
          violate(t, "reset does not restore the initial state after " + show_protocol(p));
        break;
      }
    }
  }
  return rep;
}

}  // namespace adsa
