// ads_constructions.hpp
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
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "adsa/ads_automaton.hpp"
#include "adsa/fst.hpp"

namespace adsa {

/// Automaton reading protocol words over the flattened protocol alphabet.
/// The write state "w" copies write letters to the tape. A query letter q
/// leads to the query state "Q:q"; each response r of q leads to "R:q:r",
/// which must then read r from the input to return to "w".
inline AdsAutomaton m_prot(const ProtocolAlphabet& pa) {
  AdsAutomaton m(pa.flattened(), pa);
  int w = m.add_state("w", StateKind::Write);
  m.set_accepting(w);
  for (int x = 0; x < static_cast<int>(pa.wr().size()); ++x)
    m.add_write_move(w, pa.flattened().index_of(pa.wr()[x]), {x}, w);
  for (const auto& q : pa.query().symbols()) {
    int qs = m.add_state("Q:" + q, StateKind::Query);
    m.add_write_move(w, pa.flattened().index_of(q), {}, qs);
    for (const auto& r : pa.responses_for(q)) {
      int rs = m.add_state("R:" + q + ":" + r, StateKind::Write);
      m.add_query_move(qs, q, r, rs);
      m.add_write_move(rs, pa.flattened().index_of(r), {}, w);
    }
  }
  return m;
}

namespace detail {

inline std::string show_codes(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace detail

/// Automaton for t^-1(L(m)): states (m-state, t-state, pending output of the
/// last t-arc[, phase]). The transducer advances only when its pending output
/// is used up and m is ready to read or accepting. A deterministic pair gives
/// a deterministic product unless some accepting write state of m has an
/// epsilon move: there the product may either follow m or let t read on,
/// and dropping either choice loses words. With endmarker moves in m the phase records whether
/// the left and right markers have been read.
inline AdsAutomaton compose_with_fst(const AdsAutomaton& m, const Fst& t) {
  if (!t.output_alphabet().same_symbols(m.input_alphabet()))
    throw InvalidArgument("compose_with_fst: transducer output alphabet differs from automaton input alphabet");
  const bool aware = m.endmarker_aware();
  std::vector<int> to_m(t.output_alphabet().size());
  for (std::size_t i = 0; i < to_m.size(); ++i)
    to_m[i] = m.input_alphabet().index_of(t.output_alphabet()[static_cast<int>(i)]);

  AdsAutomaton out(t.input_alphabet(), m.protocol());
  using Key = std::tuple<int, int, std::vector<int>, int>;
  std::map<Key, int> ids;
  std::vector<Key> pending;
  auto get = [&](int s, int p, std::vector<int> buf, int phase) {
    Key key{s, p, buf, phase};
    if (auto it = ids.find(key); it != ids.end()) return it->second;
    std::string name = "(" + m.state_name(s) + "," + t.state_name(p);
    if (!buf.empty()) name += "," + detail::show_codes(buf);
    name += ")";
    if (aware) name += "@" + std::to_string(phase);
    int id = out.add_state(name, m.kind(s));
    if (m.is_accepting(s) && t.is_accepting(p) && buf.empty() && (!aware || phase == 2)) out.set_accepting(id);
    ids.emplace(key, id);
    pending.push_back(std::move(key));
    return id;
  };
  out.set_initial(get(m.initial(), t.initial(), {}, 0));

  while (!pending.empty()) {
    auto [s, p, buf, phase] = pending.back();
    pending.pop_back();
    int src = ids.at(Key{s, p, buf, phase});
    if (m.is_query(s)) {
      for (const auto& qm : m.query_moves(s)) out.add_query_move(src, qm.query, qm.response, get(qm.target, p, buf, phase));
      continue;
    }
    bool reads = false;  // m wants a letter here
    bool right_end = false;
    for (const auto& wm : m.write_moves(s)) {
      if (wm.input == kEps) {
        out.add_write_move(src, kEps, wm.output, get(wm.target, p, buf, phase));
      } else if (wm.input == kLeftEnd) {
        if (phase == 0) out.add_write_move(src, kLeftEnd, wm.output, get(wm.target, p, buf, 1));
      } else if (wm.input == kRightEnd) {
        right_end = true;
        if (phase == 1 && buf.empty() && t.is_accepting(p))
          out.add_write_move(src, kRightEnd, wm.output, get(wm.target, p, buf, 2));
      } else {
        reads = true;
        if (!buf.empty() && to_m[static_cast<std::size_t>(buf.front())] == wm.input)
          out.add_write_move(src, kEps, wm.output,
                             get(wm.target, p, std::vector<int>(buf.begin() + 1, buf.end()), phase));
      }
    }
    bool may_advance = buf.empty() && (aware ? phase == 1 && (reads || right_end) : reads || m.is_accepting(s));
    if (may_advance)
      for (const auto& arc : t.arcs(p)) out.add_write_move(src, arc.input, {}, get(s, arc.target, arc.output, phase));
  }
  return out;
}

/// Transducer T_M with w in L(m) iff some word of T_M(w) is a correct
/// protocol. Write moves copy their tape output; query moves read nothing
/// and write the query and response. Endmarker moves read nothing; for
/// automata with such moves, states carry a phase "s@k" (k = markers read)
/// so the markers stay in order around the letters.
inline Fst extractor(const AdsAutomaton& m) {
  const auto& pa = m.protocol();
  const Alphabet& flat = pa.flattened();
  std::vector<int> wr_to_flat(pa.wr().size());
  for (std::size_t i = 0; i < wr_to_flat.size(); ++i) wr_to_flat[i] = flat.index_of(pa.wr()[static_cast<int>(i)]);
  const bool aware = m.endmarker_aware();
  const int phases = aware ? 3 : 1;

  Fst out(m.input_alphabet(), flat);
  auto id = [&](int s, int phase) { return s * phases + phase; };
  for (std::size_t s = 0; s < m.num_states(); ++s)
    for (int ph = 0; ph < phases; ++ph)
      out.add_state(aware ? m.state_name(static_cast<int>(s)) + "@" + std::to_string(ph)
                          : m.state_name(static_cast<int>(s)));
  out.set_initial(id(m.initial(), 0));
  for (int f : m.accepting_states()) out.set_accepting(id(f, phases - 1));

  for (std::size_t si = 0; si < m.num_states(); ++si) {
    int s = static_cast<int>(si);
    for (int ph = 0; ph < phases; ++ph) {
      for (const auto& qm : m.query_moves(s))
        out.add_arc(id(s, ph), kEps, {flat.index_of(qm.query), flat.index_of(qm.response)}, id(qm.target, ph));
      for (const auto& wm : m.write_moves(s)) {
        std::vector<int> o;
        for (int x : wm.output) o.push_back(wr_to_flat[static_cast<std::size_t>(x)]);
        if (wm.input == kEps) {
          out.add_arc(id(s, ph), kEps, o, id(wm.target, ph));
        } else if (wm.input == kLeftEnd) {
          if (ph == 0) out.add_arc(id(s, ph), kEps, o, id(wm.target, 1));
        } else if (wm.input == kRightEnd) {
          if (ph == 1) out.add_arc(id(s, ph), kEps, o, id(wm.target, 2));
        } else if (!aware || ph == 1) {
          out.add_arc(id(s, ph), wm.input, o, id(wm.target, ph));
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Two-letter recoding of the write alphabet.

inline constexpr std::string_view kCodeA = "a";
inline constexpr std::string_view kCodeB = "b";

/// The i-th write letter (1-based) becomes a b^i a.
inline Word two_letter_code(int i) {
  Word w{std::string(kCodeA)};
  for (int k = 0; k < i; ++k) w.emplace_back(kCodeB);
  w.emplace_back(kCodeA);
  return w;
}

/// Inverse of the letterwise code; nullopt on words outside the code.
inline std::optional<Word> two_letter_decode(const Alphabet& original, const Word& w) {
  Word out;
  std::size_t i = 0;
  while (i < w.size()) {
    if (w[i] != kCodeA) return std::nullopt;
    std::size_t j = i + 1;
    while (j < w.size() && w[j] == kCodeB) ++j;
    if (j == w.size() || w[j] != kCodeA) return std::nullopt;
    std::size_t n = j - i - 1;
    if (n == 0 || n > original.size()) return std::nullopt;
    out.push_back(original[static_cast<int>(n) - 1]);
    i = j + 1;
  }
  return out;
}

inline ProtocolAlphabet recoded_protocol(const ProtocolAlphabet& pa) {
  for (auto tok : {kCodeA, kCodeB})
    if (pa.query().contains(tok) || pa.resp().contains(tok))
      throw InvalidArgument("two_letter_recode: '" + std::string(tok) + "' is a query or response symbol");
  return ProtocolAlphabet(Alphabet{std::string(kCodeA), std::string(kCodeB)}, pa.query(), pa.resp(), pa.valid());
}

/// Storage seen through the code: write words are decoded before they reach
/// the wrapped oracle; words outside the code get no response.
class RecodedOracle : public ProtocolOracle {
 public:
  explicit RecodedOracle(OraclePtr inner) : inner_(std::move(inner)), pa_(recoded_protocol(inner_->alphabet())) {}

  const ProtocolAlphabet& alphabet() const override { return pa_; }
  std::string name() const override { return inner_->name() + "/ab"; }
  OracleState initial_state() const override { return inner_->initial_state(); }
  std::optional<Response> respond(const OracleState& s, const Word& u, const Symbol& q) const override {
    auto d = two_letter_decode(inner_->alphabet().wr(), u);
    if (!d) return std::nullopt;
    return inner_->respond(s, *d, q);
  }
  std::string canonical_key(const OracleState& s) const override { return inner_->canonical_key(s); }
  bool final_ok(const OracleState& s) const override { return inner_->final_ok(s); }
  std::optional<std::pair<Symbol, Symbol>> reset_symbols() const override { return inner_->reset_symbols(); }

 private:
  OraclePtr inner_;
  ProtocolAlphabet pa_;
};

struct Recoded {
  AdsAutomaton automaton;
  Fst codec;
};

inline Fst two_letter_codec(const Alphabet& wr) {
  Alphabet ab{std::string(kCodeA), std::string(kCodeB)};
  Fst codec(wr, ab);
  int s = codec.add_state("c");
  codec.set_accepting(s);
  for (int i = 0; i < static_cast<int>(wr.size()); ++i) {
    std::vector<int> code{0};
    code.insert(code.end(), static_cast<std::size_t>(i + 1), 1);
    code.push_back(0);
    codec.add_arc(s, i, code, s);
  }
  return codec;
}

inline Recoded two_letter_recode(const AdsAutomaton& m) {
  if (m.write_alphabet().empty()) throw InvalidArgument("two_letter_recode: empty write alphabet");
  Recoded r{AdsAutomaton(m.input_alphabet(), recoded_protocol(m.protocol())), two_letter_codec(m.write_alphabet())};
  auto& out = r.automaton;
  for (std::size_t s = 0; s < m.num_states(); ++s) out.add_state(m.state_name(static_cast<int>(s)), m.kind(static_cast<int>(s)));
  out.set_initial(m.initial());
  for (int f : m.accepting_states()) out.set_accepting(f);
  for (std::size_t si = 0; si < m.num_states(); ++si) {
    int s = static_cast<int>(si);
    for (const auto& wm : m.write_moves(s)) {
      std::vector<int> o;
      for (int x : wm.output) {
        o.push_back(0);
        o.insert(o.end(), static_cast<std::size_t>(x + 1), 1);
        o.push_back(0);
      }
      out.add_write_move(s, wm.input, o, wm.target);
    }
    for (const auto& qm : m.query_moves(s)) out.add_query_move(s, qm.query, qm.response, qm.target);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Concatenation and iteration through the reset block.

namespace detail {

inline std::pair<Symbol, Symbol> require_reset(const ProtocolOracle& o) {
  auto r = o.reset_symbols();
  if (!r) throw InvalidArgument("storage '" + o.name() + "' has no reset operation");
  return *r;
}

inline void require_plain(const AdsAutomaton& m, const char* op) {
  if (m.endmarker_aware()) throw InvalidArgument(std::string(op) + ": automata with endmarker moves are not supported");
}

/// Copies m into out with a name prefix; returns the index offset.
inline int copy_into(AdsAutomaton& out, const AdsAutomaton& m, const std::string& prefix) {
  int base = static_cast<int>(out.num_states());
  for (std::size_t s = 0; s < m.num_states(); ++s)
    out.add_state(prefix + m.state_name(static_cast<int>(s)), m.kind(static_cast<int>(s)));
  for (std::size_t si = 0; si < m.num_states(); ++si) {
    int s = static_cast<int>(si);
    for (const auto& wm : m.write_moves(s)) out.add_write_move(base + s, wm.input, wm.output, base + wm.target);
    for (const auto& qm : m.query_moves(s)) out.add_query_move(base + s, qm.query, qm.response, base + qm.target);
  }
  return base;
}

/// Sends every accepting state of m (copied at `base`) through the reset
/// block to `bridge`: write states by an epsilon move into `reset`, query
/// states by issuing the reset query themselves.
inline void link_reset(AdsAutomaton& out, const AdsAutomaton& m, int base, int reset, int bridge,
                       const std::pair<Symbol, Symbol>& rs) {
  for (int f : m.accepting_states()) {
    if (m.is_query(f))
      out.add_query_move(base + f, rs.first, rs.second, bridge);
    else
      out.add_write_move(base + f, kEps, {}, reset);
  }
}

}  // namespace detail

/// Accepts L(m1) L(m2): runs m1 on a guessed prefix, issues the reset block
/// and runs m2 on the rest. The reset query is sent with the current tape,
/// which is empty after an accepting run of m1.
inline AdsAutomaton concat(const AdsAutomaton& m1, const AdsAutomaton& m2, const ProtocolOracle& o) {
  auto rs = detail::require_reset(o);
  detail::require_plain(m1, "concat");
  detail::require_plain(m2, "concat");
  if (!m1.input_alphabet().same_symbols(m2.input_alphabet()))
    throw InvalidArgument("concat: input alphabets differ");
  AdsAutomaton out(m1.input_alphabet(), m1.protocol());
  int b1 = detail::copy_into(out, m1, "1:");
  int b2 = detail::copy_into(out, m2, "2:");
  int reset = out.add_state("reset", StateKind::Query);
  int bridge = out.add_state("bridge", StateKind::Write);
  out.add_query_move(reset, rs.first, rs.second, bridge);
  out.add_write_move(bridge, kEps, {}, b2 + m2.initial());
  detail::link_reset(out, m1, b1, reset, bridge, rs);
  out.set_initial(b1 + m1.initial());
  for (int f : m2.accepting_states()) out.set_accepting(b2 + f);
  return out;
}

/// Accepts L(m)*: an accepting "start" state for the empty word, then runs
/// of m separated by reset blocks.
inline AdsAutomaton star(const AdsAutomaton& m, const ProtocolOracle& o) {
  auto rs = detail::require_reset(o);
  detail::require_plain(m, "star");
  AdsAutomaton out(m.input_alphabet(), m.protocol());
  int start = out.add_state("start", StateKind::Write);
  int b = detail::copy_into(out, m, "m:");
  int reset = out.add_state("reset", StateKind::Query);
  int bridge = out.add_state("bridge", StateKind::Write);
  out.set_initial(start);
  out.set_accepting(start);
  out.add_write_move(start, kEps, {}, b + m.initial());
  out.add_query_move(reset, rs.first, rs.second, bridge);
  out.add_write_move(bridge, kEps, {}, b + m.initial());
  detail::link_reset(out, m, b, reset, bridge, rs);
  for (int f : m.accepting_states()) out.set_accepting(b + f);
  return out;
}

}  // namespace adsa
