// ads_io.hpp
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
//   type ads
//   alphabet <input symbols>
//   wr <write symbols>
//   query <query symbols>
//   resp <response symbols>
//   valid <q> <r> [<q> <r> ...]
//
// The four protocol lines may be omitted when the caller supplies the
// protocol alphabet.
//
//   states <ids>                  (optional; unlisted states are write states)
//   partition wr <ids>
//   partition query <ids>
//   initial <id>
//   accept <ids>
//   wmove <s> <symbol|eps|lm|rm> <write word|-> <s'>
//   qmove <s> <q> <r> <s'>

#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "adsa/ads_automaton.hpp"
#include "adsa/fst_io.hpp"

namespace adsa {

inline AdsAutomaton parse_ads(const std::string& text, const std::optional<ProtocolAlphabet>& fallback = std::nullopt) {
  auto lines = io::lex_string(text);
  std::vector<const io::Line*> wmoves, qmoves;
  Alphabet wr, query, resp;
  bool has_query = false, has_resp = false;
  std::set<std::pair<Symbol, Symbol>> valid;
  std::vector<std::pair<std::string, StateKind>> partition;
  auto h = io::read_header(lines, [&](const io::Line& l) {
    const auto& key = l.tokens.front();
    if (key == "wr") {
      for (std::size_t i = 1; i < l.tokens.size(); ++i) wr.add(l.tokens[i]);
    } else if (key == "query") {
      io::expect_arity(l, 2);
      for (std::size_t i = 1; i < l.tokens.size(); ++i) query.add(l.tokens[i]);
      has_query = true;
    } else if (key == "resp") {
      io::expect_arity(l, 2);
      for (std::size_t i = 1; i < l.tokens.size(); ++i) resp.add(l.tokens[i]);
      has_resp = true;
    } else if (key == "valid") {
      if (l.tokens.size() < 3 || l.tokens.size() % 2 == 0) throw ParseError("'valid' expects query/response pairs", l.number);
      for (std::size_t i = 1; i + 1 < l.tokens.size(); i += 2) valid.insert({l.tokens[i], l.tokens[i + 1]});
    } else if (key == "partition") {
      io::expect_arity(l, 2);
      StateKind kind;
      if (l.tokens[1] == "wr")
        kind = StateKind::Write;
      else if (l.tokens[1] == "query")
        kind = StateKind::Query;
      else
        throw ParseError("partition must be 'wr' or 'query'", l.number);
      for (std::size_t i = 2; i < l.tokens.size(); ++i) partition.emplace_back(l.tokens[i], kind);
    } else if (key == "wmove") {
      io::expect_arity(l, 5, 5);
      wmoves.push_back(&l);
    } else if (key == "qmove") {
      io::expect_arity(l, 5, 5);
      qmoves.push_back(&l);
    } else {
      return false;
    }
    return true;
  });
  if (!h.type.empty() && h.type != "ads") throw ParseError("type must be ads");
  if (!h.has_alphabet) throw ParseError("missing 'alphabet' line");
  if (h.initial.empty()) throw ParseError("missing 'initial' line");

  ProtocolAlphabet pa;
  try {
    if (has_query || has_resp)
      pa = ProtocolAlphabet(wr, query, resp, valid);
    else if (fallback)
      pa = *fallback;
    else
      throw ParseError("missing protocol alphabet ('query', 'resp', 'valid' lines)");
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }

  AdsAutomaton m(h.alphabet, pa);
  std::map<std::string, StateKind> kinds;
  for (const auto& [id, k] : partition) {
    if (auto [it, fresh] = kinds.emplace(id, k); !fresh && it->second != k)
      throw ParseError("state '" + id + "' is in both partitions");
  }
  try {
    std::vector<std::string> order = h.states;
    for (const auto& [id, k] : partition)
      if (std::find(order.begin(), order.end(), id) == order.end()) order.push_back(id);
    for (const auto& id : order) {
      auto it = kinds.find(id);
      m.add_state(id, it == kinds.end() ? StateKind::Write : it->second);
    }
    m.set_initial(m.state(h.initial));
    for (const auto& s : h.accept) m.set_accepting(m.state(s));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  for (const auto* l : wmoves) {
    try {
      m.add_write_move(l->tokens[1], l->tokens[2], io::parse_out_word(l->tokens[3], m.write_alphabet(), l->number),
                       l->tokens[4]);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), l->number);
    }
  }
  for (const auto* l : qmoves) {
    try {
      m.add_query_move(l->tokens[1], l->tokens[2], l->tokens[3], l->tokens[4]);
    } catch (const Error& e) {
      throw ParseError(e.what(), l->number);
    }
  }
  return m;
}

inline AdsAutomaton load_ads(const std::string& path, const std::optional<ProtocolAlphabet>& fallback = std::nullopt) {
  return parse_ads(io::read_file(path), fallback);
}

inline std::string write_ads(const AdsAutomaton& m) {
  std::ostringstream out;
  auto list = [&](const char* key, const Alphabet& a) {
    out << key;
    for (const auto& s : a.symbols()) out << ' ' << s;
    out << '\n';
  };
  out << "type ads\n";
  list("alphabet", m.input_alphabet());
  list("wr", m.protocol().wr());
  list("query", m.protocol().query());
  list("resp", m.protocol().resp());
  out << "valid";
  for (const auto& [q, r] : m.protocol().valid()) out << ' ' << q << ' ' << r;
  out << '\n';
  out << "states";
  for (std::size_t s = 0; s < m.num_states(); ++s) out << ' ' << m.state_name(static_cast<int>(s));
  out << '\n';
  for (auto kind : {StateKind::Write, StateKind::Query}) {
    std::string ids;
    for (std::size_t s = 0; s < m.num_states(); ++s)
      if (m.kind(static_cast<int>(s)) == kind) ids += ' ' + m.state_name(static_cast<int>(s));
    if (!ids.empty()) out << "partition " << (kind == StateKind::Write ? "wr" : "query") << ids << '\n';
  }
  out << "initial " << m.state_name(m.initial()) << '\n';
  auto acc = m.accepting_states();
  if (!acc.empty()) {
    out << "accept";
    for (int s : acc) out << ' ' << m.state_name(s);
    out << '\n';
  }
  for (std::size_t si = 0; si < m.num_states(); ++si) {
    int s = static_cast<int>(si);
    for (const auto& wm : m.write_moves(s))
      out << "wmove " << m.state_name(s) << ' ' << m.input_text(wm.input) << ' '
          << io::write_out_word(m.decode_write(wm.output)) << ' ' << m.state_name(wm.target) << '\n';
    for (const auto& qm : m.query_moves(s))
      out << "qmove " << m.state_name(s) << ' ' << qm.query << ' ' << qm.response << ' ' << m.state_name(qm.target)
          << '\n';
  }
  return out.str();
}

inline std::string to_dot(const AdsAutomaton& m, const std::string& title = "ads") {
  std::ostringstream out;
  out << "digraph " << io::dot_quote(title) << " {\n";
  io::dot_nodes(
      out, m.num_states(), [&](int s) { return m.state_name(s); }, [&](int s) { return m.is_accepting(s); },
      m.initial(), [&](int s) { return std::string(m.is_query(s) ? "box" : "circle"); });
  for (std::size_t si = 0; si < m.num_states(); ++si) {
    int s = static_cast<int>(si);
    for (const auto& wm : m.write_moves(s))
      out << "  n" << s << " -> n" << wm.target << " [label="
          << io::dot_quote(m.input_text(wm.input) + "/" + show(m.decode_write(wm.output))) << "];\n";
    for (const auto& qm : m.query_moves(s))
      out << "  n" << s << " -> n" << qm.target << " [style=dashed, label=" << io::dot_quote(qm.query + "?" + qm.response)
          << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace adsa
