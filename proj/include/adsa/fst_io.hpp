// fst_io.hpp
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
// Transducer files use the automaton keywords plus
//
//   type fst
//   output x y            (output alphabet; defaults to the input alphabet)
//   trans q0 a x,y q1     (input may be "eps"; output "eps" or "-" is empty)
//
// Output words are comma-separated tokens. A token with no comma that is not
// itself an output symbol is split into characters, so "xy" also reads as
// x,y when both are symbols. When "-" is an output symbol it keeps that
// meaning and only "eps" denotes the empty word.

#pragma once

#include <sstream>
#include <string>

#include "adsa/fst.hpp"
#include "adsa/nfa_io.hpp"

namespace adsa {

namespace io {

inline Word parse_out_word(const std::string& tok, const Alphabet& out, int line) {
  if (tok == kEpsilonToken) return {};
  if (tok == "-" && !out.contains("-")) return {};
  Word w;
  if (tok.find(',') != std::string::npos) {
    std::string cur;
    std::istringstream ss(tok);
    while (std::getline(ss, cur, ',')) {
      if (cur.empty()) throw ParseError("empty symbol in output word '" + tok + "'", line);
      if (!out.contains(cur)) throw ParseError("symbol '" + cur + "' is not an output symbol", line);
      w.push_back(cur);
    }
    return w;
  }
  if (out.contains(tok)) return {tok};
  for (char c : tok) {
    std::string s(1, c);
    if (!out.contains(s)) throw ParseError("cannot read '" + tok + "' as an output word", line);
    w.push_back(s);
  }
  return w;
}

inline std::string write_out_word(const Word& w) {
  if (w.empty()) return std::string(kEpsilonToken);
  return join(w, ",");
}

}  // namespace io

inline Fst parse_fst(const std::string& text) {
  auto lines = io::lex_string(text);
  std::vector<const io::Line*> trans;
  Alphabet output;
  bool has_output = false;
  auto h = io::read_header(lines, [&](const io::Line& l) {
    const auto& key = l.tokens.front();
    if (key == "trans") {
      io::expect_arity(l, 5, 5);
      trans.push_back(&l);
      return true;
    }
    if (key == "output") {
      io::expect_arity(l, 2);
      for (std::size_t i = 1; i < l.tokens.size(); ++i) output.add(l.tokens[i]);
      has_output = true;
      return true;
    }
    return false;
  });
  if (!h.type.empty() && h.type != "fst") throw ParseError("type must be fst");
  if (!h.has_alphabet) throw ParseError("missing 'alphabet' line");
  if (h.states.empty()) throw ParseError("missing 'states' line");
  if (h.initial.empty()) throw ParseError("missing 'initial' line");
  Fst t(h.alphabet, has_output ? output : h.alphabet);
  try {
    for (const auto& s : h.states) t.add_state(s);
    t.set_initial(t.state(h.initial));
    for (const auto& s : h.accept) t.set_accepting(t.state(s));
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  for (const auto* l : trans) {
    try {
      t.add_arc(l->tokens[1], l->tokens[2], io::parse_out_word(l->tokens[3], t.output_alphabet(), l->number),
                l->tokens[4]);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), l->number);
    }
  }
  return t;
}

inline Fst load_fst(const std::string& path) { return parse_fst(io::read_file(path)); }

inline std::string write_fst(const Fst& t) {
  std::ostringstream out;
  out << "type fst\nalphabet";
  for (const auto& s : t.input_alphabet().symbols()) out << ' ' << s;
  out << "\noutput";
  for (const auto& s : t.output_alphabet().symbols()) out << ' ' << s;
  out << "\nstates";
  for (std::size_t s = 0; s < t.num_states(); ++s) out << ' ' << t.state_name(static_cast<int>(s));
  out << "\ninitial " << t.state_name(t.initial()) << '\n';
  auto acc = t.accepting_states();
  if (!acc.empty()) {
    out << "accept";
    for (int s : acc) out << ' ' << t.state_name(s);
    out << '\n';
  }
  for (std::size_t s = 0; s < t.num_states(); ++s)
    for (const auto& a : t.arcs(static_cast<int>(s)))
      out << "trans " << t.state_name(static_cast<int>(s)) << ' ' << symbol_text(t.input_alphabet(), a.input) << ' '
          << io::write_out_word(t.decode_output(a.output)) << ' ' << t.state_name(a.target) << '\n';
  return out.str();
}

inline std::string to_dot(const Fst& t, const std::string& title = "fst") {
  std::ostringstream out;
  out << "digraph " << io::dot_quote(title) << " {\n";
  io::dot_nodes(
      out, t.num_states(), [&](int s) { return t.state_name(s); }, [&](int s) { return t.is_accepting(s); },
      t.initial());
  for (std::size_t s = 0; s < t.num_states(); ++s)
    for (const auto& a : t.arcs(static_cast<int>(s)))
      out << "  n" << s << " -> n" << a.target << " [label="
          << io::dot_quote(symbol_text(t.input_alphabet(), a.input) + ":" + show(t.decode_output(a.output)))
          << "];\n";
  out << "}\n";
  return out.str();
}

}  // namespace adsa
