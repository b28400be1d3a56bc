// nfa_io.hpp
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
// Line format shared by every automaton file:
//
//   type nfa|dfa
//   alphabet a b c
//   states q0 q1
//   initial q0
//   accept q1
//   trans q0 a q1        (symbol may be "eps")
//
// Tokens are separated by whitespace. A line whose first token starts with
// '#' is a comment; '#' inside a line is an ordinary character because
// several protocol alphabets use it.

#pragma once

#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "adsa/nfa.hpp"

namespace adsa {

namespace io {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

/// Splits text into non-empty, non-comment lines of tokens.
inline std::vector<Line> lex(std::istream& in) {
  std::vector<Line> out;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::istringstream ss(raw);
    Line line{number, {}};
    std::string tok;
    while (ss >> tok) line.tokens.push_back(tok);
    if (line.tokens.empty() || line.tokens.front().front() == '#') continue;
    out.push_back(std::move(line));
  }
  return out;
}

inline std::vector<Line> lex_string(const std::string& text) {
  std::istringstream in(text);
  return lex(in);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void expect_arity(const Line& l, std::size_t min, std::size_t max = 0) {
  if (l.tokens.size() < min || (max > 0 && l.tokens.size() > max))
    throw ParseError("wrong number of fields for '" + l.tokens.front() + "'", l.number);
}

/// Reads the header lines common to all formats. Unknown keywords are passed
/// to `other`, which returns false to signal an error.
struct Header {
  std::string type;
  Alphabet alphabet;
  std::vector<std::string> states;
  std::string initial;
  std::vector<std::string> accept;
  bool has_alphabet = false;
};

inline Header read_header(const std::vector<Line>& lines, const std::function<bool(const Line&)>& other) {
  Header h;
  for (const auto& l : lines) {
    const auto& key = l.tokens.front();
    try {
      if (key == "type") {
        expect_arity(l, 2, 2);
        h.type = l.tokens[1];
      } else if (key == "alphabet") {
        expect_arity(l, 2);
        for (std::size_t i = 1; i < l.tokens.size(); ++i) h.alphabet.add(l.tokens[i]);
        h.has_alphabet = true;
      } else if (key == "states") {
        expect_arity(l, 2);
        h.states.insert(h.states.end(), l.tokens.begin() + 1, l.tokens.end());
      } else if (key == "initial") {
        expect_arity(l, 2, 2);
        if (!h.initial.empty()) throw ParseError("initial state given twice", l.number);
        h.initial = l.tokens[1];
      } else if (key == "accept") {
        h.accept.insert(h.accept.end(), l.tokens.begin() + 1, l.tokens.end());
      } else if (!other(l)) {
        throw ParseError("unknown keyword '" + key + "'", l.number);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), l.number);
    }
  }
  return h;
}

}  // namespace io

inline Nfa parse_nfa(const std::string& text) {
  auto lines = io::lex_string(text);
  std::vector<const io::Line*> trans;
  auto h = io::read_header(lines, [&](const io::Line& l) {
    if (l.tokens.front() != "trans") return false;
    io::expect_arity(l, 4, 4);
    trans.push_back(&l);
    return true;
  });
  if (!h.type.empty() && h.type != "nfa" && h.type != "dfa") throw ParseError("type must be nfa or dfa");
  if (!h.has_alphabet) throw ParseError("missing 'alphabet' line");
  if (h.states.empty()) throw ParseError("missing 'states' line");
  if (h.initial.empty()) throw ParseError("missing 'initial' line");
  Nfa a(h.alphabet);
  try {
    for (const auto& s : h.states) a.add_state(s);
    a.set_initial(a.state(h.initial));
    for (const auto& s : h.accept) a.set_accepting(a.state(s));
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  for (const auto* l : trans) {
    try {
      a.add_transition(l->tokens[1], l->tokens[2], l->tokens[3]);
    } catch (const Error& e) {
      throw ParseError(e.what(), l->number);
    }
  }
  if (h.type == "dfa" && !a.is_deterministic()) throw ParseError("automaton declared dfa is not deterministic");
  return a;
}

inline Nfa load_nfa(const std::string& path) { return parse_nfa(io::read_file(path)); }

inline std::string symbol_text(const Alphabet& alphabet, int symbol) {
  return symbol == kEps ? std::string(kEpsilonToken) : alphabet[symbol];
}

inline std::string write_nfa(const Nfa& a) {
  std::ostringstream out;
  out << "type " << (a.is_deterministic() ? "dfa" : "nfa") << '\n';
  out << "alphabet";
  for (const auto& s : a.alphabet().symbols()) out << ' ' << s;
  out << "\nstates";
  for (std::size_t s = 0; s < a.num_states(); ++s) out << ' ' << a.state_name(static_cast<int>(s));
  out << "\ninitial " << a.state_name(a.initial()) << '\n';
  auto acc = a.accepting_states();
  if (!acc.empty()) {
    out << "accept";
    for (int s : acc) out << ' ' << a.state_name(s);
    out << '\n';
  }
  for (std::size_t s = 0; s < a.num_states(); ++s)
    for (const auto& e : a.edges(static_cast<int>(s)))
      out << "trans " << a.state_name(static_cast<int>(s)) << ' ' << symbol_text(a.alphabet(), e.symbol) << ' '
          << a.state_name(e.target) << '\n';
  return out.str();
}

namespace io {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

/// Emits the common node section of a DOT graph.
inline void dot_nodes(std::ostream& out, std::size_t n, const std::function<std::string(int)>& name,
                      const std::function<bool(int)>& accepting, int initial,
                      const std::function<std::string(int)>& shape = {}) {
  out << "  rankdir=LR;\n  __start [shape=point];\n";
  for (std::size_t s = 0; s < n; ++s) {
    int i = static_cast<int>(s);
    out << "  n" << s << " [label=" << dot_quote(name(i));
    if (shape) {
      out << ", shape=" << shape(i);
      if (accepting(i)) out << ", peripheries=2";
    } else {
      out << ", shape=" << (accepting(i) ? "doublecircle" : "circle");
    }
    out << "];\n";
  }
  out << "  __start -> n" << initial << ";\n";
}

}  // namespace io

/// Graphviz rendering; parallel edges between a pair of states are merged
/// into one edge with a comma-separated label.
inline std::string to_dot(const Nfa& a, const std::string& title = "nfa") {
  std::ostringstream out;
  out << "digraph " << io::dot_quote(title) << " {\n";
  io::dot_nodes(
      out, a.num_states(), [&](int s) { return a.state_name(s); }, [&](int s) { return a.is_accepting(s); },
      a.initial());
  for (std::size_t s = 0; s < a.num_states(); ++s) {
    std::map<int, std::string> labels;
    for (const auto& e : a.edges(static_cast<int>(s))) {
      auto& l = labels[e.target];
      if (!l.empty()) l += ",";
      l += symbol_text(a.alphabet(), e.symbol);
    }
    for (const auto& [t, l] : labels) out << "  n" << s << " -> n" << t << " [label=" << io::dot_quote(l) << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace adsa
