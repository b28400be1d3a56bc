// logtm.hpp
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
// Turing machines with a read-only input tape framed by lm/rm, a work tape
// of fixed size, and either a one-way advice tape or a write-only query tape
// attached to a protocol storage.
//
// Text format:
//
//   tmstate <id> [init] [accept] [reject]
//   input <symbols>
//   work <symbols>                 (the blank "_" is always present)
//   advice <symbols>               (the padding symbol "lam" is implicit)
//   worksize N
//   rule <q> <in> <work> <adv|-> -> <q'> <write> <L|R|S> <L|R|S> <consume|hold|emit:TOK>
//   query <q> <qsym>
//   onresp <q> <rsym> <q'>
//
// "*" in the in, work and adv fields matches any symbol; "*" as the write
// field keeps the cell. A rule that names an advice symbol consumes it, and
// a rule with "-" does not touch the advice tape.

#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "adsa/ads_automaton.hpp"
#include "adsa/nfa.hpp"
#include "adsa/nfa_io.hpp"
#include "adsa/protocol.hpp"
#include "adsa/verdict.hpp"

namespace adsa {

inline constexpr std::string_view kLambdaToken = "lam";
inline constexpr std::string_view kBlankToken = "_";
inline constexpr std::string_view kAnyToken = "*";

struct TmRule {
  enum class Action { Hold, Consume, Emit };
  int from = -1;
  std::string in = "*";
  std::string work = "*";
  std::string adv = "-";
  int to = -1;
  std::string write = "*";
  int in_move = 0;  // -1, 0, +1
  int work_move = 0;
  Action action = Action::Hold;
  std::string emit;  // token appended to the query tape for Emit
};

struct TmQuery {
  std::string query;
  std::vector<std::pair<std::string, int>> on;  // response -> next state
};

class LogTm {
 public:
  LogTm() { work_.add(std::string(kBlankToken)); }

  int add_state(const std::string& name) {
    if (index_.contains(name)) throw InvalidArgument("duplicate state '" + name + "'");
    int id = static_cast<int>(names_.size());
    names_.push_back(name);
    index_.emplace(name, id);
    accept_.push_back(false);
    reject_.push_back(false);
    rules_.emplace_back();
    if (initial_ < 0) initial_ = id;
    return id;
  }
  int state(std::string_view name) const {
    if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
    throw InvalidArgument("unknown state '" + std::string(name) + "'");
  }
  std::size_t num_states() const noexcept { return names_.size(); }
  const std::string& state_name(int s) const { return names_.at(static_cast<std::size_t>(s)); }

  void set_initial(int s) { initial_ = s; }
  int initial() const {
    if (initial_ < 0) throw InvalidArgument("machine has no states");
    return initial_;
  }
  void set_accepting(int s, bool v = true) { accept_.at(static_cast<std::size_t>(s)) = v; }
  void set_rejecting(int s, bool v = true) { reject_.at(static_cast<std::size_t>(s)) = v; }
  bool is_accepting(int s) const { return accept_.at(static_cast<std::size_t>(s)); }
  bool is_rejecting(int s) const { return reject_.at(static_cast<std::size_t>(s)); }

  Alphabet& input_alphabet() { return input_; }
  const Alphabet& input_alphabet() const { return input_; }
  Alphabet& work_alphabet() { return work_; }
  const Alphabet& work_alphabet() const { return work_; }
  Alphabet& advice_alphabet() { return advice_; }
  const Alphabet& advice_alphabet() const { return advice_; }

  std::size_t work_size() const noexcept { return work_size_; }
  void set_work_size(std::size_t n) {
    if (n == 0) throw InvalidArgument("worksize must be positive");
    work_size_ = n;
  }

  void add_rule(TmRule r) {
    if (r.from < 0 || static_cast<std::size_t>(r.from) >= names_.size() || r.to < 0 ||
        static_cast<std::size_t>(r.to) >= names_.size())
      throw InvalidArgument("rule references an unknown state");
    auto in_ok = [&](const std::string& s) {
      return s == kAnyToken || s == kLeftEndToken || s == kRightEndToken || input_.contains(s);
    };
    if (!in_ok(r.in)) throw InvalidArgument("rule reads unknown input symbol '" + r.in + "'");
    if (r.work != kAnyToken && !work_.contains(r.work)) throw InvalidArgument("rule reads unknown work symbol '" + r.work + "'");
    if (r.write != kAnyToken && !work_.contains(r.write))
      throw InvalidArgument("rule writes unknown work symbol '" + r.write + "'");
    if (r.adv != "-" && r.adv != kAnyToken && r.adv != kLambdaToken && !advice_.contains(r.adv))
      throw InvalidArgument("rule reads unknown advice symbol '" + r.adv + "'");
    if ((r.adv != "-") != (r.action == TmRule::Action::Consume))
      throw InvalidArgument("a rule consumes advice exactly when it names an advice symbol");
    if (queries_.contains(r.from)) throw InvalidArgument("query state '" + state_name(r.from) + "' cannot have rules");
    rules_[static_cast<std::size_t>(r.from)].push_back(std::move(r));
  }

  void add_query(int s, const std::string& q) {
    if (!rules_.at(static_cast<std::size_t>(s)).empty()) throw InvalidArgument("query state cannot have rules");
    queries_[s].query = q;
  }
  void add_on_response(int s, const std::string& r, int next) {
    auto it = queries_.find(s);
    if (it == queries_.end()) throw InvalidArgument("onresp for non-query state '" + state_name(s) + "'");
    it->second.on.emplace_back(r, next);
  }

  const std::vector<TmRule>& rules(int s) const { return rules_.at(static_cast<std::size_t>(s)); }
  const TmQuery* query(int s) const {
    auto it = queries_.find(s);
    return it == queries_.end() ? nullptr : &it->second;
  }
  bool uses_queries() const { return !queries_.empty(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<bool> accept_, reject_;
  std::vector<std::vector<TmRule>> rules_;
  std::map<int, TmQuery> queries_;
  Alphabet input_, work_, advice_;
  std::size_t work_size_ = 1;
  int initial_ = -1;
};

/// State, work memory and input head: everything but the advice position.
struct SurfaceConfig {
  int q;
  std::vector<int> mem;  // work-tape cells as work-alphabet indices
  int whead;
  int i;
  friend bool operator==(const SurfaceConfig&, const SurfaceConfig&) = default;
  std::string key() const {
    std::string k = std::to_string(q) + '|' + std::to_string(whead) + '|' + std::to_string(i) + '|';
    for (int c : mem) k += std::to_string(c) + ',';
    return k;
  }
};

namespace detail {

inline std::vector<std::string> framed_tm_input(const LogTm& tm, const Word& x) {
  std::vector<std::string> tape{std::string(kLeftEndToken)};
  for (const auto& s : x) {
    if (!tm.input_alphabet().contains(s)) throw InvalidArgument("input symbol '" + s + "' not in the machine alphabet");
    tape.push_back(s);
  }
  tape.emplace_back(kRightEndToken);
  return tape;
}

/// Applies the parts of r shared by every tape discipline. nullopt when the
/// rule does not match or a head would leave its tape.
inline std::optional<SurfaceConfig> apply_rule(const LogTm& tm, const std::vector<std::string>& input,
                                               const SurfaceConfig& c, const TmRule& r) {
  if (r.in != kAnyToken && input[static_cast<std::size_t>(c.i)] != r.in) return std::nullopt;
  const std::string& cell = tm.work_alphabet()[c.mem[static_cast<std::size_t>(c.whead)]];
  if (r.work != kAnyToken && cell != r.work) return std::nullopt;
  SurfaceConfig n = c;
  n.q = r.to;
  if (r.write != kAnyToken) n.mem[static_cast<std::size_t>(c.whead)] = tm.work_alphabet().index_of(r.write);
  n.i += r.in_move;
  n.whead += r.work_move;
  if (n.i < 0 || n.i >= static_cast<int>(input.size())) return std::nullopt;
  if (n.whead < 0 || n.whead >= static_cast<int>(tm.work_size())) return std::nullopt;
  return n;
}

inline SurfaceConfig initial_surface(const LogTm& tm) {
  return {tm.initial(), std::vector<int>(tm.work_size(), 0), 0, 0};
}

inline bool advice_matches(const TmRule& r, const std::string& sym) {
  return r.adv == kAnyToken || r.adv == sym;
}

}  // namespace detail

/// Runs tm on x with advice y followed by infinitely many "lam". Accepts iff
/// some accepting state is reached after all of y was consumed.
inline Verdict run_with_advice(const LogTm& tm, const Word& x, const Word& y, std::size_t step_cap = 1'000'000) {
  for (const auto& s : y)
    if (!tm.advice_alphabet().contains(s)) throw InvalidArgument("advice symbol '" + s + "' not declared");
  auto input = detail::framed_tm_input(tm, x);
  std::unordered_set<std::string> seen;
  std::deque<std::pair<SurfaceConfig, std::size_t>> queue;
  auto push = [&](SurfaceConfig c, std::size_t j) -> bool {
    if (!seen.insert(c.key() + '#' + std::to_string(j)).second) return true;
    if (seen.size() > step_cap) return false;
    queue.emplace_back(std::move(c), j);
    return true;
  };
  push(detail::initial_surface(tm), 0);
  while (!queue.empty()) {
    auto [c, j] = queue.front();
    queue.pop_front();
    if (tm.is_accepting(c.q) && j >= y.size()) return Verdict::Accept;
    if (tm.is_accepting(c.q) || tm.is_rejecting(c.q)) continue;
    const std::string adv = j < y.size() ? y[j] : std::string(kLambdaToken);
    for (const auto& r : tm.rules(c.q)) {
      std::size_t nj = j;
      if (r.action == TmRule::Action::Consume) {
        if (!detail::advice_matches(r, adv)) continue;
        nj = std::min(j + 1, y.size());
      } else if (r.action == TmRule::Action::Emit) {
        continue;
      }
      auto n = detail::apply_rule(tm, input, c, r);
      if (n && !push(std::move(*n), nj)) return Verdict::Unknown;
    }
  }
  return Verdict::Reject;
}

inline constexpr std::size_t kDefaultSurfaceCap = 1'000'000;

/// NFA over advice symbols plus "lam" whose states are the surface
/// configurations of tm on x. Steps that consume advice are labelled with
/// the symbol read, other steps are epsilon moves.
inline Nfa surface_config_nfa(const LogTm& tm, const Word& x, std::size_t cap = kDefaultSurfaceCap) {
  auto input = detail::framed_tm_input(tm, x);
  Alphabet alpha = tm.advice_alphabet();
  alpha.add(std::string(kLambdaToken));
  Nfa out(alpha);
  std::unordered_map<std::string, int> ids;
  std::vector<SurfaceConfig> configs;
  auto get = [&](const SurfaceConfig& c) {
    auto k = c.key();
    if (auto it = ids.find(k); it != ids.end()) return it->second;
    if (configs.size() >= cap) throw ResourceLimit("surface_config_nfa: more than " + std::to_string(cap) + " states");
    std::string mem;
    for (int s : c.mem) mem += tm.work_alphabet()[s];
    int id = out.add_state("(" + tm.state_name(c.q) + "," + mem + "," + std::to_string(c.whead) + "," +
                           std::to_string(c.i) + ")");
    if (tm.is_accepting(c.q)) out.set_accepting(id);
    ids.emplace(std::move(k), id);
    configs.push_back(c);
    return id;
  };
  get(detail::initial_surface(tm));
  for (std::size_t next = 0; next < configs.size(); ++next) {
    const SurfaceConfig c = configs[next];
    int src = static_cast<int>(next);
    if (tm.is_accepting(c.q) || tm.is_rejecting(c.q)) continue;
    for (const auto& r : tm.rules(c.q)) {
      if (r.action == TmRule::Action::Emit) continue;
      auto n = detail::apply_rule(tm, input, c, r);
      if (!n) continue;
      int dst = get(*n);
      if (r.action == TmRule::Action::Hold) {
        out.add_transition(src, kEps, dst);
      } else if (r.adv == kAnyToken) {
        for (int a = 0; a < static_cast<int>(alpha.size()); ++a) out.add_transition(src, a, dst);
      } else {
        out.add_transition(src, alpha.index_of(r.adv), dst);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Removing trailing padding.

/// A'' of a deterministic automaton: states (q, 0) before any lambda and
/// (q, 1) after one; once flagged only lambda moves remain. Accepts exactly
/// the words of L(a) of the form y lambda^k with y lambda-free.
inline Nfa lambda_flagged(const Nfa& a, const Symbol& lambda) {
  if (!a.is_deterministic()) throw InvalidArgument("lambda_eliminate: automaton is not deterministic");
  auto lam = a.alphabet().find(lambda);
  if (!lam) throw InvalidArgument("lambda_eliminate: '" + lambda + "' is not in the alphabet");
  Nfa out(a.alphabet());
  const int n = static_cast<int>(a.num_states());
  for (int f = 0; f < 2; ++f)
    for (int q = 0; q < n; ++q) {
      int id = out.add_state("(" + a.state_name(q) + "," + std::to_string(f) + ")");
      if (a.is_accepting(q)) out.set_accepting(id);
    }
  out.set_initial(a.initial());
  for (int q = 0; q < n; ++q)
    for (const auto& e : a.edges(q)) {
      if (e.symbol == *lam) {
        out.add_transition(q, e.symbol, n + e.target);
        out.add_transition(n + q, e.symbol, n + e.target);
      } else {
        out.add_transition(q, e.symbol, e.target);
      }
    }
  return out;
}

/// Deterministic automaton over the alphabet without lambda accepting
/// { y : y lambda^k in L(a) for some k >= 0 }.
inline Nfa lambda_eliminate(const Nfa& a, const Symbol& lambda) {
  Nfa flagged = lambda_flagged(a, lambda);
  const int n = static_cast<int>(a.num_states());
  Alphabet rest;
  for (const auto& s : a.alphabet().symbols())
    if (s != lambda) rest.add(s);
  Nfa out(rest);
  for (int q = 0; q < n; ++q) out.add_state(a.state_name(q));
  out.set_initial(a.initial());
  // q accepts when a lambda-only path reaches an accepting state. Flagged
  // copies carry only lambda moves, so it is enough to enter them.
  for (int q = 0; q < n; ++q) {
    StateSet entry;
    for (const auto& e : flagged.edges(q))
      if (e.target >= n) entry.push_back(e.target);
    bool acc = a.is_accepting(q);
    if (!acc && !entry.empty()) {
      auto reach = reachable_from(flagged, normalize(entry));
      for (int t = n; t < 2 * n && !acc; ++t) acc = reach[static_cast<std::size_t>(t)] && flagged.is_accepting(t);
    }
    if (acc) out.set_accepting(q);
    for (const auto& e : a.edges(q))
      if (a.alphabet()[e.symbol] != lambda) out.add_transition(q, rest.index_of(a.alphabet()[e.symbol]), e.target);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Query-tape machines.

/// Search over (surface configuration, query tape, storage state).
/// Emit rules append to the query tape; query states send the tape with
/// their query symbol, clear it and branch on the response.
inline Verdict run_with_protocol(const LogTm& tm, const Word& x, const ProtocolOracle& o, const SearchBounds& bounds = {}) {
  bounds.validate();
  auto input = detail::framed_tm_input(tm, x);
  struct Config {
    SurfaceConfig s;
    Word tape;
    OracleState storage;
    std::size_t blocks;
  };
  std::unordered_set<std::string> seen;
  std::deque<Config> queue;
  bool hit = false;
  auto push = [&](Config c) {
    if (c.tape.size() > bounds.max_tape || c.blocks > bounds.max_blocks) {
      hit = true;
      return;
    }
    std::string k = c.s.key() + '|' + join(c.tape, ",") + '|' + o.canonical_key(c.storage);
    if (seen.contains(k)) return;
    if (seen.size() >= bounds.max_configs) {
      hit = true;
      return;
    }
    seen.insert(std::move(k));
    queue.push_back(std::move(c));
  };
  push({detail::initial_surface(tm), {}, o.initial_state(), 0});
  while (!queue.empty()) {
    Config c = std::move(queue.front());
    queue.pop_front();
    int q = c.s.q;
    if (tm.is_accepting(q) && o.final_ok(c.storage)) return Verdict::Accept;
    if (tm.is_accepting(q) || tm.is_rejecting(q)) continue;
    if (const TmQuery* tq = tm.query(q)) {
      auto r = o.respond(c.storage, c.tape, tq->query);
      if (!r) continue;
      for (const auto& [resp, next] : tq->on)
        if (resp == r->symbol) {
          SurfaceConfig s = c.s;
          s.q = next;
          push({std::move(s), {}, r->next, c.blocks + 1});
        }
      continue;
    }
    for (const auto& rule : tm.rules(q)) {
      if (rule.action == TmRule::Action::Consume) continue;
      auto n = detail::apply_rule(tm, input, c.s, rule);
      if (!n) continue;
      Word tape = c.tape;
      if (rule.action == TmRule::Action::Emit) tape.push_back(rule.emit);
      push({std::move(*n), std::move(tape), c.storage, c.blocks});
    }
  }
  return hit ? Verdict::Unknown : Verdict::Reject;
}

// ---------------------------------------------------------------------------
// Text format

inline LogTm parse_logtm(const std::string& text) {
  auto lines = io::lex_string(text);
  LogTm tm;
  auto move_of = [](const std::string& m, int line) {
    if (m == "L") return -1;
    if (m == "R") return 1;
    if (m == "S") return 0;
    throw ParseError("head move must be L, R or S", line);
  };
  // Declarations first so rules may appear in any order.
  for (const auto& l : lines) {
    const auto& key = l.tokens.front();
    try {
      if (key == "tmstate") {
        io::expect_arity(l, 2);
        int s = tm.add_state(l.tokens[1]);
        for (std::size_t i = 2; i < l.tokens.size(); ++i) {
          const auto& f = l.tokens[i];
          if (f == "init") {
            tm.set_initial(s);
          } else if (f == "accept") {
            tm.set_accepting(s);
          } else if (f == "reject") {
            tm.set_rejecting(s);
          } else {
            throw ParseError("unknown state flag '" + f + "'", l.number);
          }
        }
      } else if (key == "input") {
        for (std::size_t i = 1; i < l.tokens.size(); ++i) tm.input_alphabet().add(l.tokens[i]);
      } else if (key == "work") {
        for (std::size_t i = 1; i < l.tokens.size(); ++i) tm.work_alphabet().add(l.tokens[i]);
      } else if (key == "advice") {
        for (std::size_t i = 1; i < l.tokens.size(); ++i) {
          if (l.tokens[i] == kLambdaToken) throw ParseError("'lam' is reserved for advice padding", l.number);
          tm.advice_alphabet().add(l.tokens[i]);
        }
      } else if (key == "worksize") {
        io::expect_arity(l, 2, 2);
        tm.set_work_size(static_cast<std::size_t>(std::stoul(l.tokens[1])));
      } else if (key != "rule" && key != "query" && key != "onresp") {
        throw ParseError("unknown keyword '" + key + "'", l.number);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(e.what(), l.number);
    }
  }
  if (tm.num_states() == 0) throw ParseError("no 'tmstate' lines");
  for (const auto& l : lines) {
    const auto& key = l.tokens.front();
    try {
      if (key == "query") {
        io::expect_arity(l, 3, 3);
        tm.add_query(tm.state(l.tokens[1]), l.tokens[2]);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), l.number);
    }
  }
  for (const auto& l : lines) {
    const auto& key = l.tokens.front();
    try {
      if (key == "rule") {
        io::expect_arity(l, 11, 11);
        if (l.tokens[5] != "->") throw ParseError("expected '->' in rule", l.number);
        TmRule r;
        r.from = tm.state(l.tokens[1]);
        r.in = l.tokens[2];
        r.work = l.tokens[3];
        r.adv = l.tokens[4];
        r.to = tm.state(l.tokens[6]);
        r.write = l.tokens[7];
        r.in_move = move_of(l.tokens[8], l.number);
        r.work_move = move_of(l.tokens[9], l.number);
        const auto& act = l.tokens[10];
        if (act == "consume") {
          r.action = TmRule::Action::Consume;
        } else if (act == "hold") {
          r.action = TmRule::Action::Hold;
        } else if (act.rfind("emit:", 0) == 0 && act.size() > 5) {
          r.action = TmRule::Action::Emit;
          r.emit = act.substr(5);
        } else {
          throw ParseError("action must be consume, hold or emit:TOKEN", l.number);
        }
        tm.add_rule(std::move(r));
      } else if (key == "onresp") {
        io::expect_arity(l, 4, 4);
        tm.add_on_response(tm.state(l.tokens[1]), l.tokens[2], tm.state(l.tokens[3]));
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), l.number);
    }
  }
  return tm;
}

inline LogTm load_logtm(const std::string& path) { return parse_logtm(io::read_file(path)); }

}  // namespace adsa
