// adsa_cli.cpp
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
// Command-line front end. Exit codes: 0 yes/success, 1 no, 2 unknown,
// 3 usage error, 4 input parse error, 5 internal error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "adsa/adsa.hpp"

namespace {

using namespace adsa;
using json = nlohmann::json;

constexpr int kExitUsage = 3;
constexpr int kExitParse = 4;
constexpr int kExitInternal = 5;

struct Options {
  std::string format = "text";
  std::string filter;
  std::string bounds;
  std::string oracle_file;
  std::uint64_t seed = 1;
};

/// Ordered key/value report printed as "key: value" lines or one JSON
/// object per line.
class Report {
 public:
  explicit Report(std::string format) : format_(std::move(format)) {}

  Report& add(const std::string& key, json value) {
    fields_.emplace_back(key, std::move(value));
    return *this;
  }

  void flush(std::ostream& out) {
    if (fields_.empty()) return;
    if (format_ == "jsonl") {
      json obj = json::object();
      for (const auto& [k, v] : fields_) obj[k] = v;
      out << obj.dump() << '\n';
    } else {
      for (const auto& [k, v] : fields_) out << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
    fields_.clear();
  }

 private:
  std::string format_;
  std::vector<std::pair<std::string, json>> fields_;
};

Word word_of(const std::vector<std::string>& args) {
  std::string all;
  for (const auto& a : args) all += a + ' ';
  return tokenize(all);
}

SearchBounds parse_bounds(const std::string& spec) {
  SearchBounds b;
  if (spec.empty()) return b;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--bounds expects key=value pairs, got '" + item + "'");
    std::string key = item.substr(0, eq);
    std::size_t value;
    try {
      value = std::stoul(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw InvalidArgument("--bounds: '" + item + "' is not a number");
    }
    if (key == "max-configs")
      b.max_configs = value;
    else if (key == "max-blocks")
      b.max_blocks = value;
    else if (key == "max-tape")
      b.max_tape = value;
    else
      throw InvalidArgument("--bounds: unknown key '" + key + "'");
  }
  b.validate();
  return b;
}

std::shared_ptr<OracleX> load_oracle_x(const std::string& path) {
  if (path.empty()) throw InvalidArgument("--oracle-file is required");
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open oracle file '" + path + "'");
  std::set<BinaryWord> members;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::stringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    if (tok == kEpsilonToken) tok.clear();
    if (!is_binary(tok)) throw ParseError("oracle members must be binary words", number);
    members.insert(tok);
  }
  return std::make_shared<OracleX>(OracleX::from_set(std::move(members)));
}

/// A named filter: either a protocol oracle or Per_k.
struct Filter {
  OraclePtr oracle;
  std::optional<int> perk;
  std::string name;
};

Filter make_filter(const Options& opt) {
  const std::string& f = opt.filter;
  if (f.empty()) throw InvalidArgument("--filter is required");
  auto number_after = [&](std::size_t prefix) {
    try {
      int k = std::stoi(f.substr(prefix));
      if (k < 1) throw InvalidArgument("");
      return k;
    } catch (const std::exception&) {
      throw InvalidArgument("filter '" + f + "' needs a positive number");
    }
  };
  if (f == "dyck") return {dyck_oracle(false), std::nullopt, f};
  if (f == "dyck-exact") return {dyck_oracle(true), std::nullopt, f};
  if (f == "set") return {set_oracle(), std::nullopt, f};
  if (f.rfind("sis:", 0) == 0) return {single_insert_set_oracle(number_after(4)), std::nullopt, f};
  if (f.rfind("per:", 0) == 0) return {nullptr, number_after(4), f};
  if (f == "protx") return {prot_x_oracle(load_oracle_x(opt.oracle_file)), std::nullopt, f};
  throw InvalidArgument("unknown filter '" + f + "' (dyck, dyck-exact, set, sis:k, per:k, protx)");
}

OraclePtr require_oracle(const Options& opt) {
  Filter f = make_filter(opt);
  if (!f.oracle) throw InvalidArgument("filter '" + f.name + "' is not a protocol language");
  return f.oracle;
}

AdsAutomaton load_ads_with(const std::string& path, const Options& opt) {
  std::optional<ProtocolAlphabet> pa;
  if (!opt.filter.empty()) pa = require_oracle(opt)->alphabet();
  return load_ads(path, pa);
}

void emit(const Nfa& a, const Options& opt) {
  if (opt.format == "dot") {
    std::cout << to_dot(a);
  } else if (opt.format == "jsonl") {
    std::cout << json{{"kind", "nfa"}, {"states", a.num_states()}, {"text", write_nfa(a)}}.dump() << '\n';
  } else {
    std::cout << write_nfa(a);
  }
}

void emit(const Fst& t, const Options& opt) {
  if (opt.format == "dot") {
    std::cout << to_dot(t);
  } else if (opt.format == "jsonl") {
    std::cout << json{{"kind", "fst"}, {"states", t.num_states()}, {"text", write_fst(t)}}.dump() << '\n';
  } else {
    std::cout << write_fst(t);
  }
}

void emit(const AdsAutomaton& m, const Options& opt) {
  if (opt.format == "dot") {
    std::cout << to_dot(m);
  } else if (opt.format == "jsonl") {
    std::cout << json{{"kind", "ads"}, {"states", m.num_states()}, {"text", write_ads(m)}}.dump() << '\n';
  } else {
    std::cout << write_ads(m);
  }
}

int verdict_report(Report& r, Verdict v) {
  r.add("verdict", answer_name(v));
  r.flush(std::cout);
  return exit_code(v);
}

int yes_no(Report& r, const std::string& key, bool value) {
  r.add(key, value ? "yes" : "no");
  r.flush(std::cout);
  return value ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Automata with auxiliary data structures: constructions, reductions and deciders"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "dot", "jsonl"}));
  app.add_option("--filter,--oracle", opt.filter, "dyck | dyck-exact | set | sis:k | per:k | protx");
  app.add_option("--bounds", opt.bounds, "max-configs=N,max-blocks=N,max-tape=N");
  app.add_option("--seed", opt.seed, "Random seed");
  app.add_option("--oracle-file", opt.oracle_file, "Members of X, one binary word per line");

  std::function<int()> action;
  std::string file1, file2;
  std::vector<std::string> words;
  auto words_opt = [&](CLI::App* c) { c->add_option("word", words, "Word as whitespace-separated tokens"); };

  // automata core
  auto* acc = app.add_subcommand("accepts", "Test whether an automaton accepts a word");
  acc->add_option("automaton", file1)->required()->check(CLI::ExistingFile);
  words_opt(acc);
  acc->callback([&] {
    action = [&] {
      Report r(opt.format);
      return yes_no(r, "accepts", accepts(load_nfa(file1), word_of(words)));
    };
  });
  auto* tr = app.add_subcommand("trim", "Keep reachable and co-reachable states");
  tr->add_option("automaton", file1)->required()->check(CLI::ExistingFile);
  tr->callback([&] {
    action = [&] {
      emit(trim(load_nfa(file1)), opt);
      return 0;
    };
  });
  auto* pr = app.add_subcommand("product", "Intersection of two automata");
  pr->add_option("left", file1)->required()->check(CLI::ExistingFile);
  pr->add_option("right", file2)->required()->check(CLI::ExistingFile);
  pr->callback([&] {
    action = [&] {
      emit(product_intersect(load_nfa(file1), load_nfa(file2)), opt);
      return 0;
    };
  });

  // transducers
  auto* fst = app.add_subcommand("fst", "Transducer operations");
  fst->require_subcommand(1);
  std::size_t cap = 8;
  auto* fa = fst->add_subcommand("apply", "Outputs of a transducer on a word");
  fa->add_option("transducer", file1)->required()->check(CLI::ExistingFile);
  words_opt(fa);
  fa->add_option("--cap", cap, "Maximal output length");
  fa->callback([&] {
    action = [&] {
      auto res = apply(load_fst(file1), word_of(words), cap);
      Report r(opt.format);
      for (const auto& o : res.outputs) r.add("output", show(o)).flush(std::cout);
      r.add("count", res.outputs.size()).add("truncated", res.truncated ? "yes" : "no").flush(std::cout);
      if (!res.outputs.empty()) return 0;
      return res.truncated ? 2 : 1;
    };
  });
  auto* fc = fst->add_subcommand("compose", "Transducer for the first then the second");
  fc->add_option("first", file1)->required()->check(CLI::ExistingFile);
  fc->add_option("second", file2)->required()->check(CLI::ExistingFile);
  fc->callback([&] {
    action = [&] {
      emit(compose(load_fst(file1), load_fst(file2)), opt);
      return 0;
    };
  });
  auto* fi = fst->add_subcommand("invert", "Inverse relation");
  fi->add_option("transducer", file1)->required()->check(CLI::ExistingFile);
  fi->callback([&] {
    action = [&] {
      emit(invert(load_fst(file1)), opt);
      return 0;
    };
  });
  auto* fim = fst->add_subcommand("image", "Automaton for t(L(a))");
  fim->add_option("transducer", file1)->required()->check(CLI::ExistingFile);
  fim->add_option("automaton", file2)->required()->check(CLI::ExistingFile);
  fim->callback([&] {
    action = [&] {
      emit(image_nfa(load_fst(file1), load_nfa(file2)), opt);
      return 0;
    };
  });
  auto* fpre = fst->add_subcommand("preimage", "Automaton for the inverse image of L(a)");
  fpre->add_option("transducer", file1)->required()->check(CLI::ExistingFile);
  fpre->add_option("automaton", file2)->required()->check(CLI::ExistingFile);
  fpre->callback([&] {
    action = [&] {
      emit(preimage_nfa(load_fst(file1), load_nfa(file2)), opt);
      return 0;
    };
  });

  // protocols
  auto* proto = app.add_subcommand("protocol", "Protocol languages");
  proto->require_subcommand(1);
  auto* pm = proto->add_subcommand("member", "Membership of a word in the filter");
  words_opt(pm);
  pm->callback([&] {
    action = [&] {
      Filter f = make_filter(opt);
      Word w = word_of(words);
      Report r(opt.format);
      r.add("filter", f.name);
      return yes_no(r, "member", f.perk ? per_k_membership(w, *f.perk) : membership(*f.oracle, w));
    };
  });
  std::string axiom = "i";
  FuzzOptions fuzz;
  auto* pf = proto->add_subcommand("fuzz", "Random check of one protocol axiom");
  pf->add_option("--axiom", axiom, "i | ii | iii | iv | v | vi");
  pf->add_option("--trials", fuzz.trials);
  pf->add_option("--max-blocks", fuzz.max_blocks);
  pf->add_option("--max-write", fuzz.max_write);
  pf->callback([&] {
    action = [&] {
      auto o = require_oracle(opt);
      fuzz.seed = opt.seed;
      auto rep = axiom_fuzz(*o, parse_axiom(axiom), fuzz);
      Report r(opt.format);
      for (const auto& v : rep.violations)
        r.add("violation", json{{"trial", v.trial}, {"detail", v.detail}}).flush(std::cout);
      r.add("oracle", o->name()).add("axiom", axiom_name(rep.axiom)).add("trials", rep.trials);
      r.add("applicable", rep.applicable ? "yes" : "no");
      r.add("violations", rep.violations.size());
      r.flush(std::cout);
      if (opt.format == "text") std::cout << rep.violations.size() << " violations\n";
      return rep.violations.empty() ? 0 : 1;
    };
  });

  // ADS automata
  auto* ads = app.add_subcommand("ads", "Automata with auxiliary data structures");
  ads->require_subcommand(1);
  auto* as = ads->add_subcommand("simulate", "Run an automaton against the filter storage");
  as->add_option("automaton", file1)->required()->check(CLI::ExistingFile);
  words_opt(as);
  as->callback([&] {
    action = [&] {
      auto o = require_oracle(opt);
      auto res = simulate(load_ads_with(file1, opt), word_of(words), *o, parse_bounds(opt.bounds));
      Report r(opt.format);
      r.add("configs", res.configs);
      if (res.protocol) r.add("protocol", show_protocol(*res.protocol));
      return verdict_report(r, res.verdict);
    };
  });
  auto* ae = ads->add_subcommand("extract", "Extractor transducer of an automaton");
  ae->add_option("automaton", file1)->required()->check(CLI::ExistingFile);
  ae->callback([&] {
    action = [&] {
      emit(extractor(load_ads_with(file1, opt)), opt);
      return 0;
    };
  });
  auto* amp = ads->add_subcommand("mprot", "Automaton accepting exactly the correct protocols");
  amp->callback([&] {
    action = [&] {
      emit(m_prot(require_oracle(opt)->alphabet()), opt);
      return 0;
    };
  });
  auto* arc = ads->add_subcommand("recode", "Equivalent automaton over a two-letter write alphabet");
  arc->add_option("automaton", file1)->required()->check(CLI::ExistingFile);
  arc->callback([&] {
    action = [&] {
      emit(two_letter_recode(load_ads_with(file1, opt)).automaton, opt);
      return 0;
    };
  });

  // regular realizability
  auto* nrr = app.add_subcommand("nrr", "Regular realizability");
  nrr->require_subcommand(1);
  auto* nd = nrr->add_subcommand("decide", "Does L(a) meet the filter?");
  nd->add_option("automaton", file1)->required()->check(CLI::ExistingFile);
  nd->callback([&] {
    action = [&] {
      Nfa a = load_nfa(file1);
      Filter f = make_filter(opt);
      SearchBounds b = parse_bounds(opt.bounds);
      NrrAnswer ans;
      if (f.perk)
        ans = nreg_perk(a, *f.perk, b);
      else if (f.name == "dyck" || f.name == "dyck-exact")
        ans = nreg_dyck(a, f.name == "dyck-exact");
      else
        ans = nreg_generic(a, *f.oracle, b);
      Report r(opt.format);
      r.add("filter", f.name).add("configs", ans.configs);
      if (ans.witness) r.add("witness", show(*ans.witness));
      return verdict_report(r, ans.verdict);
    };
  });
  auto* nfrom = nrr->add_subcommand("reduce-from-ads", "Non-emptiness of an automaton as an NRR instance");
  nfrom->add_option("automaton", file1)->required()->check(CLI::ExistingFile);
  nfrom->callback([&] {
    action = [&] {
      emit(nonemptiness_to_nrr(load_ads_with(file1, opt)), opt);
      return 0;
    };
  });
  auto* nto = nrr->add_subcommand("reduce-to-ads", "NRR instance as a non-emptiness instance");
  nto->add_option("automaton", file1)->required()->check(CLI::ExistingFile);
  nto->callback([&] {
    action = [&] {
      emit(nrr_to_nonemptiness(load_nfa(file1), require_oracle(opt)->alphabet()), opt);
      return 0;
    };
  });
  auto* nmem = nrr->add_subcommand("member-to-reg", "Membership for a deterministic automaton as an RR instance");
  nmem->add_option("automaton", file1)->required()->check(CLI::ExistingFile);
  words_opt(nmem);
  nmem->callback([&] {
    action = [&] {
      emit(membership_to_reg(load_ads_with(file1, opt), word_of(words)), opt);
      return 0;
    };
  });
  auto* nft = nrr->add_subcommand("filter-transfer", "Instance for F2 from an instance for t(F2)");
  nft->add_option("automaton", file1)->required()->check(CLI::ExistingFile);
  nft->add_option("transducer", file2)->required()->check(CLI::ExistingFile);
  nft->callback([&] {
    action = [&] {
      emit(filter_transfer(load_nfa(file1), load_fst(file2)), opt);
      return 0;
    };
  });

  // log-space machines
  auto* tm = app.add_subcommand("logtm", "Log-space machines with advice or query tapes");
  tm->require_subcommand(1);
  std::string advice;
  auto* tr_run = tm->add_subcommand("run", "Run a machine on an input");
  tr_run->add_option("machine", file1)->required()->check(CLI::ExistingFile);
  words_opt(tr_run);
  tr_run->add_option("--advice", advice, "Advice word as whitespace-separated tokens");
  tr_run->callback([&] {
    action = [&] {
      LogTm m = load_logtm(file1);
      Report r(opt.format);
      if (m.uses_queries()) {
        auto o = require_oracle(opt);
        return verdict_report(r, run_with_protocol(m, word_of(words), *o, parse_bounds(opt.bounds)));
      }
      return verdict_report(r, run_with_advice(m, word_of(words), tokenize(advice)));
    };
  });
  auto* tsn = tm->add_subcommand("surface-nfa", "Automaton over surface configurations");
  tsn->add_option("machine", file1)->required()->check(CLI::ExistingFile);
  words_opt(tsn);
  tsn->callback([&] {
    action = [&] {
      emit(surface_config_nfa(load_logtm(file1), word_of(words)), opt);
      return 0;
    };
  });
  std::string lambda(kLambdaToken);
  auto* tle = tm->add_subcommand("lambda-elim", "Remove trailing padding from a deterministic automaton");
  tle->add_option("automaton", file1)->required()->check(CLI::ExistingFile);
  tle->add_option("--lambda", lambda, "Padding symbol");
  tle->callback([&] {
    action = [&] {
      emit(lambda_eliminate(load_nfa(file1), lambda), opt);
      return 0;
    };
  });

  // universality
  auto* uni = app.add_subcommand("universality", "Protocol language equivalent to an oracle X");
  uni->require_subcommand(1);
  auto* ud = uni->add_subcommand("decide", "Does L(a) meet the protocol language of X?");
  ud->add_option("automaton", file1)->required()->check(CLI::ExistingFile);
  ud->callback([&] {
    action = [&] {
      auto x = load_oracle_x(opt.oracle_file);
      auto ans = universality_decide(load_nfa(file1), *x);
      Report r(opt.format);
      r.add("oracle-calls", ans.oracle_calls);
      if (ans.pattern) r.add("pattern", show(*ans.pattern));
      return verdict_report(r, ans.nonempty ? Verdict::Accept : Verdict::Reject);
    };
  });
  std::string binary;
  auto* ul = uni->add_subcommand("lmember", "Membership in the language L");
  ul->add_option("word", binary, "Binary word (eps for the empty word)")->required();
  ul->callback([&] {
    action = [&] {
      auto x = load_oracle_x(opt.oracle_file);
      std::string w = binary == kEpsilonToken ? "" : binary;
      Report r(opt.format);
      bool in = l_membership(w, *x);
      r.add("oracle-calls", x->calls());
      return yes_no(r, "member", in);
    };
  });
  std::vector<std::string> triple;
  auto* uw = uni->add_subcommand("wparams", "Exponents of the two W words of a triple");
  uw->add_option("triple", triple, "Three non-empty binary words")->required()->expected(3);
  uw->callback([&] {
    action = [&] {
      auto e = w_params(triple[0], triple[1], triple[2]);
      Report r(opt.format);
      r.add("r", e.r).add("q", e.q).add("r-length", e.r_length()).add("q-length", e.q_length());
      r.flush(std::cout);
      return 0;
    };
  });
  auto* uf = uni->add_subcommand("forward", "The protocol sq(x) # +");
  uf->add_option("x", binary, "Binary word (eps for the empty word)")->required();
  uf->callback([&] {
    action = [&] {
      std::string x = binary == kEpsilonToken ? "" : binary;
      if (opt.format == "jsonl")
        Report(opt.format).add("protocol", sq(x) + " # +").flush(std::cout);
      else
        std::cout << sq(x) << " # +\n";
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return action();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return exit_code(Verdict::Unknown);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
