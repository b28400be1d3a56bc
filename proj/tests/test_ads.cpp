// test_ads.cpp
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

#include <gtest/gtest.h>

#include "support/brute_force.hpp"
#include "support/random_automata.hpp"

using namespace adsa;
using adsa_test::brute_ads_accepts;

namespace {

const Alphabet kAB{"a", "b"};
const SearchBounds kWide{200000, 64, 64};

Verdict run(const AdsAutomaton& m, const std::string& w, const OraclePtr& o) {
  return simulate(m, tokenize(w), o).verdict;
}

/// Over the storage-free ProtX protocol: reads "a", asks whether "0" is in L
/// (it is, being of odd length) and accepts on "+".
AdsAutomaton one_block() {
  ProtXOracle o(std::make_shared<OracleX>(OracleX::from_set({})));
  AdsAutomaton m(Alphabet{"a"}, o.alphabet());
  m.add_state("w", StateKind::Write);
  m.add_state("q", StateKind::Query);
  m.add_state("f", StateKind::Write);
  m.add_write_move("w", "a", {"0"}, "q");
  m.add_query_move("q", "#", "+", "f");
  m.set_accepting(2);
  return m;
}

OraclePtr protx() { return prot_x_oracle(std::make_shared<OracleX>(OracleX::from_set({}))); }

AdsAutomaton set_member_sample() { return load_ads(std::string(ADSA_SAMPLES_DIR) + "/set_member.ads"); }

bool extractor_says(const AdsAutomaton& m, const Word& w, const ProtocolOracle& o, std::size_t cap) {
  for (const auto& p : apply(extractor(m), w, cap).outputs)
    if (membership(o, p)) return true;
  return false;
}

bool accepts_then_moves_silently(const AdsAutomaton& m) {
  for (int f : m.accepting_states())
    for (const auto& wm : m.write_moves(f))
      if (wm.input == kEps) return true;
  return false;
}

}  // namespace

TEST(Simulate, MProtExamples) {
  auto set = set_oracle();
  AdsAutomaton m = m_prot(set->alphabet());
  EXPECT_EQ(run(m, "a #ins # a #test +#", set), Verdict::Accept);
  EXPECT_EQ(run(m, "a #test +#", set), Verdict::Reject);
  EXPECT_EQ(run(m, "", set), Verdict::Accept);
  auto dyck = dyck_oracle();
  EXPECT_EQ(run(m_prot(dyck->alphabet()), "push( ( pop )", dyck), Verdict::Accept);
  EXPECT_EQ(run(m_prot(dyck->alphabet()), "pop )", dyck), Verdict::Reject);
  EXPECT_TRUE(is_deterministic(m));
}

TEST(Simulate, MProtMatchesMembership) {
  for (const auto& o : {set_oracle(), single_insert_set_oracle(2), dyck_oracle(true)}) {
    AdsAutomaton m = m_prot(o->alphabet());
    std::mt19937_64 rng(21);
    const auto& flat = o->alphabet().flattened();
    for (std::size_t t = 0; t < 200; ++t) {
      auto r = trial_rng(7, t);
      Word w = flatten(random_member(*o, r, 6, 2));
      if (t % 2 == 1 && !w.empty())  // corrupt one token
        w[std::uniform_int_distribution<std::size_t>(0, w.size() - 1)(rng)] =
            flat[std::uniform_int_distribution<int>(0, static_cast<int>(flat.size()) - 1)(rng)];
      Verdict v = simulate(m, w, o).verdict;
      EXPECT_EQ(v == Verdict::Accept, membership(*o, w)) << o->name() << ": " << show(w);
      EXPECT_NE(v, Verdict::Unknown);
    }
  }
}

TEST(Simulate, WitnessProtocolReplays) {
  auto set = set_oracle();
  auto res = simulate(set_member_sample(), tokenize("a b $ a b"), set);
  ASSERT_EQ(res.verdict, Verdict::Accept);
  ASSERT_TRUE(res.protocol);
  EXPECT_EQ(show_protocol(*res.protocol), "a b #ins # a b #test +#");
  EXPECT_TRUE(membership(*set, *res.protocol));
  EXPECT_EQ(run(set_member_sample(), "a b $ a", set), Verdict::Reject);
  EXPECT_EQ(run(set_member_sample(), "$", set), Verdict::Accept);
}

TEST(Simulate, UnknownOnlyWhenBoundHit) {
  // Writes forever on epsilon moves: no bound is enough.
  auto set = set_oracle();
  AdsAutomaton m(kAB, set->alphabet());
  m.add_state("w", StateKind::Write);
  m.add_write_move("w", "eps", {"a"}, "w");
  EXPECT_EQ(simulate(m, {}, set).verdict, Verdict::Unknown);
  EXPECT_THROW(simulate(m, {}, set, SearchBounds{0, 1, 1}), InvalidArgument);
}

TEST(Simulate, MatchesRunEnumeration) {
  adsa_test::Rng rng(31);
  auto set = set_oracle();
  for (int i = 0; i < 150; ++i) {
    auto m = adsa_test::random_ads(rng, kAB, set->alphabet(), {4, 1, false});
    for (const auto& w : adsa_test::all_words(kAB, 4)) {
      Verdict v = simulate(m, w, set).verdict;
      ASSERT_NE(v, Verdict::Unknown);
      EXPECT_EQ(v == Verdict::Accept, brute_ads_accepts(m, w, *set)) << write_ads(m) << show(w);
    }
  }
}

TEST(Extractor, Examples) {
  auto set = set_oracle();
  AdsAutomaton m = m_prot(set->alphabet());
  Word p = tokenize("a #ins #");
  EXPECT_TRUE(apply(extractor(m), p, 10).outputs.count(p));

  AdsAutomaton plain(kAB, set->alphabet());
  plain.add_state("s", StateKind::Write);
  plain.set_accepting(0);
  plain.add_write_move("s", "a", {"b", "b"}, "s");
  plain.add_write_move("s", "b", {}, "s");
  Fst t = extractor(plain);
  EXPECT_EQ(apply(t, tokenize("a b a"), 10).outputs, (std::set<Word>{tokenize("b b b b")}));
}

TEST(Extractor, MatchesSimulation) {
  adsa_test::Rng rng(32);
  auto set = set_oracle();
  for (int i = 0; i < 40; ++i) {
    auto m = adsa_test::random_ads(rng, kAB, set->alphabet(), {4, 1, false});
    for (const auto& w : adsa_test::all_words(kAB, 3))
      EXPECT_EQ(simulate(m, w, set).verdict == Verdict::Accept, extractor_says(m, w, *set, 30));
  }
  AdsAutomaton sample = set_member_sample();
  for (const auto& w : adsa_test::all_words(sample.input_alphabet(), 4))
    EXPECT_EQ(simulate(sample, w, set).verdict == Verdict::Accept, extractor_says(sample, w, *set, 30)) << show(w);
}

TEST(ComposeWithFst, Examples) {
  auto set = set_oracle();
  AdsAutomaton m = m_prot(set->alphabet());
  Fst t(Alphabet{"x"}, set->alphabet().flattened());
  t.add_state("s");
  t.set_accepting(0);
  t.add_arc("s", "x", tokenize("a #ins #"), "s");
  AdsAutomaton c = compose_with_fst(m, t);
  EXPECT_EQ(run(c, "x", set), Verdict::Accept);
  EXPECT_EQ(run(c, "x x", set), Verdict::Accept);
  EXPECT_EQ(run(c, "", set), Verdict::Accept);

  Fst dead(Alphabet{"x"}, set->alphabet().flattened());
  dead.add_state("s");
  AdsAutomaton none = compose_with_fst(m, dead);
  for (const char* w : {"", "x", "x x"}) EXPECT_EQ(run(none, w, set), Verdict::Reject);
  Fst other(Alphabet{"x"}, Alphabet{"zz"});
  other.add_state("s");
  EXPECT_THROW(compose_with_fst(m, other), InvalidArgument);
}

TEST(ComposeWithFst, IdentityRestrictsLanguage) {
  auto set = set_oracle();
  AdsAutomaton sample = set_member_sample();
  Nfa filter = from_words(sample.input_alphabet(), {tokenize("a $ a"), tokenize("a $ b"), tokenize("b b $ b b")});
  AdsAutomaton c = compose_with_fst(sample, id_on(filter));
  for (const auto& w : adsa_test::all_words(sample.input_alphabet(), 5)) {
    bool expect = accepts(filter, w) && simulate(sample, w, set).verdict == Verdict::Accept;
    EXPECT_EQ(simulate(c, w, set).verdict == Verdict::Accept, expect) << show(w);
  }
}

TEST(ComposeWithFst, MatchesBruteForce) {
  adsa_test::Rng rng(33);
  auto set = set_oracle();
  for (int i = 0; i < 60; ++i) {
    auto m = adsa_test::random_ads(rng, kAB, set->alphabet(), {3, 1, false});
    Fst t = adsa_test::random_fst(rng, kAB, kAB, 3);
    AdsAutomaton c = compose_with_fst(m, t);
    for (const auto& u : adsa_test::all_words(kAB, 3)) {
      bool expect = false;
      for (const auto& v : adsa_test::brute_apply(t, u, 16)) expect = expect || brute_ads_accepts(m, v, *set);
      Verdict got = simulate(c, u, set, kWide).verdict;
      ASSERT_NE(got, Verdict::Unknown);
      EXPECT_EQ(got == Verdict::Accept, expect) << write_ads(m) << write_fst(t) << show(u);
    }
  }
}

TEST(ComposeWithFst, PreservesDeterminism) {
  adsa_test::Rng rng(34);
  auto set = set_oracle();
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    auto m = adsa_test::random_ads(rng, kAB, set->alphabet(), {4, 1, true});
    Fst t = adsa_test::random_fst(rng, kAB, kAB, 3);
    if (!is_deterministic(m) || !t.is_deterministic() || accepts_then_moves_silently(m)) continue;
    ++checked;
    EXPECT_TRUE(is_deterministic(compose_with_fst(m, t)));
  }
  EXPECT_GT(checked, 10);

  // An accepting state with an epsilon move leaves both choices open.
  AdsAutomaton m(kAB, set->alphabet());
  m.add_state("s", StateKind::Write);
  m.add_state("t", StateKind::Write);
  m.set_accepting(0);
  m.add_write_move("s", "eps", {}, "t");
  m.add_write_move("t", "a", {}, "t");
  AdsAutomaton c = compose_with_fst(m, id_on(universal(kAB)));
  EXPECT_FALSE(is_deterministic(c));
  EXPECT_EQ(run(c, "", set), Verdict::Accept);
  EXPECT_EQ(run(c, "b", set), Verdict::Reject);
}

TEST(Determinism, SyntacticCheck) {
  auto set = set_oracle();
  AdsAutomaton m(kAB, set->alphabet());
  m.add_state("s", StateKind::Write);
  m.add_state("t", StateKind::Write);
  m.add_write_move("s", "eps", {"a"}, "t");
  EXPECT_TRUE(is_deterministic(m));
  m.add_write_move("s", "eps", {"b"}, "t");
  EXPECT_FALSE(is_deterministic(m));

  AdsAutomaton q(kAB, set->alphabet());
  q.add_state("q", StateKind::Query);
  q.add_state("w", StateKind::Write);
  q.add_query_move("q", "#test", "+#", "w");
  q.add_query_move("q", "#test", "-#", "w");
  EXPECT_TRUE(is_deterministic(q));
  q.add_query_move("q", "#ins", "#", "w");
  EXPECT_FALSE(is_deterministic(q));
}

TEST(AdsAutomaton, StructuralChecks) {
  auto set = set_oracle();
  AdsAutomaton m(kAB, set->alphabet());
  m.add_state("w", StateKind::Write);
  m.add_state("q", StateKind::Query);
  m.add_state("q2", StateKind::Query);
  EXPECT_THROW(m.add_query_move("q", "#test", "#", "w"), InvalidArgument);
  EXPECT_THROW(m.add_query_move("q", "#test", "+#", "q2"), InvalidArgument);
  EXPECT_THROW(m.add_query_move("w", "#test", "+#", "w"), InvalidArgument);
  EXPECT_THROW(m.add_write_move("q", "a", {}, "w"), InvalidArgument);
  EXPECT_THROW(m.add_state("w", StateKind::Write), InvalidArgument);
  // A query state may be initial.
  m.set_initial(m.state("q"));
  m.add_query_move("q", "#test", "-#", "w");
  m.set_accepting(m.state("w"));
  EXPECT_EQ(run(m, "", set), Verdict::Accept);
}

TEST(Recode, Codec) {
  Fst one = two_letter_codec(Alphabet{"x"});
  EXPECT_EQ(apply(one, {"x"}, 10).outputs, (std::set<Word>{tokenize("a b a")}));
  Fst two = two_letter_codec(Alphabet{"x", "y"});
  EXPECT_EQ(apply(two, {"y"}, 10).outputs, (std::set<Word>{tokenize("a b b a")}));
  std::set<Word> seen;
  for (const auto& w : adsa_test::all_words(Alphabet{"x", "y"}, 4)) {
    auto out = apply(two, w, 40).outputs;
    ASSERT_EQ(out.size(), 1u);
    EXPECT_TRUE(seen.insert(*out.begin()).second);
    EXPECT_EQ(two_letter_decode(Alphabet{"x", "y"}, *out.begin()), w);
  }
  EXPECT_FALSE(two_letter_decode(Alphabet{"x", "y"}, tokenize("a b b b a")));
  EXPECT_FALSE(two_letter_decode(Alphabet{"x", "y"}, tokenize("a b")));
}

TEST(Recode, PreservesVerdicts) {
  adsa_test::Rng rng(35);
  auto set = set_oracle();
  auto coded = std::make_shared<RecodedOracle>(set);
  for (int i = 0; i < 60; ++i) {
    auto m = adsa_test::random_ads(rng, kAB, set->alphabet(), {4, 1, false});
    auto r = two_letter_recode(m);
    EXPECT_EQ(r.automaton.write_alphabet().symbols(), (std::vector<Symbol>{"a", "b"}));
    for (const auto& w : adsa_test::all_words(kAB, 4))
      EXPECT_EQ(simulate(r.automaton, w, *coded, kWide).verdict, simulate(m, w, set).verdict);
  }
  AdsAutomaton empty_wr(kAB, dyck_oracle()->alphabet());
  empty_wr.add_state("s", StateKind::Write);
  EXPECT_THROW(two_letter_recode(empty_wr), InvalidArgument);
}

TEST(ResetClosure, ConcatAndStar) {
  auto o = protx();
  AdsAutomaton m = one_block();
  EXPECT_EQ(run(m, "a", o), Verdict::Accept);
  AdsAutomaton mm = concat(m, m, *o);
  EXPECT_EQ(run(mm, "a", o), Verdict::Reject);
  EXPECT_EQ(run(mm, "", o), Verdict::Reject);
  auto res = simulate(mm, {"a", "a"}, o);
  ASSERT_EQ(res.verdict, Verdict::Accept);
  EXPECT_EQ(show_protocol(*res.protocol), "0 # + r r 0 # +");

  AdsAutomaton s = star(m, *o);
  for (std::size_t k = 0; k <= 4; ++k) EXPECT_EQ(simulate(s, Word(k, "a"), o).verdict, Verdict::Accept);

  AdsAutomaton never(Alphabet{"a"}, o->alphabet());
  never.add_state("x", StateKind::Write);
  AdsAutomaton none = concat(m, never, *o);
  for (std::size_t k = 0; k <= 3; ++k) EXPECT_EQ(simulate(none, Word(k, "a"), o).verdict, Verdict::Reject);

  auto set = set_oracle();
  EXPECT_THROW(star(m_prot(set->alphabet()), *set), InvalidArgument);
}

TEST(AdsIo, RoundTripAndErrors) {
  AdsAutomaton sample = set_member_sample();
  std::string text = write_ads(sample);
  EXPECT_EQ(write_ads(parse_ads(text)), text);
  EXPECT_NE(to_dot(sample).find("dashed"), std::string::npos);
  adsa_test::Rng rng(36);
  auto set = set_oracle();
  for (int i = 0; i < 30; ++i) {
    auto m = adsa_test::random_ads(rng, kAB, set->alphabet(), {4, 2, false});
    EXPECT_EQ(write_ads(parse_ads(write_ads(m))), write_ads(m));
  }
  EXPECT_THROW(parse_ads("type ads\nalphabet a\nstates s\ninitial s\n"), ParseError);
  const std::string bad_q =
      "type ads\nalphabet a\nwr a\nquery q\nresp r\nvalid q r\npartition wr s\npartition query t\n"
      "initial s\nqmove t q x s\n";
  try {
    parse_ads(bad_q);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 10);
  }
}
