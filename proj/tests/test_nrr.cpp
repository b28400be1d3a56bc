// test_nrr.cpp
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

namespace {

const Alphabet kAB{"a", "b"};

Nfa words(const Alphabet& alpha, std::initializer_list<const char*> ws) {
  std::vector<Word> v;
  for (const char* w : ws) v.push_back(tokenize(w));
  return from_words(alpha, v);
}

Verdict run_verdict(const AdsAutomaton& m, const std::string& w, const OraclePtr& o) {
  return simulate(m, tokenize(w), o).verdict;
}

void expect_valid_witness(const NrrAnswer& ans, const Nfa& a, const std::function<bool(const Word&)>& member) {
  if (ans.verdict != Verdict::Accept) {
    EXPECT_FALSE(ans.witness);
    return;
  }
  ASSERT_TRUE(ans.witness);
  EXPECT_TRUE(accepts(a, *ans.witness)) << show(*ans.witness);
  EXPECT_TRUE(member(*ans.witness)) << show(*ans.witness);
}

/// Some word of length <= max_len in L(a) passes `member`; nullopt when the
/// enumeration is too large.
std::optional<bool> brute_meets(const Nfa& a, std::size_t max_len, const std::function<bool(const Word&)>& member) {
  try {
    for (const auto& w : enumerate_words(a, max_len, 200000))
      if (member(w)) return true;
    return false;
  } catch (const ResourceLimit&) {
    return std::nullopt;
  }
}

bool block_words_within(const ProtocolAlphabet& pa, const Word& p, std::size_t max_w) {
  for (const auto& b : parse_blocks(pa, p))
    if (b.u.size() > max_w) return false;
  return true;
}

}  // namespace

TEST(NregGeneric, DyckExamples) {
  auto dyck = dyck_oracle();
  const Alphabet& flat = dyck->alphabet().flattened();
  Nfa one = words(flat, {"push( ( pop )"});
  auto ans = nreg_generic(one, *dyck);
  EXPECT_EQ(ans.verdict, Verdict::Accept);
  EXPECT_EQ(ans.witness, tokenize("push( ( pop )"));
  EXPECT_EQ(nreg_generic(words(flat, {"push( ("}), *dyck_oracle(true)).verdict, Verdict::Reject);
  EXPECT_EQ(nreg_generic(words(flat, {"push( ("}), *dyck).verdict, Verdict::Accept);
  EXPECT_EQ(nreg_generic(words(flat, {"pop )", "push( ( pop ]"}), *dyck).verdict, Verdict::Reject);
  EXPECT_EQ(nreg_generic(empty_language(flat), *dyck).verdict, Verdict::Reject);

  // Pushes without bound exhaust the search; the final "pop ]" never matches.
  Nfa grow(flat);
  int s = grow.add_state("s"), t = grow.add_state("t"), u = grow.add_state("u"), f = grow.add_state("f");
  grow.set_initial(s);
  grow.set_accepting(f);
  grow.add_transition(s, flat.index_of("push("), t);
  grow.add_transition(t, flat.index_of("("), s);
  grow.add_transition(s, flat.index_of("pop"), u);
  grow.add_transition(u, flat.index_of("]"), f);
  EXPECT_EQ(nreg_generic(grow, *dyck).verdict, Verdict::Unknown);
  EXPECT_EQ(nreg_dyck(grow, false).verdict, Verdict::Reject);
}

TEST(NregGeneric, SetFilterMatchesBruteForce) {
  auto set = set_oracle();
  const Alphabet& flat = set->alphabet().flattened();
  adsa_test::Rng rng(41);
  int compared = 0, long_witness = 0;
  for (int i = 0; i < 150; ++i) {
    Nfa a = adsa_test::random_nfa(rng, flat, {1, 4, 0.12, 0.05, 0.4, false});
    auto member = [&](const Word& w) { return membership(*set, w); };
    auto ans = nreg_generic(a, *set);
    expect_valid_witness(ans, a, member);
    auto brute = brute_meets(a, 8, member);
    if (!brute || ans.verdict == Verdict::Unknown) continue;
    ++compared;
    if (*brute) { EXPECT_EQ(ans.verdict, Verdict::Accept) << write_nfa(a); }
    if (ans.verdict == Verdict::Reject) { EXPECT_FALSE(*brute); }
    if (ans.verdict == Verdict::Accept && !*brute) {
      EXPECT_GT(ans.witness->size(), 8u);
      ++long_witness;
    }
  }
  EXPECT_GT(compared, 100);
  EXPECT_LT(long_witness, 10);
}

TEST(NregDyck, Examples) {
  auto dyck = dyck_oracle();
  const Alphabet& flat = dyck->alphabet().flattened();
  Nfa star(flat);  // (push( ( pop ))*
  int s0 = star.add_state("0"), s1 = star.add_state("1"), s2 = star.add_state("2"), s3 = star.add_state("3");
  star.set_initial(s0);
  star.set_accepting(s0);
  star.add_transition(s0, flat.index_of("push("), s1);
  star.add_transition(s1, flat.index_of("("), s2);
  star.add_transition(s2, flat.index_of("pop"), s3);
  star.add_transition(s3, flat.index_of(")"), s0);
  auto ans = nreg_dyck(star, true);
  EXPECT_EQ(ans.verdict, Verdict::Accept);
  EXPECT_EQ(ans.witness, Word{});

  Nfa opt = words(flat, {"push( (", "push( ( pop )"});
  auto exact = nreg_dyck(opt, true);
  EXPECT_EQ(exact.verdict, Verdict::Accept);
  EXPECT_EQ(exact.witness, tokenize("push( ( pop )"));
  EXPECT_EQ(nreg_dyck(words(flat, {"push( (", "push[ [ pop )"}), true).verdict, Verdict::Reject);
  EXPECT_EQ(nreg_dyck(words(flat, {"push( ("}), false).verdict, Verdict::Accept);
  EXPECT_THROW(nreg_dyck(words(Alphabet{"x"}, {"x"}), true), InvalidArgument);

  // Nested brackets through a loop: push( push[ pop ] pop ) needs the stack.
  Nfa nest = words(flat, {"push( ( push[ [ pop ] pop )", "push( ( push[ [ pop ) pop ]"});
  auto n = nreg_dyck(nest, true);
  EXPECT_EQ(n.witness, tokenize("push( ( push[ [ pop ] pop )"));
}

TEST(NregDyck, AgreesWithGeneric) {
  const Alphabet flat = dyck_oracle()->alphabet().flattened();
  adsa_test::Rng rng(42);
  int definite = 0;
  for (int i = 0; i < 300; ++i) {
    Nfa a = adsa_test::random_nfa(rng, flat, {1, 5, 0.2, 0.05, 0.4, false});
    for (bool exact : {false, true}) {
      auto o = dyck_oracle(exact);
      auto fast = nreg_dyck(a, exact);
      ASSERT_NE(fast.verdict, Verdict::Unknown);
      expect_valid_witness(fast, a, [&](const Word& w) { return membership(*o, w); });
      auto slow = nreg_generic(a, *o, SearchBounds{20000, 64, 16});
      if (slow.verdict == Verdict::Unknown) continue;
      ++definite;
      EXPECT_EQ(fast.verdict, slow.verdict) << write_nfa(a) << exact;
    }
  }
  EXPECT_GT(definite, 400);
}

TEST(NregPerK, Examples) {
  Alphabet alpha = per_k_alphabet(digit_alphabet(2));
  EXPECT_EQ(nreg_perk(words(alpha, {"0 1 # 0 1 #"}), 2).verdict, Verdict::Accept);
  EXPECT_EQ(nreg_perk(words(alpha, {"0 1 # 1 0 #", "0 #"}), 2).verdict, Verdict::Reject);
  Nfa loop(alpha);  // (0 #)* accepts "0 # 0 #"
  int s = loop.add_state("s"), t = loop.add_state("t");
  loop.set_initial(s);
  loop.set_accepting(s);
  loop.add_transition(s, alpha.index_of("0"), t);
  loop.add_transition(t, alpha.index_of("#"), s);
  auto ans = nreg_perk(loop, 2);
  EXPECT_EQ(ans.witness, tokenize("0 # 0 #"));
}

TEST(Reductions, NonemptinessExamples) {
  auto set = set_oracle();
  AdsAutomaton all(kAB, set->alphabet());
  all.add_state("s", StateKind::Write);
  all.set_accepting(0);
  all.add_write_move("s", "a", {}, "s");
  auto yes = nreg_generic(nonemptiness_to_nrr(all), *set);
  EXPECT_EQ(yes.verdict, Verdict::Accept);
  EXPECT_EQ(yes.witness, Word{});

  // Demands "+#" for a word that was never inserted.
  AdsAutomaton never(kAB, set->alphabet());
  never.add_state("w", StateKind::Write);
  never.add_state("q", StateKind::Query);
  never.add_state("f", StateKind::Write);
  never.add_write_move("w", "a", {"a"}, "q");
  never.add_query_move("q", "#test", "+#", "f");
  never.set_accepting(2);
  EXPECT_EQ(nreg_generic(nonemptiness_to_nrr(never), *set).verdict, Verdict::Reject);
}

TEST(Reductions, NonemptinessMatchesBoundedSearch) {
  adsa_test::Rng rng(43);
  auto set = set_oracle();
  int unknown = 0;
  for (int i = 0; i < 100; ++i) {
    auto m = adsa_test::random_ads(rng, kAB, set->alphabet(), {4, 1, false});
    bool bounded = false;
    for (const auto& w : adsa_test::all_words(kAB, 5))
      if (simulate(m, w, set).verdict == Verdict::Accept) {
        bounded = true;
        break;
      }
    Nfa a = nonemptiness_to_nrr(m);
    auto ans = nreg_generic(a, *set);
    expect_valid_witness(ans, a, [&](const Word& w) { return membership(*set, w); });
    if (ans.verdict == Verdict::Unknown) {
      ++unknown;
      continue;
    }
    EXPECT_EQ(ans.verdict == Verdict::Accept, bounded) << write_ads(m);

    // Back to an automaton: non-empty iff the instance is a Yes instance.
    AdsAutomaton back = nrr_to_nonemptiness(a, set->alphabet());
    bool back_bounded = false;
    for (const auto& w : adsa_test::all_words(set->alphabet().flattened(), 3))
      back_bounded = back_bounded || simulate(back, w, set).verdict == Verdict::Accept;
    if (back_bounded) { EXPECT_EQ(ans.verdict, Verdict::Accept); }
    if (ans.verdict == Verdict::Accept) {
      EXPECT_EQ(simulate(back, *ans.witness, set).verdict, Verdict::Accept) << show(*ans.witness);
    }
  }
  EXPECT_LT(unknown, 10);
}

TEST(Reductions, NrrToNonemptinessExamples) {
  auto set = set_oracle();
  const Alphabet& flat = set->alphabet().flattened();
  AdsAutomaton one = nrr_to_nonemptiness(words(flat, {"a #ins # a #test +#"}), set->alphabet());
  EXPECT_EQ(run_verdict(one, "a #ins # a #test +#", set), Verdict::Accept);
  AdsAutomaton none = nrr_to_nonemptiness(empty_language(flat), set->alphabet());
  for (const auto& w : adsa_test::all_words(flat, 2)) EXPECT_EQ(simulate(none, w, set).verdict, Verdict::Reject);
  EXPECT_THROW(nrr_to_nonemptiness(words(Alphabet{"zz"}, {"zz"}), set->alphabet()), InvalidArgument);
}

TEST(Reductions, MembershipToRegExamples) {
  auto sis = single_insert_set_oracle(1);
  AdsAutomaton m(kAB, sis->alphabet());
  m.add_state("w", StateKind::Write);
  m.add_state("q", StateKind::Query);
  m.add_state("f", StateKind::Write);
  m.add_write_move("w", "eps", {"0"}, "q");
  m.add_query_move("q", "ins", "+", "f");
  m.set_accepting(2);
  m.add_write_move("f", "a", {}, "f");
  m.add_write_move("f", "b", {}, "f");
  for (const char* w : {"", "a b", "b b a"}) {
    Nfa d = membership_to_reg(m, tokenize(w));
    EXPECT_TRUE(d.is_deterministic());
    EXPECT_EQ(enumerate_words(d, 10), std::vector<Word>{tokenize("0 ins +")});
    EXPECT_EQ(nreg_generic(d, *sis).verdict, Verdict::Accept);
  }

  // Expects "-" where the storage answers "+".
  AdsAutomaton wrong(kAB, sis->alphabet());
  wrong.add_state("w", StateKind::Write);
  wrong.add_state("q", StateKind::Query);
  wrong.add_state("f", StateKind::Write);
  wrong.add_write_move("w", "eps", {"0"}, "q");
  wrong.add_query_move("q", "ins", "-", "f");
  wrong.set_accepting(2);
  EXPECT_EQ(nreg_generic(membership_to_reg(wrong, {}), *sis).verdict, Verdict::Reject);

  AdsAutomaton nd(kAB, sis->alphabet());
  nd.add_state("s", StateKind::Write);
  nd.add_write_move("s", "eps", {}, "s");
  nd.add_write_move("s", "a", {}, "s");
  EXPECT_THROW(membership_to_reg(nd, {}), InvalidArgument);
}

TEST(Reductions, MembershipToRegMatchesSimulation) {
  adsa_test::Rng rng(44);
  auto set = set_oracle();
  int fixtures = 0;
  while (fixtures < 50) {
    auto m = adsa_test::random_ads(rng, kAB, set->alphabet(), {4, 1, true});
    if (!is_deterministic(m)) continue;
    ++fixtures;
    for (const auto& w : adsa_test::all_words(kAB, 4)) {
      Nfa d = membership_to_reg(m, w);
      auto ans = nreg_generic(d, *set);
      expect_valid_witness(ans, d, [&](const Word& p) { return membership(*set, p); });
      EXPECT_EQ(ans.verdict, simulate(m, w, set).verdict) << write_ads(m) << show(w);
    }
  }
}

TEST(FilterTransfer, Identity) {
  auto set = set_oracle();
  const Alphabet& flat = set->alphabet().flattened();
  adsa_test::Rng rng(45);
  for (int i = 0; i < 60; ++i) {
    Nfa a = adsa_test::random_nfa(rng, flat, {1, 4, 0.12, 0.05, 0.4, false});
    EXPECT_EQ(nreg_generic(filter_transfer(a, id_on(universal(flat))), *set).verdict, nreg_generic(a, *set).verdict);
  }
  EXPECT_EQ(nreg_generic(filter_transfer(empty_language(flat), id_on(universal(flat))), *set).verdict,
            Verdict::Reject);
}

TEST(FilterTransfer, PerKThroughSingleInsert) {
  auto sis = single_insert_set_oracle(2);
  Fst t = spk_to_perk_fst(2);
  Alphabet alpha = per_k_alphabet(digit_alphabet(2));
  adsa_test::Rng rng(46);
  int definite = 0;
  for (int i = 0; i < 100; ++i) {
    Nfa a = adsa_test::random_nfa(rng, alpha, {1, 4, 0.3, 0.05, 0.4, false});
    auto lhs = nreg_perk(a, 2);
    expect_valid_witness(lhs, a, [](const Word& w) { return per_k_membership(w, 2); });
    Nfa b = filter_transfer(a, t);
    auto rhs = nreg_generic(b, *sis);
    expect_valid_witness(rhs, b, [&](const Word& w) { return membership(*sis, w); });
    auto brute = brute_meets(a, 10, [](const Word& w) { return per_k_membership(w, 2); });
    if (brute && lhs.verdict != Verdict::Unknown && lhs.witness && lhs.witness->size() <= 10) {
      EXPECT_TRUE(*brute);
    }
    if (brute && *brute) { EXPECT_NE(lhs.verdict, Verdict::Reject); }
    if (lhs.verdict == Verdict::Unknown || rhs.verdict == Verdict::Unknown) continue;
    ++definite;
    EXPECT_EQ(lhs.verdict, rhs.verdict) << write_nfa(a);
  }
  EXPECT_GT(definite, 80);
}

TEST(SpkPerk, Examples) {
  Fst to_per = spk_to_perk_fst(Alphabet{"a", "b"}, 2);
  EXPECT_EQ(apply(to_per, tokenize("a b ins + a b test +"), 20).outputs,
            (std::set<Word>{tokenize("a b # a b #")}));
  // Words are copied, not compared: a correct protocol never tests a word
  // other than the inserted one with "+".
  EXPECT_EQ(apply(to_per, tokenize("a b ins + a test +"), 20).outputs, (std::set<Word>{tokenize("a b # a #")}));
  EXPECT_TRUE(apply(to_per, tokenize("a b ins + a b test -"), 20).outputs.empty());
  EXPECT_TRUE(apply(to_per, tokenize("a b ins +"), 20).outputs.empty());
  EXPECT_THROW(spk_to_perk_fst(0), InvalidArgument);

  auto img = apply(perk_to_spk_fst(1), tokenize("0 #"), 6).outputs;
  EXPECT_TRUE(img.count(tokenize("0 ins +")));
  EXPECT_TRUE(img.count(tokenize("0 test -")));
  EXPECT_TRUE(img.count(tokenize("test -")));
  EXPECT_TRUE(img.count(tokenize("0 0 test -")));
  EXPECT_FALSE(img.count(tokenize("0 test +")));
  EXPECT_FALSE(img.count(tokenize("0 0 ins +")));
}

TEST(SpkPerk, SpkImageIsPerK) {
  auto sis = single_insert_set_oracle(2);
  Fst t = spk_to_perk_fst(2);
  Alphabet letters = digit_alphabet(2);
  std::set<Word> image;
  for (const auto& w : adsa_test::all_words(letters, 2))
    for (const auto& p : adsa_test::brute_sis_protocols(letters, 2, 2, w)) {
      auto out = apply(t, p, 20).outputs;
      bool shaped = p == concat(w, concat(Word{"ins", "+"}, concat(w, Word{"test", "+"})));
      EXPECT_EQ(out.size(), shaped ? 1u : 0u) << show(p);
      for (const auto& v : out) {
        EXPECT_TRUE(per_k_membership(v, 2));
        image.insert(v);
      }
    }
  std::set<Word> expected;
  for (const auto& w : adsa_test::all_words(letters, 2)) expected.insert(concat(w, concat(Word{"#"}, concat(w, Word{"#"}))));
  EXPECT_EQ(image, expected);
}

TEST(SpkPerk, PerkImageIsSingleInsertProtocols) {
  auto sis = single_insert_set_oracle(2);
  Fst t = perk_to_spk_fst(2);
  Alphabet letters = digit_alphabet(2);
  for (std::size_t n = 1; n <= 2; ++n)
    for (const auto& w : adsa_test::all_words(letters, 2)) {
      Word in;
      for (std::size_t i = 0; i < n; ++i) in = concat(in, concat(w, Word{"#"}));
      std::set<Word> got;
      for (const auto& p : apply(t, in, n * 4).outputs)
        if (block_words_within(sis->alphabet(), p, 2)) {
          EXPECT_TRUE(membership(*sis, p)) << show(p);
          got.insert(p);
        }
      EXPECT_EQ(got, adsa_test::brute_sis_protocols(letters, n, 2, w)) << "w=" << show(w) << " n=" << n;
    }
}
