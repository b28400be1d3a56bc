// oracles.hpp
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

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "adsa/protocol.hpp"

namespace adsa {

// ---------------------------------------------------------------------------
// Two-bracket stack. The state is the stack, bottom first.

class DyckOracle : public ProtocolOracle {
 public:
  explicit DyckOracle(bool exact = false)
      : exact_(exact),
        pa_(Alphabet{}, Alphabet{"push(", "push[", "pop"}, Alphabet{"(", ")", "[", "]"},
            {{"push(", "("}, {"push[", "["}, {"pop", ")"}, {"pop", "]"}}) {}

  const ProtocolAlphabet& alphabet() const override { return pa_; }
  std::string name() const override { return exact_ ? "dyck-exact" : "dyck"; }
  bool exact() const noexcept { return exact_; }

  std::optional<Response> respond(const OracleState& state, const Word& u, const Symbol& q) const override {
    if (!u.empty()) return std::nullopt;
    if (q == "push(" || q == "push[") {
      Response r{q == "push(" ? "(" : "[", state};
      r.next.push_back(r.symbol);
      return r;
    }
    if (q == "pop") {
      if (state.empty()) return std::nullopt;
      Response r{state.back() == "(" ? ")" : "]", state};
      r.next.pop_back();
      return r;
    }
    return std::nullopt;
  }

  std::string canonical_key(const OracleState& state) const override {
    std::string key;
    for (const auto& s : state) key += s;
    return key;
  }

  /// The exact variant additionally requires a balanced word.
  bool final_ok(const OracleState& state) const override { return !exact_ || state.empty(); }

 private:
  bool exact_;
  ProtocolAlphabet pa_;
};

// ---------------------------------------------------------------------------
// Set of words with insert, remove and membership test. The state holds the
// elements in sorted order, each written as its tokens joined by spaces.

class SetOracle : public ProtocolOracle {
 public:
  explicit SetOracle(Alphabet letters = Alphabet{"a", "b"})
      : pa_(std::move(letters), Alphabet{"#ins", "#out", "#test"}, Alphabet{"#", "+#", "-#"},
            {{"#ins", "#"}, {"#out", "#"}, {"#test", "+#"}, {"#test", "-#"}}) {}

  const ProtocolAlphabet& alphabet() const override { return pa_; }
  std::string name() const override { return "set"; }

  std::optional<Response> respond(const OracleState& state, const Word& u, const Symbol& q) const override {
    std::string elem = join(u);
    auto it = std::lower_bound(state.begin(), state.end(), elem);
    bool present = it != state.end() && *it == elem;
    if (q == "#ins") {
      Response r{"#", state};
      if (!present) r.next.insert(r.next.begin() + (it - state.begin()), elem);
      return r;
    }
    if (q == "#out") {
      Response r{"#", state};
      if (present) r.next.erase(r.next.begin() + (it - state.begin()));
      return r;
    }
    if (q == "#test") return Response{present ? "+#" : "-#", state};
    return std::nullopt;
  }

 private:
  ProtocolAlphabet pa_;
};

// ---------------------------------------------------------------------------
// Set that accepts one insertion. The state is empty before the first ins
// and holds "=" followed by the stored word afterwards.

/// Letters 0 .. k-1 as single-character tokens (two or more characters for
/// k > 10).
inline Alphabet digit_alphabet(int k) {
  if (k < 1) throw InvalidArgument("alphabet size must be at least 1");
  Alphabet out;
  for (int i = 0; i < k; ++i) out.add(std::to_string(i));
  return out;
}

class SingleInsertOracle : public ProtocolOracle {
 public:
  explicit SingleInsertOracle(int k) : SingleInsertOracle(digit_alphabet(k)) {}
  explicit SingleInsertOracle(Alphabet letters)
      : k_(static_cast<int>(letters.size())),
        pa_(std::move(letters), Alphabet{"ins", "test"}, Alphabet{"+", "-"},
            {{"ins", "+"}, {"ins", "-"}, {"test", "+"}, {"test", "-"}}) {}

  const ProtocolAlphabet& alphabet() const override { return pa_; }
  std::string name() const override { return "sis:" + std::to_string(k_); }
  int k() const noexcept { return k_; }

  std::optional<Response> respond(const OracleState& state, const Word& u, const Symbol& q) const override {
    std::string elem = "=" + join(u);
    if (q == "ins") {
      if (state.empty()) return Response{"+", {elem}};
      return Response{"-", state};
    }
    if (q == "test") return Response{!state.empty() && state.front() == elem ? "+" : "-", state};
    return std::nullopt;
  }

 private:
  int k_;
  ProtocolAlphabet pa_;
};

// ---------------------------------------------------------------------------

/// w = (v #)^k for a single v free of "#".
inline bool per_k_membership(const Word& w, int k) {
  if (k < 1) throw InvalidArgument("per_k_membership: k must be at least 1");
  if (w.empty() || w.back() != "#") return false;
  std::vector<Word> parts(1);
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i] == "#")
      parts.emplace_back();
    else
      parts.back().push_back(w[i]);
  }
  if (static_cast<int>(parts.size()) != k) return false;
  return std::all_of(parts.begin(), parts.end(), [&](const Word& p) { return p == parts.front(); });
}

/// Alphabet of Per_k instances: the letters followed by "#".
inline Alphabet per_k_alphabet(const Alphabet& letters) {
  Alphabet out = letters;
  out.add("#");
  return out;
}

inline OraclePtr dyck_oracle(bool exact = false) { return std::make_shared<DyckOracle>(exact); }
inline OraclePtr set_oracle() { return std::make_shared<SetOracle>(); }
inline OraclePtr single_insert_set_oracle(int k) { return std::make_shared<SingleInsertOracle>(k); }
inline OraclePtr single_insert_set_oracle(const Alphabet& letters) {
  return std::make_shared<SingleInsertOracle>(letters);
}

}  // namespace adsa
