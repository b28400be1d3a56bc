// alphabet.hpp
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
#include <cctype>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "adsa/error.hpp"

namespace adsa {

using Symbol = std::string;
using Word = std::vector<Symbol>;

/// Reserved token for the empty word in every textual format.
inline constexpr std::string_view kEpsilonToken = "eps";

/// Ordered finite set of distinct string tokens. The declaration order is the
/// order used for lexicographic comparison of words.
class Alphabet {
 public:
  Alphabet() = default;
  Alphabet(std::initializer_list<Symbol> symbols) : Alphabet(std::vector<Symbol>(symbols)) {}
  explicit Alphabet(const std::vector<Symbol>& symbols) {
    for (const auto& s : symbols) add(s);
  }

  /// Appends a symbol; no-op when already present.
  int add(const Symbol& s) {
    if (s.empty()) throw InvalidArgument("alphabet tokens must be non-empty");
    if (s == kEpsilonToken) throw InvalidArgument("'eps' is reserved and cannot be a symbol");
    if (auto it = index_.find(s); it != index_.end()) return it->second;
    int id = static_cast<int>(symbols_.size());
    symbols_.push_back(s);
    index_.emplace(s, id);
    return id;
  }

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  const Symbol& operator[](int i) const { return symbols_.at(static_cast<std::size_t>(i)); }
  const std::vector<Symbol>& symbols() const noexcept { return symbols_; }

  std::optional<int> find(std::string_view s) const {
    if (auto it = index_.find(std::string(s)); it != index_.end()) return it->second;
    return std::nullopt;
  }
  bool contains(std::string_view s) const { return find(s).has_value(); }

  int index_of(std::string_view s) const {
    if (auto i = find(s)) return *i;
    throw InvalidArgument("symbol '" + std::string(s) + "' is not in the alphabet");
  }

  /// Same symbols regardless of declaration order.
  bool same_symbols(const Alphabet& other) const {
    return std::set<Symbol>(symbols_.begin(), symbols_.end()) ==
           std::set<Symbol>(other.symbols_.begin(), other.symbols_.end());
  }

  bool includes(const Alphabet& other) const {
    return std::all_of(other.symbols_.begin(), other.symbols_.end(),
                       [&](const Symbol& s) { return contains(s); });
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

  /// Union preserving the order of `a` then the new symbols of `b`.
  static Alphabet merged(const Alphabet& a, const Alphabet& b) {
    Alphabet out = a;
    for (const auto& s : b.symbols_) out.add(s);
    return out;
  }

 private:
  std::vector<Symbol> symbols_;
  std::unordered_map<Symbol, int> index_;
};

/// Splits on ASCII whitespace. The token "eps" is dropped, so "eps" alone is
/// the empty word.
inline Word tokenize(std::string_view text) {
  Word out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      std::string tok(text.substr(i, j - i));
      if (tok != kEpsilonToken) out.push_back(std::move(tok));
    }
    i = j;
  }
  return out;
}

inline std::string join(const Word& w, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += sep;
    out += w[i];
  }
  return out;
}

/// Words rendered for reports: tokens joined by spaces, "eps" for the empty word.
inline std::string show(const Word& w) { return w.empty() ? std::string(kEpsilonToken) : join(w); }

/// Splits a string into single-character tokens ("ab#" -> a b #).
inline Word chars(std::string_view s) {
  Word out;
  out.reserve(s.size());
  for (char c : s) out.emplace_back(1, c);
  return out;
}

inline Word concat(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace adsa
