// Copyright 2026 The cspiso Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cspiso/error.hpp"

namespace cspiso {

/// Dense truth table over `num_vars` inputs. Row i encodes the assignment
/// (a_1, ..., a_k) with a_1 as the most significant bit of i.
class truth_table {
 public:
  truth_table() = default;

  explicit truth_table(unsigned num_vars) : num_vars_(num_vars), words_(word_count(num_vars), 0) {}

  static truth_table constant(unsigned num_vars, bool value) {
    truth_table t(num_vars);
    if (value) {
      for (std::size_t i = 0; i < t.num_bits(); ++i) t.set(i, true);
    }
    return t;
  }

  /// Parses a 0/1 string of length 2^k.
  static truth_table from_string(std::string_view bits) {
    unsigned k = 0;
    while ((std::size_t{1} << k) < bits.size()) ++k;
    if ((std::size_t{1} << k) != bits.size() || bits.empty()) {
      throw invalid_input("truth table length " + std::to_string(bits.size()) + " is not a power of two");
    }
    truth_table t(k);
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1') {
        t.set(i, true);
      } else if (bits[i] != '0') {
        throw invalid_input("truth table contains a character other than 0/1");
      }
    }
    return t;
  }

  unsigned num_vars() const { return num_vars_; }
  std::size_t num_bits() const { return std::size_t{1} << num_vars_; }

  bool get(std::size_t row) const { return (words_[row >> 6] >> (row & 63)) & 1u; }

  void set(std::size_t row, bool value) {
    const auto mask = std::uint64_t{1} << (row & 63);
    if (value) {
      words_[row >> 6] |= mask;
    } else {
      words_[row >> 6] &= ~mask;
    }
  }

  std::size_t count_ones() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool is_const_false() const { return count_ones() == 0; }
  bool is_const_true() const { return count_ones() == num_bits(); }

  std::string to_string() const {
    std::string s(num_bits(), '0');
    for (std::size_t i = 0; i < num_bits(); ++i) {
      if (get(i)) s[i] = '1';
    }
    return s;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const truth_table&, const truth_table&) = default;
  friend auto operator<=>(const truth_table&, const truth_table&) = default;

 private:
  static std::size_t word_count(unsigned k) { return k >= 6 ? (std::size_t{1} << (k - 6)) : 1; }

  unsigned num_vars_ = 0;
  std::vector<std::uint64_t> words_ = std::vector<std::uint64_t>(1, 0);
};

/// Row index of a bit vector given most-significant-first.
inline std::size_t row_index(const std::vector<bool>& bits) {
  std::size_t idx = 0;
  for (bool b : bits) idx = (idx << 1) | static_cast<std::size_t>(b);
  return idx;
}

/// Bit j (0-based, from the left) of a row index over k inputs.
inline bool row_bit(std::size_t row, unsigned k, unsigned j) { return (row >> (k - 1 - j)) & 1u; }

}  // namespace cspiso
