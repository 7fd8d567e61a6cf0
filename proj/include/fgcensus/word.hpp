#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fgc {

/// One signed generator occurrence. `gen` is 1-based, `sign` is +1 or -1.
struct Letter {
  int gen = 1;
  int sign = +1;

  friend bool operator==(const Letter&, const Letter&) = default;
};

/// Packed code for a letter: 2*(gen-1) for a generator, 2*(gen-1)+1 for its
/// inverse. Codes order generators as a1 < A1 < a2 < A2 < ..., which is the
/// total order used for canonical rotations. The inverse of a code is code^1.
inline int letter_code(Letter l) { return 2 * (l.gen - 1) + (l.sign < 0 ? 1 : 0); }
inline Letter letter_from_code(int c) { return Letter{c / 2 + 1, (c & 1) ? -1 : +1}; }
inline int inverse_code(int c) { return c ^ 1; }

/// A word in the free group of the given rank, stored letter by letter.
/// Construction validates rank >= 2 and letter indices within 1..rank.
class Word {
 public:
  Word(int rank, std::vector<Letter> letters) : rank_(rank), letters_(std::move(letters)) {
    if (rank_ < 2) throw std::invalid_argument("free group rank must be >= 2");
    for (const Letter& l : letters_) {
      if (l.gen < 1 || l.gen > rank_) throw std::invalid_argument("generator index out of range");
      if (l.sign != 1 && l.sign != -1) throw std::invalid_argument("letter sign must be +1 or -1");
    }
  }
  explicit Word(int rank) : Word(rank, {}) {}

  int rank() const { return rank_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const std::vector<Letter>& letters() const { return letters_; }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }

  std::vector<std::uint8_t> codes() const {
    std::vector<std::uint8_t> c(letters_.size());
    for (std::size_t i = 0; i < letters_.size(); ++i)
      c[i] = static_cast<std::uint8_t>(letter_code(letters_[i]));
    return c;
  }

  static Word from_codes(int rank, std::span<const std::uint8_t> codes) {
    std::vector<Letter> ls(codes.size());
    for (std::size_t i = 0; i < codes.size(); ++i) ls[i] = letter_from_code(codes[i]);
    return Word(rank, std::move(ls));
  }

  friend bool operator==(const Word& a, const Word& b) {
    return a.rank_ == b.rank_ && a.letters_ == b.letters_;
  }

 private:
  int rank_;
  std::vector<Letter> letters_;
};

/// Signed occurrence counts of each generator.
using Homology = std::vector<long long>;

/// Free reduction: cancel adjacent mutually inverse pairs until none remain.
/// The result is the unique reduced word equal to the input in the group.
inline Word reduce(const Word& w) {
  std::vector<Letter> out;
  out.reserve(w.length());
  for (const Letter& l : w.letters()) {
    if (!out.empty() && out.back().gen == l.gen && out.back().sign == -l.sign) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return Word(w.rank(), std::move(out));
}

/// Cyclic reduction: freely reduce, then strip conjugating letters while the
/// first and last letters are mutually inverse. The result is the shortest
/// word conjugate to the input.
inline Word cyclically_reduce(const Word& w) {
  Word r = reduce(w);
  const std::vector<Letter>& ls = r.letters();
  std::size_t lo = 0, hi = ls.size();
  while (hi - lo >= 2 && ls[lo].gen == ls[hi - 1].gen && ls[lo].sign == -ls[hi - 1].sign) {
    ++lo;
    --hi;
  }
  return Word(w.rank(), std::vector<Letter>(ls.begin() + static_cast<long>(lo),
                                            ls.begin() + static_cast<long>(hi)));
}

inline bool is_reduced(const Word& w) {
  for (std::size_t i = 1; i < w.length(); ++i)
    if (w[i].gen == w[i - 1].gen && w[i].sign == -w[i - 1].sign) return false;
  return true;
}

inline bool is_cyclically_reduced(const Word& w) {
  if (!is_reduced(w)) return false;
  if (w.length() <= 1) return true;
  return !(w[0].gen == w[w.length() - 1].gen && w[0].sign == -w[w.length() - 1].sign);
}

/// Image under the abelianization map: coordinate j holds the signed number
/// of occurrences of generator j. Additive under concatenation and invariant
/// under conjugation and reduction.
inline Homology abelianize(const Word& w) {
  Homology h(static_cast<std::size_t>(w.rank()), 0);
  for (const Letter& l : w.letters()) h[static_cast<std::size_t>(l.gen - 1)] += l.sign;
  return h;
}

/// Index of the lexicographically least rotation (Booth's algorithm, O(n)).
inline std::size_t least_rotation_index(std::span<const std::uint8_t> s) {
  const long n = static_cast<long>(s.size());
  if (n <= 1) return 0;
  std::vector<std::uint8_t> d(s.begin(), s.end());
  d.insert(d.end(), s.begin(), s.end());
  std::vector<long> f(d.size(), -1);
  long least = 0;
  for (long j = 1; j < 2 * n; ++j) {
    const std::uint8_t sj = d[static_cast<std::size_t>(j)];
    long i = f[static_cast<std::size_t>(j - least - 1)];
    while (i != -1 && sj != d[static_cast<std::size_t>(least + i + 1)]) {
      if (sj < d[static_cast<std::size_t>(least + i + 1)]) least = j - i - 1;
      i = f[static_cast<std::size_t>(i)];
    }
    if (i == -1 && sj != d[static_cast<std::size_t>(least + i + 1)]) {
      if (sj < d[static_cast<std::size_t>(least)]) least = j;
      f[static_cast<std::size_t>(j - least)] = -1;
    } else {
      f[static_cast<std::size_t>(j - least)] = i + 1;
    }
  }
  return static_cast<std::size_t>(least % n);
}

/// Canonical conjugacy-class representative: cyclically reduce, then rotate
/// to the least cyclic rotation. Two words are conjugate iff their canonical
/// forms are equal.
inline Word class_canonical(const Word& w) {
  Word c = cyclically_reduce(w);
  if (c.length() <= 1) return c;
  std::vector<std::uint8_t> codes = c.codes();
  std::size_t r = least_rotation_index(codes);
  std::rotate(codes.begin(), codes.begin() + static_cast<long>(r), codes.end());
  return Word::from_codes(w.rank(), codes);
}

/// Length of the conjugacy class of w: the cyclically reduced length.
inline long long class_length(const Word& w) {
  return static_cast<long long>(cyclically_reduce(w).length());
}

/// Number of distinct cyclic rotations of a cyclically reduced word, i.e.
/// its minimal cyclic period. Equals the length unless the word is a proper
/// power.
inline std::size_t rotation_orbit_size(std::span<const std::uint8_t> codes) {
  const std::size_t n = codes.size();
  if (n <= 1) return n;
  for (std::size_t p = 1; p <= n / 2; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = codes[i] == codes[i - p];
    if (periodic) return p;
  }
  return n;
}

/// Text format: `a3` is the third generator, `A3` its inverse; letters may be
/// separated by spaces. Example: "a1 a2 A1".
inline Word parse_word(std::string_view text, int rank) {
  std::vector<Letter> ls;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ' || text[i] == '\t') {
      ++i;
      continue;
    }
    char c = text[i];
    if (c != 'a' && c != 'A') throw std::invalid_argument("expected 'a' or 'A' in word literal");
    int sign = (c == 'a') ? +1 : -1;
    ++i;
    if (i >= text.size() || text[i] < '0' || text[i] > '9')
      throw std::invalid_argument("generator letter needs an index");
    int idx = 0;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
      idx = idx * 10 + (text[i] - '0');
      ++i;
    }
    ls.push_back(Letter{idx, sign});
  }
  return Word(rank, std::move(ls));
}

inline std::string format_word(const Word& w) {
  if (w.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < w.length(); ++i) {
    if (i) s.push_back(' ');
    s.push_back(w[i].sign > 0 ? 'a' : 'A');
    s += std::to_string(w[i].gen);
  }
  return s;
}

}  // namespace fgc
