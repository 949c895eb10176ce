#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"

namespace relpres {

// A subgroup element is carried inside a letter as a word over that
// subgroup's declared generators, in syllable form. Oracles own the
// canonicalization; everything here treats it as opaque ordered data.
struct SubSyl {
  int gen = 0;         // index into the subgroup's generator list
  long long exp = 0;   // nonzero
  friend bool operator==(const SubSyl&, const SubSyl&) = default;
};
using SubWord = std::vector<SubSyl>;

// Formal inverse (reverse and negate). Canonical if the input was.
SubWord subword_inverse(const SubWord& w);
long long subword_letter_count(const SubWord& w);  // sum of |exp|

enum class LetterKind : uint8_t { Subgroup = 0, XGen = 1, Stable = 2 };

struct Letter {
  LetterKind kind = LetterKind::XGen;
  int sign = 1;          // XGen / Stable
  std::string name;      // XGen
  std::string lambda;    // Subgroup
  SubWord element;       // Subgroup, canonical, never the identity

  static Letter x(std::string n, int s) {
    Letter l; l.kind = LetterKind::XGen; l.name = std::move(n); l.sign = s; return l;
  }
  static Letter stable(int s) {
    Letter l; l.kind = LetterKind::Stable; l.sign = s; return l;
  }
  static Letter sub(std::string lam, SubWord e) {
    Letter l; l.kind = LetterKind::Subgroup; l.lambda = std::move(lam);
    l.element = std::move(e); return l;
  }

  friend bool operator==(const Letter&, const Letter&) = default;
};

Letter letter_inverse(const Letter& l);

// Total order used for canonical cyclic rotations and deterministic
// enumeration: Subgroup < XGen < Stable; within a kind, name/lambda
// ascending, positive sign before negative, elements by syllable sequence
// (gen ascending, positive exponent before negative, small magnitude first).
int compare_letters(const Letter& a, const Letter& b);

using Word = std::vector<Letter>;

Word invert(const Word& w);
int compare_words(const Word& a, const Word& b);  // lexicographic, shorter-first on prefix ties

// All rotations of w, starting with w itself; {empty} for the empty word.
std::vector<Word> cyclic_permutations(const Word& w);

// Index r minimizing the rotation w[r..]+w[..r] under compare_words.
std::size_t min_rotation_index(const Word& w);
Word rotated(const Word& w, std::size_t r);

// Compact injective encoding, used as a hash/dedup key.
std::string word_key(const Word& w);

}  // namespace relpres
