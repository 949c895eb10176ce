#include "word.hpp"

#include <algorithm>

namespace relpres {

SubWord subword_inverse(const SubWord& w) {
  SubWord out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->gen, -it->exp});
  return out;
}

long long subword_letter_count(const SubWord& w) {
  long long n = 0;
  for (const auto& s : w) n += s.exp < 0 ? -s.exp : s.exp;
  return n;
}

Letter letter_inverse(const Letter& l) {
  Letter out = l;
  if (l.kind == LetterKind::Subgroup) {
    out.element = subword_inverse(l.element);
  } else {
    out.sign = -l.sign;
  }
  return out;
}

namespace {

// positive exponents sort before negative, then by magnitude
int compare_exp(long long a, long long b) {
  const int sa = a < 0 ? 1 : 0, sb = b < 0 ? 1 : 0;
  if (sa != sb) return sa < sb ? -1 : 1;
  const long long ma = a < 0 ? -a : a, mb = b < 0 ? -b : b;
  if (ma != mb) return ma < mb ? -1 : 1;
  return 0;
}

int compare_subwords(const SubWord& a, const SubWord& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].gen != b[i].gen) return a[i].gen < b[i].gen ? -1 : 1;
    if (int c = compare_exp(a[i].exp, b[i].exp)) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

}  // namespace

int compare_letters(const Letter& a, const Letter& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
  switch (a.kind) {
    case LetterKind::Subgroup: {
      if (int c = a.lambda.compare(b.lambda)) return c < 0 ? -1 : 1;
      return compare_subwords(a.element, b.element);
    }
    case LetterKind::XGen: {
      if (int c = a.name.compare(b.name)) return c < 0 ? -1 : 1;
      if (a.sign != b.sign) return a.sign > b.sign ? -1 : 1;
      return 0;
    }
    case LetterKind::Stable: {
      if (a.sign != b.sign) return a.sign > b.sign ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

Word invert(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(letter_inverse(*it));
  return out;
}

int compare_words(const Word& a, const Word& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = compare_letters(a[i], b[i])) return c;
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

std::vector<Word> cyclic_permutations(const Word& w) {
  if (w.empty()) return {Word{}};
  std::vector<Word> out;
  out.reserve(w.size());
  for (std::size_t r = 0; r < w.size(); ++r) out.push_back(rotated(w, r));
  return out;
}

Word rotated(const Word& w, std::size_t r) {
  if (w.empty()) return w;
  r %= w.size();
  Word out;
  out.reserve(w.size());
  out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(r), w.end());
  out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(r));
  return out;
}

std::size_t min_rotation_index(const Word& w) {
  if (w.size() < 2) return 0;
  std::size_t best = 0;
  Word best_rot = w;
  for (std::size_t r = 1; r < w.size(); ++r) {
    Word cand = rotated(w, r);
    if (compare_words(cand, best_rot) < 0) {
      best = r;
      best_rot = std::move(cand);
    }
  }
  return best;
}

std::string word_key(const Word& w) {
  std::string k;
  k.reserve(w.size() * 8);
  for (const auto& l : w) {
    switch (l.kind) {
      case LetterKind::XGen:
        k += l.sign > 0 ? 'x' : 'X';
        k += l.name;
        k += '\x01';
        break;
      case LetterKind::Stable:
        k += l.sign > 0 ? 't' : 'T';
        k += '\x01';
        break;
      case LetterKind::Subgroup:
        k += 's';
        k += l.lambda;
        k += '\x02';
        for (const auto& s : l.element) {
          k += std::to_string(s.gen);
          k += '^';
          k += std::to_string(s.exp);
          k += ',';
        }
        k += '\x01';
        break;
    }
  }
  return k;
}

}  // namespace relpres
