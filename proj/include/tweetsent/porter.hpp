#pragma once

// Porter suffix-stripping stemmer, following the original 1980 rule set
// (steps 1a through 5b, no later extensions such as "logi" or "bli").

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace tweetsent {

namespace porter_detail {

inline bool is_consonant(std::string_view w, std::size_t i) {
  switch (w[i]) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return false;
    case 'y':
      return i == 0 ? true : !is_consonant(w, i - 1);
    default:
      return true;
  }
}

/// m in the [C](VC)^m[V] decomposition.
inline std::size_t measure(std::string_view w) {
  std::size_t m = 0;
  bool prev_vowel = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const bool cons = is_consonant(w, i);
    if (cons && prev_vowel) ++m;
    prev_vowel = !cons;
  }
  return m;
}

inline bool contains_vowel(std::string_view w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!is_consonant(w, i)) return true;
  }
  return false;
}

// *d
inline bool ends_double_consonant(std::string_view w) {
  const std::size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o
inline bool ends_cvc(std::string_view w) {
  const std::size_t n = w.size();
  if (n < 3) return false;
  const char last = w[n - 1];
  return is_consonant(w, n - 3) && !is_consonant(w, n - 2) && is_consonant(w, n - 1) &&
         last != 'w' && last != 'x' && last != 'y';
}

enum class Condition { None, MeasureAbove0, MeasureAbove1, MeasureAbove1AndSOrT };

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
  Condition condition;
};

inline bool holds(Condition cond, std::string_view stem) {
  switch (cond) {
    case Condition::None: return true;
    case Condition::MeasureAbove0: return measure(stem) > 0;
    case Condition::MeasureAbove1: return measure(stem) > 1;
    case Condition::MeasureAbove1AndSOrT:
      return measure(stem) > 1 && !stem.empty() && (stem.back() == 's' || stem.back() == 't');
  }
  return false;
}

/// The first rule whose suffix matches decides the step: it is applied when its
/// condition holds, otherwise the word is left unchanged.
template <std::size_t N>
void apply_first_match(std::string& w, const std::array<Rule, N>& rules) {
  for (const auto& r : rules) {
    if (std::string_view(w).ends_with(r.suffix)) {
      const std::string_view stem(w.data(), w.size() - r.suffix.size());
      if (holds(r.condition, stem)) {
        w.resize(stem.size());
        w.append(r.replacement);
      }
      return;
    }
  }
}

inline void step1a(std::string& w) {
  std::string_view v(w);
  if (v.ends_with("sses")) {
    w.resize(w.size() - 2);
  } else if (v.ends_with("ies")) {
    w.resize(w.size() - 2);
  } else if (v.ends_with("ss")) {
    // unchanged
  } else if (v.ends_with("s")) {
    w.pop_back();
  }
}

inline void step1b(std::string& w) {
  std::string_view v(w);
  if (v.ends_with("eed")) {
    if (measure(v.substr(0, v.size() - 3)) > 0) w.pop_back();
    return;
  }
  std::size_t cut = 0;
  if (v.ends_with("ed")) {
    cut = 2;
  } else if (v.ends_with("ing")) {
    cut = 3;
  } else {
    return;
  }
  if (!contains_vowel(v.substr(0, v.size() - cut))) return;
  w.resize(w.size() - cut);
  v = w;
  if (v.ends_with("at") || v.ends_with("bl") || v.ends_with("iz")) {
    w.push_back('e');
  } else if (ends_double_consonant(v) && v.back() != 'l' && v.back() != 's' && v.back() != 'z') {
    w.pop_back();
  } else if (measure(v) == 1 && ends_cvc(v)) {
    w.push_back('e');
  }
}

inline void step1c(std::string& w) {
  if (!w.empty() && w.back() == 'y' && contains_vowel(std::string_view(w).substr(0, w.size() - 1))) {
    w.back() = 'i';
  }
}

using C = Condition;

inline constexpr std::array<Rule, 20> kStep2{{
    {"ational", "ate", C::MeasureAbove0},
    {"tional", "tion", C::MeasureAbove0},
    {"enci", "ence", C::MeasureAbove0},
    {"anci", "ance", C::MeasureAbove0},
    {"izer", "ize", C::MeasureAbove0},
    {"abli", "able", C::MeasureAbove0},
    {"alli", "al", C::MeasureAbove0},
    {"entli", "ent", C::MeasureAbove0},
    {"eli", "e", C::MeasureAbove0},
    {"ousli", "ous", C::MeasureAbove0},
    {"ization", "ize", C::MeasureAbove0},
    {"ation", "ate", C::MeasureAbove0},
    {"ator", "ate", C::MeasureAbove0},
    {"alism", "al", C::MeasureAbove0},
    {"iveness", "ive", C::MeasureAbove0},
    {"fulness", "ful", C::MeasureAbove0},
    {"ousness", "ous", C::MeasureAbove0},
    {"aliti", "al", C::MeasureAbove0},
    {"iviti", "ive", C::MeasureAbove0},
    {"biliti", "ble", C::MeasureAbove0},
}};

inline constexpr std::array<Rule, 7> kStep3{{
    {"icate", "ic", C::MeasureAbove0},
    {"ative", "", C::MeasureAbove0},
    {"alize", "al", C::MeasureAbove0},
    {"iciti", "ic", C::MeasureAbove0},
    {"ical", "ic", C::MeasureAbove0},
    {"ful", "", C::MeasureAbove0},
    {"ness", "", C::MeasureAbove0},
}};

inline constexpr std::array<Rule, 19> kStep4{{
    {"al", "", C::MeasureAbove1},
    {"ance", "", C::MeasureAbove1},
    {"ence", "", C::MeasureAbove1},
    {"er", "", C::MeasureAbove1},
    {"ic", "", C::MeasureAbove1},
    {"able", "", C::MeasureAbove1},
    {"ible", "", C::MeasureAbove1},
    {"ant", "", C::MeasureAbove1},
    {"ement", "", C::MeasureAbove1},
    {"ment", "", C::MeasureAbove1},
    {"ent", "", C::MeasureAbove1},
    {"ion", "", C::MeasureAbove1AndSOrT},
    {"ou", "", C::MeasureAbove1},
    {"ism", "", C::MeasureAbove1},
    {"ate", "", C::MeasureAbove1},
    {"iti", "", C::MeasureAbove1},
    {"ous", "", C::MeasureAbove1},
    {"ive", "", C::MeasureAbove1},
    {"ize", "", C::MeasureAbove1},
}};

inline void step5a(std::string& w) {
  if (w.empty() || w.back() != 'e') return;
  std::string_view stem(w.data(), w.size() - 1);
  const std::size_t m = measure(stem);
  if (m > 1 || (m == 1 && !ends_cvc(stem))) w.pop_back();
}

inline void step5b(std::string& w) {
  if (std::string_view(w).ends_with("ll") && measure(std::string_view(w).substr(0, w.size() - 1)) > 1) {
    w.pop_back();
  }
}

}  // namespace porter_detail

/// Stems a lowercase ASCII word. Anything else (non-ASCII, digits, uppercase,
/// empty) is returned unchanged.
inline std::string porter_stem(std::string_view word) {
  if (word.empty()) return std::string(word);
  for (char c : word) {
    if (c < 'a' || c > 'z') return std::string(word);
  }
  namespace d = porter_detail;
  std::string w(word);
  d::step1a(w);
  d::step1b(w);
  d::step1c(w);
  d::apply_first_match(w, d::kStep2);
  d::apply_first_match(w, d::kStep3);
  d::apply_first_match(w, d::kStep4);
  d::step5a(w);
  d::step5b(w);
  return w;
}

}  // namespace tweetsent
