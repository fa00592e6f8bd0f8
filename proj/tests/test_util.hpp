#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spatial/utf8.hpp"

namespace spatial::testing {

// Random strings over a mixed alphabet: Arabic letters, alef/yeh variants,
// tashkeel, tatweel, joiners, proclitic letters, spaces, punctuation, Latin.
inline std::string random_text(std::mt19937& rng, std::size_t max_len) {
  static const std::u32string alphabet =
      U"\u0627\u0628\u062A\u0644\u0648\u0641\u0643\u0645\u0646\u064A\u0649\u0629"  // letters, ى, ة
      U"\u0623\u0625\u0622\u0671\u06A9\u06CC\u0633\u0639\u0631"              // alef/keheh/yeh variants
      U"\u064B\u064E\u064F\u0650\u0651\u0652\u0670\u0640\u200C\u200D"       // tashkeel, tatweel, joiners
      U"  \u060C.,\"()abZ7\n";
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::u32string s;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) s.push_back(alphabet[pick(rng)]);
  return utf8::encode(s);
}

inline std::string slice(const std::string& text, std::size_t start, std::size_t end) {
  const auto u = utf8::decode(text);
  return utf8::encode(std::u32string_view(u).substr(start, end - start));
}

// Word salad over spatial vocabulary: prepositions, locutions, sites,
// verbs, negation particles, temporal and abstract nouns, clitic forms.
inline std::string random_sentence(std::mt19937& rng, std::size_t max_words) {
  static const std::vector<std::string> vocab = {
      "على", "في", "إلى", "من", "عن", "بين", "عند", "حول", "قرب", "فوق", "تحت", "أمام", "خلف", "قبالة", "نحو",
      "في اتجاه", "في قلب", "على ضفة", "في محيط", "عن يمين", "إلى جانب", "في مقدمة", "حيث", "يميني", "اليمين",
      "المقعد", "البيت", "المدينة", "باريس", "الأشجار", "ذراعي", "هذه", "الشقة", "الطريق", "المدخل",
      "بالطائرة", "وبالباخرة", "للبيت", "والغابة", "ساعة", "الليل", "ردهة نفسي", "المرأة", "السيارة",
      "جلست", "سار", "عاد", "صعدت", "اتجهنا", "نظري", "لم", "لا", "كي لا", "ليس", "و", "كتاب", "جميل", "،", "."};
  std::uniform_int_distribution<std::size_t> len(0, max_words);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::string s;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) s += (i ? " " : "") + vocab[pick(rng)];
  return s;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::filesystem::path corpus_dir() {
  return std::filesystem::path(SPATIAL_SOURCE_DIR) / "corpus" / "sentences";
}

// Texts of the bundled sentence corpus, sorted by file name.
inline std::vector<std::pair<std::string, std::string>> corpus_texts() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir() / "text")) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : files) out.emplace_back(f.stem().string(), read_file(f));
  return out;
}

}  // namespace spatial::testing
