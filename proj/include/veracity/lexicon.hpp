#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "veracity/corpus.hpp"
#include "veracity/feature_matrix.hpp"

namespace veracity {

struct DictionaryError : std::runtime_error {
  DictionaryError(std::size_t line, const std::string& what)
      : std::runtime_error("dictionary line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

struct Category {
  int id = 0;
  std::string name;
};

// Word-category lexicon. Patterns are lowercase words, or stems ending in '*'
// which match any token starting with the stem. A token resolves to exactly
// one entry: the exact word if present, otherwise the longest matching stem.
// One entry may list several categories.
class Dictionary {
 public:
  struct Entry {
    std::string pattern;
    std::vector<int> category_ids;
  };

  // Throws std::invalid_argument if the invariants do not hold.
  Dictionary(std::vector<Category> categories, std::vector<Entry> entries);

  const std::vector<Category>& categories() const { return categories_; }
  const std::vector<Entry>& entries() const { return entries_; }

  // Positions (into categories()) that a token counts toward; empty if none.
  const std::vector<std::size_t>& lookup(std::string_view token) const;

  // Stable 64-bit hash of the canonical content, as 16 hex digits.
  std::string fingerprint() const;

 private:
  std::vector<Category> categories_;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::vector<std::size_t>> exact_;
  std::unordered_map<std::string, std::vector<std::size_t>> stems_;
  std::size_t longest_stem_ = 0;
};

// Text format:
//   [%]
//   <id>\t<name>        one per category
//   %
//   <pattern>\t<id>[,<id>...]   ids may also be tab separated
// Blank lines and lines starting with '#' are ignored.
Dictionary parse_dictionary(std::istream& in);
Dictionary load_dictionary(const std::string& path);

struct TokenizerOptions {
  bool split_hyphens = true;
  bool numbers_as_words = true;
};

struct Tokenized {
  std::vector<std::string> tokens;
  int exclamations = 0;
  int at_signs = 0;
  int hash_signs = 0;
};

// Lowercased word tokens. Punctuation separates tokens; "@handle" and "#tag"
// are one token each; internal apostrophes are kept ("don't").
Tokenized tokenize(std::string_view text, const TokenizerOptions& opts = {});

struct FeatureOptions {
  TokenizerOptions tokenizer;
  // Counts of '@' and '#' instead of 0/1 presence indicators.
  bool symbol_counts = false;
};

struct FeatureVector {
  int word_quantity = 0;
  std::vector<double> category_pct;  // dictionary order
  double exclam = 0.0;               // exclamation marks per 100 words
  double has_hash = 0.0;
  double has_at = 0.0;
};

FeatureVector extract_features(std::string_view text, const Dictionary& dict, const FeatureOptions& opts = {});

// word_quantity, categories in dictionary order, exclam, has_hash, has_at.
std::vector<std::string> feature_columns(const Dictionary& dict);

FeatureMatrix extract_matrix(const std::vector<LabeledPost>& corpus, const Dictionary& dict,
                             const FeatureOptions& opts = {});

}  // namespace veracity
