#include "veracity/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

namespace veracity {

namespace {

std::string_view trim(std::string_view s) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::optional<int> parse_int(std::string_view s) {
  s = trim(s);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

const std::vector<std::size_t> kNoCategories;

}  // namespace

Dictionary::Dictionary(std::vector<Category> categories, std::vector<Entry> entries)
    : categories_(std::move(categories)), entries_(std::move(entries)) {
  if (categories_.empty()) throw std::invalid_argument("dictionary has no categories");
  std::unordered_map<int, std::size_t> position;
  for (std::size_t i = 0; i < categories_.size(); ++i)
    if (!position.emplace(categories_[i].id, i).second)
      throw std::invalid_argument(fmt::format("category id {} declared twice", categories_[i].id));

  for (auto& e : entries_) {
    e.pattern = lower(e.pattern);
    if (e.pattern.empty()) throw std::invalid_argument("empty pattern");
    std::vector<std::size_t> cats;
    for (int id : e.category_ids) {
      auto it = position.find(id);
      if (it == position.end())
        throw std::invalid_argument(fmt::format("pattern '{}' references unknown category {}", e.pattern, id));
      if (std::find(cats.begin(), cats.end(), it->second) == cats.end()) cats.push_back(it->second);
    }
    bool stem = e.pattern.back() == '*';
    auto key = stem ? e.pattern.substr(0, e.pattern.size() - 1) : e.pattern;
    auto& table = stem ? stems_ : exact_;
    if (!table.emplace(key, std::move(cats)).second)
      throw std::invalid_argument(fmt::format("duplicate pattern '{}'", e.pattern));
    if (stem) longest_stem_ = std::max(longest_stem_, key.size());
  }
}

const std::vector<std::size_t>& Dictionary::lookup(std::string_view token) const {
  if (auto it = exact_.find(std::string(token)); it != exact_.end()) return it->second;
  if (stems_.empty()) return kNoCategories;
  std::string key(token.substr(0, std::min(token.size(), longest_stem_)));
  for (;;) {
    if (auto it = stems_.find(key); it != stems_.end()) return it->second;
    if (key.empty()) break;
    key.pop_back();
  }
  return kNoCategories;
}

std::string Dictionary::fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& c : categories_) feed(fmt::format("{}\t{}\n", c.id, c.name));
  feed("%\n");
  for (const auto& e : entries_) {
    feed(e.pattern);
    for (int id : e.category_ids) feed(fmt::format("\t{}", id));
    feed("\n");
  }
  return fmt::format("{:016x}", h);
}

Dictionary parse_dictionary(std::istream& in) {
  std::vector<Category> categories;
  std::vector<Dictionary::Entry> entries;
  std::set<int> declared;
  std::unordered_set<std::string> patterns;

  enum class Section { start, header, body } section = Section::start;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    if (text == "%") {
      if (section == Section::start && categories.empty())
        section = Section::header;
      else if (section == Section::body)
        throw DictionaryError(lineno, "unexpected '%' in body");
      else
        section = Section::body;
      continue;
    }
    if (section != Section::body) {
      section = Section::header;
      auto tab = text.find_first_of("\t ");
      if (tab == std::string_view::npos) throw DictionaryError(lineno, "expected '<id><TAB><name>'");
      auto id = parse_int(text.substr(0, tab));
      auto name = trim(text.substr(tab + 1));
      if (!id || name.empty()) throw DictionaryError(lineno, "expected '<id><TAB><name>'");
      if (!declared.insert(*id).second) throw DictionaryError(lineno, fmt::format("category {} declared twice", *id));
      categories.push_back({*id, std::string(name)});
      continue;
    }
    auto tab = text.find('\t');
    if (tab == std::string_view::npos) throw DictionaryError(lineno, "expected '<pattern><TAB><ids>'");
    Dictionary::Entry entry;
    entry.pattern = lower(trim(text.substr(0, tab)));
    std::string_view ids = text.substr(tab + 1);
    std::size_t pos = 0;
    while (pos <= ids.size()) {
      auto end = ids.find_first_of(",\t ", pos);
      if (end == std::string_view::npos) end = ids.size();
      auto field = trim(ids.substr(pos, end - pos));
      if (!field.empty()) {
        auto id = parse_int(field);
        if (!id) throw DictionaryError(lineno, fmt::format("bad category id '{}'", field));
        if (!declared.count(*id)) throw DictionaryError(lineno, fmt::format("unknown category id {}", *id));
        entry.category_ids.push_back(*id);
      }
      pos = end + 1;
    }
    if (entry.pattern.empty() || entry.category_ids.empty())
      throw DictionaryError(lineno, "entry needs a pattern and at least one category");
    if (!patterns.insert(entry.pattern).second)
      throw DictionaryError(lineno, fmt::format("duplicate pattern '{}'", entry.pattern));
    entries.push_back(std::move(entry));
  }
  if (categories.empty()) throw DictionaryError(lineno, "no categories declared");
  return Dictionary(std::move(categories), std::move(entries));
}

Dictionary load_dictionary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open dictionary " + path);
  return parse_dictionary(in);
}

Tokenized tokenize(std::string_view text, const TokenizerOptions& opts) {
  Tokenized out;
  std::string current;

  auto flush = [&] {
    while (!current.empty() && current.back() == '\'') current.pop_back();
    if (!current.empty()) {
      bool digits_only = std::all_of(current.begin(), current.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == ',';
      });
      if (opts.numbers_as_words || !digits_only) out.tokens.push_back(current);
    }
    current.clear();
  };
  auto is_word_byte = [](unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; };

  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto c = static_cast<unsigned char>(text[i]);

    // Three-byte UTF-8 punctuation in U+2010..U+206F.
    if (c == 0xE2 && i + 2 < n && static_cast<unsigned char>(text[i + 1]) == 0x80) {
      auto c3 = static_cast<unsigned char>(text[i + 2]);
      i += 2;
      if (c3 == 0x99 || c3 == 0x98) {  // curly apostrophes
        if (!current.empty() && i + 1 < n && is_word_byte(static_cast<unsigned char>(text[i + 1])))
          current.push_back('\'');
        else
          flush();
      } else {
        flush();
      }
      continue;
    }

    if (c == '@' || c == '#') {
      (c == '@' ? out.at_signs : out.hash_signs)++;
      if (current.empty() && i + 1 < n && is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
        current.push_back(static_cast<char>(c));
      } else {
        flush();
      }
      continue;
    }
    if (c == '!') ++out.exclamations;

    if (is_word_byte(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
      continue;
    }
    const bool next_is_word = i + 1 < n && is_word_byte(static_cast<unsigned char>(text[i + 1]));
    if (c == '\'' && !current.empty() && next_is_word) {
      current.push_back('\'');
      continue;
    }
    if (c == '-' && !opts.split_hyphens && !current.empty() && next_is_word) {
      current.push_back('-');
      continue;
    }
    if ((c == '.' || c == ',') && !current.empty() && std::isdigit(static_cast<unsigned char>(current.back())) &&
        i + 1 < n && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
      current.push_back(static_cast<char>(c));
      continue;
    }
    flush();
  }
  flush();
  return out;
}

FeatureVector extract_features(std::string_view text, const Dictionary& dict, const FeatureOptions& opts) {
  const auto tok = tokenize(text, opts.tokenizer);
  FeatureVector fv;
  fv.word_quantity = static_cast<int>(tok.tokens.size());
  fv.category_pct.assign(dict.categories().size(), 0.0);
  if (fv.word_quantity > 0) {
    std::vector<int> hits(dict.categories().size(), 0);
    for (const auto& t : tok.tokens)
      for (std::size_t c : dict.lookup(t)) ++hits[c];
    const double scale = 100.0 / fv.word_quantity;
    for (std::size_t c = 0; c < hits.size(); ++c) fv.category_pct[c] = hits[c] * scale;
    fv.exclam = tok.exclamations * scale;
  }
  if (opts.symbol_counts) {
    fv.has_at = tok.at_signs;
    fv.has_hash = tok.hash_signs;
  } else {
    fv.has_at = tok.at_signs > 0 ? 1.0 : 0.0;
    fv.has_hash = tok.hash_signs > 0 ? 1.0 : 0.0;
  }
  return fv;
}

std::vector<std::string> feature_columns(const Dictionary& dict) {
  std::vector<std::string> cols{"word_quantity"};
  for (const auto& c : dict.categories()) cols.push_back(c.name);
  cols.insert(cols.end(), {"exclam", "has_hash", "has_at"});
  std::set<std::string> unique(cols.begin(), cols.end());
  if (unique.size() != cols.size())
    throw std::invalid_argument("dictionary category names collide with each other or with built-in columns");
  return cols;
}

FeatureMatrix extract_matrix(const std::vector<LabeledPost>& corpus, const Dictionary& dict,
                             const FeatureOptions& opts) {
  if (corpus.empty()) throw InputError("cannot build a feature matrix from an empty corpus");
  FeatureMatrix m;
  m.columns = feature_columns(dict);
  const auto n = static_cast<Eigen::Index>(corpus.size());
  m.values.resize(n, static_cast<Eigen::Index>(m.columns.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& post = corpus[static_cast<std::size_t>(i)];
    auto fv = extract_features(post.text_clean, dict, opts);
    Eigen::Index j = 0;
    m.values(i, j++) = fv.word_quantity;
    for (double pct : fv.category_pct) m.values(i, j++) = pct;
    m.values(i, j++) = fv.exclam;
    m.values(i, j++) = fv.has_hash;
    m.values(i, j++) = fv.has_at;
    m.ids.push_back(post.id);
    m.labels.push_back(post.label == Veracity::incorrect ? 1 : 0);
  }
  return m;
}

}  // namespace veracity
