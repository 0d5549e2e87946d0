#include "veracity/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>
#include "json.hpp"

#include "veracity/csv.hpp"

namespace veracity {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) return false;
  return true;
}

bool parse_bool(std::string_view s) {
  auto v = lower(trim(s));
  return v == "1" || v == "true" || v == "yes" || v == "t";
}

std::vector<std::string> split_ids(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(';', start);
    if (end == std::string_view::npos) end = s.size();
    auto id = trim(s.substr(start, end - start));
    if (!id.empty()) out.emplace_back(id);
    start = end + 1;
  }
  return out;
}

void sort_and_check(std::vector<RawPost>& posts) {
  std::unordered_set<std::string> seen;
  for (const auto& p : posts)
    if (!seen.insert(p.id).second) throw InputError("duplicate post id '" + p.id + "'");
  std::stable_sort(posts.begin(), posts.end(),
                   [](const RawPost& a, const RawPost& b) { return a.timestamp < b.timestamp; });
}

}  // namespace

std::string_view to_string(Veracity v) {
  return v == Veracity::incorrect ? "incorrect" : "correct";
}

std::optional<Veracity> parse_veracity(std::string_view s) {
  auto v = lower(trim(s));
  if (v == "incorrect" || v == "1") return Veracity::incorrect;
  if (v == "correct" || v == "0") return Veracity::correct;
  return std::nullopt;
}

std::optional<Timestamp> parse_timestamp(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;

  auto all_digits = std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  if (all_digits && s.size() > 8) {
    long long secs = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), secs);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return Timestamp{std::chrono::seconds{secs}};
  }

  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  auto field = [&](std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, out);
    return ec == std::errc{} && ptr == s.data() + pos + len;
  };
  if (!field(0, 4, y) || s.size() < 10 || s[4] != '-' || !field(5, 2, mo) || s[7] != '-' || !field(8, 2, d))
    return std::nullopt;
  std::size_t pos = 10;
  if (pos < s.size()) {
    if (s[pos] != 'T' && s[pos] != ' ') return std::nullopt;
    if (!field(pos + 1, 2, h) || pos + 3 >= s.size() || s[pos + 3] != ':' || !field(pos + 4, 2, mi))
      return std::nullopt;
    pos += 6;
    if (pos < s.size() && s[pos] == ':') {
      if (!field(pos + 1, 2, sec)) return std::nullopt;
      pos += 3;
    }
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    if (pos < s.size() && (s[pos] == 'Z' || s[pos] == 'z')) ++pos;
    if (pos != s.size()) return std::nullopt;
  }
  using namespace std::chrono;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) return std::nullopt;
  return Timestamp{sys_days{ymd}} + hours{h} + minutes{mi} + seconds{sec};
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  auto day_point = floor<days>(t);
  year_month_day ymd{day_point};
  hh_mm_ss hms{t - day_point};
  return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                     hms.hours().count(), hms.minutes().count(), hms.seconds().count());
}

std::vector<RawPost> parse_corpus_csv(std::istream& in) {
  csv::Reader reader(in);
  csv::Row header;
  if (!reader.next(header)) return {};
  for (auto& h : header) h = lower(trim(h));
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);

  const int id_col = csv::column_index(header, "id");
  const int ts_col = csv::column_index(header, "timestamp");
  const int text_col = csv::column_index(header, "text");
  const int rt_col = csv::column_index(header, "is_retweet");
  const int label_col = csv::column_index(header, "label");
  const int merged_col = csv::column_index(header, "merged_from");
  if (id_col < 0 || ts_col < 0 || text_col < 0)
    throw csv::ParseError(1, "header must contain id, timestamp and text columns");

  std::vector<RawPost> posts;
  csv::Row row;
  while (reader.next(row)) {
    const auto rown = reader.row_number();
    if (row.size() == 1 && row[0].empty()) continue;
    auto need = [&](int col, const char* name) -> const std::string& {
      if (col >= static_cast<int>(row.size()))
        throw csv::ParseError(rown, fmt::format("missing '{}' column", name));
      return row[static_cast<std::size_t>(col)];
    };
    RawPost post;
    post.id = std::string(trim(need(id_col, "id")));
    if (post.id.empty()) throw csv::ParseError(rown, "empty id");
    const auto& ts = need(ts_col, "timestamp");
    auto parsed = parse_timestamp(ts);
    if (!parsed) throw csv::ParseError(rown, fmt::format("bad timestamp '{}'", ts));
    post.timestamp = *parsed;
    post.text = need(text_col, "text");
    if (rt_col >= 0 && rt_col < static_cast<int>(row.size())) post.is_retweet = parse_bool(row[rt_col]);
    if (label_col >= 0 && label_col < static_cast<int>(row.size()) && !trim(row[label_col]).empty()) {
      post.label = parse_veracity(row[label_col]);
      if (!post.label) throw csv::ParseError(rown, fmt::format("bad label '{}'", row[label_col]));
    }
    if (merged_col >= 0 && merged_col < static_cast<int>(row.size()))
      post.merged_from = split_ids(row[merged_col]);
    posts.push_back(std::move(post));
  }
  sort_and_check(posts);
  return posts;
}

std::vector<RawPost> parse_corpus_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw csv::ParseError(0, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw csv::ParseError(0, "JSON corpus must be an array of posts");
  std::vector<RawPost> posts;
  std::size_t index = 0;
  for (const auto& item : doc) {
    ++index;
    auto str = [&](const char* key) -> std::string {
      if (!item.contains(key)) throw csv::ParseError(index, fmt::format("missing '{}'", key));
      const auto& v = item.at(key);
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_integer()) return std::to_string(v.get<long long>());
      throw csv::ParseError(index, fmt::format("'{}' must be a string", key));
    };
    RawPost post;
    post.id = str("id");
    auto ts = parse_timestamp(str("timestamp"));
    if (!ts) throw csv::ParseError(index, "bad timestamp");
    post.timestamp = *ts;
    post.text = str("text");
    if (item.contains("is_retweet")) {
      const auto& v = item.at("is_retweet");
      post.is_retweet = v.is_boolean() ? v.get<bool>() : parse_bool(v.dump());
    }
    if (item.contains("label") && !item.at("label").is_null()) {
      post.label = parse_veracity(item.at("label").is_string() ? item.at("label").get<std::string>()
                                                               : item.at("label").dump());
      if (!post.label) throw csv::ParseError(index, "bad label");
    }
    posts.push_back(std::move(post));
  }
  sort_and_check(posts);
  return posts;
}

std::vector<RawPost> load_corpus(const std::string& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open corpus file " + path);
  return format == CorpusFormat::json ? parse_corpus_json(in) : parse_corpus_csv(in);
}

std::vector<RawPost> load_corpus(const std::string& path) {
  auto ext = lower(path.substr(path.find_last_of('.') == std::string::npos ? path.size() : path.find_last_of('.')));
  return load_corpus(path, ext == ".json" ? CorpusFormat::json : CorpusFormat::csv);
}

std::map<std::string, Veracity> load_fact_checks(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open fact-check file " + path);
  csv::Reader reader(in);
  csv::Row header;
  if (!reader.next(header)) return {};
  for (auto& h : header) h = lower(trim(h));
  const int id_col = csv::column_index(header, "id");
  const int verdict_col = csv::column_index(header, "verdict");
  if (id_col < 0 || verdict_col < 0) throw csv::ParseError(1, "fact-check header must be id,verdict");
  std::map<std::string, Veracity> out;
  csv::Row row;
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    if (static_cast<int>(row.size()) <= std::max(id_col, verdict_col))
      throw csv::ParseError(reader.row_number(), "missing column");
    auto v = parse_veracity(row[verdict_col]);
    if (!v) throw csv::ParseError(reader.row_number(), "unknown verdict '" + row[verdict_col] + "'");
    out[std::string(trim(row[id_col]))] = *v;
  }
  return out;
}

std::vector<std::string> load_id_list(const std::string& path) {
  std::vector<std::string> ids;
  for (const auto& row : csv::read_file(path)) {
    auto id = std::string(trim(row.at(0)));
    if (id.empty() || id[0] == '#') continue;
    if (ids.empty() && lower(id) == "id") continue;
    ids.push_back(id);
  }
  return ids;
}

std::vector<std::vector<std::string>> load_merge_map(const std::string& path) {
  std::vector<std::vector<std::string>> groups;
  for (const auto& row : csv::read_file(path)) {
    std::vector<std::string> group;
    for (const auto& cell : row) {
      auto id = trim(cell);
      if (!id.empty()) group.emplace_back(id);
    }
    if (group.empty() || group[0][0] == '#') continue;
    if (group.size() >= 2) groups.push_back(std::move(group));
  }
  return groups;
}

std::string strip_links(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) break;
    auto token = text.substr(start, i - start);
    auto low = lower(token);
    if (low.find("http://") != std::string::npos || low.find("https://") != std::string::npos ||
        low.find("www.") != std::string::npos)
      continue;
    if (!out.empty()) out.push_back(' ');
    out.append(token);
  }
  return out;
}

bool is_retweet_text(std::string_view text) {
  return starts_with_ci(trim(text), "rt @");
}

std::vector<int> quoted_span_word_counts(std::string_view text) {
  // Opening: " or U+201C. Closing: " or U+201D.
  static constexpr std::string_view kLeft = "\xE2\x80\x9C";
  static constexpr std::string_view kRight = "\xE2\x80\x9D";
  auto quote_at = [&](std::size_t i, bool opening) -> std::size_t {
    if (text[i] == '"') return 1;
    if (text.substr(i, 3) == (opening ? kLeft : kRight)) return 3;
    return 0;
  };
  auto words = [](std::string_view span) {
    int n = 0;
    bool in_word = false;
    for (char c : span) {
      bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
      if (!space && !in_word) ++n;
      in_word = !space;
    }
    return n;
  };

  std::vector<int> counts;
  std::size_t i = 0;
  while (i < text.size()) {
    auto open = quote_at(i, true);
    if (!open) {
      ++i;
      continue;
    }
    std::size_t j = i + open;
    std::size_t close = 0;
    while (j < text.size() && !(close = quote_at(j, false))) ++j;
    if (j >= text.size()) break;  // unmatched opening quote
    counts.push_back(words(text.substr(i + open, j - i - open)));
    i = j + close;
  }
  return counts;
}

bool ends_with_continuation(std::string_view text, bool unterminated_counts) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.size() >= 3 && text.substr(text.size() - 3) == "\xE2\x80\xA6") return true;
  if (text.size() >= 2 && text.substr(text.size() - 2) == "..") return true;
  if (!unterminated_counts) return false;
  char last = text.back();
  if (last == '.' || last == '!' || last == '?' || last == '"') return false;
  if (text.size() >= 3 && text.substr(text.size() - 3) == "\xE2\x80\x9D") return false;
  return true;
}

ScreeningResult screen(const std::vector<RawPost>& input, const std::map<std::string, Veracity>& labels,
                       const ScreeningConfig& cfg) {
  ScreeningResult result;
  auto& report = result.report;
  report.input = input.size();

  std::vector<const RawPost*> order;
  order.reserve(input.size());
  for (const auto& p : input) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(),
                   [](const RawPost* a, const RawPost* b) { return a->timestamp < b->timestamp; });

  const std::set<std::string> excluded(cfg.exclude_ids.begin(), cfg.exclude_ids.end());
  std::unordered_set<std::string> seen_texts;
  std::vector<LabeledPost> kept;

  auto remove = [&](const RawPost& p, std::size_t& counter, const char* reason) {
    ++counter;
    report.removals.emplace_back(p.id, reason);
  };

  for (const RawPost* p : order) {
    if (excluded.count(p->id)) {
      remove(*p, report.removed_other, "excluded");
      continue;
    }
    if (cfg.drop_retweets && (p->is_retweet || is_retweet_text(p->text))) {
      remove(*p, report.removed_retweets, "retweet");
      continue;
    }
    if (cfg.drop_quotes) {
      auto spans = quoted_span_word_counts(p->text);
      if (std::any_of(spans.begin(), spans.end(), [&](int n) { return n > cfg.quote_word_limit; })) {
        remove(*p, report.removed_quotes, "quote");
        continue;
      }
    }
    std::string clean = strip_links(p->text);
    if (cfg.drop_link_only && clean.empty()) {
      remove(*p, report.removed_link_only, "link_only");
      continue;
    }
    if (cfg.drop_duplicates && !seen_texts.insert(clean).second) {
      remove(*p, report.removed_duplicates, "duplicate");
      continue;
    }

    LabeledPost lp;
    lp.id = p->id;
    lp.timestamp = p->timestamp;
    lp.text_clean = std::move(clean);
    if (auto it = labels.find(p->id); it != labels.end())
      lp.label = it->second;
    else
      lp.label = p->label.value_or(Veracity::correct);
    lp.merged_from = p->merged_from.empty() ? std::vector<std::string>{p->id} : p->merged_from;
    kept.push_back(std::move(lp));
  }

  auto absorb = [&](LabeledPost& head, LabeledPost& tail) {
    if (!tail.text_clean.empty()) {
      if (!head.text_clean.empty()) head.text_clean.push_back(' ');
      head.text_clean += tail.text_clean;
    }
    head.merged_from.insert(head.merged_from.end(), tail.merged_from.begin(), tail.merged_from.end());
    ++report.merged_absorbed;
  };

  // Explicit merge groups.
  if (!cfg.merge_groups.empty()) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < kept.size(); ++i) index[kept[i].id] = i;
    std::vector<bool> absorbed(kept.size(), false);
    for (const auto& group : cfg.merge_groups) {
      std::vector<std::size_t> members;
      bool ok = true;
      for (const auto& id : group) {
        auto it = index.find(id);
        if (it == index.end() || absorbed[it->second]) {
          report.merge_notes.push_back(fmt::format("merge group starting at {}: post {} not retained", group[0], id));
          ok = false;
          break;
        }
        members.push_back(it->second);
      }
      if (!ok) continue;
      bool same_label = std::all_of(members.begin(), members.end(),
                                    [&](std::size_t m) { return kept[m].label == kept[members[0]].label; });
      if (!same_label) {
        report.merge_notes.push_back(fmt::format("merge group starting at {}: labels differ", group[0]));
        continue;
      }
      for (std::size_t k = 1; k < members.size(); ++k) {
        absorb(kept[members[0]], kept[members[k]]);
        absorbed[members[k]] = true;
      }
    }
    std::vector<LabeledPost> compact;
    for (std::size_t i = 0; i < kept.size(); ++i)
      if (!absorbed[i]) compact.push_back(std::move(kept[i]));
    kept = std::move(compact);
  }

  // Continuation heuristic: adjacent posts, same label, within the window.
  if (cfg.merge_continuations && !kept.empty()) {
    std::vector<LabeledPost> merged;
    Timestamp last_part_time = kept[0].timestamp;
    std::string last_part_text = kept[0].text_clean;
    merged.push_back(std::move(kept[0]));
    for (std::size_t i = 1; i < kept.size(); ++i) {
      auto& head = merged.back();
      auto& next = kept[i];
      bool candidate = ends_with_continuation(last_part_text, cfg.unterminated_continues) &&
                       next.timestamp - last_part_time <= cfg.merge_window;
      if (candidate && next.label != head.label) {
        report.merge_notes.push_back(fmt::format("not merging {} into {}: labels differ", next.id, head.id));
        candidate = false;
      }
      last_part_time = next.timestamp;
      last_part_text = next.text_clean;
      if (candidate)
        absorb(head, next);
      else
        merged.push_back(std::move(next));
    }
    kept = std::move(merged);
  }

  report.retained = kept.size();
  result.posts = std::move(kept);
  return result;
}

std::vector<RawPost> to_raw(const std::vector<LabeledPost>& posts) {
  std::vector<RawPost> out;
  out.reserve(posts.size());
  for (const auto& p : posts) {
    RawPost r;
    r.id = p.id;
    r.timestamp = p.timestamp;
    r.text = p.text_clean;
    r.label = p.label;
    r.merged_from = p.merged_from;
    out.push_back(std::move(r));
  }
  return out;
}

double base_rate(const std::vector<LabeledPost>& corpus) {
  if (corpus.empty()) throw InputError("base rate of an empty corpus");
  auto incorrect = std::count_if(corpus.begin(), corpus.end(),
                                 [](const LabeledPost& p) { return p.label == Veracity::incorrect; });
  return static_cast<double>(incorrect) / static_cast<double>(corpus.size());
}

void write_screened_csv(std::ostream& out, const std::vector<LabeledPost>& posts) {
  csv::write_row(out, {"id", "timestamp", "text", "label", "merged_from"});
  for (const auto& p : posts) {
    std::string merged;
    for (std::size_t i = 0; i < p.merged_from.size(); ++i) {
      if (i) merged.push_back(';');
      merged += p.merged_from[i];
    }
    csv::write_row(out, {p.id, format_timestamp(p.timestamp), p.text_clean, std::string(to_string(p.label)), merged});
  }
}

}  // namespace veracity
