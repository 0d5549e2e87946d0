#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace veracity {

enum class Veracity { correct, incorrect };

std::string_view to_string(Veracity v);
// Accepts "correct"/"incorrect" (any case) and "0"/"1".
std::optional<Veracity> parse_veracity(std::string_view s);

using Timestamp = std::chrono::sys_seconds;

// ISO-8601 "YYYY-MM-DD[T ]HH:MM[:SS][.fff][Z]", a bare date, or integer epoch seconds.
std::optional<Timestamp> parse_timestamp(std::string_view s);
std::string format_timestamp(Timestamp t);

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RawPost {
  std::string id;
  Timestamp timestamp{};
  std::string text;
  bool is_retweet = false;
  std::optional<Veracity> label;
  // Source ids when the post was produced by an earlier merge.
  std::vector<std::string> merged_from;
};

enum class CorpusFormat { csv, json };

// Posts come back sorted by timestamp (stable with respect to file order).
// Throws csv::ParseError naming the row for malformed rows and InputError for
// duplicate ids or unreadable files.
std::vector<RawPost> load_corpus(const std::string& path, CorpusFormat format);
std::vector<RawPost> load_corpus(const std::string& path);  // format from extension
std::vector<RawPost> parse_corpus_csv(std::istream& in);
std::vector<RawPost> parse_corpus_json(std::istream& in);

// Fact-check file: CSV with header id,verdict.
std::map<std::string, Veracity> load_fact_checks(const std::string& path);
// One id per row; an optional "id" header is skipped.
std::vector<std::string> load_id_list(const std::string& path);
// One merge group per row, ids in message order.
std::vector<std::vector<std::string>> load_merge_map(const std::string& path);

// Removes http(s):// and www. tokens, then collapses whitespace runs to single
// spaces and trims both ends.
std::string strip_links(std::string_view text);

bool is_retweet_text(std::string_view text);

// Whitespace-token counts of each span between matched double quotes
// (straight or curly).
std::vector<int> quoted_span_word_counts(std::string_view text);

bool ends_with_continuation(std::string_view text, bool unterminated_counts);

struct ScreeningConfig {
  int quote_word_limit = 6;
  std::chrono::seconds merge_window{600};
  bool drop_retweets = true;
  bool drop_quotes = true;
  bool drop_duplicates = true;
  bool drop_link_only = true;
  bool merge_continuations = true;
  // Treat a text that does not end in sentence punctuation as a continuation.
  bool unterminated_continues = false;
  // Ids removed outright (counted as removed_other).
  std::vector<std::string> exclude_ids;
  // Explicit merges, applied before the continuation heuristic.
  std::vector<std::vector<std::string>> merge_groups;
};

struct LabeledPost {
  std::string id;
  Timestamp timestamp{};
  std::string text_clean;
  Veracity label = Veracity::correct;
  std::vector<std::string> merged_from;
};

struct ScreeningReport {
  std::size_t input = 0;
  std::size_t removed_retweets = 0;
  std::size_t removed_quotes = 0;
  std::size_t removed_duplicates = 0;
  std::size_t removed_link_only = 0;
  std::size_t removed_other = 0;
  std::size_t merged_absorbed = 0;
  std::size_t retained = 0;

  // id -> reason, in input order.
  std::vector<std::pair<std::string, std::string>> removals;
  // Merges refused because the parts carry different labels, or because a
  // merge-map group referenced posts that were not retained.
  std::vector<std::string> merge_notes;

  bool balanced() const {
    return retained + removed_retweets + removed_quotes + removed_duplicates + removed_link_only +
               removed_other + merged_absorbed ==
           input;
  }
};

struct ScreeningResult {
  std::vector<LabeledPost> posts;
  ScreeningReport report;
};

// Total: every input post is either retained, removed with a reason, or
// absorbed into a merge. Unlabeled posts default to correct.
ScreeningResult screen(const std::vector<RawPost>& posts,
                       const std::map<std::string, Veracity>& labels,
                       const ScreeningConfig& cfg);

// Screened posts as raw posts, so a screened corpus can be fed back in.
std::vector<RawPost> to_raw(const std::vector<LabeledPost>& posts);

double base_rate(const std::vector<LabeledPost>& corpus);

void write_screened_csv(std::ostream& out, const std::vector<LabeledPost>& posts);

}  // namespace veracity
