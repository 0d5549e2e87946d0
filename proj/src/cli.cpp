#include "veracity/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "veracity/corpus.hpp"
#include "veracity/csv.hpp"
#include "veracity/eval.hpp"
#include "veracity/glm.hpp"
#include "veracity/lexicon.hpp"
#include "veracity/model_io.hpp"
#include "veracity/stats.hpp"

namespace veracity::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Options {
  std::string config;
  std::uint64_t seed = 1;
  std::string out_dir = ".";

  std::string corpus;
  std::string format;
  std::string labels;
  std::string exclude;
  std::string merge_map;
  int quote_limit = 6;
  long merge_window = 600;
  bool keep_retweets = false;
  bool keep_quotes = false;
  bool keep_duplicates = false;
  bool keep_link_only = false;
  bool no_merge = false;
  bool unterminated_continues = false;

  std::string dictionary;
  std::string features;
  bool symbol_counts = false;
  bool keep_hyphens = false;
  bool no_numbers = false;

  std::string method = "forward";
  double pool_alpha = 0.01;
  std::string vars;  // comma separated
  std::string start;
  int folds = 10;
  std::string lambda_rule = "min";
  std::string marginal = "average";

  std::string model;
  std::string cutoff = "train_prior";
  std::string criterion = "accuracy";
  std::string train_features;
};

std::string f4(double v) { return std::isfinite(v) ? fmt::format("{:.4f}", v) : std::string("nan"); }

ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

void require_file(const std::string& path, const char* what) {
  if (!path.empty() && !fs::exists(path)) throw InputError(fmt::format("{} file not found: {}", what, path));
}

fs::path out_path(const Options& o, const std::string& name) {
  fs::create_directories(o.out_dir);
  return fs::path(o.out_dir) / name;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + p.string());
  return out;
}

FeatureOptions feature_options(const Options& o) {
  FeatureOptions fo;
  fo.symbol_counts = o.symbol_counts;
  fo.tokenizer.split_hyphens = !o.keep_hyphens;
  fo.tokenizer.numbers_as_words = !o.no_numbers;
  return fo;
}

std::vector<RawPost> read_corpus(const Options& o) {
  require_file(o.corpus, "corpus");
  if (o.format == "json") return load_corpus(o.corpus, CorpusFormat::json);
  if (o.format == "csv") return load_corpus(o.corpus, CorpusFormat::csv);
  if (!o.format.empty()) throw InputError("unknown corpus format '" + o.format + "'");
  return load_corpus(o.corpus);
}

// Corpus rows as analysis posts: links stripped, missing labels = correct.
std::vector<LabeledPost> as_labeled(const std::vector<RawPost>& raw) {
  std::vector<LabeledPost> out;
  for (const auto& r : raw) {
    LabeledPost p;
    p.id = r.id;
    p.timestamp = r.timestamp;
    p.text_clean = strip_links(r.text);
    p.label = r.label.value_or(Veracity::correct);
    p.merged_from = r.merged_from.empty() ? std::vector<std::string>{r.id} : r.merged_from;
    out.push_back(std::move(p));
  }
  return out;
}

struct LoadedMatrix {
  FeatureMatrix matrix;
  std::string fingerprint;
};

LoadedMatrix load_matrix(const Options& o, const std::string& features_path) {
  if (!features_path.empty()) {
    require_file(features_path, "feature");
    return {load_feature_csv(features_path), ""};
  }
  if (o.corpus.empty() || o.dictionary.empty())
    throw InputError("need --features, or --corpus together with --dictionary");
  require_file(o.dictionary, "dictionary");
  auto dict = load_dictionary(o.dictionary);
  auto posts = as_labeled(read_corpus(o));
  return {extract_matrix(posts, dict, feature_options(o)), dict.fingerprint()};
}

ordered_json confusion_json(const Confusion& cm) {
  return ordered_json{{"cutoff", num(cm.cutoff)},
                      {"tp", cm.tp},
                      {"fp", cm.fp},
                      {"tn", cm.tn},
                      {"fn", cm.fn},
                      {"hit_rate_incorrect", num(cm.hit_rate_incorrect)},
                      {"hit_rate_correct", num(cm.hit_rate_correct)},
                      {"accuracy", num(cm.accuracy)}};
}

void print_confusion(std::ostream& out, const char* label, const Confusion& cm) {
  out << fmt::format("{}: cutoff {}  hit(incorrect) {}  hit(correct) {}  accuracy {}\n", label, f4(cm.cutoff),
                     f4(cm.hit_rate_incorrect), f4(cm.hit_rate_correct), f4(cm.accuracy));
}

int cmd_screen(const Options& o, std::ostream& out) {
  require_file(o.labels, "labels");
  require_file(o.exclude, "exclusion");
  require_file(o.merge_map, "merge-map");
  auto posts = read_corpus(o);

  std::map<std::string, Veracity> labels;
  if (!o.labels.empty()) labels = load_fact_checks(o.labels);

  ScreeningConfig cfg;
  if (o.quote_limit < 0) throw InputError("--quote-limit must be >= 0");
  cfg.quote_word_limit = o.quote_limit;
  cfg.merge_window = std::chrono::seconds{o.merge_window};
  cfg.drop_retweets = !o.keep_retweets;
  cfg.drop_quotes = !o.keep_quotes;
  cfg.drop_duplicates = !o.keep_duplicates;
  cfg.drop_link_only = !o.keep_link_only;
  cfg.merge_continuations = !o.no_merge;
  cfg.unterminated_continues = o.unterminated_continues;
  if (!o.exclude.empty()) cfg.exclude_ids = load_id_list(o.exclude);
  if (!o.merge_map.empty()) cfg.merge_groups = load_merge_map(o.merge_map);

  auto result = screen(posts, labels, cfg);
  {
    auto f = open_out(out_path(o, "screened.csv"));
    write_screened_csv(f, result.posts);
  }
  {
    auto f = open_out(out_path(o, "screening_report.json"));
    write_screening_report(f, result.report, o.seed);
  }
  const auto& r = result.report;
  out << fmt::format(
      "input {}  retweets {}  quotes {}  duplicates {}  link-only {}  other {}  merged {}  retained {}\n", r.input,
      r.removed_retweets, r.removed_quotes, r.removed_duplicates, r.removed_link_only, r.removed_other,
      r.merged_absorbed, r.retained);
  if (!result.posts.empty()) out << fmt::format("base rate (incorrect) {}\n", f4(base_rate(result.posts)));
  for (const auto& note : r.merge_notes) out << "note: " << note << '\n';
  return kExitOk;
}

int cmd_features(const Options& o, std::ostream& out) {
  if (o.corpus.empty() || o.dictionary.empty()) throw InputError("features needs --corpus and --dictionary");
  auto loaded = load_matrix(o, "");
  auto f = open_out(out_path(o, "features.csv"));
  write_feature_csv(f, loaded.matrix);
  out << fmt::format("{} posts x {} features (dictionary {})\n", loaded.matrix.rows(), loaded.matrix.cols(),
                     loaded.fingerprint);
  return kExitOk;
}

int cmd_manova(const Options& o, std::ostream& out) {
  auto loaded = load_matrix(o, o.features);
  const auto& m = loaded.matrix;
  auto rows = anova_table(m);
  {
    auto f = open_out(out_path(o, "manova.csv"));
    csv::write_row(f, {"variable", "mean_correct", "mean_incorrect", "F", "p", "sig"});
    for (const auto& r : rows)
      csv::write_row(f, {r.variable, fmt::format("{}", r.mean_correct), fmt::format("{}", r.mean_incorrect),
                         fmt::format("{}", r.F), fmt::format("{}", r.p_value), r.stars()});
  }
  auto report = manova_pillai(m);
  ordered_json j{{"pillai", report.pillai},
                 {"F", num(report.F)},
                 {"df1", report.df1},
                 {"df2", report.df2},
                 {"p_value", report.p_value},
                 {"eta_p_sq", report.eta_p_sq},
                 {"n_significant_05", report.n_significant_05},
                 {"n_significant_01", report.n_significant_01},
                 {"n_significant_001", report.n_significant_001},
                 {"n_obs", m.rows()},
                 {"seed", o.seed}};
  auto f = open_out(out_path(o, "manova_summary.json"));
  f << j.dump(2) << '\n';
  out << fmt::format("Pillai V = {}, F({}, {}) = {}, p = {}, partial eta^2 = {}\n", f4(report.pillai),
                     report.df1, report.df2, f4(report.F), f4(report.p_value), f4(report.eta_p_sq));
  out << fmt::format("significant variables: {} (5%), {} (1%), {} (0.1%)\n", report.n_significant_05,
                     report.n_significant_01, report.n_significant_001);
  return kExitOk;
}

int cmd_train(const Options& o, std::ostream& out) {
  auto loaded = load_matrix(o, o.features);
  const auto& m = loaded.matrix;

  std::vector<std::string> pool;
  if (o.method == "fixed" && !o.vars.empty()) {
    std::stringstream ss(o.vars);
    for (std::string v; std::getline(ss, v, ',');)
      if (!v.empty()) pool.push_back(v);
  } else {
    pool = restrict_pool(anova_table(m), o.pool_alpha);
  }
  for (const auto& v : pool)
    if (!m.has_column(v)) throw InputError("unknown variable '" + v + "'");

  LogitModel model;
  if (o.method == "forward" || o.method == "backward") {
    auto res = o.method == "forward"
                   ? stepwise_forward(m, pool, o.start.empty() ? std::nullopt : std::optional<std::string>(o.start))
                   : stepwise_backward(m, pool);
    auto f = open_out(out_path(o, "selection_log.csv"));
    write_selection_log(f, res.log);
    model = std::move(res.model);
  } else if (o.method == "fixed") {
    model = fit_logit(m, pool);
    model.method = "fixed";
  } else if (o.method == "lasso") {
    LambdaRule rule = o.lambda_rule == "1se" ? LambdaRule::one_se : LambdaRule::min;
    if (o.lambda_rule != "min" && o.lambda_rule != "1se") throw InputError("--lambda-rule must be min or 1se");
    auto sel = cv_select_lambda(m, pool, o.folds, o.seed, rule);
    auto f = open_out(out_path(o, "selection_log.csv"));
    write_lasso_log(f, sel.path);
    model = std::move(sel.model);
  } else {
    throw InputError("unknown --method '" + o.method + "'");
  }
  model.seed = o.seed;
  model.dictionary_fingerprint = loaded.fingerprint;
  save_model(out_path(o, "model.json").string(), model);

  const auto kind = o.marginal == "means" ? MarginalKind::at_means : MarginalKind::average;
  auto me = marginal_effects(model, m, kind);
  {
    auto f = open_out(out_path(o, "marginal_effects.csv"));
    csv::write_row(f, {"variable", "effect", "std_error", "z", "p"});
    for (const auto& r : me.rows)
      csv::write_row(f, {r.variable, fmt::format("{}", r.effect), fmt::format("{}", r.std_error),
                         fmt::format("{}", r.z), fmt::format("{}", r.p_value)});
  }

  const Eigen::VectorXd probs = predict_proba(model, m);
  std::span<const double> ps(probs.data(), static_cast<std::size_t>(probs.size()));
  auto curve = roc(ps, m.labels);
  auto prior = confusion_at(ps, m.labels, model.train_base_rate);
  auto half = confusion_at(ps, m.labels, 0.5);
  ordered_json j{{"method", model.method},
                 {"k", model.k()},
                 {"variables", model.variables},
                 {"log_likelihood", model.log_likelihood},
                 {"aic", model.aic},
                 {"auc", curve.auc},
                 {"train_base_rate", model.train_base_rate},
                 {"prior_cutoff", confusion_json(prior)},
                 {"half_cutoff", confusion_json(half)},
                 {"random_guess_accuracy", random_guess_accuracy(model.train_base_rate, model.train_base_rate)},
                 {"seed", o.seed}};
  auto f = open_out(out_path(o, "train_summary.json"));
  f << j.dump(2) << '\n';

  out << fmt::format("{} model, {} variables: log-likelihood = {}; AIC = {}; AUC = {}\n", model.method, model.k(),
                     f4(model.log_likelihood), f4(model.aic), f4(curve.auc));
  for (const auto& r : me.rows)
    out << fmt::format("  {:<24} {:>9} {:>9} {:>9} {:>9}\n", r.variable, f4(r.effect), f4(r.std_error), f4(r.z),
                       f4(r.p_value));
  print_confusion(out, "prior cutoff", prior);
  print_confusion(out, "0.5 cutoff", half);
  return kExitOk;
}

struct Scored {
  LogitModel model;
  FeatureMatrix matrix;
  Eigen::VectorXd probs;
};

Scored score(const Options& o) {
  if (o.model.empty()) throw InputError("--model is required");
  require_file(o.model, "model");
  Scored s{load_model(o.model), load_matrix(o, o.features).matrix, {}};
  for (const auto& v : s.model.variables)
    if (!s.matrix.has_column(v)) throw InputError("feature file lacks model variable '" + v + "'");
  s.probs = predict_proba(s.model, s.matrix);
  return s;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  auto s = score(o);
  std::span<const double> ps(s.probs.data(), static_cast<std::size_t>(s.probs.size()));

  CutoffPolicy policy;
  auto kind = parse_cutoff_kind(o.cutoff);
  auto crit = parse_criterion(o.criterion);
  if (!kind) throw InputError("unknown --cutoff '" + o.cutoff + "'");
  if (!crit) throw InputError("unknown --criterion '" + o.criterion + "'");
  policy.kind = *kind;
  policy.criterion = *crit;

  double cutoff = 0.0;
  if (policy.kind == CutoffKind::maximize) {
    if (o.train_features.empty()) throw InputError("--cutoff maximize needs --train-features");
    require_file(o.train_features, "training feature");
    auto train = load_feature_csv(o.train_features);
    Eigen::VectorXd tp = predict_proba(s.model, train);
    cutoff = select_cutoff(policy, s.model, std::span<const double>(tp.data(), static_cast<std::size_t>(tp.size())),
                           std::span<const int>(train.labels));
  } else {
    cutoff = select_cutoff(policy, s.model);
  }

  auto cm = confusion_at(ps, s.matrix.labels, cutoff);
  const double eval_rate =
      static_cast<double>(std::count(s.matrix.labels.begin(), s.matrix.labels.end(), 1)) / s.matrix.labels.size();
  std::optional<RocCurve> curve;
  if (!cm.incorrect_absent() && !cm.correct_absent()) curve = roc(ps, s.matrix.labels);

  ordered_json j{{"n_obs", s.matrix.rows()},
                 {"base_rate", eval_rate},
                 {"auc", curve ? num(curve->auc) : ordered_json(nullptr)},
                 {"cutoff_policy", to_string(policy.kind)},
                 {"criterion", to_string(policy.criterion)},
                 {"confusion", confusion_json(cm)},
                 {"random_guess_accuracy", random_guess_accuracy(s.model.train_base_rate, eval_rate)},
                 {"seed", o.seed}};
  {
    auto f = open_out(out_path(o, "metrics.json"));
    f << j.dump(2) << '\n';
  }
  if (curve) {
    auto f = open_out(out_path(o, "roc.csv"));
    write_roc_csv(f, *curve);
  }
  out << fmt::format("AUC = {}\n", curve ? f4(curve->auc) : std::string("n/a"));
  print_confusion(out, "evaluation", cm);
  out << fmt::format("random guessing accuracy {}\n", f4(random_guess_accuracy(s.model.train_base_rate, eval_rate)));
  return kExitOk;
}

int cmd_predict(const Options& o, std::ostream& out) {
  auto s = score(o);
  const double cutoff = s.model.train_base_rate;
  auto f = open_out(out_path(o, "predictions.csv"));
  csv::write_row(f, {"id", "probability", "predicted", "label"});
  for (Eigen::Index i = 0; i < s.probs.size(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    csv::write_row(f, {s.matrix.ids[idx], fmt::format("{}", s.probs(i)), s.probs(i) > cutoff ? "1" : "0",
                       std::to_string(s.matrix.labels[idx])});
  }
  out << fmt::format("{} predictions written (cutoff {})\n", s.probs.size(), f4(cutoff));
  return kExitOk;
}

int cmd_roc_export(const Options& o, std::ostream& out) {
  auto s = score(o);
  auto curve = roc(std::span<const double>(s.probs.data(), static_cast<std::size_t>(s.probs.size())), s.matrix.labels);
  auto f = open_out(out_path(o, "roc.csv"));
  write_roc_csv(f, curve);
  out << fmt::format("AUC = {} ({} points)\n", f4(curve.auc), curve.points.size());
  return kExitOk;
}

// Flat "key = value" lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config file not found: " + path);
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(fmt::format("{}:{}: expected key = value", path, lineno));
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Linguistic veracity modelling pipeline", "veracity"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", o.config, "Flat key = value file with option defaults");
  app.add_option("--seed", o.seed, "Seed recorded in every artifact and used for CV folds");
  app.add_option("--out", o.out_dir, "Output directory");

  auto corpus_opts = [&](CLI::App* sub) {
    sub->add_option("--corpus", o.corpus, "Corpus CSV or JSON");
    sub->add_option("--format", o.format, "csv or json (default: from extension)");
  };
  auto feature_src = [&](CLI::App* sub) {
    corpus_opts(sub);
    sub->add_option("--dictionary", o.dictionary, "Dictionary file");
    sub->add_option("--features", o.features, "Precomputed feature CSV");
    sub->add_flag("--symbol-counts", o.symbol_counts, "Count @ and # instead of presence indicators");
    sub->add_flag("--keep-hyphens", o.keep_hyphens, "Keep hyphenated words as one token");
    sub->add_flag("--no-numbers", o.no_numbers, "Do not count numerals as words");
  };

  auto* screen_cmd = app.add_subcommand("screen", "Screen a raw corpus and attach labels");
  corpus_opts(screen_cmd);
  screen_cmd->add_option("--labels", o.labels, "Fact-check CSV (id,verdict)");
  screen_cmd->add_option("--exclude", o.exclude, "CSV of ids to drop (counted as other)");
  screen_cmd->add_option("--merge-map", o.merge_map, "CSV, one merge group of ids per row");
  screen_cmd->add_option("--quote-limit", o.quote_limit, "Drop posts quoting more than this many words");
  screen_cmd->add_option("--merge-window", o.merge_window, "Seconds between posts that may be merged");
  screen_cmd->add_flag("--keep-retweets", o.keep_retweets);
  screen_cmd->add_flag("--keep-quotes", o.keep_quotes);
  screen_cmd->add_flag("--keep-duplicates", o.keep_duplicates);
  screen_cmd->add_flag("--keep-link-only", o.keep_link_only);
  screen_cmd->add_flag("--no-merge", o.no_merge, "Disable the continuation-marker merge");
  screen_cmd->add_flag("--unterminated-continues", o.unterminated_continues,
                       "Treat posts without final punctuation as continued");

  auto* features_cmd = app.add_subcommand("features", "Extract the feature matrix");
  feature_src(features_cmd);

  auto* manova_cmd = app.add_subcommand("manova", "Per-variable ANOVA table and Pillai MANOVA");
  feature_src(manova_cmd);

  auto* train_cmd = app.add_subcommand("train", "Select and fit a logit model");
  feature_src(train_cmd);
  train_cmd->add_option("--method", o.method, "forward, backward, fixed or lasso")
      ->check(CLI::IsMember({"forward", "backward", "fixed", "lasso"}));
  train_cmd->add_option("--pool-alpha", o.pool_alpha, "Candidate pool: ANOVA p below this level");
  train_cmd->add_option("--vars", o.vars, "Comma-separated variables for --method fixed");
  train_cmd->add_option("--start", o.start, "First variable for forward selection");
  train_cmd->add_option("--folds", o.folds, "Cross-validation folds for lasso");
  train_cmd->add_option("--lambda-rule", o.lambda_rule, "min or 1se");
  train_cmd->add_option("--marginal", o.marginal, "average or means")->check(CLI::IsMember({"average", "means"}));

  auto scoring = [&](CLI::App* sub) {
    feature_src(sub);
    sub->add_option("--model", o.model, "Model JSON written by train");
  };
  auto* eval_cmd = app.add_subcommand("evaluate", "AUC, ROC and cutoff-based accuracy");
  scoring(eval_cmd);
  eval_cmd->add_option("--cutoff", o.cutoff, "fixed_half, train_prior or maximize");
  eval_cmd->add_option("--criterion", o.criterion, "accuracy, mean_hit_rate or f1 (for maximize)");
  eval_cmd->add_option("--train-features", o.train_features, "Training features for --cutoff maximize");

  auto* predict_cmd = app.add_subcommand("predict", "Predicted probabilities per post");
  scoring(predict_cmd);
  auto* roc_cmd = app.add_subcommand("roc-export", "ROC curve as CSV");
  scoring(roc_cmd);

  // Config values go right after the subcommand so explicit flags win.
  std::vector<std::string> argv = args;
  try {
    auto cfg_it = std::find_if(argv.begin(), argv.end(),
                               [](const std::string& a) { return a == "--config" || a.rfind("--config=", 0) == 0; });
    if (cfg_it != argv.end()) {
      std::string path = *cfg_it == "--config" ? (cfg_it + 1 != argv.end() ? *(cfg_it + 1) : "") : cfg_it->substr(9);
      auto sub_it = std::find_if(argv.begin(), argv.end(), [&](const std::string& a) {
        for (auto* s : app.get_subcommands({})) if (s->get_name() == a) return true;
        return false;
      });
      if (sub_it != argv.end()) {
        CLI::App* sub = app.get_subcommand(*sub_it);
        std::vector<std::string> injected;
        for (const auto& [key, value] : read_config(path)) {
          const std::string flag = "--" + key;
          if (sub->get_option_no_throw(flag) || app.get_option_no_throw(flag)) injected.push_back(flag + "=" + value);
        }
        argv.insert(sub_it + 1, injected.begin(), injected.end());
      }
    }

    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (screen_cmd->parsed()) return cmd_screen(o, out);
    if (features_cmd->parsed()) return cmd_features(o, out);
    if (manova_cmd->parsed()) return cmd_manova(o, out);
    if (train_cmd->parsed()) return cmd_train(o, out);
    if (eval_cmd->parsed()) return cmd_evaluate(o, out);
    if (predict_cmd->parsed()) return cmd_predict(o, out);
    if (roc_cmd->parsed()) return cmd_roc_export(o, out);
  } catch (const FitError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumericFailure;
  } catch (const CollinearityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumericFailure;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const csv::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const DictionaryError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumericFailure;
  }
  return kExitInputError;
}

}  // namespace veracity::cli
