#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "veracity/glm.hpp"

namespace veracity {

// 1 (predicted incorrect) iff prob > cutoff.
std::vector<int> classify(std::span<const double> probs, double cutoff);

struct Confusion {
  double cutoff = 0.0;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  // NaN when the corresponding class is absent from the labels.
  double hit_rate_incorrect = 0.0;  // sensitivity
  double hit_rate_correct = 0.0;    // specificity
  double accuracy = 0.0;

  std::size_t n() const { return tp + fp + tn + fn; }
  bool incorrect_absent() const { return tp + fn == 0; }
  bool correct_absent() const { return tn + fp == 0; }
};

// Throws std::invalid_argument on length mismatch.
Confusion confusion(std::span<const int> preds, std::span<const int> labels);
Confusion confusion_at(std::span<const double> probs, std::span<const int> labels, double cutoff);

struct RocPoint {
  double cutoff = 0.0;
  double hit_correct = 0.0;
  double hit_incorrect = 0.0;
  double accuracy = 0.0;
};

// Points run from "all predicted correct" (hit_correct 1, hit_incorrect 0) to
// "all predicted incorrect", one per distinct probability; tied
// probabilities move together.
struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

// Throws std::invalid_argument unless both classes are present.
RocCurve roc(std::span<const double> probs, std::span<const int> labels);

enum class CutoffKind { fixed_half, train_prior, maximize };
enum class Criterion { accuracy, mean_hit_rate, f1 };

struct CutoffPolicy {
  CutoffKind kind = CutoffKind::train_prior;
  Criterion criterion = Criterion::accuracy;
};

std::optional<CutoffKind> parse_cutoff_kind(std::string_view s);
std::optional<Criterion> parse_criterion(std::string_view s);
std::string_view to_string(CutoffKind k);
std::string_view to_string(Criterion c);

// accuracy; mean of the two hit rates; mean of the per-class F1 scores.
double criterion_value(Criterion c, const Confusion& cm);

// maximize needs the training probabilities and labels; the cutoff is chosen
// among {0, each distinct probability, 1}, ties going to the lowest cutoff.
double select_cutoff(const CutoffPolicy& policy, const LogitModel& model,
                     std::optional<std::span<const double>> train_probs = std::nullopt,
                     std::optional<std::span<const int>> train_labels = std::nullopt);

// Expected accuracy of guessing "incorrect" with probability q when the base
// rate is p.
double random_guess_accuracy(double guess_rate, double base_rate);

// cutoff,hit_correct,hit_incorrect,accuracy rows then "# auc,<value>".
void write_roc_csv(std::ostream& out, const RocCurve& curve);

}  // namespace veracity
