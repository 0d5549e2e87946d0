#include "veracity/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace veracity {

std::vector<int> classify(std::span<const double> probs, double cutoff) {
  std::vector<int> out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) out[i] = probs[i] > cutoff ? 1 : 0;
  return out;
}

Confusion confusion(std::span<const int> preds, std::span<const int> labels) {
  if (preds.size() != labels.size()) throw std::invalid_argument("confusion: predictions and labels differ in length");
  Confusion cm;
  cm.cutoff = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (labels[i]) {
      (preds[i] ? cm.tp : cm.fn)++;
    } else {
      (preds[i] ? cm.fp : cm.tn)++;
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto pos = static_cast<double>(cm.tp + cm.fn);
  const auto neg = static_cast<double>(cm.tn + cm.fp);
  cm.hit_rate_incorrect = pos > 0 ? static_cast<double>(cm.tp) / pos : nan;
  cm.hit_rate_correct = neg > 0 ? static_cast<double>(cm.tn) / neg : nan;
  cm.accuracy = cm.n() > 0 ? static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.n()) : nan;
  return cm;
}

Confusion confusion_at(std::span<const double> probs, std::span<const int> labels, double cutoff) {
  auto preds = classify(probs, cutoff);
  auto cm = confusion(preds, labels);
  cm.cutoff = cutoff;
  return cm;
}

RocCurve roc(std::span<const double> probs, std::span<const int> labels) {
  if (probs.size() != labels.size()) throw std::invalid_argument("roc: probabilities and labels differ in length");
  const auto pos = static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](int l) { return l != 0; }));
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) throw std::invalid_argument("roc: both classes must be present");

  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });

  RocCurve curve;
  const double n = static_cast<double>(labels.size());
  std::size_t tp = 0, fp = 0;
  auto push = [&](double cutoff) {
    RocPoint pt;
    pt.cutoff = cutoff;
    pt.hit_incorrect = static_cast<double>(tp) / static_cast<double>(pos);
    pt.hit_correct = static_cast<double>(neg - fp) / static_cast<double>(neg);
    pt.accuracy = static_cast<double>(tp + neg - fp) / n;
    curve.points.push_back(pt);
  };

  std::size_t i = 0;
  push(probs[order[0]]);
  while (i < order.size()) {
    const double value = probs[order[i]];
    while (i < order.size() && probs[order[i]] == value) {
      (labels[order[i]] ? tp : fp)++;
      ++i;
    }
    if (i < order.size()) {
      push(probs[order[i]]);
    } else {
      push(value > 0.0 ? 0.0 : std::nextafter(value, -std::numeric_limits<double>::infinity()));
    }
  }

  double area = 0.0;
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const auto& a = curve.points[k - 1];
    const auto& b = curve.points[k];
    const double dx = (1.0 - b.hit_correct) - (1.0 - a.hit_correct);
    area += dx * (a.hit_incorrect + b.hit_incorrect) / 2.0;
  }
  curve.auc = area;
  return curve;
}

std::optional<CutoffKind> parse_cutoff_kind(std::string_view s) {
  if (s == "fixed_half" || s == "half") return CutoffKind::fixed_half;
  if (s == "train_prior" || s == "prior") return CutoffKind::train_prior;
  if (s == "maximize") return CutoffKind::maximize;
  return std::nullopt;
}

std::optional<Criterion> parse_criterion(std::string_view s) {
  if (s == "accuracy") return Criterion::accuracy;
  if (s == "mean_hit_rate") return Criterion::mean_hit_rate;
  if (s == "f1") return Criterion::f1;
  return std::nullopt;
}

std::string_view to_string(CutoffKind k) {
  switch (k) {
    case CutoffKind::fixed_half: return "fixed_half";
    case CutoffKind::train_prior: return "train_prior";
    case CutoffKind::maximize: return "maximize";
  }
  return "";
}

std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::accuracy: return "accuracy";
    case Criterion::mean_hit_rate: return "mean_hit_rate";
    case Criterion::f1: return "f1";
  }
  return "";
}

double criterion_value(Criterion c, const Confusion& cm) {
  switch (c) {
    case Criterion::accuracy:
      return cm.accuracy;
    case Criterion::mean_hit_rate:
      return (cm.hit_rate_incorrect + cm.hit_rate_correct) / 2.0;
    case Criterion::f1: {
      auto f1 = [](std::size_t hits, std::size_t false_pos, std::size_t misses) {
        const auto denom = 2 * hits + false_pos + misses;
        return denom == 0 ? 0.0 : 2.0 * static_cast<double>(hits) / static_cast<double>(denom);
      };
      return (f1(cm.tp, cm.fp, cm.fn) + f1(cm.tn, cm.fn, cm.fp)) / 2.0;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double select_cutoff(const CutoffPolicy& policy, const LogitModel& model,
                     std::optional<std::span<const double>> train_probs,
                     std::optional<std::span<const int>> train_labels) {
  switch (policy.kind) {
    case CutoffKind::fixed_half:
      return 0.5;
    case CutoffKind::train_prior:
      return model.train_base_rate;
    case CutoffKind::maximize:
      break;
  }
  if (!train_probs || !train_labels)
    throw std::invalid_argument("maximize cutoff policy needs training probabilities and labels");
  const auto& probs = *train_probs;
  const auto& labels = *train_labels;
  if (probs.size() != labels.size() || probs.empty())
    throw std::invalid_argument("maximize cutoff policy: probabilities and labels must be non-empty and aligned");

  std::vector<double> candidates{0.0, 1.0};
  for (double p : probs)
    if (p > 0.0 && p < 1.0) candidates.push_back(p);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  double best_cutoff = candidates.front();
  double best_value = -std::numeric_limits<double>::infinity();
  for (double c : candidates) {
    const double v = criterion_value(policy.criterion, confusion_at(probs, labels, c));
    if (v > best_value) {
      best_value = v;
      best_cutoff = c;
    }
  }
  if (!std::isfinite(best_value))
    throw std::invalid_argument("maximize cutoff policy: criterion undefined (a class is absent)");
  return best_cutoff;
}

double random_guess_accuracy(double guess_rate, double base_rate) {
  return guess_rate * base_rate + (1.0 - guess_rate) * (1.0 - base_rate);
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
  out << "cutoff,hit_correct,hit_incorrect,accuracy\n";
  for (const auto& p : curve.points)
    out << fmt::format("{},{},{},{}\n", p.cutoff, p.hit_correct, p.hit_incorrect, p.accuracy);
  out << fmt::format("# auc,{}\n", curve.auc);
}

}  // namespace veracity
