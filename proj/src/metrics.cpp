#include "gedprog/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace gedprog {
namespace {

void check_lengths(std::span<const std::int64_t> preds,
                   std::span<const std::int64_t> truths) {
  if (preds.empty()) throw std::invalid_argument("metrics: empty input");
  if (preds.size() != truths.size())
    throw std::invalid_argument("metrics: length mismatch");
}

}  // namespace

double rmse(std::span<const std::int64_t> preds,
            std::span<const std::int64_t> truths) {
  check_lengths(preds, truths);
  double sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double d = static_cast<double>(preds[i] - truths[i]);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(preds.size()));
}

double emr(std::span<const std::int64_t> preds,
           std::span<const std::int64_t> truths) {
  check_lengths(preds, truths);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) hits += preds[i] == truths[i];
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

}  // namespace gedprog
