#pragma once

#include <cstdint>
#include <span>

namespace gedprog {

/// Root-mean-square error. Throws std::invalid_argument on empty input or a
/// length mismatch.
double rmse(std::span<const std::int64_t> preds,
            std::span<const std::int64_t> truths);

/// Exact match ratio: fraction of positions where prediction == truth.
double emr(std::span<const std::int64_t> preds,
           std::span<const std::int64_t> truths);

}  // namespace gedprog
