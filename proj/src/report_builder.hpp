#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

#include "mertens/summatory.hpp"

namespace mertens::detail {

constexpr std::size_t kListedPoints = 16;

class ReportBuilder {
 public:
  explicit ReportBuilder(ScanReport r) : r_(std::move(r)) {}

  // verdict: pass when stat.hi <= limit.lo, fail when stat.lo > limit.hi.
  void observe(std::int64_t x, const Enclosure& stat) {
    ++r_.checked;
    if (!have_ || stat.hi > r_.max_statistic.hi) r_.argmax_x = x;
    r_.max_statistic = have_ ? max(r_.max_statistic, stat) : stat;
    have_ = true;
    if (stat.hi <= r_.limit.lo) return;
    if (stat.lo > r_.limit.hi) {
      ++r_.violation_count;
      if (r_.violations.size() < kListedPoints) r_.violations.push_back(x);
    } else {
      ++r_.inconclusive_count;
      if (r_.inconclusive.size() < kListedPoints) r_.inconclusive.push_back(x);
    }
  }
  // Exact verdict computed by the caller.
  void observe_exact(std::int64_t x, bool ok, const Enclosure& stat) {
    ++r_.checked;
    if (!have_ || stat.hi > r_.max_statistic.hi) r_.argmax_x = x;
    r_.max_statistic = have_ ? max(r_.max_statistic, stat) : stat;
    have_ = true;
    if (!ok) {
      ++r_.violation_count;
      if (r_.violations.size() < kListedPoints) r_.violations.push_back(x);
    }
  }
  ScanReport take() { return std::move(r_); }

 private:
  ScanReport r_;
  bool have_ = false;
};

}  // namespace mertens::detail
