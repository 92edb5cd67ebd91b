#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mertens/enclosure.hpp"
#include "mertens/model.hpp"
#include "mertens/sieve.hpp"

namespace mertens {

enum class Kind {
  M,                   // sum_{n<=x} mu(n)
  psi,                 // sum_{n<=x} Lambda(n)
  N,                   // sum_{n<=x} mu(n) log n
  m,                   // sum_{n<=x} mu(n)/n
  m1,                  // m(x) - M(x)/x
  Q,                   // sum_{n<=x} mu(n)^2
  lambda_over_k,       // sum_{k<=x} Lambda(k)/k
  lambda_over_sqrt_k,  // sum_{k<=x} Lambda(k)/sqrt(k)
  mu2_over_sqrt,       // sum_{j<=x} mu(j)^2/sqrt(j)
  mu2_over_n,          // sum_{n<=x} mu(n)^2/n
  absM_log_weight,     // sum_{n<x} |M(n)| log(1 + 1/n), strict upper limit
};

std::string_view kind_name(Kind k);
Kind parse_kind(std::string_view name);
bool kind_is_integer(Kind k);

enum class Mode { fast, rigorous };
std::string_view mode_name(Mode m);
Mode parse_mode(std::string_view name);

inline constexpr std::int64_t kDefaultStride = 10000;
inline constexpr std::int64_t kDefaultScanCeiling = 20000000000LL;

// Ceiling from MERTENS_SCAN_CEILING when set, else 2e10.
std::int64_t default_scan_ceiling();

struct ScanConfig {
  std::int64_t segment_width = kDefaultSegmentWidth;
  int workers = 1;
  std::int64_t ceiling = default_scan_ceiling();
  Mode mode = Mode::rigorous;
};

// Throws resource_error when X exceeds the configured ceiling.
void check_ceiling(std::int64_t X, const ScanConfig& cfg);

struct Checkpoint {
  std::int64_t x = 0;
  // Rigorous mode: an enclosure. Fast mode: estimate +- reported error.
  Enclosure value;
  std::int64_t exact = 0;  // the value, for integer kinds
  double estimate = 0;     // fast-mode point value; midpoint otherwise
};

struct SummatorySeries {
  Kind kind = Kind::M;
  Mode mode = Mode::rigorous;
  std::int64_t stride = kDefaultStride;
  std::vector<Checkpoint> checkpoints;  // strictly increasing x, last is final_x
  std::int64_t final_x = 0;
  const Checkpoint& final() const { return checkpoints.back(); }
};

// Running values at x = stride, 2 stride, ... and at X. With a checkpoint
// path the scan resumes from the last compatible record and appends new
// ones; the resumed result is bitwise identical to an uninterrupted scan.
SummatorySeries scan(Kind kind, std::int64_t X, std::int64_t stride, const ScanConfig& cfg = {},
                     const std::string& checkpoint_path = "");

SummatorySeries mertens_scan(std::int64_t X, std::int64_t stride, const ScanConfig& cfg = {});
SummatorySeries psi_scan(std::int64_t X, std::int64_t stride, const ScanConfig& cfg = {});
SummatorySeries n_scan(std::int64_t X, std::int64_t stride, const ScanConfig& cfg = {});

// m1(X) = sum_{n<=X} (mu(n)/n)(1 - n/X), each term the exact rational
// mu(n)(X - n)/(nX) enclosed before summation.
Enclosure m1_at(std::int64_t X, const ScanConfig& cfg = {});

// Final value of a real-valued kind, always rigorous.
Enclosure weighted_sum(Kind kind, std::int64_t X, const ScanConfig& cfg = {});

// Result of an exhaustive scan of a claim of the form statistic(x) <= limit.
struct ScanReport {
  std::string claim;
  std::int64_t X_lo = 0;
  std::int64_t X_hi = 0;
  std::optional<RootModel> model;
  Enclosure limit;
  Enclosure max_statistic;  // sup of the statistic over checked x
  std::int64_t argmax_x = 0;
  std::int64_t checked = 0;
  std::int64_t violation_count = 0;
  std::int64_t inconclusive_count = 0;
  std::vector<std::int64_t> violations;    // first few
  std::vector<std::int64_t> inconclusive;  // first few
  bool passed() const { return violation_count == 0 && inconclusive_count == 0; }
};

// Checks the model at every integer of [X_lo, X_hi]. Exact for M; for psi
// only the endpoints of each constant stretch of psi can extremize
// |psi(x) - x| / sqrt(x), so those are checked with enclosures. For m1 the
// check runs at every integer. Throws hypothesis_error if the range is not
// inside the model's own range.
ScanReport verify_root_model(const RootModel& model, std::int64_t X_lo, std::int64_t X_hi,
                             const ScanConfig& cfg = {});

// -5.44 - 0.47 log X <= sum_{k<=X} Lambda(k)/sqrt(k) - 2 sqrt(X) <= 0.47 log X - 1.19
// at every integer X of the range. The statistic is the smallest c for
// which both sides hold with 0.47 replaced by c.
struct EnvelopeConstants {
  Rational log_coefficient{47, 100};
  Rational upper_offset{-119, 100};
  Rational lower_offset{-544, 100};
};
ScanReport lambda_sqrt_envelope_check(std::int64_t X_lo, std::int64_t X_hi, const ScanConfig& cfg = {},
                                      const EnvelopeConstants& c = {});

// sum_{k<=y} Lambda(k)/k <= log y - offset at every integer y of the range.
// The statistic is sup (sum - log y) and the limit is -offset.
ScanReport lambda_over_k_check(std::int64_t y_lo, std::int64_t y_hi, const Rational& offset = Rational(1, 2),
                               const ScanConfig& cfg = {});

// Largest x <= X_hi with |M(x)| > x / reciprocal, or nullopt. Resumable.
struct ThresholdResult {
  std::optional<std::int64_t> last_crossing;
  std::int64_t scanned_to = 0;
  std::int64_t crossings = 0;
};
ThresholdResult threshold_scan(std::int64_t reciprocal, std::int64_t X_hi, std::int64_t stride,
                               const ScanConfig& cfg = {}, const std::string& checkpoint_path = "");

}  // namespace mertens
