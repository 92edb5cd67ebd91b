#pragma once

#include <stdexcept>
#include <string>

namespace mertens {

// Scan or certificate request exceeding a configured resource limit.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A ledger hypothesis was consumed outside its validity range, or a lemma
// evaluator was called outside the range where its formula holds.
class hypothesis_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable, truncated or incompatible checkpoint file.
class checkpoint_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mertens
