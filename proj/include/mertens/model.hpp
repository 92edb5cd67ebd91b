#pragma once

#include <limits>
#include <optional>
#include <string>

#include "mertens/enclosure.hpp"
#include "mertens/rational.hpp"

namespace mertens {

enum class ModelTarget { M, psi_minus_x, m1 };
enum class ModelForm {
  sqrt_upper,      // |f(X)| <= c sqrt(X)
  inv_sqrt_upper,  // |f(X)| <= c / sqrt(X)
};

// Claim |f(X)| <= c sqrt(X) (or c / sqrt(X)) for X in [range_lo, range_hi].
struct RootModel {
  ModelTarget target = ModelTarget::M;
  ModelForm form = ModelForm::sqrt_upper;
  Rational coefficient{571, 1000};
  double range_lo = 33;
  double range_hi = std::numeric_limits<double>::infinity();
  std::string provenance;

  Enclosure coefficient_enclosure() const { return Enclosure::rational(coefficient); }
  RootModel with_range(double lo, double hi) const {
    RootModel m = *this;
    m.range_lo = lo;
    m.range_hi = hi;
    return m;
  }
  RootModel with_coefficient(const Rational& c) const {
    RootModel m = *this;
    m.coefficient = c;
    return m;
  }

  // |M(X)| <= 0.571 sqrt(X), 33 <= X <= 1e16
  static RootModel mertens() {
    return {ModelTarget::M, ModelForm::sqrt_upper, Rational(571, 1000), 33, 1e16, "external: Hurst"};
  }
  // |psi(X) - X| <= 0.94 sqrt(X), 11 <= X <= 1e19
  static RootModel psi() {
    return {ModelTarget::psi_minus_x, ModelForm::sqrt_upper, Rational(94, 100), 11, 1e19, "external: Buthe"};
  }
  // |m1(X)| <= 0.129 / sqrt(X), 5e6 <= X <= 1e16
  static RootModel m1() {
    return {ModelTarget::m1, ModelForm::inv_sqrt_upper, Rational(129, 1000), 5e6, 1e16, "external: m1 conversion preprint 2020"};
  }
};

}  // namespace mertens
