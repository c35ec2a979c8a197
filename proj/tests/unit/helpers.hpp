#pragma once

#include <doctest.h>

#include <vector>

#include "fanwelfare/core.hpp"
#include "fanwelfare/rng.hpp"

namespace fw::test {

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an fw::Error");
  return ErrorCode::IoError;
}

inline UtilityVector vec(std::vector<double> v) { return UtilityVector::validate(v); }

/// Entries uniform on (lo, hi].
inline UtilityVector random_vector(Rng& rng, std::size_t n, double lo = 0.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (double& e : v) e = lo + (hi - lo) * rng.uniform_open_closed();
  return UtilityVector::validate(v);
}

}  // namespace fw::test
