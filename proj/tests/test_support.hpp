#pragma once

#include <functional>
#include <vector>

#include "hmsigns/errors.hpp"
#include "hmsigns/field_arith.hpp"

namespace hmsigns::testing {

inline ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(-1);
}

// Every integral ideal of norm <= X, built by multiplying prime powers.
inline std::vector<IdealFactorization> ideals_up_to(const QuadField& K, std::int64_t X) {
  std::vector<IdealFactorization> out{IdealFactorization{}};
  for (const auto& P : enumerate_prime_ideals(K, X)) {
    const std::size_t existing = out.size();
    for (std::size_t i = 0; i < existing; ++i) {
      IdealFactorization m = out[i];
      while (true) {
        m = m * IdealFactorization::prime_power(P);
        if (m.norm() > X) break;
        out.push_back(m);
      }
    }
  }
  return out;
}

}  // namespace hmsigns::testing
