#pragma once

#include "hgs/types.hpp"

namespace hgs {

// Autonne-Takagi factorization B = K diag(lambda) K^T of a complex symmetric B.
// lambda is nonnegative and sorted descending. Each column of K is fixed up to
// sign by requiring its first nonzero entry to have positive real part (or, if
// that entry is purely imaginary, positive imaginary part).
struct TakagiResult {
  CMat k;
  RVec lambda;
};

TakagiResult takagi(const CMat& b);

}  // namespace hgs
