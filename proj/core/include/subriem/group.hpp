#pragma once

#include "subriem/algebra.hpp"

namespace subriem {

// Group operations of the simply connected group of a stratified algebra,
// written in exponential coordinates x <-> exp(sum x^i e_i).

// Columns are the left-invariant fields e_0..e_{n-1} at x, in coordinate components.
Mat left_invariant_frame(const StratifiedAlgebra& alg, const Vec& x);

// Baker-Campbell-Hausdorff product; exact for step <= 4.
Vec group_multiply(const StratifiedAlgebra& alg, const Vec& x, const Vec& y);

inline Vec group_inverse(const Vec& x) { return -x; }

// Anisotropic dilation: layer j is scaled by lambda^j.
Vec dilate(const StratifiedAlgebra& alg, const Vec& x, double lambda);

}  // namespace subriem
