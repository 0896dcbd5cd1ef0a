#pragma once

#include "hcl/labeling.hpp"

namespace hcl {

// Normalized mutual information I(A;B) / sqrt(H(A) H(B)) in [0, 1].
// include_noise = false restricts to points non-noise in BOTH labelings.
// Conventions: 1 when both labelings are constant (identical single-block
// partitions); 0 when exactly one entropy vanishes.
double nmi(const Labeling& a, const Labeling& b, bool include_noise = false);

}  // namespace hcl
