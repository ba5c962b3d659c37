#pragma once

#include "netmax/errors.hpp"

namespace netmax {

// β·prev + (1-β)·observed. Iteration times are strictly positive, so prev == 0
// doubles as the unset sentinel and seeds the average with the first
// observation instead of decaying from zero.
inline double ema_update(double prev, double observed, double beta) {
    if (beta < 0.0 || beta > 1.0)
        throw error(errc::beta_out_of_range, "smoothing factor must lie in [0,1]");
    if (prev == 0.0) return observed;
    return beta * prev + (1.0 - beta) * observed;
}

} // namespace netmax
