#pragma once

#include "fedmap/grid_map.hpp"

namespace fedmap {

/// 10*log10(max_val^2 / MSE) in dB over all channels; identical maps give
/// +infinity (serialized as "inf" in CSV output).
double psnr(const GridMap& a, const GridMap& b, double max_val = 1.0);

/// Mean local SSIM with an 11x11 Gaussian window (sigma 1.5), stabilizers
/// C1=(0.01*L)^2, C2=(0.03*L)^2, L=1. Windows are evaluated only where they
/// fit entirely ("valid" mode). Multi-channel maps are reduced by channel
/// mean first. Requires dims >= 11.
double ssim(const GridMap& a, const GridMap& b);

}  // namespace fedmap
