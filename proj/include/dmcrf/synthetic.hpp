#pragma once

#include "dmcrf/dataset.hpp"

#include <cstdint>

namespace dmcrf {

/// Synthetic traffic-like series with the 9-feature + 1-target layout.
///
/// Generation procedure (fully determined by the seed):
///   1. Draw from std::mt19937_64 seeded with `seed`. Uniforms are the top 53 bits
///      of each 64-bit output times 2^-53; standard normals come from Box-Muller
///      on pairs of uniforms (cosine branch first, sine branch cached).
///   2. Latent AR(1): z_0 ~ N(0, 1), z_t = phi z_{t-1} + sqrt(1 - phi^2) e_t,
///      so z has unit stationary variance.
///   3. Target: flow_t = level + amplitude * z_t.
///   4. Feature j (j = 1..9):
///        level + amplitude * (z_t + common_noise * c_t + noise_j * e_{t,j}),
///      noise_j = feature_noise * (0.5 + 0.125 * (j - 1)). c_t is shared by all
///      features of a row, so no per-row regressor can remove it.
///      Each row draws the latent innovation, then c_t, then the nine e_{t,j}.
///   5. Timestamps are 15-minute steps from 2013-01-01T00:00.
struct SyntheticConfig {
    std::uint64_t seed = 1;
    int rows = 300;
    double phi = 0.3;
    double level = 100.0;
    double amplitude = 20.0;
    double feature_noise = 1.0;
    double common_noise = 1.0;
};

TimeSeriesDataset make_synthetic_ar1(const SyntheticConfig& config);

/// Column names used by the synthetic generator: t, f1..f9, flow.
CsvSchema synthetic_schema();

}  // namespace dmcrf
