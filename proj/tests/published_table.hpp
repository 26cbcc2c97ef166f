#pragma once

#include "dmcrf/evaluation.hpp"

#include <vector>

namespace dmcrf::test {

// Per-scenario MAPE (%) triples (ELM, CCRF, DM-CCRF) from the published comparison table.
inline std::vector<MapeTriple> published_rows() {
    return {
        {87.949, 87.112, 80.312},   {80.598, 79.521, 73.916},   {75.993, 74.774, 69.706},
        {62.563, 62.281, 57.903},   {56.531, 56.404, 52.663},   {49.268, 47.667, 46.314},
        {48.255, 47.328, 45.342},   {47.331, 46.265, 44.966},   {56.267, 54.286, 52.796},
        {52.136, 49.747, 48.400},   {57.906, 57.067, 53.297},   {93.272, 92.585, 84.893},
        {103.026, 102.459, 93.925}, {110.763, 109.814, 100.349}, {184.762, 177.132, 167.715},
    };
}

inline constexpr MapeTriple kPublishedAverage{77.775, 76.296, 71.500};

}  // namespace dmcrf::test
