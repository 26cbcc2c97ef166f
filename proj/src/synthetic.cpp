#include "dmcrf/synthetic.hpp"

#include "dmcrf/errors.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace dmcrf {

namespace {

constexpr int kFeatures = 9;

class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(angle);
        has_cached_ = true;
        return r * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// Days since 1970-01-01 to a civil date (proleptic Gregorian).
void civil_from_days(long z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp < 10 ? mp + 3 : mp - 9;
    y = static_cast<int>(static_cast<long>(yoe) + era * 400 + (m <= 2));
}

std::string timestamp_for_step(long step) {
    constexpr long kStartDay = 15706;  // 2013-01-01
    const long minutes = step * 15;
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    civil_from_days(kStartDay + minutes / 1440, y, m, d);
    const long in_day = minutes % 1440;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02ld:%02ld", y, m, d, in_day / 60, in_day % 60);
    return buf;
}

}  // namespace

CsvSchema synthetic_schema() {
    CsvSchema schema;
    schema.timestamp = "t";
    for (int j = 1; j <= kFeatures; ++j) schema.features.push_back("f" + std::to_string(j));
    schema.target = "flow";
    return schema;
}

TimeSeriesDataset make_synthetic_ar1(const SyntheticConfig& config) {
    if (config.rows < 1) throw InvalidArgument("synthetic fixture needs at least one row");
    if (!(std::abs(config.phi) < 1.0)) throw InvalidArgument("AR(1) coefficient must satisfy |phi| < 1");

    NormalSource rng(config.seed);
    TimeSeriesDataset data;
    data.schema = synthetic_schema();
    data.features.resize(config.rows, kFeatures);
    data.targets.resize(config.rows);

    const double innovation_sd = std::sqrt(1.0 - config.phi * config.phi);
    double z = 0.0;
    for (int t = 0; t < config.rows; ++t) {
        const double e = rng.normal();
        z = t == 0 ? e : config.phi * z + innovation_sd * e;
        const double flow = config.level + config.amplitude * z;
        data.targets(t) = flow;
        const double common = config.common_noise * rng.normal();
        for (int j = 0; j < kFeatures; ++j) {
            const double noise = config.feature_noise * (0.5 + 0.125 * j);
            data.features(t, j) = flow + config.amplitude * (common + noise * rng.normal());
        }
        data.timestamps.push_back(timestamp_for_step(t));
    }
    return data;
}

}  // namespace dmcrf
