// Shared test utilities: deterministic RNG, calendar formatting, and a
// synthetic hourly discharge series with positive skew.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tsvar/identify.hpp"

namespace testutil {

struct Lcg {
    std::uint64_t state = 0x2545f4914f6cdd1dull;
    double next() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(state >> 11) / 9007199254740992.0;
    }
};

// inverse of days_from_civil (proleptic Gregorian)
inline void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

inline std::string hour_stamp(std::int64_t hours_since_epoch) {
    const std::int64_t days = hours_since_epoch >= 0
                                  ? hours_since_epoch / 24
                                  : (hours_since_epoch - 23) / 24;
    const int hour = static_cast<int>(hours_since_epoch - days * 24);
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:00:00", y, m, d, hour);
    return buf;
}

// positively skewed stationary-ish series: exponentiated AR(1)
inline tsvar::TimeSeries synthetic_series(std::size_t n, std::int64_t start_hour = 438288) {
    Lcg rng;
    tsvar::TimeSeries ts;
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        z = 0.95 * z + 0.3 * (rng.next() - 0.5);
        ts.hours.push_back(start_hour + static_cast<std::int64_t>(i));
        ts.values.push_back(5.0 * std::exp(2.0 * z) + 0.25);
    }
    ts.first_timestamp = hour_stamp(ts.hours.front());
    ts.last_timestamp = hour_stamp(ts.hours.back());
    return ts;
}

inline std::filesystem::path write_csv(const tsvar::TimeSeries& ts,
                                       const std::filesystem::path& path) {
    std::ofstream out(path);
    out << "timestamp,discharge\n";
    for (std::size_t i = 0; i < ts.values.size(); ++i) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", ts.values[i]);
        out << hour_stamp(ts.hours[i]) << "," << buf << "\n";
    }
    return path;
}

inline std::filesystem::path temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "tsvar_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testutil
