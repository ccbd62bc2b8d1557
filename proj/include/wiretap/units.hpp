#pragma once

#include <cmath>

namespace wiretap {

// Power ratios. A CSI error level sigma_H quoted as 20*log10(sigma_H) dB maps
// to the variance sigma_H^2 = from_db(level), so one pair covers both.
inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

} // namespace wiretap
