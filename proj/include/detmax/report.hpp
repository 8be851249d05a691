#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "detmax/log_value.hpp"

namespace detmax {

/// (j!/j^j) * exp(-alpha): the certified fraction of the exact optimum that a
/// derandomized selection is guaranteed to reach.
inline double guarantee_floor(int j, double alpha) {
  return std::exp(std::lgamma(j + 1.0) - j * std::log(static_cast<double>(j)) - alpha);
}

namespace detail {

inline std::string format_report_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", x);
  return buffer;
}

} // namespace detail

/// One run of a solver or oracle, rendered as a single key=value line.
/// Indices are printed 1-based.
struct RunReport {
  std::string instance;
  std::string problem;
  std::optional<int> j;
  std::optional<std::string> method;
  std::vector<int> indices; // stored 0-based
  std::optional<double> logdet;
  std::optional<double> alpha;
  std::optional<double> floor;
  std::optional<double> oracle_logdet;
  std::optional<double> oracle_volume;
  std::optional<double> ratio;
  std::optional<double> volume;
  std::optional<int> best_j;
  std::optional<double> value;
  std::optional<double> wall_ms;

  std::string to_line() const {
    std::ostringstream os;
    os << "instance=" << instance << " problem=" << problem;
    if (j) os << " j=" << *j;
    if (method) os << " method=" << *method;
    if (!indices.empty()) {
      os << " indices=";
      for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i) os << ',';
        os << indices[i] + 1;
      }
    }
    if (logdet) os << " logdet=" << detail::format_report_double(*logdet);
    if (logdet && std::abs(*logdet) < 700.0)
      os << " det=" << detail::format_report_double(std::exp(*logdet));
    if (alpha) os << " alpha=" << detail::format_report_double(*alpha);
    if (floor) os << " floor=" << detail::format_report_double(*floor);
    if (oracle_logdet)
      os << " oracle_logdet=" << detail::format_report_double(*oracle_logdet);
    if (oracle_volume)
      os << " oracle_volume=" << detail::format_report_double(*oracle_volume);
    if (ratio) os << " ratio=" << detail::format_report_double(*ratio);
    if (volume) os << " volume=" << detail::format_report_double(*volume);
    if (best_j) os << " best_j=" << *best_j;
    if (value) os << " value=" << detail::format_report_double(*value);
    if (wall_ms) os << " wall_ms=" << detail::format_report_double(*wall_ms);
    return os.str();
  }
};

} // namespace detmax
