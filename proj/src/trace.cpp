#include "drift/trace.hpp"

#include <charconv>
#include <stdexcept>

namespace drift {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc())
    throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

double RunTrace::mistake_rate(std::uint64_t lo, std::uint64_t hi) const {
  std::uint64_t n = 0, m = 0;
  for (const TraceRow& r : rows) {
    if (r.t < lo || r.t > hi) continue;
    ++n;
    m += static_cast<std::uint64_t>(r.mistake);
  }
  if (n == 0) return 0.0;
  return static_cast<double>(m) / static_cast<double>(n);
}

double RunTrace::mean_exact_error() const {
  if (rows.empty()) return 0.0;
  double s = 0.0;
  for (const TraceRow& r : rows) s += r.exact_error;
  return s / static_cast<double>(rows.size());
}

void RunTrace::write_csv(std::ostream& os) const {
  os << "t,mistake,queried,exact_error,cum_mistakes,cum_queries\n";
  for (const TraceRow& r : rows) {
    os << r.t << ',' << r.mistake << ',' << r.queried << ','
       << format_double(r.exact_error) << ',' << r.cum_mistakes << ','
       << r.cum_queries << '\n';
  }
}

}  // namespace drift
