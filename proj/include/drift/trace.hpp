#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace drift {

struct TraceRow {
  std::uint64_t t = 0;
  int mistake = 0;
  int queried = 0;
  double exact_error = 0.0;
  std::uint64_t cum_mistakes = 0;
  std::uint64_t cum_queries = 0;
};

// Per-round record of a learner run. Rows are append-only; cumulative counts
// are maintained as running sums of the indicators.
struct RunTrace {
  std::vector<TraceRow> rows;

  void add(std::uint64_t t, int mistake, int queried, double exact_error) {
    TraceRow r;
    r.t = t;
    r.mistake = mistake;
    r.queried = queried;
    r.exact_error = exact_error;
    r.cum_mistakes = (rows.empty() ? 0 : rows.back().cum_mistakes) +
                     static_cast<std::uint64_t>(mistake);
    r.cum_queries = (rows.empty() ? 0 : rows.back().cum_queries) +
                    static_cast<std::uint64_t>(queried);
    rows.push_back(r);
  }

  std::uint64_t total_mistakes() const {
    return rows.empty() ? 0 : rows.back().cum_mistakes;
  }
  std::uint64_t total_queries() const {
    return rows.empty() ? 0 : rows.back().cum_queries;
  }

  // mistake count over rows with t in [lo, hi], divided by the row count
  double mistake_rate(std::uint64_t lo, std::uint64_t hi) const;
  double mean_exact_error() const;

  void write_csv(std::ostream& os) const;
};

// shortest decimal form that round-trips, locale independent
std::string format_double(double v);

}  // namespace drift
