#include "drift/window_erm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

namespace drift {

struct CandRef {
  ClassKind kind;
  double param;
  int pol;
};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double wrap2pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

inline bool thr_mistake(double cut, int pol, double x, int y) {
  return pol * sign_pm(x - cut) != y;
}

inline bool hs_mistake(double psi, double phi, int y) {
  return cos_sign(phi - psi) != y;
}

inline bool cand_mistake(const CandRef& c, const Observation& o) {
  if (c.kind == ClassKind::threshold) return thr_mistake(c.param, c.pol, o.x, o.y);
  return hs_mistake(c.param, o.x, o.y);
}

inline WindowHypothesis cand_hypothesis(const CandRef& c) {
  WindowHypothesis h;
  h.kind = c.kind;
  if (c.kind == ClassKind::threshold) {
    h.thr = ThresholdHypothesis{c.param, c.pol};
  } else {
    h.weight_angle = c.param;
  }
  return h;
}

}  // namespace

// Candidate models for one window: every achievable mistake pattern on the
// window has a representative here, so minimizing over the list equals
// minimizing over the whole class.
//  - threshold: cuts {0} union window points, each with both polarities;
//    canonical index order is (cut ascending, polarity +1 first).
//  - halfspace2d: midpoints between consecutive critical weight angles
//    (each point angle +- pi/2). A weight angle strictly inside an arc
//    between criticals classifies the window exactly like the arc's
//    boundary does under the closed sign convention, and midpoints stay
//    clear of the knife edge in floating point.
struct CandList {
  ClassKind kind;
  std::vector<double> param;
  std::vector<std::uint32_t> count;  // full-window mistakes per candidate

  std::size_t size() const {
    return kind == ClassKind::threshold ? 2 * param.size() : param.size();
  }
  CandRef at(std::size_t idx) const {
    if (kind == ClassKind::threshold)
      return {kind, param[idx >> 1], (idx & 1) ? -1 : +1};
    return {kind, param[idx], +1};
  }
};

namespace {

CandList build_threshold_list(const History& h, std::size_t m) {
  const std::size_t T1 = h.size();
  CandList cl;
  cl.kind = ClassKind::threshold;
  cl.param.reserve(m + 1);
  cl.param.push_back(0.0);
  for (std::size_t j = 1; j <= m; ++j) cl.param.push_back(h.obs[T1 - j].x);
  std::sort(cl.param.begin(), cl.param.end());
  cl.param.erase(std::unique(cl.param.begin(), cl.param.end()), cl.param.end());

  const std::size_t n = cl.param.size();
  std::vector<std::int32_t> dp(n + 1, 0), dm(n + 1, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    const Observation& o = h.obs[T1 - j];
    // cuts <= x predict +1 under polarity +1; index of first cut > x
    std::size_t ub = static_cast<std::size_t>(
        std::upper_bound(cl.param.begin(), cl.param.end(), o.x) -
        cl.param.begin());
    if (o.y > 0) {
      ++dp[ub];  // +1 polarity errs where cut > x
      --dp[n];
      ++dm[0];  // -1 polarity errs where cut <= x
      --dm[ub];
    } else {
      ++dp[0];
      --dp[ub];
      ++dm[ub];
      --dm[n];
    }
  }
  cl.count.assign(2 * n, 0);
  std::int32_t accp = 0, accm = 0;
  for (std::size_t i = 0; i < n; ++i) {
    accp += dp[i];
    accm += dm[i];
    cl.count[2 * i] = static_cast<std::uint32_t>(accp);
    cl.count[2 * i + 1] = static_cast<std::uint32_t>(accm);
  }
  return cl;
}

CandList build_halfspace_list(const History& h, std::size_t m) {
  const std::size_t T1 = h.size();
  CandList cl;
  cl.kind = ClassKind::halfspace2d;

  std::vector<double> crit;
  crit.reserve(2 * m);
  for (std::size_t j = 1; j <= m; ++j) {
    double phi = h.obs[T1 - j].x;
    crit.push_back(wrap2pi(phi + kPi / 2.0));
    crit.push_back(wrap2pi(phi - kPi / 2.0));
  }
  std::sort(crit.begin(), crit.end());
  crit.erase(std::unique(crit.begin(), crit.end()), crit.end());

  const std::size_t nc = crit.size();
  cl.param.reserve(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    double next = (i + 1 < nc) ? crit[i + 1] : crit[0] + 2.0 * kPi;
    cl.param.push_back(wrap2pi(0.5 * (crit[i] + next)));
  }
  std::sort(cl.param.begin(), cl.param.end());
  cl.param.erase(std::unique(cl.param.begin(), cl.param.end()),
                 cl.param.end());

  const std::size_t n = cl.param.size();
  std::vector<std::int32_t> diff(n + 1, 0);
  auto mark_arc = [&](double lo, double hi) {
    // weight angles strictly between lo and hi going counterclockwise
    std::size_t l = static_cast<std::size_t>(
        std::upper_bound(cl.param.begin(), cl.param.end(), lo) -
        cl.param.begin());
    std::size_t r = static_cast<std::size_t>(
        std::lower_bound(cl.param.begin(), cl.param.end(), hi) -
        cl.param.begin());
    if (lo <= hi) {
      ++diff[l];
      --diff[r];
    } else {
      ++diff[l];
      --diff[n];
      ++diff[0];
      --diff[r];
    }
  };
  for (std::size_t j = 1; j <= m; ++j) {
    const Observation& o = h.obs[T1 - j];
    double phi = o.x;
    if (o.y > 0) {
      mark_arc(wrap2pi(phi + kPi / 2.0), wrap2pi(phi + 3.0 * kPi / 2.0));
    } else {
      mark_arc(wrap2pi(phi - kPi / 2.0), wrap2pi(phi + kPi / 2.0));
    }
  }
  cl.count.assign(n, 0);
  std::int32_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += diff[i];
    cl.count[i] = static_cast<std::uint32_t>(acc);
  }
  return cl;
}

CandList build_candidates(ClassKind kind, const History& h, std::size_t m) {
  return kind == ClassKind::threshold ? build_threshold_list(h, m)
                                      : build_halfspace_list(h, m);
}

}  // namespace

// Cross-round sliding cache of one window's candidate list. Slow-drift
// regimes probe nearly the same window round after round, and a fresh
// O(n log n) rebuild per probe makes runs quadratic; moving the cached
// window by one observation costs O(n). The cache reproduces
// build_candidates output exactly (asserted in debug builds): a cut or
// midpoint inserted between adjacent candidates splits a region with no
// window point strictly inside, so it inherits its neighbor's counts;
// removing the last point at a cut or critical angle merges two regions
// whose counts have become equal; and the per-observation count updates use
// the same strict comparisons as the builders' interval sweeps.
//
// Alongside the window counts, the cache keeps one exact suffix point per
// candidate: a pair (mistakes, since) recorded by a past backward scan and
// advanced by the same pass that maintains the counts. The implied ratio
// lower-bounds that candidate's score in any window containing the suffix,
// which settles most "is this window still infeasible" screening without
// a fresh scan. Suffix points only prune; scans remain the final word.
struct WindowViewCache {
  // midpoints this close to a flip boundary (circularly) get their suffix
  // point dropped rather than updated: the interval test and the sign
  // predicate may disagree inside fp noise, and points must never overcount
  static constexpr double kCertEps = 1e-12;

  ClassKind kind = ClassKind::threshold;
  std::size_t start = 0;  // absolute index of the oldest window observation
  std::size_t end = 0;    // one past the newest absorbed observation
  CandList cl;

  // threshold: cl kept live; cut_ref counts window points at each cut and
  // label totals seed counts for cuts above every existing one
  std::vector<std::uint32_t> cut_ref;
  std::uint32_t n_pos = 0, n_neg = 0;

  // halfspace2d: sorted unique critical angles with window reference
  // counts; midpoint and window mistake count per arc, arc i running
  // crit[i] -> crit[i+1] and the last arc wrapping to crit[0] + 2 pi;
  // cl projected on demand
  std::vector<double> crit;
  std::vector<std::uint32_t> crit_ref;
  std::vector<double> arc_mid;
  std::vector<std::uint32_t> arc_cnt;
  bool dirty = false;
  std::vector<std::size_t> proj_arc;  // view index -> source arc

  // suffix points; threshold slots follow the interleaved candidate
  // indexing, halfspace slots follow arcs. Every pathway that touches a
  // point keeps it an exact mistake count for its candidate: scans count
  // directly, index-range and membership updates use the same conventions
  // as the scan predicate, and the rare midpoint that lands within fp noise
  // of a flip boundary has its point dropped instead of guessed (see
  // kCertEps). Undercounting (a dropped point restarts from zero) only
  // weakens the bound.
  std::vector<std::uint32_t> cert_cnt;
  std::vector<std::size_t> cert_time;

  void reset(ClassKind k) {
    kind = k;
    start = end = 0;
    cl.kind = k;
    cl.param.clear();
    cl.count.clear();
    cut_ref.clear();
    n_pos = n_neg = 0;
    crit.clear();
    crit_ref.clear();
    arc_mid.clear();
    arc_cnt.clear();
    cert_cnt.clear();
    cert_time.clear();
    proj_arc.clear();
    dirty = false;
    if (k == ClassKind::threshold) {
      cl.param.push_back(0.0);
      cl.count.assign(2, 0);
      cut_ref.assign(1, 0);  // the zero cut persists with no points on it
      cert_cnt.assign(2, 0);
      cert_time.assign(2, 0);
    }
  }

  void sync_end(const History& h) {
    while (end < h.size()) {
      absorb(h.obs[end], true);
      ++end;
    }
  }

  void position(const History& h, std::size_t new_start) {
    while (start > new_start) {
      --start;
      absorb(h.obs[start], false);
    }
    while (start < new_start) {
      const Observation& o = h.obs[start];
      ++start;
      retract(o);
    }
  }

  const CandList& view() {
    if (kind == ClassKind::halfspace2d && dirty) project();
    return cl;
  }

  // lower bound on a candidate's score from its stored suffix point; zero
  // when the point is empty or reaches outside the positioned window
  double cert_floor(std::size_t view_idx, const std::vector<double>& logterm,
                    double logdelta) const {
    std::size_t ci =
        kind == ClassKind::halfspace2d ? proj_arc[view_idx] : view_idx;
    std::uint32_t cn = cert_cnt[ci];
    std::size_t u = cert_time[ci];
    if (cn == 0 || u < start || u >= end) return 0.0;
    return static_cast<double>(cn) / (logterm[end - u] + logdelta);
  }

  void cert_note(std::size_t view_idx, std::uint32_t cnt, std::size_t u) {
    std::size_t ci =
        kind == ClassKind::halfspace2d ? proj_arc[view_idx] : view_idx;
    // keep a still-valid deeper point over a shallower rediscovery
    if (cert_time[ci] >= start && cert_cnt[ci] >= cnt) return;
    cert_cnt[ci] = cnt;
    cert_time[ci] = u;
  }

 private:
  void absorb(const Observation& o, bool at_end) {
    if (kind == ClassKind::threshold)
      thr_add(o, at_end);
    else
      hs_add(o, at_end);
    dirty = true;
  }

  void retract(const Observation& o) {
    if (kind == ClassKind::threshold)
      thr_remove(o);
    else
      hs_remove(o);
    dirty = true;
  }

  void thr_add(const Observation& o, bool at_end) {
    auto it = std::lower_bound(cl.param.begin(), cl.param.end(), o.x);
    std::size_t p = static_cast<std::size_t>(it - cl.param.begin());
    if (it == cl.param.end() || *it != o.x) {
      std::uint32_t cp = n_pos, cm = n_neg;
      std::uint32_t e0 = 0, e1 = 0;
      std::size_t u0 = 0, u1 = 0;
      if (p < cl.param.size()) {
        cp = cl.count[2 * p];
        cm = cl.count[2 * p + 1];
        // a neighbor's suffix point transfers only while its span holds no
        // point separating the two cuts: in-window suffixes qualify, except
        // one reaching back to a front-absorbed observation, which sits at
        // the new cut itself
        std::size_t guard = start + (at_end ? 0 : 1);
        if (cert_time[2 * p] >= guard) {
          e0 = cert_cnt[2 * p];
          u0 = cert_time[2 * p];
        }
        if (cert_time[2 * p + 1] >= guard) {
          e1 = cert_cnt[2 * p + 1];
          u1 = cert_time[2 * p + 1];
        }
      }
      cl.param.insert(cl.param.begin() + p, o.x);
      cl.count.insert(cl.count.begin() + 2 * p, {cp, cm});
      cut_ref.insert(cut_ref.begin() + p, 0);
      cert_cnt.insert(cert_cnt.begin() + 2 * p, {e0, e1});
      cert_time.insert(cert_time.begin() + 2 * p, {u0, u1});
    }
    ++cut_ref[p];
    const std::size_t n = cl.param.size();
    if (o.y > 0) {
      for (std::size_t i = p + 1; i < n; ++i) ++cl.count[2 * i];
      for (std::size_t i = 0; i <= p; ++i) ++cl.count[2 * i + 1];
      ++n_pos;
    } else {
      for (std::size_t i = 0; i <= p; ++i) ++cl.count[2 * i];
      for (std::size_t i = p + 1; i < n; ++i) ++cl.count[2 * i + 1];
      ++n_neg;
    }
    if (at_end) {
      // the same candidate ranges err on the newest observation; advancing
      // every suffix point keeps each one exact as time moves forward
      if (o.y > 0) {
        for (std::size_t i = p + 1; i < n; ++i) ++cert_cnt[2 * i];
        for (std::size_t i = 0; i <= p; ++i) ++cert_cnt[2 * i + 1];
      } else {
        for (std::size_t i = 0; i <= p; ++i) ++cert_cnt[2 * i];
        for (std::size_t i = p + 1; i < n; ++i) ++cert_cnt[2 * i + 1];
      }
    }
  }

  void thr_remove(const Observation& o) {
    auto it = std::lower_bound(cl.param.begin(), cl.param.end(), o.x);
    std::size_t p = static_cast<std::size_t>(it - cl.param.begin());
    assert(p < cl.param.size() && cl.param[p] == o.x);
    const std::size_t n = cl.param.size();
    if (o.y > 0) {
      for (std::size_t i = p + 1; i < n; ++i) --cl.count[2 * i];
      for (std::size_t i = 0; i <= p; ++i) --cl.count[2 * i + 1];
      --n_pos;
    } else {
      for (std::size_t i = 0; i <= p; ++i) --cl.count[2 * i];
      for (std::size_t i = p + 1; i < n; ++i) --cl.count[2 * i + 1];
      --n_neg;
    }
    if (--cut_ref[p] == 0 && cl.param[p] != 0.0) {
      cl.param.erase(cl.param.begin() + p);
      cl.count.erase(cl.count.begin() + 2 * p, cl.count.begin() + 2 * p + 2);
      cut_ref.erase(cut_ref.begin() + p);
      cert_cnt.erase(cert_cnt.begin() + 2 * p, cert_cnt.begin() + 2 * p + 2);
      cert_time.erase(cert_time.begin() + 2 * p,
                      cert_time.begin() + 2 * p + 2);
    }
  }

  void hs_add(const Observation& o, bool at_end) {
    hs_insert_crit(wrap2pi(o.x + kPi / 2.0), at_end);
    hs_insert_crit(wrap2pi(o.x - kPi / 2.0), at_end);
    double lo, hi;
    if (o.y > 0) {
      lo = wrap2pi(o.x + kPi / 2.0);
      hi = wrap2pi(o.x + 3.0 * kPi / 2.0);
    } else {
      lo = wrap2pi(o.x - kPi / 2.0);
      hi = wrap2pi(o.x + kPi / 2.0);
    }
    const std::size_t na = arc_mid.size();
    auto near_boundary = [](double mid, double b) {
      double d = std::fabs(mid - b);
      if (d > kPi) d = 2.0 * kPi - d;
      return d < kCertEps;
    };
    for (std::size_t i = 0; i < na; ++i) {
      const double mid = arc_mid[i];
      const bool in = lo <= hi ? (mid > lo && mid < hi) : (mid > lo || mid < hi);
      if (in) ++arc_cnt[i];
      if (at_end) {
        if (near_boundary(mid, lo) || near_boundary(mid, hi)) {
          cert_cnt[i] = 0;
          cert_time[i] = end;
        } else if (in) {
          ++cert_cnt[i];
        }
      }
    }
  }

  void hs_remove(const Observation& o) {
    double lo, hi;
    if (o.y > 0) {
      lo = wrap2pi(o.x + kPi / 2.0);
      hi = wrap2pi(o.x + 3.0 * kPi / 2.0);
    } else {
      lo = wrap2pi(o.x - kPi / 2.0);
      hi = wrap2pi(o.x + kPi / 2.0);
    }
    const std::size_t na = arc_mid.size();
    if (lo <= hi) {
      for (std::size_t i = 0; i < na; ++i)
        if (arc_mid[i] > lo && arc_mid[i] < hi) --arc_cnt[i];
    } else {
      for (std::size_t i = 0; i < na; ++i)
        if (arc_mid[i] > lo || arc_mid[i] < hi) --arc_cnt[i];
    }
    hs_remove_crit(wrap2pi(o.x + kPi / 2.0));
    hs_remove_crit(wrap2pi(o.x - kPi / 2.0));
  }

  // a valid suffix point for an arc being split transfers to both children:
  // the split region holds no critical of any window observation, so those
  // observations cannot tell the three midpoint values apart. A suffix
  // reaching back to a front-absorbed observation is the exception (the new
  // criticals are its own) and is dropped.
  void hs_insert_crit(double c, bool at_end) {
    auto it = std::lower_bound(crit.begin(), crit.end(), c);
    if (it != crit.end() && *it == c) {
      ++crit_ref[static_cast<std::size_t>(it - crit.begin())];
      return;
    }
    const std::size_t pos = static_cast<std::size_t>(it - crit.begin());
    const std::size_t nc = crit.size();
    if (nc == 0) {
      crit.assign(1, c);
      crit_ref.assign(1, 1);
      arc_mid.assign(1, wrap2pi(0.5 * (c + (c + 2.0 * kPi))));
      arc_cnt.assign(1, 0);
      cert_cnt.assign(1, 0);
      cert_time.assign(1, 0);
      return;
    }
    const std::size_t guard = start + (at_end ? 0 : 1);
    std::uint32_t ec = 0;
    std::size_t et = 0;
    // a child too narrow for its midpoint to sit clearly inside gets a
    // fresh empty point; inheritance is only exact away from fp noise
    const double wmin = 2.0 * kCertEps;
    if (pos == 0) {
      // splits the wrap arc; new first arc (c, old first) plus new wrap
      std::uint32_t old = arc_cnt[nc - 1];
      if (cert_time[nc - 1] >= guard) {
        ec = cert_cnt[nc - 1];
        et = cert_time[nc - 1];
      }
      const bool ok_wrap = (c + 2.0 * kPi) - crit[nc - 1] >= wmin;
      const bool ok_new = crit[0] - c >= wmin;
      cert_cnt[nc - 1] = ok_wrap ? ec : 0;
      cert_time[nc - 1] = ok_wrap ? et : end;
      arc_mid[nc - 1] = wrap2pi(0.5 * (crit[nc - 1] + (c + 2.0 * kPi)));
      arc_mid.insert(arc_mid.begin(), wrap2pi(0.5 * (c + crit[0])));
      arc_cnt.insert(arc_cnt.begin(), old);
      cert_cnt.insert(cert_cnt.begin(), ok_new ? ec : 0);
      cert_time.insert(cert_time.begin(), ok_new ? et : end);
      crit_ref.insert(crit_ref.begin(), 1);
    } else if (pos == nc) {
      // splits the wrap arc; new last arc (old last, c) plus new wrap
      std::uint32_t old = arc_cnt[nc - 1];
      if (cert_time[nc - 1] >= guard) {
        ec = cert_cnt[nc - 1];
        et = cert_time[nc - 1];
      }
      const bool ok_last = c - crit[nc - 1] >= wmin;
      const bool ok_wrap = (crit[0] + 2.0 * kPi) - c >= wmin;
      cert_cnt[nc - 1] = ok_last ? ec : 0;
      cert_time[nc - 1] = ok_last ? et : end;
      arc_mid[nc - 1] = wrap2pi(0.5 * (crit[nc - 1] + c));
      arc_mid.push_back(wrap2pi(0.5 * (c + (crit[0] + 2.0 * kPi))));
      arc_cnt.push_back(old);
      cert_cnt.push_back(ok_wrap ? ec : 0);
      cert_time.push_back(ok_wrap ? et : end);
      crit_ref.push_back(1);
    } else {
      std::uint32_t old = arc_cnt[pos - 1];
      if (cert_time[pos - 1] >= guard) {
        ec = cert_cnt[pos - 1];
        et = cert_time[pos - 1];
      }
      const bool ok_left = c - crit[pos - 1] >= wmin;
      const bool ok_right = crit[pos] - c >= wmin;
      cert_cnt[pos - 1] = ok_left ? ec : 0;
      cert_time[pos - 1] = ok_left ? et : end;
      arc_mid[pos - 1] = wrap2pi(0.5 * (crit[pos - 1] + c));
      arc_mid.insert(arc_mid.begin() + pos, wrap2pi(0.5 * (c + crit[pos])));
      arc_cnt.insert(arc_cnt.begin() + pos, old);
      cert_cnt.insert(cert_cnt.begin() + pos, ok_right ? ec : 0);
      cert_time.insert(cert_time.begin() + pos, ok_right ? et : end);
      crit_ref.insert(crit_ref.begin() + pos, 1);
    }
    crit.insert(crit.begin() + pos, c);
  }

  // the two arcs meeting at a vanishing critical carry equal counts once
  // the departing observation's membership is removed; the merged arc keeps
  // either one, and the stronger still-valid suffix point
  void hs_remove_crit(double c) {
    auto it = std::lower_bound(crit.begin(), crit.end(), c);
    assert(it != crit.end() && *it == c);
    const std::size_t pos = static_cast<std::size_t>(it - crit.begin());
    if (--crit_ref[pos] > 0) return;
    const std::size_t nc = crit.size();
    if (nc == 1) {
      crit.clear();
      crit_ref.clear();
      arc_mid.clear();
      arc_cnt.clear();
      cert_cnt.clear();
      cert_time.clear();
      return;
    }
    std::uint32_t ec = 0;
    std::size_t et = 0;
    auto consider = [&](std::size_t a) {
      if (cert_time[a] >= start && cert_cnt[a] > ec) {
        ec = cert_cnt[a];
        et = cert_time[a];
      }
    };
    const double wmin = 2.0 * kCertEps;
    if (pos == 0) {
      // merged wrap arc runs (old last, old second + 2 pi)
      assert(arc_cnt[0] == arc_cnt[nc - 1]);
      consider(0);
      consider(nc - 1);
      if ((crit[1] + 2.0 * kPi) - crit[nc - 1] < wmin) {
        ec = 0;
        et = end;
      }
      arc_mid.erase(arc_mid.begin());
      arc_cnt.erase(arc_cnt.begin());
      cert_cnt.erase(cert_cnt.begin());
      cert_time.erase(cert_time.begin());
      arc_mid[nc - 2] = wrap2pi(0.5 * (crit[nc - 1] + (crit[1] + 2.0 * kPi)));
      cert_cnt[nc - 2] = ec;
      cert_time[nc - 2] = et;
    } else if (pos == nc - 1) {
      // merged wrap arc runs (old second-to-last, old first + 2 pi)
      assert(arc_cnt[nc - 2] == arc_cnt[nc - 1]);
      consider(nc - 2);
      consider(nc - 1);
      if ((crit[0] + 2.0 * kPi) - crit[nc - 2] < wmin) {
        ec = 0;
        et = end;
      }
      arc_mid.pop_back();
      arc_cnt.pop_back();
      cert_cnt.pop_back();
      cert_time.pop_back();
      arc_mid[nc - 2] = wrap2pi(0.5 * (crit[nc - 2] + (crit[0] + 2.0 * kPi)));
      cert_cnt[nc - 2] = ec;
      cert_time[nc - 2] = et;
    } else {
      assert(arc_cnt[pos - 1] == arc_cnt[pos]);
      consider(pos - 1);
      consider(pos);
      if (crit[pos + 1] - crit[pos - 1] < wmin) {
        ec = 0;
        et = end;
      }
      arc_mid.erase(arc_mid.begin() + pos);
      arc_cnt.erase(arc_cnt.begin() + pos);
      cert_cnt.erase(cert_cnt.begin() + pos);
      cert_time.erase(cert_time.begin() + pos);
      arc_mid[pos - 1] = wrap2pi(0.5 * (crit[pos - 1] + crit[pos + 1]));
      cert_cnt[pos - 1] = ec;
      cert_time[pos - 1] = et;
    }
    crit.erase(crit.begin() + pos);
    crit_ref.erase(crit_ref.begin() + pos);
  }

  // Midpoints in arc order are already ascending (a midpoint of two doubles
  // never leaves their interval and fmod by 2 pi is exact below 2 pi); only
  // the wrap arc's entry can land out of place. Splice it in and collapse
  // duplicate values, which carry identical counts by construction.
  void project() {
    const std::size_t na = arc_mid.size();
    cl.param.clear();
    cl.count.clear();
    proj_arc.clear();
    dirty = false;
    if (na == 0) return;
    cl.param.reserve(na);
    cl.count.reserve(na);
    proj_arc.reserve(na);
    auto push = [this](double p, std::uint32_t c, std::size_t src) {
      if (!cl.param.empty() && cl.param.back() == p) return;
      cl.param.push_back(p);
      cl.count.push_back(c);
      proj_arc.push_back(src);
    };
    if (!std::is_sorted(arc_mid.begin(), arc_mid.end() - 1)) {
      // never expected; full sort keeps the output contract regardless
      std::vector<std::size_t> ord(na);
      for (std::size_t i = 0; i < na; ++i) ord[i] = i;
      std::sort(ord.begin(), ord.end(), [this](std::size_t a, std::size_t b) {
        return arc_mid[a] < arc_mid[b];
      });
      for (std::size_t i : ord) push(arc_mid[i], arc_cnt[i], i);
      return;
    }
    const std::size_t w = static_cast<std::size_t>(
        std::lower_bound(arc_mid.begin(), arc_mid.end() - 1, arc_mid[na - 1]) -
        arc_mid.begin());
    for (std::size_t i = 0; i < w; ++i) push(arc_mid[i], arc_cnt[i], i);
    push(arc_mid[na - 1], arc_cnt[na - 1], na - 1);
    for (std::size_t i = w; i + 1 < na; ++i) push(arc_mid[i], arc_cnt[i], i);
  }
};

namespace {

// Interval sweeps above count mistakes by arc membership; an observation
// sitting exactly on a candidate's decision boundary can be attributed to
// the wrong side of the count by one. The slack widens the screening band
// so exact backward scans always get the final say.
inline std::uint32_t count_slack(ClassKind kind) {
  return kind == ClassKind::threshold ? 0u : 4u;
}

void ensure_logterm(std::vector<double>& lt, int vc, std::size_t upto) {
  if (lt.empty()) lt.push_back(0.0);  // index 0 unused
  while (lt.size() <= upto) {
    double m = static_cast<double>(lt.size());
    lt.push_back(vc * log_cap(m / vc));
  }
}

// worst suffix point seen by a scan: mk mistakes over the last `depth`
// observations
struct ScanPoint {
  std::uint32_t cnt = 0;
  std::size_t depth = 0;
};

// Score of one candidate over the last m observations; returns early once
// the running maximum strictly exceeds abort_above (ties keep scanning so
// canonical tie-breaks stay exact). With bank_past >= 0 a scan that would
// abort keeps going until its mistake count clears abort_above's bar by
// bank_past extra, so the recorded suffix point stays conclusive for many
// future rounds instead of expiring as the log terms grow. Banking never
// changes the caller-visible decision: the returned value still exceeds
// abort_above exactly when it did before.
double scan_candidate(const History& h, std::size_t m, const CandRef& c,
                      const std::vector<double>& logterm, double logdelta,
                      double abort_above, ScanPoint* worst_at = nullptr,
                      double bank_past = -1.0) {
  const std::size_t T1 = h.size();
  std::uint32_t mk = 0;
  double worst = 0.0;
  for (std::size_t j = 1; j <= m; ++j) {
    if (cand_mistake(c, h.obs[T1 - j])) {
      ++mk;
      double r = static_cast<double>(mk) / (logterm[j] + logdelta);
      if (r > worst) {
        worst = r;
        if (worst_at) {
          worst_at->cnt = mk;
          worst_at->depth = j;
        }
      }
      if (worst > abort_above) {
        if (bank_past < 0.0 || !worst_at) return worst;
        if (static_cast<double>(mk) >=
            abort_above * (logterm[j] + logdelta) + bank_past) {
          worst_at->cnt = mk;
          worst_at->depth = j;
          return worst;
        }
      }
    }
  }
  return worst;
}

struct FeasInfo {
  bool ok = false;
  bool exact = false;  // score is a completed scan, not a carried bound
  double score = 0.0;
  CandRef cand{ClassKind::threshold, 0.0, +1};
  ScanPoint wp;
};

// margin banked beyond a threshold crossing; buys roughly margin/(K * 2/j)
// future rounds before the log terms erode the stored point's floor
constexpr double kBankExtra = 2.0;

struct FitCtx {
  const History& h;
  const AdaptiveConfig& cfg;
  ClassKind kind;
  std::vector<double>& logterm;
  double logdelta = 0.0;
  std::map<std::size_t, CandList> views;
  std::map<std::size_t, FeasInfo> feas;
  std::optional<CandRef> witness;
  WindowViewCache* cache = nullptr;
  FitState* state = nullptr;

  FitCtx(const History& hh, const AdaptiveConfig& c, ClassKind k,
         std::vector<double>& lt)
      : h(hh), cfg(c), kind(k), logterm(lt) {}

  // floor on the stored witness's score at window length m, from its exact
  // mistake suffix; zero when the suffix outreaches the window
  double witness_floor(std::size_t m) const {
    if (!state || state->wc_cnt == 0) return 0.0;
    std::size_t u = state->wc_time;
    const std::size_t T1 = h.size();
    if (u >= T1 || u + m < T1) return 0.0;
    return static_cast<double>(state->wc_cnt) /
           (logterm[T1 - u] + logdelta);
  }

  // upper bound on the stored witness's score at window length m; infinity
  // when unknown
  double witness_ceiling(std::size_t m) const {
    if (!state) return kInf;
    if (h.size() - m < state->w_start) return kInf;
    return state->w_ub;
  }

  const CandList& view(std::size_t m) {
    if (cache) {
      cache->position(h, h.size() - m);
      const CandList& c = cache->view();
#ifndef NDEBUG
      if (m <= 512) {
        CandList fresh = build_candidates(kind, h, m);
        assert(c.kind == fresh.kind);
        assert(c.param == fresh.param);
        assert(c.count == fresh.count);
      }
#endif
      return c;
    }
    auto it = views.find(m);
    if (it == views.end())
      it = views.emplace(m, build_candidates(kind, h, m)).first;
    return it->second;
  }
};

bool window_feasible(FitCtx& c, std::size_t m) {
  auto memo = c.feas.find(m);
  if (memo != c.feas.end()) return memo->second.ok;

  const double K = c.cfg.K;
  FeasInfo fi;
  bool witness_settled = false;
  if (c.witness) {
    if (c.witness_ceiling(m) < K) {
      // the carried bound already certifies this window; no exact score
      fi.ok = true;
      fi.score = c.witness_ceiling(m);
      fi.cand = *c.witness;
      witness_settled = true;
    } else if (c.witness_floor(m) >= K) {
      witness_settled = true;  // known infeasible; go straight to the list
    }
    if (!witness_settled) {
      ScanPoint wp;
      double s = scan_candidate(c.h, m, *c.witness, c.logterm, c.logdelta, K,
                                &wp, kBankExtra);
      // keep the higher-count point: deep failure points settle future
      // infeasibility probes, shallow in-window ones never can
      if (c.state && wp.depth > 0 && wp.cnt > c.state->wc_cnt) {
        c.state->wc_cnt = wp.cnt;
        c.state->wc_time = c.h.size() - wp.depth;
      }
      if (s < K) {
        fi.ok = true;
        fi.exact = true;
        fi.score = s;
        fi.cand = *c.witness;
        fi.wp = wp;
        if (c.state) {
          c.state->w_ub = s;
          c.state->w_start = c.h.size() - m;
        }
      }
    }
  }
  if (!fi.ok) {
    const CandList& cl = c.view(m);
    const double den_m = c.logterm[m] + c.logdelta;
    const std::uint32_t slack = count_slack(c.kind);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> order;
    order.reserve(64);
    for (std::size_t idx = 0; idx < cl.size(); ++idx) {
      std::uint32_t cnt = cl.count[idx];
      double lb = cnt > slack ? static_cast<double>(cnt - slack) / den_m : 0.0;
      if (lb >= K) continue;
      if (c.cache && c.cache->cert_floor(idx, c.logterm, c.logdelta) >= K)
        continue;
      order.emplace_back(cnt, static_cast<std::uint32_t>(idx));
    }
    std::sort(order.begin(), order.end());
    for (const auto& [cnt, idx] : order) {
      CandRef cr = cl.at(idx);
      ScanPoint wp;
      double s = scan_candidate(c.h, m, cr, c.logterm, c.logdelta, K, &wp,
                                kBankExtra);
      if (c.cache && wp.depth > 0)
        c.cache->cert_note(idx, wp.cnt, c.h.size() - wp.depth);
      if (s < K) {
        fi.ok = true;
        fi.exact = true;
        fi.score = s;
        fi.cand = cr;
        fi.wp = wp;
        c.witness = cr;
        if (c.state) {
          c.state->wc_cnt = wp.cnt;
          c.state->wc_time = c.h.size() - wp.depth;
          c.state->w_ub = s;
          c.state->w_start = c.h.size() - m;
        }
        break;
      }
    }
  }
  c.feas[m] = fi;
  return fi.ok;
}

// exact canonical minimizer of the window score at fixed m
FitResult select_at(FitCtx& c, std::size_t m, ScanPoint* winner_wp) {
  const CandList& cl = c.view(m);
  const double den_m = c.logterm[m] + c.logdelta;
  const std::uint32_t slack = count_slack(c.kind);
  const std::size_t n = cl.size();

  // seed the running best from the feasibility probe's completed scan when
  // its witness is a listed candidate; the canonical minimum is unaffected
  std::size_t best_idx = n;
  double s_best = kInf;
  ScanPoint best_wp;
  auto memo = c.feas.find(m);
  if (memo != c.feas.end() && memo->second.ok && memo->second.exact) {
    const CandRef& fc = memo->second.cand;
    auto it = std::lower_bound(cl.param.begin(), cl.param.end(), fc.param);
    if (it != cl.param.end() && *it == fc.param) {
      std::size_t p = static_cast<std::size_t>(it - cl.param.begin());
      best_idx =
          c.kind == ClassKind::threshold ? 2 * p + (fc.pol < 0 ? 1 : 0) : p;
      s_best = memo->second.score;
      best_wp = memo->second.wp;
    }
  }
  if (best_idx == n) {
    best_idx = 0;
    for (std::size_t idx = 1; idx < n; ++idx)
      if (cl.count[idx] < cl.count[best_idx]) best_idx = idx;
    s_best = scan_candidate(c.h, m, cl.at(best_idx), c.logterm, c.logdelta,
                            kInf, &best_wp);
    if (c.cache && best_wp.depth > 0)
      c.cache->cert_note(best_idx, best_wp.cnt, c.h.size() - best_wp.depth);
  }

  for (std::size_t idx = 0; idx < n; ++idx) {
    if (idx == best_idx) continue;
    std::uint32_t cnt = cl.count[idx];
    double lb = cnt > slack ? static_cast<double>(cnt - slack) / den_m : 0.0;
    if (lb > s_best || (lb == s_best && idx > best_idx)) continue;
    if (c.cache) {
      double cf = c.cache->cert_floor(idx, c.logterm, c.logdelta);
      if (cf > s_best || (cf == s_best && idx > best_idx)) continue;
    }
    ScanPoint wp;
    double s = scan_candidate(c.h, m, cl.at(idx), c.logterm, c.logdelta,
                              s_best, &wp, kBankExtra);
    if (c.cache && wp.depth > 0)
      c.cache->cert_note(idx, wp.cnt, c.h.size() - wp.depth);
    if (s < s_best || (s == s_best && idx < best_idx)) {
      s_best = s;
      best_idx = idx;
      best_wp = wp;
    }
  }
  FitResult r;
  r.m_hat = m;
  r.score = s_best;
  r.h = cand_hypothesis(cl.at(best_idx));
  if (winner_wp) *winner_wp = best_wp;
  return r;
}

WindowHypothesis canonical_first(ClassKind kind) {
  WindowHypothesis h;
  h.kind = kind;
  h.thr = ThresholdHypothesis{0.0, +1};
  h.weight_angle = 0.0;
  return h;
}

}  // namespace

ThresholdHypothesis erm_threshold(const std::vector<Observation>& window) {
  if (window.empty()) return ThresholdHypothesis{0.0, +1};
  History h;
  h.obs = window;
  CandList cl = build_threshold_list(h, window.size());
  std::size_t best = 0;
  for (std::size_t idx = 1; idx < cl.size(); ++idx)
    if (cl.count[idx] < cl.count[best]) best = idx;
  CandRef c = cl.at(best);
  return ThresholdHypothesis{c.param, c.pol};
}

WindowHypothesis erm_halfspace_2d_angles(const std::vector<Observation>& window) {
  if (window.empty()) return canonical_first(ClassKind::halfspace2d);
  History h;
  h.obs = window;
  CandList cl = build_halfspace_list(h, window.size());
  // interval counts screen, exact counts decide (boundary-exact points)
  std::uint32_t best_cnt = std::numeric_limits<std::uint32_t>::max();
  std::size_t best = 0;
  const std::uint32_t slack = count_slack(ClassKind::halfspace2d);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> order;
  order.reserve(cl.size());
  for (std::size_t idx = 0; idx < cl.size(); ++idx)
    order.emplace_back(cl.count[idx], static_cast<std::uint32_t>(idx));
  std::sort(order.begin(), order.end());
  for (const auto& [cnt, idx] : order) {
    if (best_cnt != std::numeric_limits<std::uint32_t>::max() &&
        cnt > best_cnt + slack)
      break;
    std::uint32_t exact = 0;
    CandRef c = cl.at(idx);
    for (const Observation& o : window)
      if (cand_mistake(c, o)) ++exact;
    if (exact < best_cnt || (exact == best_cnt && idx < best)) {
      best_cnt = exact;
      best = idx;
    }
  }
  return cand_hypothesis(cl.at(best));
}

HalfspaceHypothesis erm_halfspace_2d(
    const std::vector<std::pair<Vec, int>>& window) {
  std::vector<Observation> obs;
  obs.reserve(window.size());
  for (const auto& [x, y] : window) obs.push_back({point_angle(x), y});
  return erm_halfspace_2d_angles(obs).halfspace();
}

double window_score(const History& h, const WindowHypothesis& hyp,
                    std::size_t m, const AdaptiveConfig& cfg) {
  if (m > h.size()) throw std::invalid_argument("window_score: m exceeds history");
  if (m == 0) return 0.0;
  std::vector<double> lt;
  ensure_logterm(lt, cfg.vc_dim, m);
  double logdelta = log_cap(1.0 / cfg.delta);
  if (cfg.confidence == ConfidenceSchedule::per_round)
    logdelta = log_cap(static_cast<double>(h.size() + 1));
  CandRef c{hyp.kind, hyp.kind == ClassKind::threshold ? hyp.thr.cut
                                                       : hyp.weight_angle,
            hyp.kind == ClassKind::threshold ? hyp.thr.polarity : +1};
  return scan_candidate(h, m, c, lt, logdelta, kInf);
}

FitResult adaptive_fit(const History& h, const AdaptiveConfig& cfg,
                       ClassKind kind, FitState* state) {
  const std::size_t T1 = h.size();

  std::vector<double> local_lt;
  std::vector<double>* lt = &local_lt;
  if (state) {
    if (state->vc != cfg.vc_dim) {
      state->logterm.clear();
      state->valid = false;
      state->vc = cfg.vc_dim;
    }
    lt = &state->logterm;
  }
  ensure_logterm(*lt, cfg.vc_dim, T1);

  FitResult r;
  if (T1 == 0) {
    r.m_hat = 0;
    r.score = 0.0;
    r.h = canonical_first(kind);
    return r;
  }

  FitCtx ctx(h, cfg, kind, *lt);
  ctx.logdelta = cfg.confidence == ConfidenceSchedule::per_round
                     ? log_cap(static_cast<double>(T1 + 1))
                     : log_cap(1.0 / cfg.delta);
  if (state) {
    if (!state->view_cache)
      state->view_cache = std::make_shared<WindowViewCache>();
    WindowViewCache& wc = *state->view_cache;
    if (wc.kind != kind || wc.end > T1 || wc.end == 0) wc.reset(kind);
    wc.sync_end(h);
    ctx.cache = &wc;
  }
  if (state && state->valid && state->witness.kind == kind) {
    ctx.witness = CandRef{kind,
                          kind == ClassKind::threshold
                              ? state->witness.thr.cut
                              : state->witness.weight_angle,
                          kind == ClassKind::threshold
                              ? state->witness.thr.polarity
                              : +1};
    ctx.state = state;
    if (state->w_synced > T1) {
      // the history restarted; carried facts describe observations that no
      // longer exist, though the witness itself remains a usable probe
      state->wc_cnt = 0;
      state->wc_time = 0;
      state->w_ub = kInf;
      state->w_start = 0;
      state->w_synced = 0;
    }
    // fold observations that arrived since the last fit into the carried
    // witness facts: each mistake extends the exact tally, and any mistake
    // invalidates the upper bound (it only survives error-free appends)
    for (std::size_t i = state->w_synced; i < T1; ++i) {
      std::uint32_t e = cand_mistake(*ctx.witness, h.obs[i]);
      state->wc_cnt += e;
      if (e) state->w_ub = kInf;
    }
    state->w_synced = T1;
  }

  // Feasibility is monotone: the score is a max over suffix depths that can
  // only grow with m, so its class minimum is nondecreasing in m and the
  // feasible set is a prefix {1..m_hat}. A witness that still clears K on the
  // full window settles the common slow-drift rounds in one scan; otherwise
  // bracket from the previous round's window and bisect, deferring the full
  // candidate sweep at T1 to the rare case where the bracket reaches it.
  std::size_t m_hat = 0;
  bool top_ruled_out = false;
  if (ctx.witness) {
    if (ctx.witness_ceiling(T1) < cfg.K) {
      FeasInfo fi;
      fi.ok = true;  // certified by the carried bound; no exact score known
      fi.score = ctx.witness_ceiling(T1);
      fi.cand = *ctx.witness;
      ctx.feas[T1] = fi;
      m_hat = T1;
    } else if (ctx.witness_floor(T1) < cfg.K) {
      ScanPoint wp;
      double s = scan_candidate(h, T1, *ctx.witness, *lt, ctx.logdelta, cfg.K,
                                &wp, kBankExtra);
      if (state && wp.depth > 0 && wp.cnt > state->wc_cnt) {
        state->wc_cnt = wp.cnt;
        state->wc_time = T1 - wp.depth;
      }
      if (s < cfg.K) {
        FeasInfo fi;
        fi.ok = true;
        fi.exact = true;
        fi.score = s;
        fi.cand = *ctx.witness;
        fi.wp = wp;
        ctx.feas[T1] = fi;
        if (state) {
          state->w_ub = s;
          state->w_start = 0;
        }
        m_hat = T1;
      }
    }
    // a floor at or above K proves the witness fails the full window; skip
    // straight to the bracket and let the candidate sweep rule on T1 if the
    // bracket ever reaches it
  }
  if (m_hat == 0 && (!state || !state->valid)) {
    if (window_feasible(ctx, T1))
      m_hat = T1;
    else
      top_ruled_out = true;
  }
  if (m_hat == 0) {
    std::size_t lo = 0, hi = T1;  // invariant: lo feasible once set; hi
                                  // infeasible once top_ruled_out
    std::size_t hint = 0;
    if (state && state->valid)
      hint = std::min<std::size_t>(std::max<std::size_t>(state->m_prev, 1),
                                   T1 - 1 > 0 ? T1 - 1 : 1);
    if (hint >= 1 && hint < T1) {
      if (window_feasible(ctx, hint)) {
        lo = hint;
        for (std::size_t step = 1; lo + step < hi; step <<= 1) {
          if (window_feasible(ctx, lo + step))
            lo += step;
          else {
            hi = lo + step;
            top_ruled_out = true;
            break;
          }
        }
      } else {
        hi = hint;
        top_ruled_out = true;
        for (std::size_t step = 1; hi > step; step <<= 1) {
          std::size_t m = hi - step;
          if (m < 1) break;
          if (!window_feasible(ctx, m))
            hi = m;
          else {
            lo = m;
            break;
          }
        }
      }
    }
    if (!top_ruled_out) {
      // stale witness and the bracket never disproved the full window
      if (window_feasible(ctx, hi)) lo = hi;
    }
    if (lo == 0) {
      if (window_feasible(ctx, 1)) lo = 1;
    }
    if (lo == 0) {
      // no feasible window at all (only possible for degenerate K)
      r.m_hat = 0;
      r.score = kInf;
      r.h = canonical_first(kind);
      if (state) {
        state->valid = false;
        state->m_prev = 1;
      }
      return r;
    }
    while (hi - lo > 1) {
      std::size_t mid = lo + (hi - lo) / 2;
      if (window_feasible(ctx, mid))
        lo = mid;
      else
        hi = mid;
    }
    m_hat = lo;
  }

#ifndef NDEBUG
  if (m_hat < T1) {
    // the bisection must have certified the boundary
    auto it = ctx.feas.find(m_hat + 1);
    assert(it == ctx.feas.end() || !it->second.ok);
  }
#endif

  ScanPoint winner_wp;
  r = select_at(ctx, m_hat, &winner_wp);
  assert(r.score < cfg.K);

  if (state) {
    // when the returned hypothesis is the one the carried facts already
    // describe, keep the stronger point (a deep banked failure outlives
    // any in-window rediscovery); otherwise re-base everything on the
    // winner's own scan
    bool same = false;
    if (ctx.witness && ctx.witness->kind == kind) {
      same = kind == ClassKind::threshold
                 ? r.h.thr.cut == ctx.witness->param &&
                       r.h.thr.polarity == ctx.witness->pol
                 : r.h.weight_angle == ctx.witness->param;
    }
    if (!same || (winner_wp.depth > 0 && winner_wp.cnt > state->wc_cnt)) {
      state->wc_cnt = winner_wp.cnt;
      state->wc_time = T1 - winner_wp.depth;
    }
    state->valid = true;
    state->witness = r.h;
    state->m_prev = m_hat;
    state->w_ub = r.score;
    state->w_start = T1 - m_hat;
    state->w_synced = T1;
  }
  return r;
}

std::size_t nonadaptive_window(const DriftSchedule& s, std::uint64_t t, int d) {
  if (t < 2) return 0;
  if (d < 1) throw std::invalid_argument("nonadaptive_window: d must be >= 1");
  // S1[j] = sum of per-step drift bounds up through round j,
  // S2[j] = running sum of S1; the window objective needs both.
  std::vector<double> S1(t + 1, 0.0), S2(t + 1, 0.0);
  for (std::uint64_t j = 2; j <= t; ++j) S1[j] = S1[j - 1] + s.at(j);
  for (std::uint64_t j = 1; j <= t; ++j) S2[j] = S2[j - 1] + S1[j];

  std::size_t best_m = 1;
  double best = kInf;
  for (std::uint64_t m = 1; m <= t - 1; ++m) {
    double md = static_cast<double>(m);
    double drift_sum = md * S1[t] - (S2[t - 1] - S2[t - m - 1]);
    double obj = drift_sum / md + d * log_cap(md / d) / md;
    if (obj < best) {
      best = obj;
      best_m = static_cast<std::size_t>(m);
    }
  }
  return best_m;
}

RunTrace run_passive_learner(DriftEnvironment& env, std::uint64_t T,
                             PassiveLearner learner,
                             const AdaptiveConfig& cfg) {
  ClassKind kind;
  switch (env.kind()) {
    case EnvKind::drifting_threshold:
      kind = ClassKind::threshold;
      break;
    case EnvKind::rotating_halfspace:
      if (env.dimension() != 2)
        throw std::invalid_argument(
            "run_passive_learner: exact halfspace fitting needs dimension 2");
      kind = ClassKind::halfspace2d;
      break;
    case EnvKind::random_walk_2d:
      kind = ClassKind::halfspace2d;
      break;
    default:
      throw std::invalid_argument("run_passive_learner: unsupported environment");
  }

  History h;
  FitState st;
  RunTrace tr;
  WindowHypothesis cur = canonical_first(kind);

  for (std::uint64_t t = 1; t <= T; ++t) {
    StepSample s = env.advance();
    if (t >= 2) {
      if (learner == PassiveLearner::adaptive) {
        cur = adaptive_fit(h, cfg, kind, &st).h;
      } else {
        std::size_t m = nonadaptive_window(env.schedule(), t, cfg.vc_dim);
        m = std::min<std::size_t>(std::max<std::size_t>(m, 1), h.size());
        std::vector<Observation> win(h.obs.end() - m, h.obs.end());
        if (kind == ClassKind::threshold) {
          cur.kind = kind;
          cur.thr = erm_threshold(win);
        } else {
          cur = erm_halfspace_2d_angles(win);
        }
      }
    }
    double x = kind == ClassKind::threshold ? s.x[0] : point_angle(s.x);
    int pred = cur.predict_scalar(x);
    bool mistake = pred != s.y;
    double ex = kind == ClassKind::threshold ? s.exact_error(cur.thr)
                                             : s.exact_error(cur.halfspace());
    tr.add(t, mistake, true, ex);
    h.add(x, s.y);
  }
  return tr;
}

}  // namespace drift
