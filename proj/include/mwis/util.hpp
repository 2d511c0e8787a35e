#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mwis {

using NodeId = std::int64_t;

// Failure of an internal guarantee: an algorithm broke a bound it promises to
// maintain, as opposed to the caller passing bad input.
struct invariant_violation : std::logic_error {
  explicit invariant_violation(const std::string& what) : std::logic_error(what) {}
};

// Caller-facing precondition check.
inline void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Internal guarantee check, always on.
inline void ensure(bool ok, const std::string& what) {
  if (!ok) throw invariant_violation(what);
}

// a >= b up to relative slack; used for every weight-guarantee comparison.
inline bool geq_rel(double a, double b, double tol = 1e-9) {
  return a >= b - tol * std::abs(b);
}

// |a - b| small relative to the magnitudes involved (absolute floor of tol).
inline bool eq_rel(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Which endpoint of a conflict edge is dropped: the strictly lighter one, and
// on equal weights the larger identifier. Strict total order, so exactly one
// endpoint loses no matter which side evaluates the rule.
inline NodeId conflict_loser(double wu, NodeId u, double wv, NodeId v) {
  if (wu < wv) return u;
  if (wv < wu) return v;
  return u > v ? u : v;
}

// (weight, identifier)-lexicographic order used by the greedy join rule:
// ties go to the larger identifier.
inline bool weight_id_less(double wu, NodeId u, double wv, NodeId v) {
  if (wu != wv) return wu < wv;
  return u < v;
}

}  // namespace mwis
