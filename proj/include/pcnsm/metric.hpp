#pragma once

#include "pcnsm/core.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <limits>

namespace pcnsm {

enum class MetricKind { match_length, discounted };

/// Selects the history distance. `window` caps the number of summed terms of
/// the discounted form; `obs_scale_bound` is the largest possible distance
/// between two single observations of the environment.
struct MetricSpec {
  MetricKind kind = MetricKind::discounted;
  double lambda = 0.8;
  std::size_t window = 1;
  double obs_scale_bound = 1.0;

  /// Checks ranges and, for the discounted kind, that the tail dropped by the
  /// window is at most `truncation_tol`.
  void validate(double truncation_tol) const;
};

/// Smallest W >= 1 with lambda^W * bound / (1 - lambda) <= tol; 1 for lambda 0.
/// Throws std::invalid_argument for lambda outside [0, 1) or non-positive
/// bound or tol.
std::size_t derive_window(double lambda, double obs_scale_bound, double tol);

MetricSpec make_discounted_metric(double lambda, double obs_scale_bound,
                                  double truncation_tol);
MetricSpec make_match_length_metric();

/// Number of contiguous identical (action, observation, reward) triples
/// ending at t and t', walking back in time. Index 0 yields 0.
std::size_t match_length(const History &history, TimeIndex t,
                         TimeIndex t_prime);

/// 1 / (1 + match_length).
double nsm_distance(const History &history, TimeIndex t, TimeIndex t_prime);

/// Discounted Euclidean distance between two observation suffixes stored as
/// columns, newest first. Sums min(cols(a), cols(b)) terms.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar
discounted_suffix_distance(const Eigen::MatrixBase<DerivedA> &a,
                           const Eigen::MatrixBase<DerivedB> &b,
                           typename DerivedA::Scalar lambda) {
  using Scalar = typename DerivedA::Scalar;
  eigen_assert(a.rows() == b.rows());
  const Eigen::Index terms = std::min(a.cols(), b.cols());
  Scalar sum(0);
  Scalar weight(1);
  for (Eigen::Index tau = 0; tau < terms; ++tau) {
    sum += weight * (a.col(tau) - b.col(tau)).norm();
    weight *= lambda;
  }
  return sum;
}

/// Discounted distance between h_t and h_t' of one history, truncated at
/// spec.window terms.
double discounted_distance(const History &history, TimeIndex t,
                           TimeIndex t_prime, const MetricSpec &spec);

/// Same, between suffixes of two histories. Throws std::invalid_argument on
/// mismatched observation dimensions.
double discounted_distance(const History &a, TimeIndex t, const History &b,
                           TimeIndex t_prime, const MetricSpec &spec);

/// Discounted distance that gives up once the partial sum reaches `cutoff`,
/// returning +inf. The summation order matches discounted_distance, so any
/// finite result is bitwise identical to it.
double discounted_distance_bounded(const History &history, TimeIndex t,
                                   TimeIndex t_prime, const MetricSpec &spec,
                                   double cutoff);

/// Dispatches on spec.kind.
double history_distance(const History &history, TimeIndex t, TimeIndex t_prime,
                        const MetricSpec &spec,
                        double cutoff = std::numeric_limits<double>::infinity());

} // namespace pcnsm
