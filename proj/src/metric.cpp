#include "pcnsm/metric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcnsm {

namespace {

void check_pair(const History &history, TimeIndex t, TimeIndex t_prime) {
  if (t > history.size() || t_prime > history.size())
    throw std::out_of_range("metric: time index beyond history length");
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw std::invalid_argument("metric: lambda must lie in [0, 1)");
}

bool same_triple(const History &history, TimeIndex t, TimeIndex t_prime) {
  return history.action(t) == history.action(t_prime) &&
         history.reward(t) == history.reward(t_prime) &&
         history.observation(t) == history.observation(t_prime);
}

double bounded_sum(const History &a, TimeIndex t, const History &b,
                   TimeIndex t_prime, const MetricSpec &spec, double cutoff) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("metric: observation dimensions differ");
  if (t < 1 || t_prime < 1 || t > a.size() || t_prime > b.size())
    throw std::out_of_range("metric: time index outside history");
  const std::size_t terms = std::min({t, t_prime, spec.window});
  double sum = 0.0;
  double weight = 1.0;
  for (std::size_t tau = 0; tau < terms; ++tau) {
    sum += weight * (a.observation(t - tau) - b.observation(t_prime - tau)).norm();
    if (sum >= cutoff)
      return std::numeric_limits<double>::infinity();
    weight *= spec.lambda;
  }
  return sum;
}

} // namespace

void MetricSpec::validate(double truncation_tol) const {
  if (window < 1)
    throw std::invalid_argument("metric: window must be at least 1");
  if (!(obs_scale_bound > 0.0))
    throw std::invalid_argument("metric: obs_scale_bound must be positive");
  if (kind == MetricKind::discounted) {
    check_lambda(lambda);
    const double tail = std::pow(lambda, static_cast<double>(window)) *
                        obs_scale_bound / (1.0 - lambda);
    if (tail > truncation_tol)
      throw std::invalid_argument("metric: window too short for truncation tolerance");
  }
}

std::size_t derive_window(double lambda, double obs_scale_bound, double tol) {
  check_lambda(lambda);
  if (!(obs_scale_bound > 0.0) || !(tol > 0.0))
    throw std::invalid_argument("derive_window: bound and tol must be positive");
  if (lambda == 0.0)
    return 1;
  std::size_t window = 1;
  double tail = lambda * obs_scale_bound / (1.0 - lambda);
  while (tail > tol) {
    tail *= lambda;
    ++window;
  }
  return window;
}

MetricSpec make_discounted_metric(double lambda, double obs_scale_bound,
                                  double truncation_tol) {
  MetricSpec spec;
  spec.kind = MetricKind::discounted;
  spec.lambda = lambda;
  spec.obs_scale_bound = obs_scale_bound;
  spec.window = derive_window(lambda, obs_scale_bound, truncation_tol);
  return spec;
}

MetricSpec make_match_length_metric() {
  MetricSpec spec;
  spec.kind = MetricKind::match_length;
  spec.lambda = 0.0;
  spec.window = 1;
  return spec;
}

std::size_t match_length(const History &history, TimeIndex t,
                         TimeIndex t_prime) {
  check_pair(history, t, t_prime);
  std::size_t n = 0;
  while (t > 0 && t_prime > 0 && same_triple(history, t, t_prime)) {
    ++n;
    --t;
    --t_prime;
  }
  return n;
}

double nsm_distance(const History &history, TimeIndex t, TimeIndex t_prime) {
  return 1.0 / (1.0 + static_cast<double>(match_length(history, t, t_prime)));
}

double discounted_distance(const History &history, TimeIndex t,
                           TimeIndex t_prime, const MetricSpec &spec) {
  return bounded_sum(history, t, history, t_prime, spec,
                     std::numeric_limits<double>::infinity());
}

double discounted_distance(const History &a, TimeIndex t, const History &b,
                           TimeIndex t_prime, const MetricSpec &spec) {
  return bounded_sum(a, t, b, t_prime, spec,
                     std::numeric_limits<double>::infinity());
}

double discounted_distance_bounded(const History &history, TimeIndex t,
                                   TimeIndex t_prime, const MetricSpec &spec,
                                   double cutoff) {
  return bounded_sum(history, t, history, t_prime, spec, cutoff);
}

double history_distance(const History &history, TimeIndex t, TimeIndex t_prime,
                        const MetricSpec &spec, double cutoff) {
  if (spec.kind == MetricKind::match_length)
    return nsm_distance(history, t, t_prime);
  return discounted_distance_bounded(history, t, t_prime, spec, cutoff);
}

} // namespace pcnsm
