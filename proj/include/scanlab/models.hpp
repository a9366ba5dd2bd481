#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "scanlab/cluster.hpp"
#include "scanlab/network.hpp"
#include "scanlab/rng.hpp"

namespace scanlab {

enum class Family { Gaussian, Bernoulli, Poisson };

std::string_view to_string(Family f) noexcept;
Family parse_family(std::string_view text);

/// One-parameter exponential family with its canonical natural parameter.
///
///   gaussian:  N(theta, 1),            null theta = 0, sigma^2 = 1
///   bernoulli: p = e^theta/(1+e^theta), null p = 1/2,  sigma^2 = 1/4
///   poisson:   mean e^theta,            null mean 1,   sigma^2 = 1
struct NoiseModel {
  Family family = Family::Gaussian;

  double sigma2() const noexcept { return family == Family::Bernoulli ? 0.25 : 1.0; }
  double sigma() const noexcept { return family == Family::Bernoulli ? 0.5 : 1.0; }
  /// Mean of X under the null.
  double null_mean() const noexcept;
  /// Mean of X under natural parameter theta. Bernoulli p >= 1 in floating point or a
  /// non-finite Poisson mean throws ParameterRangeError.
  double mean_at(double theta) const;
  /// theta_K = sigma * Lambda / sqrt(k).
  double theta(double lambda, std::size_t k) const noexcept;
  /// One draw from F_theta.
  double draw(Rng& rng, double theta) const;
};

/// Node values, one slice per time step 0..horizon; slice t is values()[t*m, (t+1)*m).
class Field {
 public:
  Field() = default;
  Field(std::size_t node_count, int horizon);

  std::size_t node_count() const noexcept { return m_; }
  int horizon() const noexcept { return horizon_; }
  std::size_t slices() const noexcept { return static_cast<std::size_t>(horizon_) + 1; }

  double at(NodeId v, int t = 0) const noexcept { return values_[static_cast<std::size_t>(t) * m_ + v]; }
  double& at(NodeId v, int t = 0) noexcept { return values_[static_cast<std::size_t>(t) * m_ + v]; }
  std::span<const double> slice(int t) const noexcept {
    return {values_.data() + static_cast<std::size_t>(t) * m_, m_};
  }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::size_t m_ = 0;
  int horizon_ = 0;
  std::vector<double> values_;
};

/// Signal strength and optional per-node natural parameters.
struct SignalSpec {
  double lambda = 0.0;
  /// (node, theta) pairs; each theta must be >= the implied theta_K.
  std::vector<std::pair<NodeId, double>> overrides;
};

/// I.i.d. null draws at every (node, time), from Rng(seed) in slice-major order.
Field sample_null(std::size_t node_count, const NoiseModel& model, int horizon, std::uint64_t seed);
inline Field sample_null(const NodeSet& net, const NoiseModel& model, int horizon, std::uint64_t seed) {
  return sample_null(net.size(), model, horizon, seed);
}

/// Copy of `field` with the values on K (slice `t`) replaced by draws from F_{theta_K}.
Field plant(const Field& field, const Cluster& k, const SignalSpec& sig, const NoiseModel& model,
            std::uint64_t seed, int t = 0);

/// Spatio-temporal planting: slices[t] lists the anomalous nodes at time t and |K| is
/// the total number of anomalous (node, time) pairs.
Field plant(const Field& field, const std::vector<Cluster>& slices, const SignalSpec& sig,
            const NoiseModel& model, std::uint64_t seed);

/// (MAD / Phi^{-1}(3/4))^2 over every value of the field.
double mad_variance(const Field& field);

/// (sum_{v in K} X_v - |K| mean0) / (sigma sqrt|K|) on slice t. Throws DomainError on empty K.
double standardized_sum(const Field& field, std::span<const NodeId> k, const NoiseModel& model, int t = 0);
inline double standardized_sum(const Field& field, const Cluster& k, const NoiseModel& model, int t = 0) {
  return standardized_sum(field, k.ids(), model, t);
}

/// Smallest cluster size for which the normal approximation of non-Gaussian sums is trusted.
inline constexpr std::size_t kMinClusterSize = 30;

/// True when a non-Gaussian model is used with clusters smaller than kMinClusterSize.
inline bool small_cluster_warning(const NoiseModel& model, std::size_t k) noexcept {
  return model.family != Family::Gaussian && k < kMinClusterSize;
}

}  // namespace scanlab
