#include "scanlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scanlab/errors.hpp"

namespace scanlab {

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::Gaussian: return "gaussian";
    case Family::Bernoulli: return "bernoulli";
    case Family::Poisson: return "poisson";
  }
  return "?";
}

Family parse_family(std::string_view text) {
  if (text == "gaussian") return Family::Gaussian;
  if (text == "bernoulli") return Family::Bernoulli;
  if (text == "poisson") return Family::Poisson;
  throw ConfigError("model", "unknown noise family '" + std::string(text) + "'");
}

double NoiseModel::null_mean() const noexcept {
  switch (family) {
    case Family::Gaussian: return 0.0;
    case Family::Bernoulli: return 0.5;
    case Family::Poisson: return 1.0;
  }
  return 0.0;
}

double NoiseModel::mean_at(double theta) const {
  switch (family) {
    case Family::Gaussian:
      return theta;
    case Family::Bernoulli: {
      const double p = 1.0 / (1.0 + std::exp(-theta));
      if (!(p < 1.0) || !(p > 0.0))
        throw ParameterRangeError("bernoulli success probability leaves (0,1) at theta = " + std::to_string(theta));
      return p;
    }
    case Family::Poisson: {
      const double mean = std::exp(theta);
      if (!std::isfinite(mean) || mean > 1e12)
        throw ParameterRangeError("poisson mean out of range at theta = " + std::to_string(theta));
      return mean;
    }
  }
  return 0.0;
}

double NoiseModel::theta(double lambda, std::size_t k) const noexcept {
  return sigma() * lambda / std::sqrt(static_cast<double>(k));
}

double NoiseModel::draw(Rng& rng, double th) const {
  switch (family) {
    case Family::Gaussian: return th + rng.normal();
    case Family::Bernoulli: return rng.bernoulli(mean_at(th)) ? 1.0 : 0.0;
    case Family::Poisson: return static_cast<double>(rng.poisson(mean_at(th)));
  }
  return 0.0;
}

Field::Field(std::size_t node_count, int horizon)
    : m_(node_count), horizon_(horizon), values_(node_count * (static_cast<std::size_t>(horizon) + 1), 0.0) {
  if (horizon < 0) throw DomainError("time horizon must be nonnegative");
}

Field sample_null(std::size_t node_count, const NoiseModel& model, int horizon, std::uint64_t seed) {
  Field f(node_count, horizon);
  Rng rng(seed);
  auto v = f.values();
  switch (model.family) {
    case Family::Gaussian:
      for (double& x : v) x = rng.normal();
      break;
    case Family::Bernoulli:
      for (double& x : v) x = rng.bernoulli(0.5) ? 1.0 : 0.0;
      break;
    case Family::Poisson:
      for (double& x : v) x = static_cast<double>(rng.poisson(1.0));
      break;
  }
  return f;
}

namespace {

double node_theta(const SignalSpec& sig, NodeId v, double theta_k) {
  for (const auto& [node, th] : sig.overrides)
    if (node == v) return th;
  return theta_k;
}

void check_overrides(const SignalSpec& sig, double theta_k) {
  for (const auto& [node, th] : sig.overrides)
    if (th < theta_k)
      throw DomainError("per-node parameter for node " + std::to_string(node) + " is below theta_K");
}

}  // namespace

Field plant(const Field& field, const Cluster& k, const SignalSpec& sig, const NoiseModel& model,
            std::uint64_t seed, int t) {
  std::vector<Cluster> slices(field.slices());
  if (t < 0 || t > field.horizon()) throw DomainError("plant slice outside the time horizon");
  slices[static_cast<std::size_t>(t)] = k;
  return plant(field, slices, sig, model, seed);
}

Field plant(const Field& field, const std::vector<Cluster>& slices, const SignalSpec& sig,
            const NoiseModel& model, std::uint64_t seed) {
  if (slices.size() > field.slices()) throw DomainError("cluster sequence is longer than the field horizon");
  std::size_t total = 0;
  for (const auto& s : slices) {
    total += s.size();
    if (!s.empty() && s.ids().back() >= field.node_count()) throw DomainError("cluster id outside the field");
  }
  if (total == 0) throw DomainError("cannot plant an empty cluster");
  if (!(sig.lambda >= 0.0)) throw DomainError("signal strength must be nonnegative");
  const double theta_k = model.theta(sig.lambda, total);
  check_overrides(sig, theta_k);
  model.mean_at(theta_k);

  Field out = field;
  Rng rng(seed);
  for (std::size_t t = 0; t < slices.size(); ++t)
    for (NodeId v : slices[t])
      out.at(v, static_cast<int>(t)) = model.draw(rng, node_theta(sig, v, theta_k));
  return out;
}

double mad_variance(const Field& field) {
  std::vector<double> v(field.values().begin(), field.values().end());
  if (v.size() < 2) throw DomainError("MAD needs at least two values");
  auto median = [](std::vector<double>& x) {
    const std::size_t n = x.size(), h = n / 2;
    std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(h), x.end());
    const double upper = x[h];
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(h));
    return 0.5 * (lower + upper);
  };
  const double med = median(v);
  for (double& x : v) x = std::abs(x - med);
  const double mad = median(v) / 0.6744897501960817;
  return mad * mad;
}

double standardized_sum(const Field& field, std::span<const NodeId> k, const NoiseModel& model, int t) {
  if (k.empty()) throw DomainError("standardized sum over an empty cluster");
  const auto x = field.slice(t);
  double s = 0.0;
  for (NodeId v : k) s += x[v];
  const auto n = static_cast<double>(k.size());
  return (s - n * model.null_mean()) / (model.sigma() * std::sqrt(n));
}

}  // namespace scanlab
