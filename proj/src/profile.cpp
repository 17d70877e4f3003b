#include "hybridcost/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "hybridcost/error.hpp"

namespace hybridcost {

StagedModelProfile::StagedModelProfile(std::string name, double slo_seconds,
                                       std::vector<PartitionProfile> partitions, int batch_size)
    : name_(std::move(name)), slo_(slo_seconds), batch_size_(batch_size), partitions_(std::move(partitions)) {
  if (partitions_.empty()) {
    throw ProfileShapeError("profile '" + name_ + "' has no partitions");
  }
  if (!(slo_ >= 0.0) || !std::isfinite(slo_)) {
    throw InvalidArgument("profile '" + name_ + "': slo_seconds must be finite and >= 0");
  }
  if (batch_size_ <= 0) {
    throw InvalidArgument("profile '" + name_ + "': batch_size must be positive");
  }
  for (std::size_t i = 0; i < partitions_.size(); ++i) {
    const auto& part = partitions_[i];
    if (part.pid != static_cast<int>(i) + 1) {
      throw ProfileShapeError("profile '" + name_ + "': partition ids must be contiguous 1..L, found " +
                              std::to_string(part.pid) + " at position " + std::to_string(i + 1));
    }
    for (const auto& [config, seconds] : part.runtimes) {
      if (!(seconds > 0.0) || !std::isfinite(seconds)) {
        throw ProfileShapeError("profile '" + name_ + "': runtime of partition " + std::to_string(part.pid) +
                                " on '" + config + "' must be positive and finite");
      }
    }
  }
  if (!partitions_.back().ends_in_classifier) {
    throw ProfileShapeError("profile '" + name_ + "': last partition must end in the final classifier");
  }
}

const PartitionProfile& StagedModelProfile::partition(int pid) const {
  if (pid < 1 || pid > num_partitions()) {
    throw ProfileShapeError("partition " + std::to_string(pid) + " out of range 1.." +
                            std::to_string(num_partitions()));
  }
  return partitions_[pid - 1];
}

bool StagedModelProfile::has_runtime(int pid, const ConfigId& config) const {
  const auto& runtimes = partition(pid).runtimes;
  return runtimes.find(config) != runtimes.end();
}

double StagedModelProfile::batch_runtime(int pid, const ConfigId& config) const {
  const auto& runtimes = partition(pid).runtimes;
  auto it = runtimes.find(config);
  if (it == runtimes.end()) {
    throw ProfileShapeError("profile '" + name_ + "': no runtime for partition " + std::to_string(pid) +
                            " on '" + config + "'");
  }
  return it->second;
}

double StagedModelProfile::request_runtime(int pid, const ConfigId& config) const {
  return batch_runtime(pid, config) / batch_size_;
}

double StagedModelProfile::batch_runtime_range(int first, int last, const ConfigId& config) const {
  double total = 0.0;
  for (int pid = first; pid <= last; ++pid) {
    total += batch_runtime(pid, config);
  }
  return total;
}

ExitDistribution::ExitDistribution(std::vector<double> fractions, double conf_thres,
                                   std::optional<double> accuracy)
    : fractions_(std::move(fractions)), conf_thres_(conf_thres), accuracy_(accuracy) {
  if (fractions_.empty()) {
    throw ProfileShapeError("exit distribution has no partitions");
  }
  if (!(conf_thres_ >= 0.0 && conf_thres_ <= 1.0)) {
    throw InvalidArgument("conf_thres must lie in [0, 1]");
  }
  if (accuracy_ && !(*accuracy_ >= 0.0 && *accuracy_ <= 1.0)) {
    throw InvalidArgument("accuracy must lie in [0, 1]");
  }
  double sum = 0.0;
  for (double f : fractions_) {
    if (!(f >= 0.0) || !std::isfinite(f)) {
      throw InvalidArgument("exit fractions must be finite and non-negative");
    }
    sum += f;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw InvalidArgument("exit fractions sum to " + std::to_string(sum) + ", expected 1");
  }

  const auto L = fractions_.size();
  survival_.assign(L + 1, 0.0);
  survival_[0] = 1.0;
  double cumulative = 0.0;
  for (std::size_t k = 1; k < L; ++k) {
    cumulative += fractions_[k - 1];
    survival_[k] = std::max(0.0, 1.0 - cumulative);
  }
  survival_[L] = 0.0;
}

ExitDistribution ExitDistribution::from_conditional(std::span<const double> betas, double conf_thres,
                                                    std::optional<double> accuracy) {
  if (betas.empty()) {
    throw ProfileShapeError("conditional exit probabilities are empty");
  }
  std::vector<double> fractions(betas.size());
  double reach = 1.0;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const bool last = i + 1 == betas.size();
    const double beta = last ? 1.0 : betas[i];
    if (!(beta >= 0.0 && beta <= 1.0)) {
      throw InvalidArgument("conditional exit probability " + std::to_string(i + 1) + " outside [0, 1]");
    }
    fractions[i] = beta * reach;
    reach *= 1.0 - beta;
  }
  return ExitDistribution(std::move(fractions), conf_thres, accuracy);
}

double ExitDistribution::survival(int pid) const {
  if (pid < 1 || pid > num_partitions() + 1) {
    throw ProfileShapeError("partition " + std::to_string(pid) + " out of range");
  }
  return survival_[pid - 1];
}

std::vector<double> ExitDistribution::conditional() const {
  std::vector<double> betas(fractions_.size(), 1.0);
  for (std::size_t i = 0; i < fractions_.size(); ++i) {
    if (survival_[i] > 0.0) {
      betas[i] = std::min(1.0, fractions_[i] / survival_[i]);
    }
  }
  betas.back() = 1.0;
  return betas;
}

std::vector<double> propagate_rates(const ExitDistribution& dist, double n) {
  if (!(n >= 0.0)) {
    throw InvalidArgument("request count must be non-negative");
  }
  std::vector<double> rates(dist.num_partitions());
  rates[0] = n;
  for (int pid = 2; pid <= dist.num_partitions(); ++pid) {
    rates[pid - 1] = n * dist.survival(pid);
  }
  return rates;
}

std::vector<double> exits_per_partition(const ExitDistribution& dist, double n) {
  const auto rates = propagate_rates(dist, n);
  std::vector<double> exits(rates.size());
  for (std::size_t k = 0; k < rates.size(); ++k) {
    const double next = k + 1 < rates.size() ? rates[k + 1] : 0.0;
    exits[k] = rates[k] - next;
  }
  return exits;
}

double expected_runtime(const StagedModelProfile& profile, const ExitDistribution& dist,
                        const std::map<int, ConfigId>& assignment) {
  check_same_shape(profile, dist);
  double total = 0.0;
  double path = 0.0;
  for (int pid = 1; pid <= profile.num_partitions(); ++pid) {
    auto it = assignment.find(pid);
    if (it == assignment.end()) {
      throw ProfileShapeError("assignment does not cover partition " + std::to_string(pid));
    }
    path += profile.request_runtime(pid, it->second);
    total += dist.fractions()[pid - 1] * path;
  }
  return total;
}

void check_same_shape(const StagedModelProfile& profile, const ExitDistribution& dist) {
  if (profile.num_partitions() != dist.num_partitions()) {
    throw ProfileShapeError("profile '" + profile.name() + "' has " + std::to_string(profile.num_partitions()) +
                            " partitions but the exit distribution has " +
                            std::to_string(dist.num_partitions()));
  }
}

}  // namespace hybridcost
