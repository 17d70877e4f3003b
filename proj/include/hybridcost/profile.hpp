#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hybridcost {

using ConfigId = std::string;

struct PartitionProfile {
  int pid = 0;
  // Seconds to run one batch of `StagedModelProfile::batch_size` requests
  // through this partition, keyed by platform config.
  std::map<ConfigId, double> runtimes;
  bool ends_in_classifier = true;
};

/// A model cut into L sequential partitions, each ending in an internal or
/// final classifier. Runtimes are profiled per batch; per-request values are
/// batch time divided by the batch size.
class StagedModelProfile {
 public:
  StagedModelProfile(std::string name, double slo_seconds, std::vector<PartitionProfile> partitions,
                     int batch_size = 100);

  const std::string& name() const { return name_; }
  double slo() const { return slo_; }
  int batch_size() const { return batch_size_; }
  int num_partitions() const { return static_cast<int>(partitions_.size()); }
  const std::vector<PartitionProfile>& partitions() const { return partitions_; }
  const PartitionProfile& partition(int pid) const;

  bool has_runtime(int pid, const ConfigId& config) const;
  // Throws ProfileShapeError when the entry is missing.
  double batch_runtime(int pid, const ConfigId& config) const;
  double request_runtime(int pid, const ConfigId& config) const;
  // Sum of batch runtimes over partitions [first, last] on one config.
  double batch_runtime_range(int first, int last, const ConfigId& config) const;

 private:
  std::string name_;
  double slo_;
  int batch_size_;
  std::vector<PartitionProfile> partitions_;
};

/// Unconditional exit fractions f_pid (share of all arrivals that exit at
/// partition pid). Sums to one; the final classifier absorbs the remainder.
class ExitDistribution {
 public:
  static constexpr double kSumTolerance = 1e-9;

  ExitDistribution(std::vector<double> fractions, double conf_thres = 1.0,
                   std::optional<double> accuracy = std::nullopt);

  // betas[pid-1] is the probability of exiting at pid given the request
  // reached it. The last entry is treated as 1 whatever its value.
  static ExitDistribution from_conditional(std::span<const double> betas, double conf_thres = 1.0,
                                           std::optional<double> accuracy = std::nullopt);

  int num_partitions() const { return static_cast<int>(fractions_.size()); }
  const std::vector<double>& fractions() const { return fractions_; }
  double conf_thres() const { return conf_thres_; }
  const std::optional<double>& accuracy() const { return accuracy_; }

  // Share of arrivals that enter partition pid: 1 for pid = 1, then
  // 1 - sum_{i<pid} f_i. survival(L + 1) is 0.
  double survival(int pid) const;
  const std::vector<double>& survival_table() const { return survival_; }

  // Inverse of from_conditional wherever the survival share is positive;
  // 1 elsewhere.
  std::vector<double> conditional() const;

 private:
  std::vector<double> fractions_;
  std::vector<double> survival_;  // size L + 1
  double conf_thres_;
  std::optional<double> accuracy_;
};

// rate[k] (0-based index k = pid - 1) = n * survival(pid). rate[0] == n exactly.
std::vector<double> propagate_rates(const ExitDistribution& dist, double n);

// Requests exiting at each partition for n arrivals; telescoping differences of
// propagate_rates so the total equals n.
std::vector<double> exits_per_partition(const ExitDistribution& dist, double n);

// Mean seconds per request when partition pid runs on assignment.at(pid).
double expected_runtime(const StagedModelProfile& profile, const ExitDistribution& dist,
                        const std::map<int, ConfigId>& assignment);

void check_same_shape(const StagedModelProfile& profile, const ExitDistribution& dist);

}  // namespace hybridcost
