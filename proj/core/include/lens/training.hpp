#pragma once

// Unsupervised STDP for input->feature and a supervised delta rule for
// feature->output. Both rules gate on the pre-synaptic activation and scale
// by the post-synaptic neuron's target rate.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lens/framegen.hpp"
#include "lens/snn.hpp"

namespace lens {

/// Linearly annealed learning rate: eta_e = eta_init * (1 - e / epochs).
struct TrainingSchedule {
  std::size_t epochs = 1;
  double eta_init = 0.01;
  /// Present frames in a seeded random order each epoch instead of dataset order.
  std::optional<std::uint64_t> shuffle_seed;

  double rate_at(std::size_t epoch) const;
  void validate() const;
};

/// (eta / f) * H(pre) * H(post) * (0.5 - post), H(0) = 0.
double stdp_delta(double pre, double post, double eta, double target_rate);

/// (eta / f) * pre * (forced - post).
double delta_rule(double pre, double post, double forced, double eta, double target_rate);

struct EpochRecord {
  std::size_t epoch = 0;
  std::string layer;
  double eta = 0.0;
  double mean_abs_delta = 0.0;
};

using TrainingLog = std::vector<EpochRecord>;

void train_feature_layer(NetworkModel& model, std::span<const NormalizedFrame> frames,
                         const TrainingSchedule& schedule, TrainingLog* log = nullptr);

/// Trains one output neuron per place; labels are output neuron indices and
/// must be distinct. Marks the model trained.
void train_output_layer(NetworkModel& model, std::span<const NormalizedFrame> frames,
                        std::span<const std::size_t> labels, const TrainingSchedule& schedule,
                        double x_force = 0.5, TrainingLog* log = nullptr);

/// `epoch,layer,eta,mean_abs_delta` header followed by one line per epoch.
void write_training_log(std::ostream& out, const TrainingLog& log);

}  // namespace lens
