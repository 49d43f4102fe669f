#include "lens/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

#include "lens/error.hpp"
#include "lens/rng.hpp"
#include "lens/text.hpp"

namespace lens {

double TrainingSchedule::rate_at(std::size_t epoch) const {
  if (epoch >= epochs) return 0.0;
  return eta_init * (1.0 - static_cast<double>(epoch) / static_cast<double>(epochs));
}

void TrainingSchedule::validate() const {
  if (epochs == 0) {
    throw ValidationError("training needs at least one epoch");
  }
  if (eta_init < 0.0) {
    throw ValidationError("learning rate must be non-negative");
  }
}

double stdp_delta(double pre, double post, double eta, double target_rate) {
  if (target_rate == 0.0) {
    throw ValidationError("target firing rate must be nonzero");
  }
  if (pre <= 0.0 || post <= 0.0) {
    return 0.0;
  }
  return eta / target_rate * (0.5 - post);
}

double delta_rule(double pre, double post, double forced, double eta, double target_rate) {
  if (target_rate == 0.0) {
    throw ValidationError("target firing rate must be nonzero");
  }
  return eta / target_rate * (pre * (forced - post));
}

namespace {

std::vector<std::size_t> presentation_order(std::size_t n, const TrainingSchedule& schedule,
                                            std::size_t epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (schedule.shuffle_seed) {
    Rng rng(derive_seed(*schedule.shuffle_seed, epoch));
    rng.shuffle(order);
  }
  return order;
}

float clamp_weight(double w, double theta) {
  w = w < -theta ? -theta : w;
  w = w > theta ? theta : w;
  return static_cast<float>(w);
}

// Per post-synaptic row: sum of weight(pre_i) over connected entries, counting
// both matrices.
template <typename Weight>
std::vector<double> connected_sums(const Projection& proj, std::span<const double> pre,
                                   Weight weight) {
  std::vector<double> sums(proj.post(), 0.0);
  for (std::size_t j = 0; j < proj.post(); ++j) {
    const auto exc_mask = proj.exc_mask.row(j);
    const auto inh_mask = proj.inh_mask.row(j);
    for (std::size_t i = 0; i < pre.size(); ++i) {
      sums[j] += weight(pre[i]) * static_cast<double>(exc_mask[i] + inh_mask[i]);
    }
  }
  return sums;
}

std::size_t total_connections(const Projection& proj) {
  std::size_t n = 0;
  for (std::size_t j = 0; j < proj.post(); ++j) {
    for (std::size_t i = 0; i < proj.pre(); ++i) {
      n += std::size_t{proj.exc_mask(j, i)} + std::size_t{proj.inh_mask(j, i)};
    }
  }
  return n;
}

// Adds delta(pre) to every connected entry of row j; unconnected entries get
// a zero delta.
template <typename Delta>
void update_row(Projection& proj, std::size_t j, std::span<const double> pre, Delta delta) {
  auto exc = proj.excitatory.row(j);
  auto inh = proj.inhibitory.row(j);
  const auto exc_mask = proj.exc_mask.row(j);
  const auto inh_mask = proj.inh_mask.row(j);
  const double theta = proj.theta_max;
  for (std::size_t i = 0; i < pre.size(); ++i) {
    const double d = delta(pre[i]);
    exc[i] = clamp_weight(exc[i] + d * exc_mask[i], theta);
    inh[i] = clamp_weight(inh[i] + d * inh_mask[i], theta);
  }
}

void check_rates(const Projection& proj) {
  for (float f : proj.target_rate) {
    if (f == 0.0f) {
      throw ValidationError("target firing rate must be nonzero");
    }
  }
}

void check_frames(const NetworkModel& model, std::span<const NormalizedFrame> frames) {
  if (frames.empty()) {
    throw ValidationError("training needs at least one frame");
  }
  for (const auto& f : frames) {
    if (f.pixel_count() != model.n_in) {
      throw ValidationError("training frame has " + std::to_string(f.pixel_count()) +
                            " pixels, model expects " + std::to_string(model.n_in));
    }
  }
}

}  // namespace

void train_feature_layer(NetworkModel& model, std::span<const NormalizedFrame> frames,
                         const TrainingSchedule& schedule, TrainingLog* log) {
  schedule.validate();
  check_frames(model, frames);
  if (model.trained) {
    throw ValidationError("model is already trained");
  }
  Projection& proj = model.input_feature;
  check_rates(proj);
  const std::size_t connections = total_connections(proj);
  std::vector<std::vector<double>> active;
  active.reserve(frames.size());
  for (const auto& f : frames) {
    active.push_back(connected_sums(proj, f.intensities.values(),
                                    [](double x) { return x > 0.0 ? 1.0 : 0.0; }));
  }
  for (std::size_t epoch = 0; epoch < schedule.epochs; ++epoch) {
    const double eta = schedule.rate_at(epoch);
    double abs_sum = 0.0;
    for (std::size_t idx : presentation_order(frames.size(), schedule, epoch)) {
      const auto input = frames[idx].intensities.values();
      const auto feature = propagate(proj, input);
      for (std::size_t j = 0; j < proj.post(); ++j) {
        if (!(feature[j] > 0.0)) continue;
        const double d = stdp_delta(1.0, feature[j], eta, proj.target_rate[j]);
        update_row(proj, j, input, [d](double x) { return x > 0.0 ? d : 0.0; });
        abs_sum += std::abs(d) * active[idx][j];
      }
    }
    if (log) {
      const double updates = static_cast<double>(connections * frames.size());
      log->push_back({epoch, "IF", eta, updates > 0.0 ? abs_sum / updates : 0.0});
    }
  }
}

void train_output_layer(NetworkModel& model, std::span<const NormalizedFrame> frames,
                        std::span<const std::size_t> labels, const TrainingSchedule& schedule,
                        double x_force, TrainingLog* log) {
  schedule.validate();
  check_frames(model, frames);
  if (model.trained) {
    throw ValidationError("model is already trained");
  }
  if (labels.size() != frames.size()) {
    throw ValidationError("expected one label per training frame");
  }
  std::set<std::size_t> seen;
  for (std::size_t label : labels) {
    if (label >= model.n_out) {
      throw ValidationError("place label " + std::to_string(label) + " has no output neuron (n_out=" +
                            std::to_string(model.n_out) + ")");
    }
    if (!seen.insert(label).second) {
      throw ValidationError("place label " + std::to_string(label) +
                            " is assigned to more than one frame");
    }
  }

  Projection& proj = model.feature_output;
  std::vector<std::vector<double>> features;
  features.reserve(frames.size());
  for (const auto& f : frames) {
    features.push_back(propagate(model.input_feature, f.intensities.values()));
  }

  check_rates(proj);
  const std::size_t connections = total_connections(proj);
  std::vector<std::vector<double>> active;
  active.reserve(features.size());
  for (const auto& f : features) {
    active.push_back(connected_sums(proj, f, [](double x) { return x; }));
  }
  for (std::size_t epoch = 0; epoch < schedule.epochs; ++epoch) {
    const double eta = schedule.rate_at(epoch);
    double abs_sum = 0.0;
    for (std::size_t idx : presentation_order(frames.size(), schedule, epoch)) {
      const auto& pre = features[idx];
      const auto post = propagate(proj, pre);
      for (std::size_t j = 0; j < proj.post(); ++j) {
        const double target = j == labels[idx] ? x_force : 0.0;
        const double gain = eta / proj.target_rate[j];
        const double error = target - post[j];
        if (error == 0.0) continue;
        update_row(proj, j, pre, [=](double x) { return gain * (x * error); });
        abs_sum += std::abs(gain * error) * active[idx][j];
      }
    }
    if (log) {
      const double updates = static_cast<double>(connections * frames.size());
      log->push_back({epoch, "FO", eta, updates > 0.0 ? abs_sum / updates : 0.0});
    }
  }
  model.trained = true;
}

void write_training_log(std::ostream& out, const TrainingLog& log) {
  out << "epoch,layer,eta,mean_abs_delta\n";
  for (const auto& r : log) {
    out << r.epoch << ',' << r.layer << ',' << text::format_double(r.eta) << ','
        << text::format_double(r.mean_abs_delta) << '\n';
  }
}

}  // namespace lens
