#pragma once

// Three-layer spiking network: input -> feature -> output.
//
// Each projection keeps separate excitatory and inhibitory matrices (rows =
// post-synaptic neuron, cols = pre-synaptic neuron) plus the connectivity
// masks drawn at initialization. The weight seen by a post-synaptic neuron is
// the float sum of the two matrices.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lens/framegen.hpp"
#include "lens/grid.hpp"

namespace lens {

struct HyperParams {
  double theta_max_if = 0.75;
  double theta_max_fo = 0.5;
  double eta_stdp = 0.01;
  double eta_itp = 0.02;
  double f_min_if = 0.4;
  double f_max_if = 0.6;
  double f_min_fo = 0.5;
  double f_max_fo = 0.5;
  double p_exc_if = 0.35;
  double p_inh_if = 0.75;
  double p_exc_fo = 1.0;
  double p_inh_fo = 1.0;
  std::size_t epochs_if = 64;
  std::size_t epochs_fo = 128;

  void validate() const;
  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

/// Constant-leak integrate-and-fire, explicit Euler with dt folded into tau.
struct IafParams {
  double tau = 1.0;
  double v_leak = 0.0;
  double resistance = 1.0;
  double i_bias = 0.0;
  double v_thresh = 1.0;
  double v_reset = 0.0;

  void validate() const;
};

struct Projection {
  Matrix<float> excitatory;
  Matrix<float> inhibitory;
  Grid<std::uint8_t> exc_mask;
  Grid<std::uint8_t> inh_mask;
  /// Per post-synaptic neuron target firing rate f_j.
  std::vector<float> target_rate;
  double theta_max = 1.0;

  std::size_t pre() const noexcept { return excitatory.cols(); }
  std::size_t post() const noexcept { return excitatory.rows(); }

  float effective(std::size_t post, std::size_t pre) const {
    return excitatory(post, pre) + inhibitory(post, pre);
  }
  Matrix<float> effective() const;

  /// Pre/post pairs with at least one connection.
  std::size_t connection_count() const;
};

struct NetworkModel {
  std::size_t n_in = 0;
  std::size_t n_feat = 0;
  std::size_t n_out = 0;
  Projection input_feature;
  Projection feature_output;
  HyperParams hyper;
  std::uint64_t seed = 0;
  bool trained = false;

  /// Nonzero effective weights across both projections.
  std::size_t parameter_count() const;
};

NetworkModel init_network(std::size_t n_in, std::size_t n_feat, std::size_t n_out,
                          const HyperParams& hyper, std::uint64_t seed);

struct Activations {
  std::vector<double> feature;
  std::vector<double> output;
};

/// Clamped linear propagation used during training.
std::vector<double> propagate(const Projection& proj, std::span<const double> pre);
Activations forward_abstract(const NetworkModel& model, const NormalizedFrame& frame);
Activations forward_abstract(const NetworkModel& model, std::span<const double> input);

/// Boolean spike tensor, timesteps x neurons.
class SpikeRaster {
 public:
  SpikeRaster() = default;
  SpikeRaster(std::size_t timesteps, std::size_t neurons, double dt = 1e-3)
      : timesteps_(timesteps), neurons_(neurons), dt_(dt), spikes_(timesteps * neurons, 0) {}

  std::size_t timesteps() const noexcept { return timesteps_; }
  std::size_t neurons() const noexcept { return neurons_; }
  double dt() const noexcept { return dt_; }

  bool at(std::size_t t, std::size_t n) const { return spikes_[t * neurons_ + n] != 0; }
  void set(std::size_t t, std::size_t n, bool v) { spikes_[t * neurons_ + n] = v ? 1 : 0; }
  std::span<const std::uint8_t> step(std::size_t t) const {
    return {spikes_.data() + t * neurons_, neurons_};
  }

  std::size_t count(std::size_t n) const;
  std::size_t total() const;

  friend bool operator==(const SpikeRaster&, const SpikeRaster&) = default;

 private:
  std::size_t timesteps_ = 0;
  std::size_t neurons_ = 0;
  double dt_ = 1e-3;
  std::vector<std::uint8_t> spikes_;
};

/// Spike at (t, pixel) iff a uniform draw in [0, 1) is below the intensity.
SpikeRaster rate_encode(const NormalizedFrame& frame, std::size_t timesteps, std::uint64_t seed,
                        double dt = 1e-3);
SpikeRaster rate_encode(std::span<const double> intensities, std::size_t timesteps,
                        std::uint64_t seed, double dt = 1e-3);

struct IafState {
  double v = 0.0;
  bool spiked = false;
};

IafState iaf_step(double v, double i_syn, const IafParams& p);

/// Runs the raster through feature and output IAF layers; returns the total
/// spike count of every output neuron.
std::vector<std::uint32_t> infer(const NetworkModel& model, const SpikeRaster& raster,
                                 const IafParams& p);

}  // namespace lens
