#include "lens/snn.hpp"

#include <algorithm>

#include "lens/error.hpp"
#include "lens/rng.hpp"

namespace lens {

void HyperParams::validate() const {
  for (double p : {p_exc_if, p_inh_if, p_exc_fo, p_inh_fo}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ValidationError("connection probabilities must lie in [0, 1]");
    }
  }
  if (!(theta_max_if > 0.0) || !(theta_max_fo > 0.0)) {
    throw ValidationError("theta_max must be positive");
  }
  const auto valid_range = [](double lo, double hi) { return lo > 0.0 && lo <= hi && hi <= 1.0; };
  if (!valid_range(f_min_if, f_max_if) || !valid_range(f_min_fo, f_max_fo)) {
    throw ValidationError("target firing rate ranges must lie within (0, 1]");
  }
  if (eta_stdp < 0.0 || eta_itp < 0.0) {
    throw ValidationError("learning rates must be non-negative");
  }
  if (epochs_if == 0 || epochs_fo == 0) {
    throw ValidationError("epoch counts must be at least 1");
  }
}

void IafParams::validate() const {
  if (!(tau > 0.0)) {
    throw ValidationError("IAF tau must be positive");
  }
  if (!(v_thresh > v_reset)) {
    throw ValidationError("IAF threshold must exceed the reset potential");
  }
}

Matrix<float> Projection::effective() const {
  Matrix<float> out(post(), pre());
  for (std::size_t j = 0; j < post(); ++j) {
    for (std::size_t i = 0; i < pre(); ++i) {
      out(j, i) = effective(j, i);
    }
  }
  return out;
}

std::size_t Projection::connection_count() const {
  std::size_t n = 0;
  for (std::size_t k = 0; k < exc_mask.size(); ++k) {
    n += (exc_mask.values()[k] || inh_mask.values()[k]) ? 1 : 0;
  }
  return n;
}

std::size_t NetworkModel::parameter_count() const {
  std::size_t n = 0;
  for (const Projection* p : {&input_feature, &feature_output}) {
    for (std::size_t j = 0; j < p->post(); ++j) {
      for (std::size_t i = 0; i < p->pre(); ++i) {
        n += p->effective(j, i) != 0.0f ? 1 : 0;
      }
    }
  }
  return n;
}

namespace {

Projection make_projection(std::size_t pre, std::size_t post, double p_exc, double p_inh,
                           double theta, double f_min, double f_max, Rng& rng) {
  Projection proj;
  proj.excitatory = Matrix<float>(post, pre, 0.0f);
  proj.inhibitory = Matrix<float>(post, pre, 0.0f);
  proj.exc_mask = Grid<std::uint8_t>(post, pre, 0);
  proj.inh_mask = Grid<std::uint8_t>(post, pre, 0);
  proj.theta_max = theta;
  // Magnitudes are uniform in (0, theta] scaled by 1 / (P * fan-in).
  const auto fan_in = static_cast<double>(pre);
  const double exc_scale = p_exc > 0.0 ? theta / std::max(1.0, p_exc * fan_in) : 0.0;
  const double inh_scale = p_inh > 0.0 ? theta / std::max(1.0, p_inh * fan_in) : 0.0;
  for (std::size_t j = 0; j < post; ++j) {
    for (std::size_t i = 0; i < pre; ++i) {
      // Exactly two connection draws and two magnitude draws per pair keep the
      // stream layout independent of the probabilities.
      const bool exc = rng.uniform01() < p_exc;
      const double exc_mag = 1.0 - rng.uniform01();  // (0, 1]
      const bool inh = rng.uniform01() < p_inh;
      const double inh_mag = 1.0 - rng.uniform01();
      if (exc) {
        proj.excitatory(j, i) = static_cast<float>(exc_scale * exc_mag);
        proj.exc_mask(j, i) = 1;
      }
      if (inh) {
        proj.inhibitory(j, i) = static_cast<float>(-inh_scale * inh_mag);
        proj.inh_mask(j, i) = 1;
      }
    }
  }
  proj.target_rate.resize(post);
  for (auto& f : proj.target_rate) {
    f = static_cast<float>(rng.uniform(f_min, f_max));
  }
  return proj;
}

}  // namespace

NetworkModel init_network(std::size_t n_in, std::size_t n_feat, std::size_t n_out,
                          const HyperParams& hyper, std::uint64_t seed) {
  if (n_in == 0 || n_feat == 0 || n_out == 0) {
    throw ValidationError("layer sizes must be at least 1");
  }
  hyper.validate();
  NetworkModel model;
  model.n_in = n_in;
  model.n_feat = n_feat;
  model.n_out = n_out;
  model.hyper = hyper;
  model.seed = seed;
  Rng if_rng(derive_seed(seed, 0));
  Rng fo_rng(derive_seed(seed, 1));
  model.input_feature = make_projection(n_in, n_feat, hyper.p_exc_if, hyper.p_inh_if,
                                        hyper.theta_max_if, hyper.f_min_if, hyper.f_max_if, if_rng);
  model.feature_output = make_projection(n_feat, n_out, hyper.p_exc_fo, hyper.p_inh_fo,
                                         hyper.theta_max_fo, hyper.f_min_fo, hyper.f_max_fo, fo_rng);
  return model;
}

std::vector<double> propagate(const Projection& proj, std::span<const double> pre) {
  if (pre.size() != proj.pre()) {
    throw ValidationError("expected " + std::to_string(proj.pre()) + " pre-synaptic values, got " +
                          std::to_string(pre.size()));
  }
  // Four rows at a time; each row still sums in ascending pre order.
  constexpr std::size_t kBlock = 4;
  const std::size_t n = proj.pre();
  std::vector<double> post(proj.post());
  std::size_t j = 0;
  for (; j + kBlock <= proj.post(); j += kBlock) {
    double sum[kBlock] = {};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < kBlock; ++k) {
        sum[k] += static_cast<double>(proj.effective(j + k, i)) * pre[i];
      }
    }
    for (std::size_t k = 0; k < kBlock; ++k) post[j + k] = std::clamp(sum[k], 0.0, 1.0);
  }
  for (; j < proj.post(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += static_cast<double>(proj.effective(j, i)) * pre[i];
    }
    post[j] = std::clamp(sum, 0.0, 1.0);
  }
  return post;
}

Activations forward_abstract(const NetworkModel& model, std::span<const double> input) {
  if (input.size() != model.n_in) {
    throw ValidationError("input has " + std::to_string(input.size()) + " pixels, model expects " +
                          std::to_string(model.n_in));
  }
  Activations act;
  act.feature = propagate(model.input_feature, input);
  act.output = propagate(model.feature_output, act.feature);
  return act;
}

Activations forward_abstract(const NetworkModel& model, const NormalizedFrame& frame) {
  return forward_abstract(model, frame.intensities.values());
}

std::size_t SpikeRaster::count(std::size_t n) const {
  std::size_t c = 0;
  for (std::size_t t = 0; t < timesteps_; ++t) {
    c += spikes_[t * neurons_ + n];
  }
  return c;
}

std::size_t SpikeRaster::total() const {
  std::size_t c = 0;
  for (auto s : spikes_) c += s;
  return c;
}

SpikeRaster rate_encode(std::span<const double> intensities, std::size_t timesteps,
                        std::uint64_t seed, double dt) {
  if (timesteps == 0) {
    throw ValidationError("rate code needs at least one timestep");
  }
  SpikeRaster raster(timesteps, intensities.size(), dt);
  Rng rng(seed);
  for (std::size_t t = 0; t < timesteps; ++t) {
    for (std::size_t n = 0; n < intensities.size(); ++n) {
      raster.set(t, n, rng.uniform01() < intensities[n]);
    }
  }
  return raster;
}

SpikeRaster rate_encode(const NormalizedFrame& frame, std::size_t timesteps, std::uint64_t seed,
                        double dt) {
  return rate_encode(frame.intensities.values(), timesteps, seed, dt);
}

IafState iaf_step(double v, double i_syn, const IafParams& p) {
  IafState next;
  next.v = v + (-p.v_leak + p.resistance * (i_syn + p.i_bias)) / p.tau;
  if (next.v >= p.v_thresh) {
    next.spiked = true;
    next.v = p.v_reset;
  }
  next.v = std::max(next.v, 0.0);
  return next;
}

namespace {

// Column-major copy of the effective weights.
std::vector<double> columns_of(const Projection& proj) {
  std::vector<double> cols(proj.pre() * proj.post());
  for (std::size_t i = 0; i < proj.pre(); ++i) {
    for (std::size_t j = 0; j < proj.post(); ++j) {
      cols[i * proj.post() + j] = proj.effective(j, i);
    }
  }
  return cols;
}

void accumulate_spikes(const std::vector<double>& cols, std::size_t post,
                       std::span<const std::uint8_t> spikes, std::vector<double>& current) {
  std::fill(current.begin(), current.end(), 0.0);
  for (std::size_t i = 0; i < spikes.size(); ++i) {
    if (!spikes[i]) continue;
    const double* col = cols.data() + i * post;
    for (std::size_t j = 0; j < post; ++j) {
      current[j] += col[j];
    }
  }
}

}  // namespace

std::vector<std::uint32_t> infer(const NetworkModel& model, const SpikeRaster& raster,
                                 const IafParams& p) {
  if (raster.neurons() != model.n_in) {
    throw ValidationError("raster has " + std::to_string(raster.neurons()) +
                          " neurons, model expects " + std::to_string(model.n_in));
  }
  p.validate();
  const auto if_cols = columns_of(model.input_feature);
  const auto fo_cols = columns_of(model.feature_output);

  std::vector<double> v_feat(model.n_feat, 0.0);
  std::vector<double> v_out(model.n_out, 0.0);
  std::vector<double> i_feat(model.n_feat);
  std::vector<double> i_out(model.n_out);
  std::vector<std::uint8_t> feat_spikes(model.n_feat);
  std::vector<std::uint32_t> counts(model.n_out, 0);

  for (std::size_t t = 0; t < raster.timesteps(); ++t) {
    accumulate_spikes(if_cols, model.n_feat, raster.step(t), i_feat);
    for (std::size_t j = 0; j < model.n_feat; ++j) {
      const IafState s = iaf_step(v_feat[j], i_feat[j], p);
      v_feat[j] = s.v;
      feat_spikes[j] = s.spiked ? 1 : 0;
    }
    accumulate_spikes(fo_cols, model.n_out, feat_spikes, i_out);
    for (std::size_t k = 0; k < model.n_out; ++k) {
      const IafState s = iaf_step(v_out[k], i_out[k], p);
      v_out[k] = s.v;
      counts[k] += s.spiked ? 1 : 0;
    }
  }
  return counts;
}

}  // namespace lens
