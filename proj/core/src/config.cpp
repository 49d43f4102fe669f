#include "lens/config.hpp"

#include <functional>
#include <map>
#include <sstream>

#include "lens/error.hpp"
#include "lens/text.hpp"

namespace lens {

namespace {

double as_double(std::string_view key, std::string_view v) {
  double d = 0;
  if (!text::parse_double(v, d)) {
    throw ValidationError("config: " + std::string(key) + " expects a number, got '" +
                          std::string(v) + "'");
  }
  return d;
}

std::uint64_t as_uint(std::string_view key, std::string_view v) {
  std::uint64_t u = 0;
  if (!text::parse_uint(v, u)) {
    throw ValidationError("config: " + std::string(key) + " expects a non-negative integer, got '" +
                          std::string(v) + "'");
  }
  return u;
}

bool as_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ValidationError("config: " + std::string(key) + " expects true/false, got '" +
                        std::string(v) + "'");
}

struct Field {
  std::function<void(Config&, std::string_view, std::string_view)> set;
  std::function<std::string(const Config&)> get;
};

template <typename T>
Field number_field(T Config::*member) {
  return {[member](Config& c, std::string_view k, std::string_view v) {
            if constexpr (std::is_floating_point_v<T>) {
              c.*member = as_double(k, v);
            } else {
              c.*member = static_cast<T>(as_uint(k, v));
            }
          },
          [member](const Config& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return text::format_double(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          }};
}

template <typename S, typename T>
Field nested_field(S Config::*outer, T S::*member) {
  return {[=](Config& c, std::string_view k, std::string_view v) {
            if constexpr (std::is_floating_point_v<T>) {
              (c.*outer).*member = as_double(k, v);
            } else {
              (c.*outer).*member = static_cast<T>(as_uint(k, v));
            }
          },
          [=](const Config& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return text::format_double((c.*outer).*member);
            } else {
              return std::to_string((c.*outer).*member);
            }
          }};
}

Field bool_field(bool Config::*member) {
  return {[member](Config& c, std::string_view k, std::string_view v) { c.*member = as_bool(k, v); },
          [member](const Config& c) { return std::string(c.*member ? "true" : "false"); }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"theta_max_if", nested_field(&Config::hyper, &HyperParams::theta_max_if)},
      {"theta_max_fo", nested_field(&Config::hyper, &HyperParams::theta_max_fo)},
      {"eta_stdp", nested_field(&Config::hyper, &HyperParams::eta_stdp)},
      {"eta_itp", nested_field(&Config::hyper, &HyperParams::eta_itp)},
      {"f_min_if", nested_field(&Config::hyper, &HyperParams::f_min_if)},
      {"f_max_if", nested_field(&Config::hyper, &HyperParams::f_max_if)},
      {"f_min_fo", nested_field(&Config::hyper, &HyperParams::f_min_fo)},
      {"f_max_fo", nested_field(&Config::hyper, &HyperParams::f_max_fo)},
      {"p_exc_if", nested_field(&Config::hyper, &HyperParams::p_exc_if)},
      {"p_inh_if", nested_field(&Config::hyper, &HyperParams::p_inh_if)},
      {"p_exc_fo", nested_field(&Config::hyper, &HyperParams::p_exc_fo)},
      {"p_inh_fo", nested_field(&Config::hyper, &HyperParams::p_inh_fo)},
      {"epochs_if", nested_field(&Config::hyper, &HyperParams::epochs_if)},
      {"epochs_fo", nested_field(&Config::hyper, &HyperParams::epochs_fo)},
      {"tau", nested_field(&Config::iaf, &IafParams::tau)},
      {"v_leak", nested_field(&Config::iaf, &IafParams::v_leak)},
      {"resistance", nested_field(&Config::iaf, &IafParams::resistance)},
      {"i_bias", nested_field(&Config::iaf, &IafParams::i_bias)},
      {"v_thresh", nested_field(&Config::iaf, &IafParams::v_thresh)},
      {"v_reset", nested_field(&Config::iaf, &IafParams::v_reset)},
      {"x_force", number_field(&Config::x_force)},
      {"shuffle", bool_field(&Config::shuffle)},
      {"shuffle_seed", number_field(&Config::shuffle_seed)},
      {"crop", bool_field(&Config::crop)},
      {"roi_x0", nested_field(&Config::roi, &RegionOfInterest::x0)},
      {"roi_y0", nested_field(&Config::roi, &RegionOfInterest::y0)},
      {"roi_width", nested_field(&Config::roi, &RegionOfInterest::width)},
      {"roi_height", nested_field(&Config::roi, &RegionOfInterest::height)},
      {"selector",
       {[](Config& c, std::string_view k, std::string_view v) {
          if (v == "center") {
            c.selector = SelectorMode::Center;
          } else if (v == "random") {
            c.selector = SelectorMode::Random;
          } else {
            throw ValidationError("config: " + std::string(k) + " must be center or random");
          }
        },
        [](const Config& c) {
          return std::string(c.selector == SelectorMode::Center ? "center" : "random");
        }}},
      {"kernel", nested_field(&Config::center, &CenterSelection::kernel)},
      {"stride", nested_field(&Config::center, &CenterSelection::stride)},
      {"offset_y", nested_field(&Config::center, &CenterSelection::offset_y)},
      {"offset_x", nested_field(&Config::center, &CenterSelection::offset_x)},
      {"random_pixels", number_field(&Config::random_pixels)},
      {"selector_seed", number_field(&Config::selector_seed)},
      {"window_us", number_field(&Config::window_us)},
      {"features", number_field(&Config::features)},
      {"timesteps", number_field(&Config::timesteps)},
      {"dt", number_field(&Config::dt)},
      {"accumulate_bins", number_field(&Config::accumulate_bins)},
      {"seq_len", number_field(&Config::seq_len)},
      {"tolerance", number_field(&Config::tolerance)},
      {"pr_thresholds", number_field(&Config::pr_thresholds)},
      {"seed", number_field(&Config::seed)},
      {"rate_seed", number_field(&Config::rate_seed)},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, field] : fields()) k.push_back(name);
    return k;
  }();
  return keys;
}

void Config::set(std::string_view key, std::string_view value) {
  for (const auto& [name, field] : fields()) {
    if (name == key) {
      field.set(*this, key, value);
      return;
    }
  }
  throw ValidationError("config: unknown key '" + std::string(key) + "'");
}

void Config::validate() const {
  hyper.validate();
  iaf.validate();
  if (window_us == 0) throw ValidationError("config: window_us must be positive");
  if (features == 0) throw ValidationError("config: features must be positive");
  if (timesteps == 0) throw ValidationError("config: timesteps must be positive");
  if (!(dt > 0.0)) throw ValidationError("config: dt must be positive");
  if (accumulate_bins == 0) throw ValidationError("config: accumulate_bins must be positive");
  if (seq_len == 0) throw ValidationError("config: seq_len must be positive");
  if (pr_thresholds < 2) throw ValidationError("config: pr_thresholds must be at least 2");
  if (!(x_force >= 0.0 && x_force <= 1.0)) throw ValidationError("config: x_force must lie in [0, 1]");
}

std::vector<std::pair<std::string, std::string>> Config::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [name, field] : fields()) out.emplace_back(name, field.get(*this));
  return out;
}

std::string Config::to_text() const {
  std::string s;
  for (const auto& [k, v] : entries()) s += k + " = " + v + "\n";
  return s;
}

void apply_config_text(Config& cfg, std::string_view body) {
  std::size_t line_no = 0;
  for (std::string_view line : text::split(body, '\n')) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, "expected 'key = value'");
    }
    try {
      cfg.set(text::trim(line.substr(0, eq)), text::trim(line.substr(eq + 1)));
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(line_no, e.what());
    }
  }
}

Config load_config(const std::filesystem::path& path) {
  Config cfg;
  const std::string body = text::read_file(path);
  try {
    apply_config_text(cfg, body);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return cfg;
}

void apply_overrides(Config& cfg, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("override '" + o + "' must be key=value");
    }
    cfg.set(text::trim(std::string_view(o).substr(0, eq)),
            text::trim(std::string_view(o).substr(eq + 1)));
  }
}

}  // namespace lens
