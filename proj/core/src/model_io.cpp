#include "lens/model_io.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "lens/error.hpp"
#include "lens/text.hpp"

namespace lens {

namespace {

void put_f32(std::ostream& out, float v) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  const char bytes[4] = {static_cast<char>(bits & 0xFF), static_cast<char>((bits >> 8) & 0xFF),
                         static_cast<char>((bits >> 16) & 0xFF),
                         static_cast<char>((bits >> 24) & 0xFF)};
  out.write(bytes, 4);
}

float get_f32(const unsigned char* p) {
  const std::uint32_t bits = std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) |
                             (std::uint32_t{p[2]} << 16) | (std::uint32_t{p[3]} << 24);
  return std::bit_cast<float>(bits);
}

void write_section(std::ostream& out, const std::string& name, std::size_t rows, std::size_t cols,
                   std::span<const float> values) {
  out << "---\n" << name << ' ' << rows << ' ' << cols << '\n';
  for (float v : values) put_f32(out, v);
  out << '\n';
}

struct Section {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> values;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string line() {
    std::string s;
    if (!std::getline(in_, s)) {
      throw ValidationError("model file truncated");
    }
    return s;
  }

  Section section(const std::string& expected_name) {
    if (line() != "---") {
      throw ValidationError("model file: missing section separator before " + expected_name);
    }
    auto head = text::split(line(), ' ');
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;
    if (head.size() != 3 || head[0] != expected_name || !text::parse_uint(head[1], rows) ||
        !text::parse_uint(head[2], cols)) {
      throw ValidationError("model file: malformed section header for " + expected_name);
    }
    Section s{rows, cols, std::vector<float>(rows * cols)};
    std::vector<unsigned char> raw(rows * cols * 4);
    in_.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in_.gcount()) != raw.size()) {
      throw ValidationError("model file: section " + expected_name + " truncated");
    }
    for (std::size_t k = 0; k < s.values.size(); ++k) {
      s.values[k] = get_f32(raw.data() + 4 * k);
    }
    if (in_.get() != '\n') {
      throw ValidationError("model file: section " + expected_name + " not terminated");
    }
    return s;
  }

 private:
  std::istream& in_;
};

Projection projection_from_effective(const Section& w, const Section& f, double theta) {
  Projection p;
  p.excitatory = Matrix<float>(w.rows, w.cols, 0.0f);
  p.inhibitory = Matrix<float>(w.rows, w.cols, 0.0f);
  p.exc_mask = Grid<std::uint8_t>(w.rows, w.cols, 0);
  p.inh_mask = Grid<std::uint8_t>(w.rows, w.cols, 0);
  p.theta_max = theta;
  for (std::size_t k = 0; k < w.values.size(); ++k) {
    const float v = w.values[k];
    if (v > 0.0f) {
      p.excitatory.values()[k] = v;
      p.exc_mask.values()[k] = 1;
    } else if (v < 0.0f) {
      p.inhibitory.values()[k] = v;
      p.inh_mask.values()[k] = 1;
    }
  }
  p.target_rate = f.values;
  return p;
}

}  // namespace

void write_model(std::ostream& out, const NetworkModel& m) {
  const auto& h = m.hyper;
  out << kModelMagic << '\n';
  out << "n_in=" << m.n_in << '\n'
      << "n_feat=" << m.n_feat << '\n'
      << "n_out=" << m.n_out << '\n'
      << "theta_max_if=" << text::format_double(h.theta_max_if) << '\n'
      << "theta_max_fo=" << text::format_double(h.theta_max_fo) << '\n'
      << "eta_stdp=" << text::format_double(h.eta_stdp) << '\n'
      << "eta_itp=" << text::format_double(h.eta_itp) << '\n'
      << "f_min_if=" << text::format_double(h.f_min_if) << '\n'
      << "f_max_if=" << text::format_double(h.f_max_if) << '\n'
      << "f_min_fo=" << text::format_double(h.f_min_fo) << '\n'
      << "f_max_fo=" << text::format_double(h.f_max_fo) << '\n'
      << "p_exc_if=" << text::format_double(h.p_exc_if) << '\n'
      << "p_inh_if=" << text::format_double(h.p_inh_if) << '\n'
      << "p_exc_fo=" << text::format_double(h.p_exc_fo) << '\n'
      << "p_inh_fo=" << text::format_double(h.p_inh_fo) << '\n'
      << "epochs_if=" << h.epochs_if << '\n'
      << "epochs_fo=" << h.epochs_fo << '\n'
      << "seed=" << m.seed << '\n'
      << "trained=" << (m.trained ? 1 : 0) << '\n';
  const auto w_if = m.input_feature.effective();
  const auto w_fo = m.feature_output.effective();
  write_section(out, "w_if", w_if.rows(), w_if.cols(), w_if.values());
  write_section(out, "w_fo", w_fo.rows(), w_fo.cols(), w_fo.values());
  write_section(out, "f_feat", 1, m.input_feature.target_rate.size(), m.input_feature.target_rate);
  write_section(out, "f_out", 1, m.feature_output.target_rate.size(),
                m.feature_output.target_rate);
}

std::string serialize_model(const NetworkModel& model) {
  std::ostringstream out(std::ios::binary);
  write_model(out, model);
  return std::move(out).str();
}

void save_model(const std::filesystem::path& path, const NetworkModel& model) {
  text::write_file(path, serialize_model(model));
}

NetworkModel read_model(std::istream& in) {
  Reader reader(in);
  if (reader.line() != kModelMagic) {
    throw ValidationError("not a LENS model (bad magic)");
  }
  std::map<std::string, std::string> header;
  while (in.peek() != '-' && in.peek() != std::char_traits<char>::eof()) {
    const std::string kv = reader.line();
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("model header: malformed line '" + kv + "'");
    }
    header[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  const auto get_uint = [&](const char* key) {
    std::uint64_t v = 0;
    auto it = header.find(key);
    if (it == header.end() || !text::parse_uint(it->second, v)) {
      throw ValidationError(std::string("model header: missing or malformed ") + key);
    }
    return v;
  };
  const auto get_double = [&](const char* key) {
    double v = 0;
    auto it = header.find(key);
    if (it == header.end() || !text::parse_double(it->second, v)) {
      throw ValidationError(std::string("model header: missing or malformed ") + key);
    }
    return v;
  };

  NetworkModel m;
  m.n_in = get_uint("n_in");
  m.n_feat = get_uint("n_feat");
  m.n_out = get_uint("n_out");
  auto& h = m.hyper;
  h.theta_max_if = get_double("theta_max_if");
  h.theta_max_fo = get_double("theta_max_fo");
  h.eta_stdp = get_double("eta_stdp");
  h.eta_itp = get_double("eta_itp");
  h.f_min_if = get_double("f_min_if");
  h.f_max_if = get_double("f_max_if");
  h.f_min_fo = get_double("f_min_fo");
  h.f_max_fo = get_double("f_max_fo");
  h.p_exc_if = get_double("p_exc_if");
  h.p_inh_if = get_double("p_inh_if");
  h.p_exc_fo = get_double("p_exc_fo");
  h.p_inh_fo = get_double("p_inh_fo");
  h.epochs_if = get_uint("epochs_if");
  h.epochs_fo = get_uint("epochs_fo");
  m.seed = get_uint("seed");
  m.trained = get_uint("trained") != 0;

  const Section w_if = reader.section("w_if");
  const Section w_fo = reader.section("w_fo");
  const Section f_feat = reader.section("f_feat");
  const Section f_out = reader.section("f_out");
  if (w_if.rows != m.n_feat || w_if.cols != m.n_in || w_fo.rows != m.n_out ||
      w_fo.cols != m.n_feat || f_feat.values.size() != m.n_feat ||
      f_out.values.size() != m.n_out) {
    throw ValidationError("model file: section shapes disagree with header layer sizes");
  }
  m.input_feature = projection_from_effective(w_if, f_feat, h.theta_max_if);
  m.feature_output = projection_from_effective(w_fo, f_out, h.theta_max_fo);
  return m;
}

NetworkModel deserialize_model(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return read_model(in);
}

NetworkModel load_model(const std::filesystem::path& path) {
  const std::string bytes = text::read_file(path);
  try {
    return deserialize_model(bytes);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace lens
