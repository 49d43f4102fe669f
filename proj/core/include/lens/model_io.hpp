#pragma once

// Model container:
//
//   LENSMDL1
//   key=value lines (layer sizes, hyperparameters, seed, trained flag)
//   ---
//   w_if <rows> <cols>          effective input->feature weights
//   <rows*cols little-endian float32, row-major>
//   ---
//   w_fo <rows> <cols>          effective feature->output weights
//   ...
//   ---
//   f_feat <n> / f_out <n>      per-neuron target rates
//
// Every binary block is followed by a single LF. Only the effective weight
// (excitatory + inhibitory) is stored; loading splits it back by sign, which
// reproduces identical inference.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "lens/snn.hpp"

namespace lens {

inline constexpr std::string_view kModelMagic = "LENSMDL1";

void write_model(std::ostream& out, const NetworkModel& model);
std::string serialize_model(const NetworkModel& model);
void save_model(const std::filesystem::path& path, const NetworkModel& model);

NetworkModel read_model(std::istream& in);
NetworkModel deserialize_model(const std::string& bytes);
NetworkModel load_model(const std::filesystem::path& path);

}  // namespace lens
