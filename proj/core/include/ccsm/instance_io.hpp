#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccsm/instance.hpp"

namespace ccsm {

// On-disk form of an instance plus the optional mean-risk data the solve and
// bench tools consume. The format is a JSON document; see README for the
// grammar. Serialization is canonical: parsing a canonically formatted
// document and serializing it again reproduces the input byte for byte.
struct InstanceFile {
  Instance instance;
  std::optional<std::vector<double>> lambda;
  std::optional<double> epsilon;
};

InstanceFile parse_instance_text(const std::string& text);
std::string serialize_instance(const InstanceFile& file);

InstanceFile load_instance_file(const std::string& path);
void save_instance_file(const InstanceFile& file, const std::string& path);

}  // namespace ccsm
