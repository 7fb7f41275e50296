#pragma once

#include <string>
#include <vector>

#include "gbw/space.hpp"

namespace gbw {

// Named constructions available to the CLI without a spec file.
const std::vector<std::string>& registry_names();
bool is_registry_name(const std::string& name);
SpaceSpec registry_space(const std::string& name);  // throws on unknown names

// Human-readable definition of a registered construction (norm formula,
// family rule, default parameters).
std::string describe_space(const std::string& name);

}  // namespace gbw
