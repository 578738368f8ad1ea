#pragma once

#include <string>
#include <vector>

#include "qrf/interaction.hpp"

namespace qrf::builtin {

// Bundled scenario sources, in catalog order.
struct NamedScenario {
    std::string name;
    std::string source;
};

const std::vector<NamedScenario>& scenarios();
const std::string* scenario_source(const std::string& name);

bool is_builtin_unitary(const std::string& name);
// beamsplitter | swap | identity; throws InvalidArgument otherwise.
InteractionSpec named_unitary(const std::string& name);

} // namespace qrf::builtin
