#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qrf/runner.hpp"

namespace qrf {

// All emitters are deterministic: keys are inserted in a fixed order and
// doubles use the shortest round-trip form.
using json = nlohmann::ordered_json;

json to_json(const Distribution& d);
// {label: [re, im], ...}
json to_json(const Wavefunction& w);
// {"names": [...], "matrix": [[...]], "inverse": [[...]]}
json to_json(const LabelTransform& t);
json to_json(const SparseState& s, const std::vector<std::string>& names);
json to_json(const ConservationReport& report, const std::vector<std::string>& names);
json to_json(const FrameNetwork& net, const std::vector<std::string>& names);
json to_json(const RunResult& result);
json to_json(const SampleResult& result);

// CSV blocks: "L,probability" for distributions and
// "outcome,L,probability,expected,pass" for conservation reports.
std::string distribution_csv(const Distribution& d);
std::string report_csv(const ConservationReport& report,
                       const std::vector<std::string>& names);
std::string run_csv(const RunResult& result);
std::string sample_csv(const SampleResult& result);

// Aligned-column text for terminals.
std::string report_table(const ConservationReport& report,
                         const std::vector<std::string>& names);
std::string distribution_table(const Distribution& d);
std::string state_table(const SparseState& s, const std::vector<std::string>& names);
std::string run_text(const RunResult& result);

std::string outcome_label(const std::vector<std::pair<ParticleId, std::int64_t>>& outcomes,
                          const std::vector<std::string>& names);

} // namespace qrf
