#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qrf/conservation.hpp"
#include "qrf/frc.hpp"
#include "qrf/scenario.hpp"

namespace qrf {

struct DistributionResult {
    scenario::DistributionQuery query;
    Distribution distribution;
};

struct ConservationResult {
    scenario::ConservationQuery query;
    ConservationReport report;
};

struct TransformResult {
    scenario::TransformQuery query;
    std::vector<std::string> coordinate_names;
    SparseState before; // state at the last point before any measurement
    SparseState after;  // relabeled into the transform's coordinates
};

using QueryResult = std::variant<DistributionResult, ConservationResult, TransformResult>;

struct RunOptions {
    double tolerance = 1e-10; // conservation checks
};

// Deterministic full-enumeration run: every measurement branches, nothing
// is sampled.
struct RunResult {
    scenario::Scenario parsed;               // provenance echo
    std::vector<std::string> names;          // slot -> particle name
    Register particles;                      // slot order = declaration order
    FrameNetwork network;                    // preparation edges
    std::vector<Event> events;               // lowered events
    std::vector<Branch> branches;            // sorted by outcome tuple
    std::vector<QueryResult> queries;
    // Full-register total-momentum distribution after 0..n events
    // (measurement steps contribute the branch mixture).
    std::vector<Distribution> full_register_trace;
};

RunResult run(const scenario::Scenario& sc, const RunOptions& options = {});

// Multinomial sampling over the enumerated outcome tree.
struct SampleCount {
    std::vector<std::pair<ParticleId, std::int64_t>> outcomes;
    std::uint64_t count = 0;
};

struct SampleResult {
    std::vector<std::string> names;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::vector<SampleCount> counts;
};

SampleResult sample(const scenario::Scenario& sc, std::uint64_t shots, std::uint64_t seed);

// Lowers a parsed scenario to the initial state and event list.
struct LoweredScenario {
    std::vector<std::string> names;
    Register particles;
    SparseState initial;
    std::vector<Event> events;
};

LoweredScenario lower(const scenario::Scenario& sc);

} // namespace qrf
