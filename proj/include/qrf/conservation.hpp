#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <variant>
#include <vector>

#include "qrf/interaction.hpp"
#include "qrf/network.hpp"

namespace qrf {

struct PrepareEvent {
    ParticleId frame;
    ParticleId system;
    Wavefunction chi;
};

struct InteractEvent {
    ParticleId a;
    ParticleId b;
    InteractionSpec unitary;
};

struct MeasureEvent {
    ParticleId particle;
};

using Event = std::variant<PrepareEvent, InteractEvent, MeasureEvent>;

// One leaf of the outcome tree: the joint measurement record, its
// probability, and the collapsed renormalized state.
struct Branch {
    std::vector<std::pair<ParticleId, std::int64_t>> outcomes; // in event order
    double probability = 1.0;
    SparseState state;
};

// Called after event `index` with the branch list at that point.
using EventObserver = std::function<void(std::size_t index, const std::vector<Branch>&)>;

// Executes the events, enumerating every measurement outcome with
// probability above the prune threshold. Branches come out sorted by
// outcome tuple. If `net` is given, preparation edges are recorded in it.
std::vector<Branch> run_events(const SparseState& initial, std::span<const Event> events,
                               FrameNetwork* net = nullptr,
                               const EventObserver& observe = {});

// Index just past the last PrepareEvent; the default baseline for
// conservation checks.
std::size_t after_preparations_index(std::span<const Event> events);

// Per-outcome verdict on individual-case conservation over a particle set.
// `conditional` is the total-momentum distribution of the compensating
// subsystem (the conserving set minus the measured particles); `expected`
// is the reference distribution shifted by minus the summed outcomes of
// the measured particles inside the conserving set. The two agree exactly
// when conservation holds for that individual outcome.
struct OutcomeRecord {
    std::vector<std::pair<ParticleId, std::int64_t>> outcomes;
    double probability = 0.0;
    Distribution conditional;
    Distribution expected;
    double max_deviation = 0.0;
    bool pass = false;
};

struct ConservationReport {
    std::vector<ParticleId> conserving; // sorted
    std::vector<ParticleId> measured;   // sorted
    Distribution reference;             // over the full conserving set
    std::size_t reference_point = 0;
    double tolerance = 1e-10;
    std::vector<OutcomeRecord> records;
    bool pass = false;
    double max_deviation = 0.0;
};

// Runs the pipeline and compares, for every joint outcome, the conditional
// total-momentum distribution of the compensating subsystem against the
// reference-point distribution shifted by minus the outcome total.
// `reference_point` counts executed events and must not be preceded by a
// measurement. Outcomes with probability below 1e-14 are excluded.
ConservationReport check_individual_conservation(const SparseState& initial,
                                                 std::span<const Event> events,
                                                 const std::set<ParticleId>& conserving,
                                                 std::size_t reference_point,
                                                 double tolerance = 1e-10);

} // namespace qrf
