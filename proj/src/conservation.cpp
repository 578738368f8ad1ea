#include "qrf/conservation.hpp"

#include <algorithm>
#include <cmath>

namespace qrf {

namespace {

constexpr double kDegenerateOutcome = 1e-14;

SparseState apply_unitary_event(const SparseState& state, const Event& event,
                                FrameNetwork* net) {
    if (const auto* prep = std::get_if<PrepareEvent>(&event)) {
        if (net) {
            auto [next, grown] = prepare(state, prep->frame, prep->system, prep->chi, *net);
            *net = grown;
            return next;
        }
        return prepare_state(state, prep->frame, prep->system, prep->chi);
    }
    const auto& inter = std::get<InteractEvent>(event);
    return apply_interaction(state, inter.a, inter.b, inter.unitary);
}

} // namespace

std::vector<Branch> run_events(const SparseState& initial, std::span<const Event> events,
                               FrameNetwork* net, const EventObserver& observe) {
    std::vector<Branch> branches;
    branches.push_back({{}, 1.0, initial});
    for (std::size_t index = 0; index < events.size(); ++index) {
        const Event& event = events[index];
        try {
            if (const auto* meas = std::get_if<MeasureEvent>(&event)) {
                std::vector<Branch> next;
                for (const Branch& branch : branches) {
                    for (auto& outcome : measure_momentum(branch.state, meas->particle)) {
                        Branch leaf;
                        leaf.outcomes = branch.outcomes;
                        leaf.outcomes.emplace_back(meas->particle, outcome.outcome);
                        leaf.probability = branch.probability * outcome.probability;
                        leaf.state = std::move(outcome.collapsed);
                        if (leaf.probability > kDegenerateOutcome)
                            next.push_back(std::move(leaf));
                    }
                }
                branches = std::move(next);
            } else {
                bool record_edge = true; // the preparation edge is one event
                for (Branch& branch : branches) {
                    branch.state = apply_unitary_event(branch.state, event,
                                                       record_edge ? net : nullptr);
                    record_edge = false;
                }
            }
        } catch (const Error& e) {
            throw Error(e.kind(),
                        "event " + std::to_string(index) + ": " + e.what());
        }
        if (observe) observe(index, branches);
    }
    return branches;
}

std::size_t after_preparations_index(std::span<const Event> events) {
    std::size_t index = 0;
    for (std::size_t i = 0; i < events.size(); ++i)
        if (std::holds_alternative<PrepareEvent>(events[i])) index = i + 1;
    return index;
}

ConservationReport check_individual_conservation(const SparseState& initial,
                                                 std::span<const Event> events,
                                                 const std::set<ParticleId>& conserving,
                                                 std::size_t reference_point,
                                                 double tolerance) {
    if (conserving.empty())
        throw Error(ErrorKind::EmptyConservingSet,
                    "conservation check needs a nonempty particle set");
    if (reference_point > events.size())
        throw Error(ErrorKind::InvalidArgument, "reference point past end of pipeline");
    for (std::size_t i = 0; i < reference_point; ++i)
        if (std::holds_alternative<MeasureEvent>(events[i]))
            throw Error(ErrorKind::InvalidArgument,
                        "reference point must precede all measurements");

    ConservationReport report;
    report.conserving.assign(conserving.begin(), conserving.end());
    report.reference_point = reference_point;
    report.tolerance = tolerance;

    std::set<ParticleId> measured;
    for (const Event& event : events)
        if (const auto* meas = std::get_if<MeasureEvent>(&event))
            measured.insert(meas->particle);
    report.measured.assign(measured.begin(), measured.end());

    // Reference distribution of the total over the full conserving set.
    SparseState ref_state = initial;
    for (std::size_t i = 0; i < reference_point; ++i)
        ref_state = apply_unitary_event(ref_state, events[i], nullptr);
    report.reference = total_momentum_distribution(ref_state, report.conserving);

    // The compensating subsystem: conserving particles that stay unmeasured.
    std::vector<ParticleId> compensating;
    for (ParticleId id : report.conserving)
        if (!measured.count(id)) compensating.push_back(id);

    report.pass = true;
    for (const Branch& branch : run_events(initial, events)) {
        if (branch.probability < kDegenerateOutcome) continue;
        OutcomeRecord record;
        record.outcomes = branch.outcomes;
        record.probability = branch.probability;

        // Each measured particle holds one final value, however many times
        // it was measured along the way.
        std::map<ParticleId, std::int64_t> held;
        for (const auto& [particle, value] : branch.outcomes) held[particle] = value;
        std::int64_t outcome_total = 0;
        for (const auto& [particle, value] : held)
            if (conserving.count(particle)) outcome_total += value;

        record.conditional =
            compensating.empty()
                ? Distribution::from_weights({{0, 1.0}})
                : total_momentum_distribution(branch.state, compensating);
        record.expected = report.reference.shifted(-outcome_total);
        record.max_deviation = record.conditional.max_abs_difference(record.expected);
        record.pass = record.max_deviation < tolerance;

        report.max_deviation = std::max(report.max_deviation, record.max_deviation);
        report.pass = report.pass && record.pass;
        report.records.push_back(std::move(record));
    }
    return report;
}

} // namespace qrf
