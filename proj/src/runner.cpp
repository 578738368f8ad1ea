#include "qrf/runner.hpp"

#include <algorithm>
#include <random>

#include "qrf/builtin.hpp"

namespace qrf {

namespace {

InteractionSpec resolve_unitary(const scenario::Scenario& sc, const std::string& name,
                                std::size_t event_index) {
    if (builtin::is_builtin_unitary(name)) return builtin::named_unitary(name);
    const auto* def = sc.unitary(name);
    if (!def)
        throw Error(ErrorKind::InvalidArgument,
                    "event " + std::to_string(event_index) + ": unknown unitary '" +
                        name + "'");
    auto validation = validate_momentum_conserving(def->candidate);
    if (!validation.ok) {
        std::string detail;
        for (const auto& d : validation.diagnostics) {
            if (!detail.empty()) detail += "; ";
            detail += d;
        }
        throw Error(ErrorKind::InvalidArgument,
                    "event " + std::to_string(event_index) + ": unitary '" + name +
                        "' is not momentum conserving: " + detail);
    }
    return *validation.spec;
}

// Weighted mixture of the per-branch distributions of a subset.
Distribution mixture_distribution(const std::vector<Branch>& branches,
                                  const std::vector<ParticleId>& subset) {
    std::map<std::int64_t, double> weights;
    double total = 0.0;
    for (const Branch& branch : branches) {
        const Distribution d = total_momentum_distribution(branch.state, subset);
        for (const auto& [value, weight] : d.weights())
            weights[value] += branch.probability * weight;
        total += branch.probability;
    }
    for (auto& [value, weight] : weights) weight /= total;
    return Distribution::from_weights(weights);
}

std::size_t resolve_point(scenario::AtPoint at, std::size_t event_index,
                          std::span<const Event> events) {
    switch (at) {
    case scenario::AtPoint::Initial: return 0;
    case scenario::AtPoint::AfterPreparations: return after_preparations_index(events);
    case scenario::AtPoint::EventIndex:
        if (event_index > events.size())
            throw Error(ErrorKind::InvalidArgument, "event index past end of pipeline");
        return event_index;
    case scenario::AtPoint::End: return events.size();
    }
    return events.size();
}

} // namespace

LoweredScenario lower(const scenario::Scenario& sc) {
    LoweredScenario out;
    if (sc.particles.empty())
        throw Error(ErrorKind::InvalidArgument, "scenario declares no particles");

    std::vector<ParticleId> ids;
    SparseState state;
    for (std::size_t i = 0; i < sc.particles.size(); ++i) {
        const ParticleId id{static_cast<std::uint32_t>(i)};
        ids.push_back(id);
        out.names.push_back(sc.particles[i].name);
        const SparseState single = single_particle_state(id, sc.particles[i].initial);
        state = i == 0 ? single : tensor(state, single);
    }
    out.particles = Register(ids);
    out.initial = std::move(state);

    for (std::size_t i = 0; i < sc.events.size(); ++i) {
        const auto& event = sc.events[i];
        if (const auto* prep = std::get_if<scenario::PrepareStmt>(&event)) {
            out.events.push_back(
                PrepareEvent{ids[*sc.particle_index(prep->frame)],
                             ids[*sc.particle_index(prep->system)], prep->chi});
        } else if (const auto* inter = std::get_if<scenario::InteractStmt>(&event)) {
            out.events.push_back(InteractEvent{ids[*sc.particle_index(inter->a)],
                                               ids[*sc.particle_index(inter->b)],
                                               resolve_unitary(sc, inter->unitary, i)});
        } else {
            const auto& meas = std::get<scenario::MeasureStmt>(event);
            out.events.push_back(MeasureEvent{ids[*sc.particle_index(meas.particle)]});
        }
    }
    return out;
}

RunResult run(const scenario::Scenario& sc, const RunOptions& options) {
    LoweredScenario lowered = lower(sc);
    RunResult result;
    result.parsed = sc;
    result.names = lowered.names;
    result.particles = lowered.particles;
    result.events = lowered.events;
    result.network = FrameNetwork::over(lowered.particles.ids());

    // Trace the full-register total-momentum distribution through the
    // pipeline (the statistical conservation law) while running it.
    const std::vector<ParticleId> everyone = lowered.particles.ids();
    result.full_register_trace.push_back(
        total_momentum_distribution(lowered.initial, everyone));
    result.branches = run_events(
        lowered.initial, lowered.events, &result.network,
        [&](std::size_t, const std::vector<Branch>& branches) {
            result.full_register_trace.push_back(
                mixture_distribution(branches, everyone));
        });

    auto ids_of = [&](const std::vector<std::string>& names) {
        std::vector<ParticleId> ids;
        ids.reserve(names.size());
        for (const auto& name : names)
            ids.push_back(lowered.particles.at(*sc.particle_index(name)));
        return ids;
    };

    for (const auto& query : sc.queries) {
        if (const auto* d = std::get_if<scenario::DistributionQuery>(&query)) {
            DistributionResult qr{*d, {}};
            const std::vector<ParticleId> subset = ids_of(d->particles);
            if (d->at == scenario::AtPoint::End && !d->given.empty()) {
                // Mixture over the branches consistent with the given
                // outcomes, renormalized.
                std::vector<Branch> matching;
                for (const Branch& branch : result.branches) {
                    bool match = true;
                    for (const auto& [name, wanted] : d->given) {
                        const ParticleId id = lowered.particles.at(*sc.particle_index(name));
                        bool found = false;
                        for (const auto& [pid, value] : branch.outcomes)
                            if (pid == id) {
                                found = value == wanted;
                                // Later measurements of the same particle
                                // repeat the value; first hit decides.
                                break;
                            }
                        if (!found) {
                            match = false;
                            break;
                        }
                    }
                    if (match) matching.push_back(branch);
                }
                if (matching.empty())
                    throw Error(ErrorKind::InvalidArgument,
                                "no branch matches the given outcomes");
                qr.distribution = mixture_distribution(matching, subset);
            } else {
                const std::size_t point =
                    resolve_point(d->at, d->event_index, lowered.events);
                std::span<const Event> prefix(lowered.events.data(), point);
                qr.distribution =
                    mixture_distribution(run_events(lowered.initial, prefix), subset);
            }
            result.queries.push_back(std::move(qr));
        } else if (const auto* c = std::get_if<scenario::ConservationQuery>(&query)) {
            const std::vector<ParticleId> subset = ids_of(c->particles);
            const std::size_t reference =
                resolve_point(c->reference, c->event_index, lowered.events);
            ConservationReport report = check_individual_conservation(
                lowered.initial, lowered.events,
                std::set<ParticleId>(subset.begin(), subset.end()), reference,
                options.tolerance);
            result.queries.push_back(ConservationResult{*c, std::move(report)});
        } else {
            const auto& t = std::get<scenario::TransformQuery>(query);
            const auto& catalog = builtin_transforms();
            auto it = catalog.find(t.name);
            if (it == catalog.end())
                throw Error(ErrorKind::InvalidArgument,
                            "unknown transform '" + t.name + "'");
            // The state just before the first measurement (or final state
            // when nothing is measured).
            std::size_t point = lowered.events.size();
            for (std::size_t i = 0; i < lowered.events.size(); ++i)
                if (std::holds_alternative<MeasureEvent>(lowered.events[i])) {
                    point = i;
                    break;
                }
            std::span<const Event> prefix(lowered.events.data(), point);
            auto branches = run_events(lowered.initial, prefix);
            const SparseState& before = branches.front().state;
            TransformResult qr{t, it->second.names(), before,
                               transform_state(before, it->second)};
            result.queries.push_back(std::move(qr));
        }
    }
    return result;
}

SampleResult sample(const scenario::Scenario& sc, std::uint64_t shots, std::uint64_t seed) {
    LoweredScenario lowered = lower(sc);
    const auto branches = run_events(lowered.initial, lowered.events);

    SampleResult result;
    result.names = lowered.names;
    result.shots = shots;
    result.seed = seed;
    result.counts.reserve(branches.size());
    for (const Branch& branch : branches)
        result.counts.push_back({branch.outcomes, 0});

    std::mt19937_64 rng(seed);
    std::vector<double> cumulative;
    cumulative.reserve(branches.size());
    double total = 0.0;
    for (const Branch& branch : branches) {
        total += branch.probability;
        cumulative.push_back(total);
    }
    std::uniform_real_distribution<double> uniform(0.0, total);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double x = uniform(rng);
        const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), x);
        const std::size_t index =
            std::min(static_cast<std::size_t>(it - cumulative.begin()),
                     result.counts.size() - 1);
        ++result.counts[index].count;
    }
    return result;
}

} // namespace qrf
