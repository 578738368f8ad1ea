#include "qrf/network.hpp"

#include <algorithm>
#include <string>

namespace qrf {

FrameNetwork FrameNetwork::over(std::vector<ParticleId> nodes) {
    FrameNetwork net;
    net.nodes_.insert(nodes.begin(), nodes.end());
    return net;
}

std::optional<ParticleId> FrameNetwork::parent(ParticleId child) const {
    auto it = parent_.find(child);
    if (it == parent_.end()) return std::nullopt;
    return it->second;
}

std::vector<ParticleId> FrameNetwork::roots() const {
    std::vector<ParticleId> out;
    for (ParticleId id : nodes_)
        if (!parent_.count(id)) out.push_back(id);
    return out;
}

FrameNetwork FrameNetwork::with_edge(ParticleId child, ParticleId parent) const {
    if (!has_node(child) || !has_node(parent))
        throw Error(ErrorKind::UnknownParticle, "edge endpoint not in network");
    if (parent_.count(child))
        throw Error(ErrorKind::AlreadyPrepared,
                    "particle " + std::to_string(child.value) +
                        " already has a preparer");
    if (child == parent || is_ancestor(child, parent))
        throw Error(ErrorKind::InvalidArgument, "preparation edge would form a cycle");
    FrameNetwork net = *this;
    net.parent_.emplace(child, parent);
    return net;
}

std::vector<ParticleId> FrameNetwork::ancestry(ParticleId id) const {
    if (!has_node(id))
        throw Error(ErrorKind::UnknownParticle,
                    "particle " + std::to_string(id.value) + " not in network");
    std::vector<ParticleId> chain{id};
    while (auto p = parent(chain.back())) chain.push_back(*p);
    return chain;
}

bool FrameNetwork::is_ancestor(ParticleId ancestor, ParticleId node) const {
    for (ParticleId id : ancestry(node))
        if (id == ancestor) return true;
    return false;
}

std::optional<ParticleId> FrameNetwork::first_common_frame(ParticleId a,
                                                           ParticleId b) const {
    const auto chain_a = ancestry(a);
    const auto chain_b = ancestry(b);
    for (ParticleId id : chain_a)
        if (std::find(chain_b.begin(), chain_b.end(), id) != chain_b.end()) return id;
    return std::nullopt;
}

std::pair<SparseState, FrameNetwork> prepare(const SparseState& s, ParticleId frame,
                                             ParticleId system, const Wavefunction& chi,
                                             const FrameNetwork& net) {
    FrameNetwork out = net.with_edge(system, frame);
    return {prepare_state(s, frame, system, chi), out};
}

SparseState prepare_state(const SparseState& s, ParticleId frame, ParticleId system,
                          const Wavefunction& chi) {
    const std::size_t frame_slot = s.particles().slot(frame);
    const std::size_t system_slot = s.particles().slot(system);
    if (frame_slot == system_slot)
        throw Error(ErrorKind::InvalidArgument, "frame and system must differ");

    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.key(i)[system_slot] != 0)
            throw Error(ErrorKind::SystemNotVirgin,
                        "system " + std::to_string(system.value) +
                            " is not in the zero-momentum state; the preparation "
                            "interaction is only defined on that sector");

    std::vector<std::int64_t> chi_labels;
    std::vector<cplx> chi_coeffs;
    chi_labels.reserve(chi.support_size());
    chi_coeffs.reserve(chi.support_size());
    for (const auto& [l, c] : chi.coeffs()) {
        chi_labels.push_back(l);
        chi_coeffs.push_back(c);
    }

    kernels::RowBuffer raw;
    kernels::prepare_scatter(s.rows(), frame_slot, system_slot, chi_labels, chi_coeffs,
                             raw, kernels::resolve(s.size() * chi_labels.size()));
    return scatter_state(s.particles(), std::move(raw));
}

std::set<ParticleId> conserving_set(const FrameNetwork& net,
                                    const std::set<ParticleId>& measured,
                                    const std::vector<InteractionEvent>& interactions) {
    if (measured.empty())
        throw Error(ErrorKind::EmptyConservingSet, "no measured particles");
    for (ParticleId id : measured)
        if (!net.has_node(id))
            throw Error(ErrorKind::UnknownParticle,
                        "measured particle " + std::to_string(id.value) +
                            " not in network");

    // Close the measured set over interaction partners.
    std::set<ParticleId> involved = measured;
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& ev : interactions) {
            const bool touches = involved.count(ev.a) || involved.count(ev.b);
            if (!touches) continue;
            grew |= involved.insert(ev.a).second;
            grew |= involved.insert(ev.b).second;
        }
    }

    // Any interaction between particles on distinct branches (neither an
    // ancestor of the other) links the branches, regardless of how trivial
    // the unitary happens to be.
    bool linked = false;
    for (const auto& ev : interactions) {
        if (!involved.count(ev.a) || !involved.count(ev.b)) continue;
        if (!net.is_ancestor(ev.a, ev.b) && !net.is_ancestor(ev.b, ev.a)) {
            linked = true;
            break;
        }
    }

    std::set<ParticleId> out;
    if (!linked) {
        for (ParticleId id : measured) {
            out.insert(id);
            if (auto p = net.parent(id)) out.insert(*p);
        }
        return out;
    }

    // Fold the first common frame over all involved particles. If the trees
    // are disjoint there is no common frame; fall back to full ancestries.
    std::optional<ParticleId> common = *involved.begin();
    for (ParticleId id : involved) {
        if (!common) break;
        common = net.first_common_frame(*common, id);
    }
    for (ParticleId id : involved) {
        for (ParticleId node : net.ancestry(id)) {
            out.insert(node);
            if (common && node == *common) break;
        }
    }
    return out;
}

} // namespace qrf
