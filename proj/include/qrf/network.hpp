#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "qrf/sparse_state.hpp"
#include "qrf/wavefunction.hpp"

namespace qrf {

// Who prepared whom. Each particle has at most one parent (its preparer),
// so the structure is a forest and common-frame queries are tree LCAs.
// Immutable value type; with_edge returns a new network.
class FrameNetwork {
  public:
    FrameNetwork() = default;
    static FrameNetwork over(std::vector<ParticleId> nodes);

    const std::set<ParticleId>& nodes() const { return nodes_; }
    std::optional<ParticleId> parent(ParticleId child) const;
    std::vector<ParticleId> roots() const;

    bool has_node(ParticleId id) const { return nodes_.count(id) > 0; }

    // Throws AlreadyPrepared if child already has a parent, UnknownParticle
    // for nodes outside the network.
    FrameNetwork with_edge(ParticleId child, ParticleId parent) const;

    // child, parent(child), ..., root.
    std::vector<ParticleId> ancestry(ParticleId id) const;

    bool is_ancestor(ParticleId ancestor, ParticleId node) const;

    // Lowest common ancestor under the parent relation; the ancestor itself
    // when one argument prepared the other; nullopt for disjoint trees.
    std::optional<ParticleId> first_common_frame(ParticleId a, ParticleId b) const;

  private:
    std::set<ParticleId> nodes_;
    std::map<ParticleId, ParticleId> parent_;
};

// A pairwise interaction that happened in the pipeline, for the static
// conserving-set rule.
struct InteractionEvent {
    ParticleId a;
    ParticleId b;
    int order = 0;
};

// The preparation interaction: frame (in any state) prepares `system` in
// state chi, transferring momentum l with amplitude chi(l). Defined only on
// the sector where the system's label is exactly 0 in every basis key;
// anything else throws SystemNotVirgin. The edge system -> frame is
// recorded in the returned network.
std::pair<SparseState, FrameNetwork> prepare(const SparseState& s, ParticleId frame,
                                             ParticleId system, const Wavefunction& chi,
                                             const FrameNetwork& net);

// State-only version used where no bookkeeping is wanted.
SparseState prepare_state(const SparseState& s, ParticleId frame, ParticleId system,
                          const Wavefunction& chi);

// The minimal particle set over which individual-case conservation is
// expected to hold for measurements of `measured`:
//   - no interaction linking distinct branches: each measured particle plus
//     its direct parent;
//   - otherwise: every ancestor path from the involved particles up to and
//     including their first common frame (to the roots if the trees are
//     disjoint).
// Interactions are followed transitively from the measured set.
std::set<ParticleId> conserving_set(const FrameNetwork& net,
                                    const std::set<ParticleId>& measured,
                                    const std::vector<InteractionEvent>& interactions);

} // namespace qrf
