#include "qrf/builtin.hpp"

namespace qrf::builtin {

namespace {

// One frame prepares one system; measuring the system shifts the frame's
// momentum distribution down by exactly the observed value.
const char* kPair = R"(# One frame, one system.
particle F {0: 1/sqrt2, 1: 1/sqrt2}
particle S {0: 1}

prepare F S {0: 1/sqrt2, 1: 1/sqrt2}
measure S

query distribution F given S=1
query conservation F,S
)";

// A grand-frame prepares the frame, the frame prepares the system. The
// conservation stays local to the last link: G never budges.
const char* kChain = R"(# Linear chain G -> F -> S.
particle G {0: 1/sqrt2, 1: 1/sqrt2}
particle F {0: 1}
particle S {0: 1}

prepare G F {0: 1/sqrt2, 1: 1/sqrt2}
prepare F S {0: 1/sqrt2, 1: 1/sqrt2}
measure S

query conservation F,S
query distribution G at event 1
query distribution G
query transform chain
)";

// Two independent frames prepare two systems; the systems interact through
// a momentum-conserving beamsplitter before being measured. Conditioned on
// the (0,1) outcome the frames' total-momentum distribution is flat, not
// the shifted initial one: individual-case conservation fails on
// {F, F2, S, S2}.
const char* kParadox = R"(# Two branches with a system-system interaction.
particle F {0: 1/sqrt2, 1: 1/sqrt2}
particle F2 {0: 1/sqrt2, 1: 1/sqrt2}
particle S {0: 1}
particle S2 {0: 1}

prepare F S {0: 1/sqrt2, 1: 1/sqrt2}
prepare F2 S2 {0: 1/sqrt2, 1: 1/sqrt2}
interact S S2 beamsplitter
measure S
measure S2

query distribution F,F2 at initial
query distribution F,F2 given S=0,S2=1
query conservation F,F2,S,S2
)";

// Branching network without cross-branch interaction: conservation stays
// local per branch and the grand-frame plays no role.
const char* kNetworkNoInteract = R"(# Branching network, no interaction.
particle G {0: 1/sqrt2, 1: 1/sqrt2}
particle F {0: 1}
particle F2 {0: 1}
particle S {0: 1}
particle S2 {0: 1}

prepare G F {0: 1/sqrt2, 1: 1/sqrt2}
prepare G F2 {0: 1/sqrt2, 1: 1/sqrt2}
prepare F S {0: 1/sqrt2, 1: 1/sqrt2}
prepare F2 S2 {0: 1/sqrt2, 1: 1/sqrt2}
measure S
measure S2

query conservation F,S
query conservation F2,S2
query transform network
)";

// The same two branches, but the frames are explicitly prepared by a
// common grand-frame. Including G restores individual-case conservation;
// the four-particle check still fails.
const char* kNetworkWithG = R"(# Branching network with an explicit grand-frame.
particle G {0: 1}
particle F {0: 1}
particle F2 {0: 1}
particle S {0: 1}
particle S2 {0: 1}

prepare G F {0: 1/sqrt2, 1: 1/sqrt2}
prepare G F2 {0: 1/sqrt2, 1: 1/sqrt2}
prepare F S {0: 1/sqrt2, 1: 1/sqrt2}
prepare F2 S2 {0: 1/sqrt2, 1: 1/sqrt2}
interact S S2 beamsplitter
measure S
measure S2

query distribution F,F2 at event 2
query distribution F,F2 given S=0,S2=1
query conservation G,F,F2,S,S2
query conservation F,F2,S,S2
)";

// A great-grand-frame H prepares G first. Nothing past the first common
// frame participates: every report matches the run without H.
const char* kGreatGrand = R"(# Great-grand-frame ahead of the network.
particle H {0: 1/sqrt2, 1: 1/sqrt2}
particle G {0: 1}
particle F {0: 1}
particle F2 {0: 1}
particle S {0: 1}
particle S2 {0: 1}

prepare H G {0: 1/sqrt2, 1: 1/sqrt2}
prepare G F {0: 1/sqrt2, 1: 1/sqrt2}
prepare G F2 {0: 1/sqrt2, 1: 1/sqrt2}
prepare F S {0: 1/sqrt2, 1: 1/sqrt2}
prepare F2 S2 {0: 1/sqrt2, 1: 1/sqrt2}
interact S S2 beamsplitter
measure S
measure S2

query distribution F,F2 given S=0,S2=1
query conservation G,F,F2,S,S2
)";

} // namespace

const std::vector<NamedScenario>& scenarios() {
    static const std::vector<NamedScenario> catalog = {
        {"pair", kPair},
        {"chain", kChain},
        {"paradox", kParadox},
        {"network_no_interact", kNetworkNoInteract},
        {"network_with_G", kNetworkWithG},
        {"great_grand", kGreatGrand},
    };
    return catalog;
}

const std::string* scenario_source(const std::string& name) {
    for (const auto& entry : scenarios())
        if (entry.name == name) return &entry.source;
    return nullptr;
}

bool is_builtin_unitary(const std::string& name) {
    return name == "beamsplitter" || name == "swap" || name == "identity";
}

InteractionSpec named_unitary(const std::string& name) {
    if (name == "beamsplitter") return beamsplitter_interaction();
    if (name == "swap") return swap_interaction();
    if (name == "identity") return InteractionSpec::identity();
    throw Error(ErrorKind::InvalidArgument, "unknown built-in unitary '" + name + "'");
}

} // namespace qrf::builtin
