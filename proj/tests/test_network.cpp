#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "test_support.hpp"

using namespace qrf;
using namespace qrf::testing;

namespace {

FrameNetwork five_particle_net() {
    return FrameNetwork::over({kG, kF, kF2, kS, kS2});
}

// G -> F -> S, G -> F2 -> S2
FrameNetwork branching_net() {
    return five_particle_net()
        .with_edge(kF, kG)
        .with_edge(kF2, kG)
        .with_edge(kS, kF)
        .with_edge(kS2, kF2);
}

} // namespace

TEST_CASE("preparing a system out of a superposed frame") {
    SparseState state = tensor(single_particle_state(kF, half_superposition()),
                               single_particle_state(kS, zero_state()));
    FrameNetwork net = FrameNetwork::over({kF, kS});
    auto [prepared, grown] = prepare(state, kF, kS, half_superposition(), net);

    // (|psi>|0> + |psi-1>|1>)/sqrt(2) expanded in the momentum basis.
    for (const auto& key : {std::vector<std::int64_t>{0, 0}, {1, 0}, {-1, 1}, {0, 1}})
        CHECK(std::abs(prepared.amplitude(key) - cplx{0.5, 0.0}) < 1e-15);
    CHECK(grown.parent(kS) == kF);
    CHECK(!grown.parent(kF).has_value());
}

TEST_CASE("identity preparation records the edge but keeps the state") {
    SparseState state = tensor(single_particle_state(kF, half_superposition()),
                               single_particle_state(kS, zero_state()));
    FrameNetwork net = FrameNetwork::over({kF, kS});
    auto [prepared, grown] = prepare(state, kF, kS, zero_state(), net);
    CHECK(prepared.max_amplitude_difference(state) == 0.0);
    CHECK(grown.parent(kS) == kF);
}

TEST_CASE("sequential preparations build the sixteen-term network state") {
    SparseState state = grand_initial_state(zero_state());
    FrameNetwork net = five_particle_net();
    for (const auto& [frame, system] :
         std::vector<std::pair<ParticleId, ParticleId>>{
             {kG, kF}, {kG, kF2}, {kF, kS}, {kF2, kS2}}) {
        auto [next, grown] = prepare(state, frame, system, half_superposition(), net);
        state = next;
        net = grown;
    }
    CHECK(state.size() == 16);
    for (std::size_t i = 0; i < state.size(); ++i)
        CHECK(std::abs(state.amp(i) - cplx{0.25, 0.0}) < 1e-15);

    // Spot-check one key: m=1, n=0, k=1, l=0 -> (-1, 0, 0, 1, 0).
    CHECK(std::abs(state.amplitude(std::vector<std::int64_t>{-1, 0, 0, 1, 0}) -
                   cplx{0.25, 0.0}) < 1e-15);
}

TEST_CASE("preparation requires the zero-momentum sector") {
    SparseState state = tensor(single_particle_state(kF, half_superposition()),
                               single_particle_state(kS, Wavefunction::eigenstate(1)));
    CHECK_THROWS_AS((void)prepare_state(state, kF, kS, half_superposition()), Error);
    try {
        (void)prepare_state(state, kF, kS, half_superposition());
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SystemNotVirgin);
    }
}

TEST_CASE("re-preparing a system is rejected") {
    FrameNetwork net = FrameNetwork::over({kG, kF, kS}).with_edge(kS, kF);
    CHECK_THROWS_AS((void)net.with_edge(kS, kG), Error);
    try {
        (void)net.with_edge(kS, kG);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::AlreadyPrepared);
    }
}

TEST_CASE("first common frame of the two branches is the grand-frame") {
    const FrameNetwork net = branching_net();
    CHECK(net.first_common_frame(kS, kS2) == kG);
    CHECK(net.first_common_frame(kF, kF2) == kG);
}

TEST_CASE("first common frame of an ancestor pair is the ancestor") {
    const FrameNetwork net = FrameNetwork::over({kG, kF, kS})
                                 .with_edge(kF, kG)
                                 .with_edge(kS, kF);
    CHECK(net.first_common_frame(kF, kS) == kF);
    CHECK(net.first_common_frame(kG, kS) == kG);
}

TEST_CASE("disjoint trees share no common frame") {
    const FrameNetwork net =
        FrameNetwork::over({kF, kS, kF2, kS2}).with_edge(kS, kF).with_edge(kS2, kF2);
    CHECK(!net.first_common_frame(kS, kS2).has_value());
}

TEST_CASE("conserving set stays local without cross-branch interactions") {
    const FrameNetwork chain =
        FrameNetwork::over({kG, kF, kS}).with_edge(kF, kG).with_edge(kS, kF);
    CHECK(conserving_set(chain, {kS}, {}) == std::set<ParticleId>{kS, kF});

    const FrameNetwork net = branching_net();
    CHECK(conserving_set(net, {kS, kS2}, {}) ==
          std::set<ParticleId>{kS, kF, kS2, kF2});
}

TEST_CASE("conserving set includes the grand-frame once branches interact") {
    const FrameNetwork net = branching_net();
    CHECK(conserving_set(net, {kS, kS2}, {{kS, kS2, 0}}) ==
          std::set<ParticleId>{kG, kF, kF2, kS, kS2});

    // Interaction partners are pulled in even when only one side is
    // measured.
    CHECK(conserving_set(net, {kS}, {{kS, kS2, 0}}) ==
          std::set<ParticleId>{kG, kF, kF2, kS, kS2});
}

TEST_CASE("same-branch interactions do not trigger the network rule") {
    const FrameNetwork chain =
        FrameNetwork::over({kG, kF, kS}).with_edge(kF, kG).with_edge(kS, kF);
    CHECK(conserving_set(chain, {kS}, {{kS, kF, 0}}) == std::set<ParticleId>{kS, kF});
}

TEST_CASE("conserving set of an empty measured set is an error") {
    CHECK_THROWS_AS((void)conserving_set(branching_net(), {}, {}), Error);
}

TEST_CASE("cross-tree interactions with no common frame pull in full ancestries") {
    const FrameNetwork forest =
        FrameNetwork::over({kF, kS, kF2, kS2}).with_edge(kS, kF).with_edge(kS2, kF2);
    CHECK(conserving_set(forest, {kS, kS2}, {{kS, kS2, 0}}) ==
          std::set<ParticleId>{kF, kS, kF2, kS2});
}

TEST_CASE("preparation leaves every spectator marginal unchanged") {
    std::mt19937_64 rng(31);
    for (int round = 0; round < 20; ++round) {
        SparseState state =
            tensor(tensor(single_particle_state(kG, random_wavefunction(rng, -2, 2)),
                          single_particle_state(kF, random_wavefunction(rng, -2, 2))),
                   single_particle_state(kS, zero_state()));
        const ReducedDensity g_before = reduced_density(state, {kG});
        const SparseState prepared =
            prepare_state(state, kF, kS, random_wavefunction(rng, -2, 2));
        const ReducedDensity g_after = reduced_density(prepared, {kG});
        CHECK(g_before.max_abs_difference(g_after) < 1e-12);
    }
}

TEST_CASE("preparation preserves the full-register momentum distribution") {
    std::mt19937_64 rng(37);
    for (int round = 0; round < 20; ++round) {
        SparseState state = tensor(single_particle_state(kF, random_wavefunction(rng, -3, 3)),
                                   single_particle_state(kS, zero_state()));
        const Distribution before = total_momentum_distribution(state, {kF, kS});
        const SparseState prepared =
            prepare_state(state, kF, kS, random_wavefunction(rng, -3, 3));
        const Distribution after = total_momentum_distribution(prepared, {kF, kS});
        CHECK(before.max_abs_difference(after) < 1e-12);
        CHECK(prepared.is_normalized());
    }
}

TEST_CASE("the transferred momentum law does not depend on the frame state") {
    // For fixed chi the system-outcome distribution after preparation is
    // |chi(l)|^2 whatever the frame started as.
    std::mt19937_64 rng(41);
    const Wavefunction chi = random_wavefunction(rng, -2, 2);
    for (int round = 0; round < 20; ++round) {
        const Wavefunction psi = random_wavefunction(rng, -4, 4);
        SparseState state = tensor(single_particle_state(kF, psi),
                                   single_particle_state(kS, zero_state()));
        state = prepare_state(state, kF, kS, chi);
        const Distribution outcomes = total_momentum_distribution(state, {kS});
        CHECK(outcomes.max_abs_difference(chi.momentum_distribution()) < 1e-12);
    }
}
