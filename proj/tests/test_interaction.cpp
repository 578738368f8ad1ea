#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "test_support.hpp"

using namespace qrf;
using namespace qrf::testing;

namespace {

InteractionCandidate beamsplitter_candidate() {
    const double r = 1.0 / std::sqrt(2.0);
    InteractionCandidate candidate;
    candidate.support = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    candidate.matrix.assign(16, cplx{0.0, 0.0});
    candidate.matrix[0 * 4 + 0] = 1.0;
    candidate.matrix[1 * 4 + 1] = r;
    candidate.matrix[1 * 4 + 2] = -r;
    candidate.matrix[2 * 4 + 1] = r;
    candidate.matrix[2 * 4 + 2] = r;
    candidate.matrix[3 * 4 + 3] = 1.0;
    return candidate;
}

} // namespace

TEST_CASE("the beamsplitter unitary is momentum conserving") {
    const auto result = validate_momentum_conserving(beamsplitter_candidate());
    CHECK(result.ok);
    REQUIRE(result.spec.has_value());
    CHECK(result.spec->blocks().size() == 3);
    // The total-1 block is the 2x2 rotation.
    CHECK(result.spec->blocks()[1].basis.size() == 2);

    CHECK(result.spec->has_total(2));
    CHECK(!result.spec->has_total(3));
    const auto hit = result.spec->find_pair(1, 0);
    REQUIRE(hit.has_value());
    CHECK(hit->first == 1);  // the total-1 block
    CHECK(hit->second == 1); // second basis pair
    CHECK(!result.spec->find_pair(2, -1).has_value());
}

TEST_CASE("the swap unitary is momentum conserving") {
    InteractionCandidate candidate;
    candidate.support = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    candidate.matrix.assign(16, cplx{0.0, 0.0});
    candidate.matrix[0 * 4 + 0] = 1.0;
    candidate.matrix[2 * 4 + 1] = 1.0; // |0,1> -> |1,0>
    candidate.matrix[1 * 4 + 2] = 1.0;
    candidate.matrix[3 * 4 + 3] = 1.0;
    const auto result = validate_momentum_conserving(candidate);
    CHECK(result.ok);
}

TEST_CASE("a total-changing matrix is rejected with a cited entry") {
    InteractionCandidate candidate;
    candidate.support = {{0, 0}, {0, 1}};
    candidate.matrix = {cplx{0, 0}, cplx{0, 0}, cplx{1, 0}, cplx{0, 0}};
    // Column of |0,0> maps onto |0,1>: total 0 -> 1.
    const auto result = validate_momentum_conserving(candidate);
    CHECK(!result.ok);
    REQUIRE(!result.diagnostics.empty());
    CHECK(result.diagnostics.front().find("total 0 to total 1") != std::string::npos);
}

TEST_CASE("a non-unitary block is rejected with its total named") {
    InteractionCandidate candidate;
    candidate.support = {{0, 1}, {1, 0}};
    candidate.matrix = {cplx{1, 0}, cplx{1, 0}, cplx{0, 0}, cplx{1, 0}};
    const auto result = validate_momentum_conserving(candidate);
    CHECK(!result.ok);
    REQUIRE(!result.diagnostics.empty());
    CHECK(result.diagnostics.front().find("total 1") != std::string::npos);
    CHECK(result.diagnostics.front().find("not unitary") != std::string::npos);
}

TEST_CASE("the interference example reproduces the post-interaction state") {
    SparseState state = paradox_prepared_state();
    state = apply_interaction(state, kS, kS2, beamsplitter_interaction());

    // The (F,S,F2,S2) = (0,0,0,1) component cancels exactly.
    CHECK(state.amplitude(std::vector<std::int64_t>{0, 0, 0, 1}) == cplx{0.0, 0.0});
    CHECK(state.is_normalized());

    // |00> and |11> system sectors are untouched diagonal blocks: the
    // (0,0,*,0)/(*,0,0,0) family keeps amplitude 1/4.
    CHECK(std::abs(state.amplitude(std::vector<std::int64_t>{0, 0, 0, 0}) -
                   cplx{0.25, 0.0}) < 1e-15);
    CHECK(std::abs(state.amplitude(std::vector<std::int64_t>{1, 0, 1, 0}) -
                   cplx{0.25, 0.0}) < 1e-15);

    // The (S,S2)=(0,1) sector carries coefficient 1/(2 sqrt 2) on the six
    // surviving frame keys, signed.
    const double a = 0.25 / std::sqrt(2.0);
    CHECK(std::abs(state.amplitude(std::vector<std::int64_t>{0, 0, -1, 1}) -
                   cplx{a, 0.0}) < 1e-15);
    CHECK(std::abs(state.amplitude(std::vector<std::int64_t>{-1, 0, 0, 1}) -
                   cplx{-a, 0.0}) < 1e-15);
}

TEST_CASE("the identity interaction changes nothing") {
    const SparseState state = paradox_prepared_state();
    const SparseState after =
        apply_interaction(state, kS, kS2, InteractionSpec::identity());
    CHECK(after.max_amplitude_difference(state) == 0.0);
}

TEST_CASE("random block unitaries match the dense matrix oracle") {
    std::mt19937_64 rng(211);
    for (int round = 0; round < 20; ++round) {
        const Wavefunction wa = random_wavefunction(rng, -2, 2);
        const Wavefunction wb = random_wavefunction(rng, -2, 2);
        const Wavefunction wc = random_wavefunction(rng, -2, 2);
        SparseState state = tensor(tensor(single_particle_state(kF, wa),
                                          single_particle_state(kS, wb)),
                                   single_particle_state(kF2, wc));
        const InteractionSpec unitary = random_interaction_for(state, kS, kF2, rng);
        const SparseState after = apply_interaction(state, kS, kF2, unitary);

        DenseSim dense = DenseSim::product({wa, wb, wc}, 8);
        dense.interact(1, 2, unitary);
        CHECK(dense.max_difference(after) < 1e-10);
        CHECK(after.is_normalized());
    }
}

TEST_CASE("ambiguous pairs outside the support are refused") {
    // State has a (S,S2) pair (2,-1) with total 1, which the beamsplitter
    // claims as a block total without covering the pair.
    SparseState state = tensor(single_particle_state(kS, Wavefunction::eigenstate(2)),
                               single_particle_state(kS2, Wavefunction::eigenstate(-1)));
    CHECK_THROWS_AS(
        (void)apply_interaction(state, kS, kS2, beamsplitter_interaction()), Error);
    try {
        (void)apply_interaction(state, kS, kS2, beamsplitter_interaction());
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SupportViolation);
    }
}

TEST_CASE("pairs with undeclared totals pass through as identity") {
    SparseState state = tensor(single_particle_state(kS, Wavefunction::eigenstate(4)),
                               single_particle_state(kS2, Wavefunction::eigenstate(3)));
    const SparseState after =
        apply_interaction(state, kS, kS2, beamsplitter_interaction());
    CHECK(after.max_amplitude_difference(state) == 0.0);
}

TEST_CASE("interactions preserve the full-register momentum distribution") {
    std::mt19937_64 rng(223);
    for (int round = 0; round < 20; ++round) {
        SparseState state = tensor(single_particle_state(kS, random_wavefunction(rng, -3, 3)),
                                   single_particle_state(kS2, random_wavefunction(rng, -3, 3)));
        const Distribution before = total_momentum_distribution(state, {kS, kS2});
        const InteractionSpec unitary = random_interaction_for(state, kS, kS2, rng);
        const SparseState after = apply_interaction(state, kS, kS2, unitary);
        const Distribution post = total_momentum_distribution(after, {kS, kS2});
        CHECK(before.max_abs_difference(post) < 1e-12);
    }
}

TEST_CASE("block construction rejects mismatched totals") {
    CHECK_THROWS_AS((void)InteractionSpec::from_blocks(
                        {{1, {{0, 0}}, {cplx{1.0, 0.0}}}}),
                    Error);
}

TEST_CASE("a pair cannot belong to two blocks") {
    CHECK_THROWS_AS((void)InteractionSpec::from_blocks(
                        {{0, {{0, 0}}, {cplx{1.0, 0.0}}},
                         {0, {{0, 0}}, {cplx{1.0, 0.0}}}}),
                    Error);
}
