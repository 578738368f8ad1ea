#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "test_support.hpp"

using namespace qrf;
using namespace qrf::testing;

TEST_CASE("tensor of momentum eigenstates") {
    const SparseState a = SparseState::basis_state(Register({kF}), {0});
    const SparseState b = SparseState::basis_state(Register({kS}), {0});
    const SparseState ab = tensor(a, b);
    CHECK(ab.size() == 1);
    CHECK(ab.amplitude(std::vector<std::int64_t>{0, 0}) == cplx{1.0, 0.0});
}

TEST_CASE("tensor of a superposed frame with a fresh system") {
    const SparseState ab = tensor(single_particle_state(kF, half_superposition()),
                                  single_particle_state(kS, zero_state()));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(ab.amplitude(std::vector<std::int64_t>{0, 0}) - cplx{r, 0}) < 1e-15);
    CHECK(std::abs(ab.amplitude(std::vector<std::int64_t>{1, 0}) - cplx{r, 0}) < 1e-15);
    CHECK(ab.size() == 2);
}

TEST_CASE("tensor matches the dense Kronecker oracle") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 20; ++round) {
        const Wavefunction wa = random_wavefunction(rng, -2, 2, 3);
        const Wavefunction wb = random_wavefunction(rng, -2, 2, 2);
        const SparseState ab =
            tensor(single_particle_state(kF, wa), single_particle_state(kS, wb));
        CHECK(ab.size() == wa.support_size() * wb.support_size());
        CHECK(ab.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));

        const DenseSim dense = DenseSim::product({wa, wb}, 4);
        CHECK(dense.max_difference(ab) < 1e-12);
    }
}

TEST_CASE("tensor rejects overlapping registers") {
    const SparseState a = SparseState::basis_state(Register({kF}), {0});
    CHECK_THROWS_AS((void)tensor(a, a), Error);
    try {
        (void)tensor(a, a);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::RegisterConflict);
    }
}

TEST_CASE("total momentum distribution of the four-particle product state") {
    // Over the two frames, before any interaction.
    const Distribution d =
        total_momentum_distribution(paradox_prepared_state(), {kF, kF2});
    // The frames are entangled with their systems; their own total spreads.
    CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-12));

    // Over frame+system pairs the preparation has not moved anything.
    const Distribution pairs = total_momentum_distribution(
        paradox_prepared_state(), {kF, kS, kF2, kS2});
    CHECK(pairs.max_abs_difference(eq10_distribution()) < 1e-12);
}

TEST_CASE("distribution of a single eigenstate") {
    const SparseState s = SparseState::basis_state(Register({kF}), {3});
    const Distribution d = total_momentum_distribution(s, {kF});
    CHECK(d.at(3) == doctest::Approx(1.0));
    CHECK(d.weights().size() == 1);
}

TEST_CASE("distribution rejects unknown particles") {
    const SparseState s = SparseState::basis_state(Register({kF}), {0});
    CHECK_THROWS_AS((void)total_momentum_distribution(s, {kS}), Error);
}

TEST_CASE("conditional frame distribution after the interference outcome") {
    // Run the two-branch pipeline and condition on (S, S2) = (0, 1): the
    // frames' total momentum is flat over {-1, 0, 1} and the (0,0) key is
    // absent from the map after the destructive cancellation.
    const auto events = paradox_events();
    const auto branches = run_events(paradox_initial_state(), events);
    const Branch* branch = find_branch(branches, {0, 1});
    REQUIRE(branch != nullptr);
    CHECK(branch->probability == doctest::Approx(3.0 / 16.0).epsilon(1e-12));

    const Distribution d = total_momentum_distribution(branch->state, {kF, kF2});
    CHECK(d.max_abs_difference(eq19_distribution()) < 1e-12);

    CHECK(branch->state.amplitude(std::vector<std::int64_t>{0, 0, 0, 1}) ==
          cplx{0.0, 0.0});
}

TEST_CASE("measurement of the prepared pair") {
    SparseState state = tensor(single_particle_state(kF, half_superposition()),
                               single_particle_state(kS, zero_state()));
    state = prepare_state(state, kF, kS, half_superposition());

    const auto outcomes = measure_momentum(state, kS);
    REQUIRE(outcomes.size() == 2);
    CHECK(outcomes[0].outcome == 0);
    CHECK(outcomes[1].outcome == 1);
    CHECK(outcomes[0].probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(outcomes[1].probability == doctest::Approx(0.5).epsilon(1e-12));

    // Outcome 0 leaves the frame in psi, outcome 1 in psi shifted down.
    const double r = 1.0 / std::sqrt(2.0);
    const auto& on0 = outcomes[0].collapsed;
    CHECK(std::abs(on0.amplitude(std::vector<std::int64_t>{0, 0}) - cplx{r, 0}) < 1e-12);
    CHECK(std::abs(on0.amplitude(std::vector<std::int64_t>{1, 0}) - cplx{r, 0}) < 1e-12);
    const auto& on1 = outcomes[1].collapsed;
    CHECK(std::abs(on1.amplitude(std::vector<std::int64_t>{-1, 1}) - cplx{r, 0}) < 1e-12);
    CHECK(std::abs(on1.amplitude(std::vector<std::int64_t>{0, 1}) - cplx{r, 0}) < 1e-12);
}

TEST_CASE("measurement of an eigenstate is deterministic") {
    const SparseState s = SparseState::basis_state(Register({kF}), {2});
    const auto outcomes = measure_momentum(s, kF);
    REQUIRE(outcomes.size() == 1);
    CHECK(outcomes[0].outcome == 2);
    CHECK(outcomes[0].probability == doctest::Approx(1.0));
}

TEST_CASE("joint outcome probability, cross-checked against the dense oracle") {
    const auto events = paradox_events();
    const auto branches = run_events(paradox_initial_state(), events);
    const Branch* branch = find_branch(branches, {0, 1});
    REQUIRE(branch != nullptr);
    CHECK(branch->probability == doctest::Approx(3.0 / 16.0).epsilon(1e-12));

    // Dense route: product state, dense interaction, dense measurements.
    DenseSim dense = DenseSim::product(
        {half_superposition(), zero_state(), half_superposition(), zero_state()}, 6);
    dense.prepare(0, 1, half_superposition());
    dense.prepare(2, 3, half_superposition());
    dense.interact(1, 3, beamsplitter_interaction());
    const double p_first = dense.outcome_probabilities(1).at(0);
    const DenseSim after_first = dense.collapsed(1, 0);
    const double p_second = after_first.outcome_probabilities(3).at(1);
    CHECK(p_first * p_second == doctest::Approx(3.0 / 16.0).epsilon(1e-10));
}

TEST_CASE("shift_particle lowers the frame state by the outcome") {
    SparseState psi = single_particle_state(kF, half_superposition());
    const SparseState down = shift_particle(psi, kF, -1);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(down.amplitude(std::vector<std::int64_t>{-1}) - cplx{r, 0}) < 1e-15);
    CHECK(std::abs(down.amplitude(std::vector<std::int64_t>{0}) - cplx{r, 0}) < 1e-15);

    CHECK(shift_particle(psi, kF, 0).max_amplitude_difference(psi) == 0.0);
    CHECK(shift_particle(shift_particle(psi, kF, 3), kF, -3)
              .max_amplitude_difference(psi) == 0.0);
}

TEST_CASE("shift composition acts additively on labels") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 10; ++round) {
        const SparseState s =
            single_particle_state(kF, random_wavefunction(rng, -3, 3));
        std::uniform_int_distribution<std::int64_t> delta(-5, 5);
        const std::int64_t a = delta(rng);
        const std::int64_t b = delta(rng);
        const SparseState lhs = shift_particle(shift_particle(s, kF, a), kF, b);
        const SparseState rhs = shift_particle(s, kF, a + b);
        CHECK(lhs.max_amplitude_difference(rhs) == 0.0);
    }
}

TEST_CASE("operations preserve the norm") {
    std::mt19937_64 rng(13);
    for (int round = 0; round < 20; ++round) {
        SparseState state = tensor(
            tensor(single_particle_state(kF, random_wavefunction(rng, -2, 2)),
                   single_particle_state(kS, zero_state())),
            single_particle_state(kF2, random_wavefunction(rng, -2, 2)));
        CHECK(state.is_normalized());
        state = prepare_state(state, kF, kS, random_wavefunction(rng, -2, 2));
        CHECK(state.is_normalized());
        state = shift_particle(state, kF2, 2);
        CHECK(state.is_normalized());
        state = apply_interaction(state, kS, kF2,
                                  random_interaction_for(state, kS, kF2, rng));
        CHECK(state.is_normalized());

        // Measurement completeness: outcome probabilities sum to one.
        double total = 0.0;
        for (const auto& outcome : measure_momentum(state, kS)) {
            total += outcome.probability;
            CHECK(outcome.collapsed.is_normalized());
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("prune threshold keeps cancelled keys out of the map") {
    // (|0> + |1>)/sqrt(2) followed by interference that empties |0>:
    // build terms directly with an exact cancellation.
    const double r = 1.0 / std::sqrt(2.0);
    const SparseState s = SparseState::from_terms(
        Register({kF}), {{{0}, cplx{r, 0}}, {{0}, cplx{-r, 0}}, {{1}, cplx{1.0, 0}}},
        true);
    CHECK(s.size() == 1);
    CHECK(s.amplitude(std::vector<std::int64_t>{0}) == cplx{0.0, 0.0});
}

TEST_CASE("reduced density matrix of a product state is pure") {
    const SparseState state = paradox_prepared_state();
    const ReducedDensity rho = reduced_density(state, {kF, kS});
    CHECK(rho.largest_eigenvalue() == doctest::Approx(1.0).epsilon(1e-10));

    // The two branches are uncorrelated, so tracing one out leaves the
    // other pure; inside a branch the frame alone is mixed.
    const ReducedDensity frame_only = reduced_density(state, {kF});
    CHECK(frame_only.largest_eigenvalue() < 1.0 - 1e-3);
}
