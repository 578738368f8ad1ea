#pragma once

// Test-only oracles, deliberately independent of the sparse engine:
// a dense truncated-window simulator with explicit matrix multiplication
// for interactions, a 2-D grid DFT for the preparation amplitudes, and
// random-instance generators.

#include <map>
#include <random>
#include <vector>

#include "qrf/interaction.hpp"
#include "qrf/sparse_state.hpp"
#include "qrf/wavefunction.hpp"

namespace qrf::testing {

// Dense state vector over the window [-L, L]^n with plain-loop operations.
class DenseSim {
  public:
    DenseSim(std::size_t particles, std::int64_t window);

    static DenseSim product(const std::vector<Wavefunction>& singles,
                            std::int64_t window);

    std::size_t particles() const { return particles_; }
    std::int64_t window() const { return window_; }
    std::size_t side() const { return static_cast<std::size_t>(2 * window_ + 1); }

    cplx amplitude(const std::vector<std::int64_t>& labels) const;
    void set_amplitude(const std::vector<std::int64_t>& labels, cplx value);

    double norm_sq() const;

    void prepare(std::size_t frame_slot, std::size_t system_slot, const Wavefunction& chi);

    // Builds the full dense pair matrix (identity except the declared
    // blocks) and contracts it against the state.
    void interact(std::size_t slot_a, std::size_t slot_b, const InteractionSpec& u);

    void shift(std::size_t slot, std::int64_t delta);

    std::map<std::int64_t, double> distribution(const std::vector<std::size_t>& slots) const;

    // Projective measurement, split into the outcome law and the
    // renormalized post-measurement state.
    std::map<std::int64_t, double> outcome_probabilities(std::size_t slot) const;
    DenseSim collapsed(std::size_t slot, std::int64_t value) const;

    // Max |dense - sparse| over the union of supports; everything the
    // sparse state stores must lie inside the window.
    double max_difference(const SparseState& s) const;

  private:
    std::size_t index_of(const std::vector<std::int64_t>& labels) const;
    void decode(std::size_t index, std::vector<std::int64_t>& labels) const;

    std::size_t particles_;
    std::int64_t window_;
    std::vector<cplx> amps_;
};

// Appendix-style grid DFT oracle: samples psi(theta_f) * chi(theta_s -
// theta_f) on an N x N grid and returns the (lf, ls) Fourier coefficient.
cplx dft_pair_amplitude(const Wavefunction& psi, const Wavefunction& chi, int grid,
                        std::int64_t lf, std::int64_t ls);

// Random band-limited wavefunction with labels in [lo, hi].
Wavefunction random_wavefunction(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi,
                                 int max_terms = 0);

// Haar-ish random unitary block over the given basis pairs (all sharing one
// total), via Gaussian matrix + Gram-Schmidt.
InteractionSpec::Block random_block(std::mt19937_64& rng, std::int64_t total,
                                    std::vector<std::pair<std::int64_t, std::int64_t>> basis);

// Blocks covering every (slot_a, slot_b) pair value present in the state,
// grouped by total, each a random unitary.
InteractionSpec random_interaction_for(const SparseState& s, ParticleId a, ParticleId b,
                                       std::mt19937_64& rng);

} // namespace qrf::testing
