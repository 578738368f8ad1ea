#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qrf/distribution.hpp"
#include "qrf/ids.hpp"
#include "qrf/kernels.hpp"

namespace qrf {

using cplx = std::complex<double>;

// One basis key: integer angular-momentum labels, one per register slot.
using BasisKey = std::vector<std::int64_t>;

// Amplitudes with |a| <= prune_threshold() are dropped after every
// operation, so destructively cancelled keys are genuinely absent.
double prune_threshold();
void set_prune_threshold(double value);

// Exact sparse multi-particle state over integer momentum tuples. Rows are
// kept sorted lexicographically and unique; all operations are pure and
// instances are safe to share across threads.
class SparseState {
  public:
    SparseState() = default;

    // Sorts, combines duplicate keys, prunes, and (by default) normalizes.
    static SparseState from_terms(Register reg,
                                  const std::vector<std::pair<BasisKey, cplx>>& terms,
                                  bool normalize = true);

    // Every particle in an exact momentum eigenstate.
    static SparseState basis_state(Register reg, BasisKey labels);

    const Register& particles() const { return reg_; }
    std::size_t size() const { return buf_.rows(); }
    std::size_t width() const { return buf_.width; }
    bool empty() const { return buf_.rows() == 0; }

    std::span<const std::int64_t> key(std::size_t i) const { return buf_.row(i); }
    cplx amp(std::size_t i) const { return buf_.amps[i]; }
    cplx amplitude(std::span<const std::int64_t> key) const;

    double norm_sq() const;
    bool is_normalized(double tol = 1e-12) const;

    const kernels::RowBuffer& rows() const { return buf_; }

    // Maximum |a - b| over amplitudes of the union of both supports.
    // Registers must match.
    double max_amplitude_difference(const SparseState& other) const;

  private:
    SparseState(Register reg, kernels::RowBuffer buf)
        : reg_(std::move(reg)), buf_(std::move(buf)) {}

    Register reg_;
    kernels::RowBuffer buf_;

    friend SparseState tensor(const SparseState&, const SparseState&);
    friend SparseState shift_particle(const SparseState&, ParticleId, std::int64_t);
    friend SparseState scatter_state(Register reg, kernels::RowBuffer raw,
                                     bool renormalize);
};

// Kroneckers two states over disjoint registers; throws RegisterConflict.
SparseState tensor(const SparseState& a, const SparseState& b);

// Distribution of the summed momentum label over `subset`.
Distribution total_momentum_distribution(const SparseState& s,
                                         const std::vector<ParticleId>& subset);

// Distribution of sum_slot coeffs[slot] * label[slot]; coeffs.size() == width.
Distribution linear_combination_distribution(const SparseState& s,
                                             std::span<const std::int64_t> coeffs);

struct MeasurementOutcome {
    std::int64_t outcome;
    double probability;
    SparseState collapsed; // renormalized, measured particle kept at its outcome
};

// Projective momentum measurement of one particle. One entry per outcome
// with probability above prune_threshold(), sorted ascending by outcome.
std::vector<MeasurementOutcome> measure_momentum(const SparseState& s, ParticleId p);

// e^{i theta l}: raises p's momentum label by delta on every key.
SparseState shift_particle(const SparseState& s, ParticleId p, std::int64_t delta);

// Reduced density matrix over `subset`, indexed by the sorted list of
// subset keys that occur in the state.
struct ReducedDensity {
    std::vector<BasisKey> basis;
    std::vector<cplx> matrix; // basis.size()^2, row-major

    cplx entry(std::size_t i, std::size_t j) const { return matrix[i * basis.size() + j]; }
    double max_abs_difference(const ReducedDensity& other) const;

    // Largest eigenvalue by power iteration; 1 - lambda_max bounds the
    // distance from a pure (Schmidt rank 1) marginal.
    double largest_eigenvalue() const;
};

ReducedDensity reduced_density(const SparseState& s, const std::vector<ParticleId>& subset);

// Internal: wrap a raw scatter result (sort + combine + prune).
SparseState scatter_state(Register reg, kernels::RowBuffer raw, bool renormalize = false);

} // namespace qrf
