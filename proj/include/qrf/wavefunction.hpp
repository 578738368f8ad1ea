#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "qrf/sparse_state.hpp"

namespace qrf {

// Band-limited single-particle state on the circle, stored natively as
// Fourier coefficients over integer momentum labels. Angle-space values
// are derived views; instances are immutable.
class Wavefunction {
  public:
    Wavefunction() = default;

    // Drops zero coefficients and normalizes to unit norm.
    static Wavefunction from_coeffs(std::vector<std::pair<std::int64_t, cplx>> coeffs);

    // Momentum eigenstate |l>.
    static Wavefunction eigenstate(std::int64_t l);

    const std::vector<std::pair<std::int64_t, cplx>>& coeffs() const { return coeffs_; }
    cplx coeff(std::int64_t l) const;
    std::size_t support_size() const { return coeffs_.size(); }
    std::int64_t min_label() const;
    std::int64_t max_label() const;

    double norm_sq() const;

    // psi(theta) = sum_l c_l e^{i l theta} / sqrt(2 pi), theta in [0, 2pi).
    cplx evaluate_angle(double theta) const;

    // coeff'(k) = coeff(k + l): the state shifted down in momentum by l,
    // i.e. e^{-i theta l} applied to the wavefunction.
    Wavefunction shift(std::int64_t l) const;

    // |c_l|^2 as a distribution over momentum labels.
    Distribution momentum_distribution() const;

    friend bool operator==(const Wavefunction&, const Wavefunction&) = default;

    double max_coeff_difference(const Wavefunction& other) const;

  private:
    std::vector<std::pair<std::int64_t, cplx>> coeffs_; // sorted by label
};

// Single particle in state w, as a one-slot register state.
SparseState single_particle_state(ParticleId p, const Wavefunction& w);

// Joint state of a frame F (initially psi) that prepared a system S
// (initially |0>) in state chi: amplitude psi(l_f + l_s) * chi(l_s) on the
// key (l_f, l_s).
SparseState prepared_pair_amplitudes(ParticleId frame, const Wavefunction& psi,
                                     ParticleId system, const Wavefunction& chi);

} // namespace qrf
