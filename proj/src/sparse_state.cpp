#include "qrf/sparse_state.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <string>

namespace qrf {

namespace {
std::atomic<double> g_prune{1e-14};
} // namespace

double prune_threshold() { return g_prune.load(); }
void set_prune_threshold(double value) { g_prune.store(value); }

SparseState SparseState::from_terms(Register reg,
                                    const std::vector<std::pair<BasisKey, cplx>>& terms,
                                    bool normalize) {
    const std::size_t w = reg.size();
    kernels::RowBuffer buf;
    buf.width = w;
    buf.reserve_rows(terms.size());
    for (const auto& [key, amp] : terms) {
        if (key.size() != w)
            throw Error(ErrorKind::DimensionMismatch,
                        "basis key has " + std::to_string(key.size()) +
                            " labels, register has " + std::to_string(w));
        buf.push_row(key, amp);
    }
    kernels::sort_combine_prune(buf, prune_threshold(), kernels::resolve(buf.rows()));
    SparseState s(std::move(reg), std::move(buf));
    if (normalize) {
        const double nrm = std::sqrt(s.norm_sq());
        if (nrm <= 0.0)
            throw Error(ErrorKind::InvalidArgument, "cannot normalize a zero state");
        kernels::scale_amps(s.buf_, 1.0 / nrm, kernels::resolve(s.size()));
        // Scaling down can push an amplitude under the prune threshold.
        if (nrm > 1.0)
            kernels::sort_combine_prune(s.buf_, prune_threshold(),
                                        kernels::resolve(s.size()));
    }
    return s;
}

SparseState SparseState::basis_state(Register reg, BasisKey labels) {
    return from_terms(std::move(reg), {{std::move(labels), cplx{1.0, 0.0}}}, false);
}

cplx SparseState::amplitude(std::span<const std::int64_t> key) const {
    if (key.size() != width())
        throw Error(ErrorKind::DimensionMismatch, "key width does not match register");
    return kernels::lookup(buf_, key);
}

double SparseState::norm_sq() const {
    return kernels::norm_sq(buf_, kernels::resolve(size()));
}

bool SparseState::is_normalized(double tol) const {
    return std::abs(norm_sq() - 1.0) <= tol;
}

double SparseState::max_amplitude_difference(const SparseState& other) const {
    if (!(reg_ == other.reg_))
        throw Error(ErrorKind::InvalidArgument,
                    "states are over different registers");
    double worst = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        worst = std::max(worst, std::abs(amp(i) - kernels::lookup(other.buf_, key(i))));
    for (std::size_t i = 0; i < other.size(); ++i)
        worst = std::max(worst,
                         std::abs(other.amp(i) - kernels::lookup(buf_, other.key(i))));
    return worst;
}

SparseState scatter_state(Register reg, kernels::RowBuffer raw, bool renormalize) {
    kernels::sort_combine_prune(raw, prune_threshold(), kernels::resolve(raw.rows()));
    SparseState s(std::move(reg), std::move(raw));
    if (renormalize) {
        const double nrm = std::sqrt(s.norm_sq());
        if (nrm > 0.0)
            kernels::scale_amps(s.buf_, 1.0 / nrm, kernels::resolve(s.size()));
    }
    return s;
}

SparseState tensor(const SparseState& a, const SparseState& b) {
    Register reg = a.particles().joined(b.particles());
    kernels::RowBuffer out;
    kernels::tensor_rows(a.rows(), b.rows(), out,
                         kernels::resolve(a.size() * b.size()));
    // Inputs are sorted and duplicate-free, so the a-major fill already is.
    return SparseState(std::move(reg), std::move(out));
}

Distribution total_momentum_distribution(const SparseState& s,
                                         const std::vector<ParticleId>& subset) {
    std::vector<std::int64_t> coeffs(s.width(), 0);
    for (ParticleId p : subset) coeffs[s.particles().slot(p)] = 1;
    return linear_combination_distribution(s, coeffs);
}

Distribution linear_combination_distribution(const SparseState& s,
                                             std::span<const std::int64_t> coeffs) {
    if (coeffs.size() != s.width())
        throw Error(ErrorKind::DimensionMismatch,
                    "coefficient vector does not match register width");
    auto weights =
        kernels::weighted_label_distribution(s.rows(), coeffs, kernels::resolve(s.size()));
    return Distribution::from_weights(weights);
}

std::vector<MeasurementOutcome> measure_momentum(const SparseState& s, ParticleId p) {
    const std::size_t slot = s.particles().slot(p);
    std::vector<std::int64_t> coeffs(s.width(), 0);
    coeffs[slot] = 1;
    auto weights =
        kernels::weighted_label_distribution(s.rows(), coeffs, kernels::resolve(s.size()));

    std::vector<MeasurementOutcome> outcomes;
    outcomes.reserve(weights.size());
    for (const auto& [value, probability] : weights) {
        if (probability <= prune_threshold()) continue;
        kernels::RowBuffer branch;
        branch.width = s.width();
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s.key(i)[slot] == value) branch.push_row(s.key(i), s.amp(i));
        kernels::scale_amps(branch, 1.0 / std::sqrt(probability),
                            kernels::resolve(branch.rows()));
        // Filtering preserves sorted order.
        outcomes.push_back(
            {value, probability, scatter_state(s.particles(), std::move(branch), false)});
    }
    return outcomes;
}

SparseState shift_particle(const SparseState& s, ParticleId p, std::int64_t delta) {
    const std::size_t slot = s.particles().slot(p);
    SparseState out = s;
    kernels::shift_column(out.buf_, slot, delta, kernels::resolve(out.size()));
    return out;
}

double ReducedDensity::max_abs_difference(const ReducedDensity& other) const {
    // Align the two bases; entries absent on one side count as zero.
    std::map<BasisKey, std::size_t> index;
    for (std::size_t i = 0; i < other.basis.size(); ++i) index[other.basis[i]] = i;
    double worst = 0.0;
    const std::size_t n = basis.size();
    for (std::size_t i = 0; i < n; ++i) {
        auto it_i = index.find(basis[i]);
        for (std::size_t j = 0; j < n; ++j) {
            cplx theirs{0.0, 0.0};
            if (it_i != index.end()) {
                auto it_j = index.find(basis[j]);
                if (it_j != index.end()) theirs = other.entry(it_i->second, it_j->second);
            }
            worst = std::max(worst, std::abs(entry(i, j) - theirs));
        }
    }
    std::map<BasisKey, std::size_t> mine;
    for (std::size_t i = 0; i < n; ++i) mine[basis[i]] = i;
    const std::size_t m = other.basis.size();
    for (std::size_t i = 0; i < m; ++i) {
        if (mine.count(other.basis[i])) continue;
        for (std::size_t j = 0; j < m; ++j)
            worst = std::max(worst, std::abs(other.entry(i, j)));
    }
    return worst;
}

double ReducedDensity::largest_eigenvalue() const {
    const std::size_t n = basis.size();
    if (n == 0) return 0.0;
    std::vector<cplx> v(n, cplx{1.0 / std::sqrt(static_cast<double>(n)), 0.0});
    double lambda = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<cplx> w(n, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) w[i] += entry(i, j) * v[j];
        double nrm = 0.0;
        for (const cplx& x : w) nrm += std::norm(x);
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) return 0.0;
        for (cplx& x : w) x /= nrm;
        double next = 0.0; // Rayleigh quotient of the Hermitian PSD matrix
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                next += std::real(std::conj(w[i]) * entry(i, j) * w[j]);
        v = std::move(w);
        if (std::abs(next - lambda) < 1e-15) return next;
        lambda = next;
    }
    return lambda;
}

ReducedDensity reduced_density(const SparseState& s, const std::vector<ParticleId>& subset) {
    std::vector<std::size_t> keep;
    keep.reserve(subset.size());
    for (ParticleId p : subset) keep.push_back(s.particles().slot(p));
    std::vector<std::size_t> rest;
    for (std::size_t c = 0; c < s.width(); ++c)
        if (std::find(keep.begin(), keep.end(), c) == keep.end()) rest.push_back(c);

    auto sub_key = [&](std::size_t i, const std::vector<std::size_t>& slots) {
        BasisKey k(slots.size());
        for (std::size_t c = 0; c < slots.size(); ++c) k[c] = s.key(i)[slots[c]];
        return k;
    };

    std::map<BasisKey, std::size_t> index;
    for (std::size_t i = 0; i < s.size(); ++i) index.emplace(sub_key(i, keep), 0);
    ReducedDensity rho;
    rho.basis.reserve(index.size());
    for (auto& [key, idx] : index) {
        idx = rho.basis.size();
        rho.basis.push_back(key);
    }
    rho.matrix.assign(rho.basis.size() * rho.basis.size(), cplx{0.0, 0.0});

    // Group rows by the traced-out labels; each group contributes an outer
    // product of its kept-label amplitudes.
    std::map<BasisKey, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < s.size(); ++i) groups[sub_key(i, rest)].push_back(i);
    const std::size_t n = rho.basis.size();
    for (const auto& [rest_key, members] : groups) {
        for (std::size_t a : members) {
            const std::size_t ia = index[sub_key(a, keep)];
            for (std::size_t b : members) {
                const std::size_t ib = index[sub_key(b, keep)];
                rho.matrix[ia * n + ib] += s.amp(a) * std::conj(s.amp(b));
            }
        }
    }
    return rho;
}

} // namespace qrf
