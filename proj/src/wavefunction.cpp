#include "qrf/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qrf {

Wavefunction Wavefunction::from_coeffs(std::vector<std::pair<std::int64_t, cplx>> coeffs) {
    std::sort(coeffs.begin(), coeffs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Wavefunction w;
    double nsq = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (i + 1 < coeffs.size() && coeffs[i + 1].first == coeffs[i].first)
            throw Error(ErrorKind::InvalidArgument,
                        "duplicate momentum label " + std::to_string(coeffs[i].first));
        if (std::abs(coeffs[i].second) <= prune_threshold()) continue;
        w.coeffs_.push_back(coeffs[i]);
        nsq += std::norm(coeffs[i].second);
    }
    if (nsq <= 0.0)
        throw Error(ErrorKind::InvalidArgument, "wavefunction has zero norm");
    const double inv = 1.0 / std::sqrt(nsq);
    for (auto& [l, c] : w.coeffs_) c *= inv;
    return w;
}

Wavefunction Wavefunction::eigenstate(std::int64_t l) {
    return from_coeffs({{l, cplx{1.0, 0.0}}});
}

cplx Wavefunction::coeff(std::int64_t l) const {
    auto it = std::lower_bound(coeffs_.begin(), coeffs_.end(), l,
                               [](const auto& a, std::int64_t v) { return a.first < v; });
    if (it != coeffs_.end() && it->first == l) return it->second;
    return {0.0, 0.0};
}

std::int64_t Wavefunction::min_label() const {
    return coeffs_.empty() ? 0 : coeffs_.front().first;
}

std::int64_t Wavefunction::max_label() const {
    return coeffs_.empty() ? 0 : coeffs_.back().first;
}

double Wavefunction::norm_sq() const {
    double nsq = 0.0;
    for (const auto& [l, c] : coeffs_) nsq += std::norm(c);
    return nsq;
}

cplx Wavefunction::evaluate_angle(double theta) const {
    cplx value{0.0, 0.0};
    for (const auto& [l, c] : coeffs_)
        value += c * std::polar(1.0, static_cast<double>(l) * theta);
    return value / std::sqrt(2.0 * std::numbers::pi);
}

Wavefunction Wavefunction::shift(std::int64_t l) const {
    Wavefunction w;
    w.coeffs_.reserve(coeffs_.size());
    for (const auto& [k, c] : coeffs_) w.coeffs_.emplace_back(k - l, c);
    return w;
}

Distribution Wavefunction::momentum_distribution() const {
    std::map<std::int64_t, double> weights;
    for (const auto& [l, c] : coeffs_) weights[l] = std::norm(c);
    return Distribution::from_weights(weights);
}

double Wavefunction::max_coeff_difference(const Wavefunction& other) const {
    double worst = 0.0;
    for (const auto& [l, c] : coeffs_) worst = std::max(worst, std::abs(c - other.coeff(l)));
    for (const auto& [l, c] : other.coeffs_) worst = std::max(worst, std::abs(c - coeff(l)));
    return worst;
}

SparseState single_particle_state(ParticleId p, const Wavefunction& w) {
    std::vector<std::pair<BasisKey, cplx>> terms;
    terms.reserve(w.support_size());
    for (const auto& [l, c] : w.coeffs()) terms.push_back({{l}, c});
    return SparseState::from_terms(Register({p}), terms, false);
}

SparseState prepared_pair_amplitudes(ParticleId frame, const Wavefunction& psi,
                                     ParticleId system, const Wavefunction& chi) {
    std::vector<std::pair<BasisKey, cplx>> terms;
    terms.reserve(psi.support_size() * chi.support_size());
    for (const auto& [lf, cf] : psi.coeffs())
        for (const auto& [ls, cs] : chi.coeffs())
            terms.push_back({{lf - ls, ls}, cf * cs});
    return SparseState::from_terms(Register({frame, system}), terms, false);
}

} // namespace qrf
