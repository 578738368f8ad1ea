#pragma once

#include <cstdint>
#include <map>

namespace qrf {

// Probability distribution over integer angular-momentum totals.
// Weights are kept sorted by value; entries below the prune threshold are
// dropped rather than stored as zeros.
class Distribution {
  public:
    Distribution() = default;

    // Validates nonnegativity and normalization (sum within `tol` of 1).
    static Distribution from_weights(const std::map<std::int64_t, double>& weights,
                                     double tol = 1e-12);

    const std::map<std::int64_t, double>& weights() const { return weights_; }

    double at(std::int64_t value) const;
    double total() const;

    Distribution shifted(std::int64_t delta) const;

    // Pointwise sup-distance over the union of supports.
    double max_abs_difference(const Distribution& other) const;

    friend bool operator==(const Distribution&, const Distribution&) = default;

  private:
    std::map<std::int64_t, double> weights_;
};

} // namespace qrf
