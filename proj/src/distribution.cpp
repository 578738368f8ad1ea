#include "qrf/distribution.hpp"

#include <cmath>
#include <string>

#include "qrf/error.hpp"

namespace qrf {

Distribution Distribution::from_weights(const std::map<std::int64_t, double>& weights,
                                        double tol) {
    double sum = 0.0;
    for (const auto& [value, weight] : weights) {
        if (weight < -tol)
            throw Error(ErrorKind::InvalidArgument,
                        "negative weight at L=" + std::to_string(value));
        sum += weight;
    }
    if (std::abs(sum - 1.0) > tol)
        throw Error(ErrorKind::InvalidArgument,
                    "weights sum to " + std::to_string(sum) + ", expected 1");
    Distribution d;
    for (const auto& [value, weight] : weights)
        if (weight > 1e-14) d.weights_[value] = weight;
    return d;
}

double Distribution::at(std::int64_t value) const {
    auto it = weights_.find(value);
    return it == weights_.end() ? 0.0 : it->second;
}

double Distribution::total() const {
    double sum = 0.0;
    for (const auto& [value, weight] : weights_) sum += weight;
    return sum;
}

Distribution Distribution::shifted(std::int64_t delta) const {
    Distribution d;
    for (const auto& [value, weight] : weights_) d.weights_[value + delta] = weight;
    return d;
}

double Distribution::max_abs_difference(const Distribution& other) const {
    double worst = 0.0;
    for (const auto& [value, weight] : weights_)
        worst = std::max(worst, std::abs(weight - other.at(value)));
    for (const auto& [value, weight] : other.weights_)
        worst = std::max(worst, std::abs(weight - at(value)));
    return worst;
}

} // namespace qrf
