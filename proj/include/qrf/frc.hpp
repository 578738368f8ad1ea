#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "qrf/sparse_state.hpp"

namespace qrf {

// A change of Hilbert-space factorization realized as an integer relabeling
// of momentum tuples. Only unimodular integer matrices define a valid
// one-to-one change of circle coordinates, so instances can only be built
// through validate_label_transform() or the built-in catalog.
class LabelTransform {
  public:
    std::size_t dimension() const { return dim_; }
    const std::vector<std::int64_t>& matrix() const { return matrix_; }
    const std::vector<std::int64_t>& inverse() const { return inverse_; }
    const std::vector<std::string>& names() const { return names_; }

    std::int64_t entry(std::size_t r, std::size_t c) const { return matrix_[r * dim_ + c]; }
    std::int64_t inverse_entry(std::size_t r, std::size_t c) const {
        return inverse_[r * dim_ + c];
    }

    // The inverse relabeling (matrix and inverse swapped).
    LabelTransform inverted() const;

    // Applies the matrix to an integer label vector.
    std::vector<std::int64_t> apply(std::span<const std::int64_t> labels) const;

  private:
    LabelTransform(std::size_t dim, std::vector<std::int64_t> matrix,
                   std::vector<std::int64_t> inverse, std::vector<std::string> names)
        : dim_(dim), matrix_(std::move(matrix)), inverse_(std::move(inverse)),
          names_(std::move(names)) {}

    std::size_t dim_ = 0;
    std::vector<std::int64_t> matrix_;
    std::vector<std::int64_t> inverse_;
    std::vector<std::string> names_;

    friend std::variant<LabelTransform, struct TransformRejection>
    validate_label_transform(const std::vector<std::vector<double>>& candidate,
                             std::vector<std::string> names);
};

struct TransformRejection {
    enum class Reason { NotSquare, NonIntegerEntries, NonIntegerInverse };
    Reason reason;
    std::string detail;
};

// Accepts exactly the integer matrices with an exact integer inverse
// (determinant +/-1). Rejections distinguish non-integer entries from a
// non-integer inverse.
std::variant<LabelTransform, TransformRejection>
validate_label_transform(const std::vector<std::vector<double>>& candidate,
                         std::vector<std::string> names = {});

// Relabels every basis key by the transform. `ordering` assigns register
// particles to transform coordinates: input coordinate c reads the label of
// ordering[c], and the result is a state over Register(ordering) holding
// the transformed coordinates. Defaults to the state's own register order.
SparseState transform_state(const SparseState& s, const LabelTransform& t,
                            const std::vector<ParticleId>& ordering);
SparseState transform_state(const SparseState& s, const LabelTransform& t);

// The built-in coordinate changes, keyed "pair", "chain", "network".
// Particle ordering conventions:
//   pair    (F, S):              L1 = F+S, L2 = S
//   chain   (G, F, S):           L0 = G+F+S, L1 = F+S, L2 = S
//   network (G, F, F', S, S'):   LA = G+F+F'+S+S', LB = F+F'+S+S',
//                                LR = F'+S', LC = S, LC' = S'
const std::map<std::string, LabelTransform>& builtin_transforms();

} // namespace qrf
