#include "qrf/frc.hpp"

#include <cmath>
#include <sstream>

namespace qrf {

namespace {

// Fraction-free Gaussian elimination; exact for integer matrices.
std::int64_t bareiss_determinant(std::vector<std::int64_t> m, std::size_t n) {
    if (n == 0) return 1;
    std::int64_t prev = 1;
    std::int64_t sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k * n + k] == 0) {
            std::size_t pivot = k + 1;
            while (pivot < n && m[pivot * n + k] == 0) ++pivot;
            if (pivot == n) return 0;
            for (std::size_t c = 0; c < n; ++c) std::swap(m[k * n + c], m[pivot * n + c]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                m[i * n + j] =
                    (m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j]) / prev;
            m[i * n + k] = 0;
        }
        prev = m[k * n + k];
    }
    return sign * m[(n - 1) * n + (n - 1)];
}

std::int64_t minor_determinant(const std::vector<std::int64_t>& m, std::size_t n,
                               std::size_t drop_row, std::size_t drop_col) {
    std::vector<std::int64_t> sub;
    sub.reserve((n - 1) * (n - 1));
    for (std::size_t r = 0; r < n; ++r) {
        if (r == drop_row) continue;
        for (std::size_t c = 0; c < n; ++c) {
            if (c == drop_col) continue;
            sub.push_back(m[r * n + c]);
        }
    }
    return bareiss_determinant(std::move(sub), n - 1);
}

} // namespace

LabelTransform LabelTransform::inverted() const {
    std::vector<std::string> names(dim_);
    for (std::size_t i = 0; i < dim_; ++i) names[i] = "x" + std::to_string(i);
    return LabelTransform(dim_, inverse_, matrix_, std::move(names));
}

std::vector<std::int64_t> LabelTransform::apply(std::span<const std::int64_t> labels) const {
    if (labels.size() != dim_)
        throw Error(ErrorKind::DimensionMismatch, "label vector does not match transform");
    std::vector<std::int64_t> out(dim_, 0);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) out[r] += matrix_[r * dim_ + c] * labels[c];
    return out;
}

std::variant<LabelTransform, TransformRejection>
validate_label_transform(const std::vector<std::vector<double>>& candidate,
                         std::vector<std::string> names) {
    const std::size_t n = candidate.size();
    if (n == 0)
        return TransformRejection{TransformRejection::Reason::NotSquare, "empty matrix"};
    for (const auto& row : candidate)
        if (row.size() != n)
            return TransformRejection{TransformRejection::Reason::NotSquare,
                                      "matrix is not square"};

    std::vector<std::int64_t> matrix(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const double value = candidate[r][c];
            const double rounded = std::round(value);
            if (std::abs(value - rounded) > 1e-9) {
                std::ostringstream os;
                os << "entry (" << r << "," << c << ") = " << value
                   << " is not an integer; momentum labels must stay integral";
                return TransformRejection{TransformRejection::Reason::NonIntegerEntries,
                                          os.str()};
            }
            matrix[r * n + c] = static_cast<std::int64_t>(rounded);
        }
    }

    const std::int64_t det = bareiss_determinant(matrix, n);
    if (det != 1 && det != -1) {
        std::ostringstream os;
        os << "determinant is " << det
           << "; only determinant +/-1 admits an integer inverse, so the new labels "
              "cannot take independent integer values";
        return TransformRejection{TransformRejection::Reason::NonIntegerInverse, os.str()};
    }

    // inverse = adjugate / det; exact integers since det is a unit.
    std::vector<std::int64_t> inverse(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const std::int64_t cofactor =
                (((r + c) % 2 == 0) ? 1 : -1) * minor_determinant(matrix, n, c, r);
            inverse[r * n + c] = det * cofactor;
        }

    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            std::int64_t acc = 0;
            for (std::size_t k = 0; k < n; ++k)
                acc += matrix[r * n + k] * inverse[k * n + c];
            if (acc != (r == c ? 1 : 0))
                throw Error(ErrorKind::InvalidArgument,
                            "inverse verification failed; matrix entries too large");
        }

    if (names.empty())
        for (std::size_t i = 0; i < n; ++i) names.push_back("L" + std::to_string(i));
    if (names.size() != n)
        throw Error(ErrorKind::DimensionMismatch, "one name per coordinate required");
    return LabelTransform(n, std::move(matrix), std::move(inverse), std::move(names));
}

SparseState transform_state(const SparseState& s, const LabelTransform& t,
                            const std::vector<ParticleId>& ordering) {
    const std::size_t n = s.width();
    if (t.dimension() != n || ordering.size() != n)
        throw Error(ErrorKind::DimensionMismatch,
                    "transform dimension does not match register size");

    // Fold the coordinate ordering into the matrix so a single relabel pass
    // suffices: out[r] = sum_c T[r][c] * label[slot(ordering[c])].
    std::vector<std::int64_t> matrix(n * n, 0);
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t slot = s.particles().slot(ordering[c]);
        for (std::size_t r = 0; r < n; ++r) matrix[r * n + slot] += t.entry(r, c);
    }

    kernels::RowBuffer out;
    kernels::relabel_rows(s.rows(), matrix, out, kernels::resolve(s.size()));
    // The relabeling is bijective, so sorting cannot merge keys.
    return scatter_state(Register(ordering), std::move(out));
}

SparseState transform_state(const SparseState& s, const LabelTransform& t) {
    return transform_state(s, t, s.particles().ids());
}

const std::map<std::string, LabelTransform>& builtin_transforms() {
    static const std::map<std::string, LabelTransform> catalog = [] {
        std::map<std::string, LabelTransform> m;
        auto accept = [](const std::vector<std::vector<double>>& rows,
                         std::vector<std::string> names) {
            return std::get<LabelTransform>(
                validate_label_transform(rows, std::move(names)));
        };
        m.emplace("pair", accept({{1, 1}, {0, 1}}, {"L1", "L2"}));
        m.emplace("chain",
                  accept({{1, 1, 1}, {0, 1, 1}, {0, 0, 1}}, {"L0", "L1", "L2"}));
        m.emplace("network", accept({{1, 1, 1, 1, 1},
                                     {0, 1, 1, 1, 1},
                                     {0, 0, 1, 0, 1},
                                     {0, 0, 0, 1, 0},
                                     {0, 0, 0, 0, 1}},
                                    {"LA", "LB", "LR", "LC", "LC'"}));
        return m;
    }();
    return catalog;
}

} // namespace qrf
