#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace qrf::kernels {

using cplx = std::complex<double>;

// Row-major table of basis keys with one amplitude per row. All state
// operations lower onto this buffer so the serial and OpenMP paths share
// one data layout.
struct RowBuffer {
    std::size_t width = 0;
    std::vector<std::int64_t> labels; // rows() * width entries
    std::vector<cplx> amps;

    std::size_t rows() const { return amps.size(); }
    std::span<const std::int64_t> row(std::size_t i) const {
        return {labels.data() + i * width, width};
    }
    std::span<std::int64_t> row(std::size_t i) {
        return {labels.data() + i * width, width};
    }
    void reserve_rows(std::size_t n) {
        labels.reserve(n * width);
        amps.reserve(n);
    }
    void push_row(std::span<const std::int64_t> key, cplx amp) {
        labels.insert(labels.end(), key.begin(), key.end());
        amps.push_back(amp);
    }
    void resize_rows(std::size_t n) {
        labels.resize(n * width);
        amps.resize(n);
    }
};

enum class Exec { Serial, Parallel };
enum class Policy { Serial, Parallel, Auto };

// Auto switches to the parallel path above a row-count threshold; below it
// the serial path is both faster and bit-reproducible across machines.
void set_policy(Policy policy);
Policy policy();
void set_auto_threshold(std::size_t rows);
Exec resolve(std::size_t rows);

// --- kernel primitives, each with a serial reference and an OpenMP path ---

double norm_sq(const RowBuffer& buf, Exec exec);

void scale_amps(RowBuffer& buf, double factor, Exec exec);

// labels[col] += delta on every row; lexicographic row order is preserved.
void shift_column(RowBuffer& buf, std::size_t col, std::int64_t delta, Exec exec);

// out.row(i) = matrix * in.row(i) with a width x width integer matrix
// (row-major). Does not sort.
void relabel_rows(const RowBuffer& in, std::span<const std::int64_t> matrix,
                  RowBuffer& out, Exec exec);

// Distribution of sum_j coeffs[j] * labels[j] weighted by |amp|^2.
std::map<std::int64_t, double>
weighted_label_distribution(const RowBuffer& buf,
                            std::span<const std::int64_t> coeffs, Exec exec);

// Sorts rows lexicographically, sums amplitudes of duplicate keys, and
// drops rows with |amp| <= prune. Duplicate amplitudes are summed in
// original row order, so serial and parallel results are bit-identical.
void sort_combine_prune(RowBuffer& buf, double prune, Exec exec);

// Kronecker fill: out row (i*b.rows() + j) = concat(a.row(i), b.row(j)) with
// amplitude a.amps[i] * b.amps[j]. Output is sorted when both inputs are.
void tensor_rows(const RowBuffer& a, const RowBuffer& b, RowBuffer& out, Exec exec);

// Preparation fill: input row i expands to one output row per chi
// coefficient l: frame label -= l, system label = l, amp *= chi(l).
// Output needs sorting but contains no duplicate keys.
void prepare_scatter(const RowBuffer& in, std::size_t frame_slot, std::size_t system_slot,
                     std::span<const std::int64_t> chi_labels,
                     std::span<const cplx> chi_coeffs, RowBuffer& out, Exec exec);

// Flattened total-momentum blocks of a pair interaction.
struct InteractionTable {
    std::vector<std::size_t> block_offset; // size blocks+1, offsets into pairs
    std::vector<std::int64_t> pair_a;      // concatenated block bases
    std::vector<std::int64_t> pair_b;
    std::vector<cplx> matrices; // per block: size^2 row-major, concatenated
    std::vector<std::size_t> matrix_offset; // size blocks+1

    std::size_t blocks() const { return block_offset.size() - 1; }
    std::size_t block_size(std::size_t k) const {
        return block_offset[k + 1] - block_offset[k];
    }
};

// Per input row: apply one block column or pass through unchanged.
struct PairAction {
    static constexpr std::uint32_t kIdentity = 0xffffffffu;
    std::uint32_t block = kIdentity;
    std::uint32_t column = 0;
};

// Interaction fill: rows marked identity copy through; others expand into
// their block's basis with amplitudes scaled by the matrix column.
void interaction_scatter(const RowBuffer& in, std::size_t slot_a, std::size_t slot_b,
                         std::span<const PairAction> actions,
                         const InteractionTable& table, RowBuffer& out, Exec exec);

// Sorted-row lookup; returns 0 for absent keys. Requires a sorted buffer.
cplx lookup(const RowBuffer& buf, std::span<const std::int64_t> key);

int lex_compare(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

} // namespace qrf::kernels
