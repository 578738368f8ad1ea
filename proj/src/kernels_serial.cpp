#include <algorithm>
#include <numeric>

#include "kernels_detail.hpp"

namespace qrf::kernels::serial {

double norm_sq(const RowBuffer& buf) {
    double acc = 0.0;
    for (const cplx& a : buf.amps) acc += std::norm(a);
    return acc;
}

void scale_amps(RowBuffer& buf, double factor) {
    for (cplx& a : buf.amps) a *= factor;
}

void shift_column(RowBuffer& buf, std::size_t col, std::int64_t delta) {
    const std::size_t w = buf.width;
    for (std::size_t i = 0; i < buf.rows(); ++i) buf.labels[i * w + col] += delta;
}

void relabel_rows(const RowBuffer& in, std::span<const std::int64_t> matrix, RowBuffer& out) {
    const std::size_t w = in.width;
    out.width = w;
    out.resize_rows(in.rows());
    out.amps = in.amps;
    for (std::size_t i = 0; i < in.rows(); ++i) {
        auto src = in.row(i);
        auto dst = out.row(i);
        for (std::size_t r = 0; r < w; ++r) {
            std::int64_t acc = 0;
            for (std::size_t c = 0; c < w; ++c) acc += matrix[r * w + c] * src[c];
            dst[r] = acc;
        }
    }
}

std::map<std::int64_t, double>
weighted_label_distribution(const RowBuffer& buf, std::span<const std::int64_t> coeffs) {
    std::map<std::int64_t, double> weights;
    const std::size_t w = buf.width;
    for (std::size_t i = 0; i < buf.rows(); ++i) {
        auto key = buf.row(i);
        std::int64_t total = 0;
        for (std::size_t c = 0; c < w; ++c) total += coeffs[c] * key[c];
        weights[total] += std::norm(buf.amps[i]);
    }
    return weights;
}

void sort_combine_prune(RowBuffer& buf, double prune) {
    std::vector<std::uint32_t> order(buf.rows());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        int cmp = lex_compare(buf.row(a), buf.row(b));
        return cmp != 0 ? cmp < 0 : a < b;
    });
    RowBuffer out;
    detail::gather_combine(buf, order, prune, out);
    buf = std::move(out);
}

void tensor_rows(const RowBuffer& a, const RowBuffer& b, RowBuffer& out) {
    out.width = a.width + b.width;
    out.resize_rows(a.rows() * b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto left = a.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            auto right = b.row(j);
            auto dst = out.row(i * b.rows() + j);
            for (std::size_t c = 0; c < a.width; ++c) dst[c] = left[c];
            for (std::size_t c = 0; c < b.width; ++c) dst[a.width + c] = right[c];
            out.amps[i * b.rows() + j] = a.amps[i] * b.amps[j];
        }
    }
}

void prepare_scatter(const RowBuffer& in, std::size_t frame_slot, std::size_t system_slot,
                     std::span<const std::int64_t> chi_labels,
                     std::span<const cplx> chi_coeffs, RowBuffer& out) {
    out.width = in.width;
    out.resize_rows(in.rows() * chi_labels.size());
    for (std::size_t i = 0; i < in.rows(); ++i)
        detail::emit_prepared_row(in, i, frame_slot, system_slot, chi_labels, chi_coeffs,
                                  out, i * chi_labels.size());
}

void interaction_scatter(const RowBuffer& in, std::size_t slot_a, std::size_t slot_b,
                         std::span<const PairAction> actions,
                         const InteractionTable& table, RowBuffer& out) {
    const auto offsets = detail::interaction_offsets(actions, table);
    out.width = in.width;
    out.resize_rows(offsets.back());
    for (std::size_t i = 0; i < in.rows(); ++i)
        detail::emit_interaction_row(in, i, slot_a, slot_b, actions[i], table, out,
                                     offsets[i]);
}

} // namespace qrf::kernels::serial
