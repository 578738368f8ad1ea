#include "qrf/kernels.hpp"

#include <atomic>

#include "kernels_detail.hpp"

namespace qrf::kernels {

namespace {
std::atomic<Policy> g_policy{Policy::Auto};
std::atomic<std::size_t> g_auto_threshold{1u << 15};
} // namespace

void set_policy(Policy policy) { g_policy.store(policy); }
Policy policy() { return g_policy.load(); }
void set_auto_threshold(std::size_t rows) { g_auto_threshold.store(rows); }

Exec resolve(std::size_t rows) {
    switch (g_policy.load()) {
    case Policy::Serial: return Exec::Serial;
    case Policy::Parallel: return Exec::Parallel;
    case Policy::Auto: break;
    }
    return rows >= g_auto_threshold.load() ? Exec::Parallel : Exec::Serial;
}

int lex_compare(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return -1;
        if (a[i] > b[i]) return 1;
    }
    return 0;
}

cplx lookup(const RowBuffer& buf, std::span<const std::int64_t> key) {
    std::size_t lo = 0;
    std::size_t hi = buf.rows();
    while (lo < hi) {
        std::size_t mid = lo + (hi - lo) / 2;
        int cmp = lex_compare(buf.row(mid), key);
        if (cmp == 0) return buf.amps[mid];
        if (cmp < 0)
            lo = mid + 1;
        else
            hi = mid;
    }
    return {0.0, 0.0};
}

double norm_sq(const RowBuffer& buf, Exec exec) {
    return exec == Exec::Serial ? serial::norm_sq(buf) : parallel::norm_sq(buf);
}

void scale_amps(RowBuffer& buf, double factor, Exec exec) {
    exec == Exec::Serial ? serial::scale_amps(buf, factor)
                         : parallel::scale_amps(buf, factor);
}

void shift_column(RowBuffer& buf, std::size_t col, std::int64_t delta, Exec exec) {
    exec == Exec::Serial ? serial::shift_column(buf, col, delta)
                         : parallel::shift_column(buf, col, delta);
}

void relabel_rows(const RowBuffer& in, std::span<const std::int64_t> matrix,
                  RowBuffer& out, Exec exec) {
    exec == Exec::Serial ? serial::relabel_rows(in, matrix, out)
                         : parallel::relabel_rows(in, matrix, out);
}

std::map<std::int64_t, double>
weighted_label_distribution(const RowBuffer& buf,
                            std::span<const std::int64_t> coeffs, Exec exec) {
    return exec == Exec::Serial ? serial::weighted_label_distribution(buf, coeffs)
                                : parallel::weighted_label_distribution(buf, coeffs);
}

void sort_combine_prune(RowBuffer& buf, double prune, Exec exec) {
    exec == Exec::Serial ? serial::sort_combine_prune(buf, prune)
                         : parallel::sort_combine_prune(buf, prune);
}

void tensor_rows(const RowBuffer& a, const RowBuffer& b, RowBuffer& out, Exec exec) {
    exec == Exec::Serial ? serial::tensor_rows(a, b, out)
                         : parallel::tensor_rows(a, b, out);
}

void prepare_scatter(const RowBuffer& in, std::size_t frame_slot, std::size_t system_slot,
                     std::span<const std::int64_t> chi_labels,
                     std::span<const cplx> chi_coeffs, RowBuffer& out, Exec exec) {
    exec == Exec::Serial
        ? serial::prepare_scatter(in, frame_slot, system_slot, chi_labels, chi_coeffs, out)
        : parallel::prepare_scatter(in, frame_slot, system_slot, chi_labels, chi_coeffs, out);
}

void interaction_scatter(const RowBuffer& in, std::size_t slot_a, std::size_t slot_b,
                         std::span<const PairAction> actions,
                         const InteractionTable& table, RowBuffer& out, Exec exec) {
    exec == Exec::Serial
        ? serial::interaction_scatter(in, slot_a, slot_b, actions, table, out)
        : parallel::interaction_scatter(in, slot_a, slot_b, actions, table, out);
}

namespace detail {

void emit_prepared_row(const RowBuffer& in, std::size_t i, std::size_t frame_slot,
                       std::size_t system_slot, std::span<const std::int64_t> chi_labels,
                       std::span<const cplx> chi_coeffs, RowBuffer& out, std::size_t at) {
    const std::size_t w = in.width;
    auto src = in.row(i);
    for (std::size_t k = 0; k < chi_labels.size(); ++k) {
        auto dst = out.row(at + k);
        for (std::size_t c = 0; c < w; ++c) dst[c] = src[c];
        dst[frame_slot] = src[frame_slot] - chi_labels[k];
        dst[system_slot] = chi_labels[k];
        out.amps[at + k] = in.amps[i] * chi_coeffs[k];
    }
}

void emit_interaction_row(const RowBuffer& in, std::size_t i, std::size_t slot_a,
                          std::size_t slot_b, PairAction action,
                          const InteractionTable& table, RowBuffer& out, std::size_t at) {
    const std::size_t w = in.width;
    auto src = in.row(i);
    if (action.block == PairAction::kIdentity) {
        auto dst = out.row(at);
        for (std::size_t c = 0; c < w; ++c) dst[c] = src[c];
        out.amps[at] = in.amps[i];
        return;
    }
    const std::size_t k = action.block;
    const std::size_t base = table.block_offset[k];
    const std::size_t size = table.block_size(k);
    const cplx* matrix = table.matrices.data() + table.matrix_offset[k];
    for (std::size_t r = 0; r < size; ++r) {
        auto dst = out.row(at + r);
        for (std::size_t c = 0; c < w; ++c) dst[c] = src[c];
        dst[slot_a] = table.pair_a[base + r];
        dst[slot_b] = table.pair_b[base + r];
        out.amps[at + r] = in.amps[i] * matrix[r * size + action.column];
    }
}

std::vector<std::size_t> interaction_offsets(std::span<const PairAction> actions,
                                             const InteractionTable& table) {
    std::vector<std::size_t> offsets(actions.size() + 1, 0);
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const std::size_t count = actions[i].block == PairAction::kIdentity
                                      ? 1
                                      : table.block_size(actions[i].block);
        offsets[i + 1] = offsets[i] + count;
    }
    return offsets;
}

void gather_combine(const RowBuffer& buf, const std::vector<std::uint32_t>& order,
                    double prune, RowBuffer& out) {
    out.width = buf.width;
    out.labels.clear();
    out.amps.clear();
    out.reserve_rows(buf.rows());
    std::size_t i = 0;
    const std::size_t n = order.size();
    while (i < n) {
        auto key = buf.row(order[i]);
        cplx sum = buf.amps[order[i]];
        std::size_t j = i + 1;
        while (j < n && lex_compare(buf.row(order[j]), key) == 0) {
            sum += buf.amps[order[j]];
            ++j;
        }
        if (std::abs(sum) > prune) out.push_row(key, sum);
        i = j;
    }
}

} // namespace detail

} // namespace qrf::kernels
