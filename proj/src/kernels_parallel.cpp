// OpenMP counterparts of the serial kernels. Reductions accumulate into
// per-thread partials that are folded in thread order, so results are
// deterministic for a fixed thread count. Sorting uses per-chunk sorts
// followed by pairwise merge passes; the comparator breaks ties by
// original row index, which makes the final order (and therefore the
// combined amplitudes) identical to the serial path.

#include <algorithm>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kernels_detail.hpp"

namespace qrf::kernels::parallel {

#ifndef _OPENMP

// Without OpenMP the parallel entry points fall back to the reference path.
double norm_sq(const RowBuffer& buf) { return serial::norm_sq(buf); }
void scale_amps(RowBuffer& buf, double factor) { serial::scale_amps(buf, factor); }
void shift_column(RowBuffer& buf, std::size_t col, std::int64_t delta) {
    serial::shift_column(buf, col, delta);
}
void relabel_rows(const RowBuffer& in, std::span<const std::int64_t> matrix, RowBuffer& out) {
    serial::relabel_rows(in, matrix, out);
}
std::map<std::int64_t, double>
weighted_label_distribution(const RowBuffer& buf, std::span<const std::int64_t> coeffs) {
    return serial::weighted_label_distribution(buf, coeffs);
}
void sort_combine_prune(RowBuffer& buf, double prune) {
    serial::sort_combine_prune(buf, prune);
}
void tensor_rows(const RowBuffer& a, const RowBuffer& b, RowBuffer& out) {
    serial::tensor_rows(a, b, out);
}
void prepare_scatter(const RowBuffer& in, std::size_t frame_slot, std::size_t system_slot,
                     std::span<const std::int64_t> chi_labels,
                     std::span<const cplx> chi_coeffs, RowBuffer& out) {
    serial::prepare_scatter(in, frame_slot, system_slot, chi_labels, chi_coeffs, out);
}
void interaction_scatter(const RowBuffer& in, std::size_t slot_a, std::size_t slot_b,
                         std::span<const PairAction> actions,
                         const InteractionTable& table, RowBuffer& out) {
    serial::interaction_scatter(in, slot_a, slot_b, actions, table, out);
}

#else

namespace {

struct ChunkPlan {
    std::vector<std::size_t> bounds; // nthreads + 1 offsets into [0, n]
    int nthreads;
};

ChunkPlan plan_chunks(std::size_t n) {
    ChunkPlan plan;
    plan.nthreads = std::max(1, omp_get_max_threads());
    plan.bounds.resize(static_cast<std::size_t>(plan.nthreads) + 1);
    for (int t = 0; t <= plan.nthreads; ++t)
        plan.bounds[static_cast<std::size_t>(t)] =
            n * static_cast<std::size_t>(t) / static_cast<std::size_t>(plan.nthreads);
    return plan;
}

} // namespace

double norm_sq(const RowBuffer& buf) {
    const auto plan = plan_chunks(buf.rows());
    std::vector<double> partial(static_cast<std::size_t>(plan.nthreads), 0.0);
#pragma omp parallel num_threads(plan.nthreads)
    {
        const int t = omp_get_thread_num();
        double acc = 0.0;
        for (std::size_t i = plan.bounds[t]; i < plan.bounds[t + 1]; ++i)
            acc += std::norm(buf.amps[i]);
        partial[static_cast<std::size_t>(t)] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

void scale_amps(RowBuffer& buf, double factor) {
    const std::int64_t n = static_cast<std::int64_t>(buf.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) buf.amps[static_cast<std::size_t>(i)] *= factor;
}

void shift_column(RowBuffer& buf, std::size_t col, std::int64_t delta) {
    const std::int64_t n = static_cast<std::int64_t>(buf.rows());
    const std::size_t w = buf.width;
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        buf.labels[static_cast<std::size_t>(i) * w + col] += delta;
}

void relabel_rows(const RowBuffer& in, std::span<const std::int64_t> matrix, RowBuffer& out) {
    const std::size_t w = in.width;
    out.width = w;
    out.resize_rows(in.rows());
    out.amps = in.amps;
    const std::int64_t n = static_cast<std::int64_t>(in.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        auto src = in.row(static_cast<std::size_t>(i));
        auto dst = out.row(static_cast<std::size_t>(i));
        for (std::size_t r = 0; r < w; ++r) {
            std::int64_t acc = 0;
            for (std::size_t c = 0; c < w; ++c) acc += matrix[r * w + c] * src[c];
            dst[r] = acc;
        }
    }
}

std::map<std::int64_t, double>
weighted_label_distribution(const RowBuffer& buf, std::span<const std::int64_t> coeffs) {
    const auto plan = plan_chunks(buf.rows());
    const std::size_t w = buf.width;
    std::vector<std::map<std::int64_t, double>> partial(
        static_cast<std::size_t>(plan.nthreads));
#pragma omp parallel num_threads(plan.nthreads)
    {
        const int t = omp_get_thread_num();
        auto& local = partial[static_cast<std::size_t>(t)];
        for (std::size_t i = plan.bounds[t]; i < plan.bounds[t + 1]; ++i) {
            auto key = buf.row(i);
            std::int64_t total = 0;
            for (std::size_t c = 0; c < w; ++c) total += coeffs[c] * key[c];
            local[total] += std::norm(buf.amps[i]);
        }
    }
    std::map<std::int64_t, double> weights;
    for (const auto& local : partial)
        for (const auto& [value, weight] : local) weights[value] += weight;
    return weights;
}

void sort_combine_prune(RowBuffer& buf, double prune) {
    const std::size_t n = buf.rows();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    const auto comp = [&](std::uint32_t a, std::uint32_t b) {
        int cmp = lex_compare(buf.row(a), buf.row(b));
        return cmp != 0 ? cmp < 0 : a < b;
    };

    const auto plan = plan_chunks(n);
#pragma omp parallel num_threads(plan.nthreads)
    {
        const int t = omp_get_thread_num();
        std::sort(order.begin() + static_cast<std::ptrdiff_t>(plan.bounds[t]),
                  order.begin() + static_cast<std::ptrdiff_t>(plan.bounds[t + 1]), comp);
    }
    // Pairwise merge passes over the sorted chunks.
    for (int stride = 1; stride < plan.nthreads; stride *= 2) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int lo = 0; lo < plan.nthreads; lo += 2 * stride) {
            const int mid = lo + stride;
            const int hi = std::min(lo + 2 * stride, plan.nthreads);
            if (mid < hi)
                std::inplace_merge(
                    order.begin() + static_cast<std::ptrdiff_t>(plan.bounds[lo]),
                    order.begin() + static_cast<std::ptrdiff_t>(plan.bounds[mid]),
                    order.begin() + static_cast<std::ptrdiff_t>(plan.bounds[hi]), comp);
        }
    }

    RowBuffer out;
    detail::gather_combine(buf, order, prune, out);
    buf = std::move(out);
}

void tensor_rows(const RowBuffer& a, const RowBuffer& b, RowBuffer& out) {
    out.width = a.width + b.width;
    out.resize_rows(a.rows() * b.rows());
    const std::int64_t n = static_cast<std::int64_t>(a.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t si = 0; si < n; ++si) {
        const std::size_t i = static_cast<std::size_t>(si);
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
    const std::int64_t n = static_cast<std::int64_t>(in.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        detail::emit_prepared_row(in, static_cast<std::size_t>(i), frame_slot, system_slot,
                                  chi_labels, chi_coeffs, out,
                                  static_cast<std::size_t>(i) * chi_labels.size());
}

void interaction_scatter(const RowBuffer& in, std::size_t slot_a, std::size_t slot_b,
                         std::span<const PairAction> actions,
                         const InteractionTable& table, RowBuffer& out) {
    const auto offsets = detail::interaction_offsets(actions, table);
    out.width = in.width;
    out.resize_rows(offsets.back());
    const std::int64_t n = static_cast<std::int64_t>(in.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        detail::emit_interaction_row(in, static_cast<std::size_t>(i), slot_a, slot_b,
                                     actions[static_cast<std::size_t>(i)], table, out,
                                     offsets[static_cast<std::size_t>(i)]);
}

#endif // _OPENMP

} // namespace qrf::kernels::parallel
