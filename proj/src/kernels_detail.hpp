#pragma once

#include "qrf/kernels.hpp"

// Serial reference implementations and their OpenMP counterparts. The
// serial versions are the ground truth the parallel kernels are tested
// against; keep them simple.

namespace qrf::kernels::serial {

double norm_sq(const RowBuffer& buf);
void scale_amps(RowBuffer& buf, double factor);
void shift_column(RowBuffer& buf, std::size_t col, std::int64_t delta);
void relabel_rows(const RowBuffer& in, std::span<const std::int64_t> matrix, RowBuffer& out);
std::map<std::int64_t, double>
weighted_label_distribution(const RowBuffer& buf, std::span<const std::int64_t> coeffs);
void sort_combine_prune(RowBuffer& buf, double prune);
void tensor_rows(const RowBuffer& a, const RowBuffer& b, RowBuffer& out);
void prepare_scatter(const RowBuffer& in, std::size_t frame_slot, std::size_t system_slot,
                     std::span<const std::int64_t> chi_labels,
                     std::span<const cplx> chi_coeffs, RowBuffer& out);
void interaction_scatter(const RowBuffer& in, std::size_t slot_a, std::size_t slot_b,
                         std::span<const PairAction> actions,
                         const InteractionTable& table, RowBuffer& out);

} // namespace qrf::kernels::serial

namespace qrf::kernels::parallel {

double norm_sq(const RowBuffer& buf);
void scale_amps(RowBuffer& buf, double factor);
void shift_column(RowBuffer& buf, std::size_t col, std::int64_t delta);
void relabel_rows(const RowBuffer& in, std::span<const std::int64_t> matrix, RowBuffer& out);
std::map<std::int64_t, double>
weighted_label_distribution(const RowBuffer& buf, std::span<const std::int64_t> coeffs);
void sort_combine_prune(RowBuffer& buf, double prune);
void tensor_rows(const RowBuffer& a, const RowBuffer& b, RowBuffer& out);
void prepare_scatter(const RowBuffer& in, std::size_t frame_slot, std::size_t system_slot,
                     std::span<const std::int64_t> chi_labels,
                     std::span<const cplx> chi_coeffs, RowBuffer& out);
void interaction_scatter(const RowBuffer& in, std::size_t slot_a, std::size_t slot_b,
                         std::span<const PairAction> actions,
                         const InteractionTable& table, RowBuffer& out);

} // namespace qrf::kernels::parallel

namespace qrf::kernels::detail {

// Shared offset helpers for the scatter kernels.
void emit_prepared_row(const RowBuffer& in, std::size_t i, std::size_t frame_slot,
                       std::size_t system_slot, std::span<const std::int64_t> chi_labels,
                       std::span<const cplx> chi_coeffs, RowBuffer& out, std::size_t at);
void emit_interaction_row(const RowBuffer& in, std::size_t i, std::size_t slot_a,
                          std::size_t slot_b, PairAction action,
                          const InteractionTable& table, RowBuffer& out, std::size_t at);
std::vector<std::size_t> interaction_offsets(std::span<const PairAction> actions,
                                             const InteractionTable& table);

} // namespace qrf::kernels::detail

namespace qrf::kernels::detail {

// Shared by both sort paths: gathers rows of `buf` in permutation order,
// summing amplitudes of equal keys and dropping pruned rows.
void gather_combine(const RowBuffer& buf, const std::vector<std::uint32_t>& order,
                    double prune, RowBuffer& out);

} // namespace qrf::kernels::detail
