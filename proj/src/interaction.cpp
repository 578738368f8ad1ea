#include "qrf/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace qrf {

namespace {

constexpr double kUnitaryTol = 1e-12;

std::string pair_str(std::int64_t a, std::int64_t b) {
    std::ostringstream os;
    os << "(" << a << "," << b << ")";
    return os.str();
}

// max |U^dag U - 1| over a dense n x n block.
double unitarity_defect(const std::vector<cplx>& m, std::size_t n) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cplx acc{0.0, 0.0};
            for (std::size_t k = 0; k < n; ++k)
                acc += std::conj(m[k * n + i]) * m[k * n + j];
            if (i == j) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

} // namespace

InteractionSpec InteractionSpec::from_blocks(std::vector<Block> blocks) {
    std::sort(blocks.begin(), blocks.end(),
              [](const Block& a, const Block& b) { return a.total < b.total; });
    std::map<std::pair<std::int64_t, std::int64_t>, int> seen;
    for (const Block& block : blocks) {
        const std::size_t n = block.basis.size();
        if (block.matrix.size() != n * n)
            throw Error(ErrorKind::DimensionMismatch,
                        "block matrix size does not match its basis");
        for (const auto& [a, b] : block.basis) {
            if (a + b != block.total)
                throw Error(ErrorKind::InvalidArgument,
                            "pair " + pair_str(a, b) + " does not sum to block total " +
                                std::to_string(block.total));
            if (!seen.emplace(std::make_pair(a, b), 1).second)
                throw Error(ErrorKind::InvalidArgument,
                            "pair " + pair_str(a, b) + " appears in two blocks");
        }
        const double defect = unitarity_defect(block.matrix, n);
        if (defect > kUnitaryTol)
            throw Error(ErrorKind::InvalidArgument,
                        "block with total " + std::to_string(block.total) +
                            " is not unitary (defect " + std::to_string(defect) + ")");
    }
    InteractionSpec spec;
    spec.blocks_ = std::move(blocks);
    return spec;
}

InteractionSpec InteractionSpec::identity() { return InteractionSpec{}; }

bool InteractionSpec::has_total(std::int64_t total) const {
    return std::any_of(blocks_.begin(), blocks_.end(),
                       [&](const Block& b) { return b.total == total; });
}

std::optional<std::pair<std::size_t, std::size_t>>
InteractionSpec::find_pair(std::int64_t a, std::int64_t b) const {
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
        const auto& basis = blocks_[k].basis;
        for (std::size_t j = 0; j < basis.size(); ++j)
            if (basis[j].first == a && basis[j].second == b) return {{k, j}};
    }
    return std::nullopt;
}

UnitaryValidation validate_momentum_conserving(const InteractionCandidate& candidate) {
    UnitaryValidation result;
    const std::size_t n = candidate.support.size();
    if (candidate.matrix.size() != n * n) {
        result.diagnostics.push_back("matrix has " +
                                     std::to_string(candidate.matrix.size()) +
                                     " entries, expected " + std::to_string(n * n));
        return result;
    }
    {
        std::map<std::pair<std::int64_t, std::int64_t>, int> seen;
        for (const auto& p : candidate.support)
            if (!seen.emplace(p, 1).second) {
                result.diagnostics.push_back("support pair " +
                                             pair_str(p.first, p.second) + " repeated");
                return result;
            }
    }

    // Block structure: nonzero entries must stay within one total.
    bool conserving = true;
    for (std::size_t out = 0; out < n; ++out) {
        for (std::size_t in = 0; in < n; ++in) {
            if (std::abs(candidate.matrix[out * n + in]) <= kUnitaryTol) continue;
            const auto& po = candidate.support[out];
            const auto& pi = candidate.support[in];
            if (po.first + po.second != pi.first + pi.second) {
                conserving = false;
                result.diagnostics.push_back(
                    "entry |" + pair_str(po.first, po.second) + "><" +
                    pair_str(pi.first, pi.second) + "| maps total " +
                    std::to_string(pi.first + pi.second) + " to total " +
                    std::to_string(po.first + po.second));
            }
        }
    }
    if (!conserving) return result;

    // Group the support by total, keeping the declared order, and check
    // each block for unitarity.
    std::map<std::int64_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i)
        groups[candidate.support[i].first + candidate.support[i].second].push_back(i);

    std::vector<InteractionSpec::Block> blocks;
    bool unitary = true;
    for (const auto& [total, members] : groups) {
        InteractionSpec::Block block;
        block.total = total;
        const std::size_t m = members.size();
        block.matrix.resize(m * m);
        for (std::size_t r = 0; r < m; ++r) {
            block.basis.push_back(candidate.support[members[r]]);
            for (std::size_t c = 0; c < m; ++c)
                block.matrix[r * m + c] = candidate.matrix[members[r] * n + members[c]];
        }
        const double defect = unitarity_defect(block.matrix, m);
        if (defect > kUnitaryTol) {
            unitary = false;
            std::ostringstream os;
            os << "block with total " << total << " is not unitary (max |U^dag U - 1| = "
               << defect << ")";
            result.diagnostics.push_back(os.str());
        } else {
            blocks.push_back(std::move(block));
        }
    }
    if (!unitary) return result;

    result.ok = true;
    result.spec = InteractionSpec::from_blocks(std::move(blocks));
    return result;
}

SparseState apply_interaction(const SparseState& s, ParticleId p, ParticleId q,
                              const InteractionSpec& u) {
    const std::size_t slot_a = s.particles().slot(p);
    const std::size_t slot_b = s.particles().slot(q);
    if (slot_a == slot_b)
        throw Error(ErrorKind::InvalidArgument, "interaction needs two distinct particles");

    kernels::InteractionTable table;
    table.block_offset.push_back(0);
    table.matrix_offset.push_back(0);
    std::map<std::pair<std::int64_t, std::int64_t>, kernels::PairAction> lookup;
    std::set<std::int64_t> totals;
    for (std::size_t k = 0; k < u.blocks().size(); ++k) {
        const auto& block = u.blocks()[k];
        totals.insert(block.total);
        for (std::size_t j = 0; j < block.basis.size(); ++j) {
            const auto& [a, b] = block.basis[j];
            table.pair_a.push_back(a);
            table.pair_b.push_back(b);
            lookup[{a, b}] = {static_cast<std::uint32_t>(k),
                              static_cast<std::uint32_t>(j)};
        }
        table.matrices.insert(table.matrices.end(), block.matrix.begin(),
                              block.matrix.end());
        table.block_offset.push_back(table.pair_a.size());
        table.matrix_offset.push_back(table.matrices.size());
    }

    std::vector<kernels::PairAction> actions(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const std::int64_t la = s.key(i)[slot_a];
        const std::int64_t lb = s.key(i)[slot_b];
        if (auto hit = lookup.find({la, lb}); hit != lookup.end()) {
            actions[i] = hit->second;
        } else if (totals.count(la + lb)) {
            throw Error(ErrorKind::SupportViolation,
                        "pair " + std::to_string(la) + "," + std::to_string(lb) +
                            " shares total " + std::to_string(la + lb) +
                            " with a declared block but is outside the support; "
                            "refusing to apply identity to an ambiguous pair");
        }
    }

    kernels::RowBuffer raw;
    kernels::interaction_scatter(s.rows(), slot_a, slot_b, actions, table, raw,
                                 kernels::resolve(s.size()));
    return scatter_state(s.particles(), std::move(raw));
}

InteractionSpec beamsplitter_interaction() {
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<InteractionSpec::Block> blocks;
    blocks.push_back({0, {{0, 0}}, {cplx{1.0, 0.0}}});
    blocks.push_back({1,
                      {{0, 1}, {1, 0}},
                      {cplx{r, 0.0}, cplx{-r, 0.0}, cplx{r, 0.0}, cplx{r, 0.0}}});
    blocks.push_back({2, {{1, 1}}, {cplx{1.0, 0.0}}});
    return InteractionSpec::from_blocks(std::move(blocks));
}

InteractionSpec swap_interaction() {
    std::vector<InteractionSpec::Block> blocks;
    blocks.push_back({0, {{0, 0}}, {cplx{1.0, 0.0}}});
    blocks.push_back({1,
                      {{0, 1}, {1, 0}},
                      {cplx{0.0, 0.0}, cplx{1.0, 0.0}, cplx{1.0, 0.0}, cplx{0.0, 0.0}}});
    blocks.push_back({2, {{1, 1}}, {cplx{1.0, 0.0}}});
    return InteractionSpec::from_blocks(std::move(blocks));
}

} // namespace qrf
