#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrf/sparse_state.hpp"

namespace qrf {

// A two-particle unitary that is block-diagonal in the pair's total
// momentum, specified extensionally on a finite set of (l, l') pairs.
// Pairs outside the declared support act as identity, except that a pair
// whose total matches a declared block is ambiguous and rejected at apply
// time rather than silently passed through.
class InteractionSpec {
  public:
    struct Block {
        std::int64_t total = 0;
        std::vector<std::pair<std::int64_t, std::int64_t>> basis;
        std::vector<cplx> matrix; // basis.size()^2, row-major, row = output pair
    };

    // Validates that basis pairs sum to the block total, that pairs are
    // unique across blocks, and that each block is unitary within 1e-12.
    static InteractionSpec from_blocks(std::vector<Block> blocks);

    // Empty support: acts as identity on every state.
    static InteractionSpec identity();

    const std::vector<Block>& blocks() const { return blocks_; }
    bool has_total(std::int64_t total) const;

    // (block index, column index) of a supported pair.
    std::optional<std::pair<std::size_t, std::size_t>>
    find_pair(std::int64_t a, std::int64_t b) const;

  private:
    std::vector<Block> blocks_; // sorted by total
};

// A candidate pair unitary before block structure has been established:
// a dense matrix over an ordered support, matrix[out * n + in].
struct InteractionCandidate {
    std::vector<std::pair<std::int64_t, std::int64_t>> support;
    std::vector<cplx> matrix;
};

struct UnitaryValidation {
    bool ok = false;
    std::vector<std::string> diagnostics;
    std::optional<InteractionSpec> spec;
};

// True iff nonzero entries only connect pairs of equal total and every
// total block is unitary; diagnostics name the first offending entries.
UnitaryValidation validate_momentum_conserving(const InteractionCandidate& candidate);

// Applies the pair unitary to particles (p, q) of s. Throws
// SupportViolation if the state contains a (p, q) pair that is outside the
// support but shares a total with a declared block.
SparseState apply_interaction(const SparseState& s, ParticleId p, ParticleId q,
                              const InteractionSpec& u);

// Named unitaries used by the scenario layer and tests.
// Beamsplitter on pairs {0,1}: |01> -> (|01>+|10>)/sqrt(2),
// |10> -> (-|01>+|10>)/sqrt(2), diagonal on |00>, |11>.
InteractionSpec beamsplitter_interaction();
// Momentum-conserving swap on pairs drawn from {0,1}.
InteractionSpec swap_interaction();

} // namespace qrf
