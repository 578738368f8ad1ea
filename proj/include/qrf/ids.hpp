#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "qrf/error.hpp"

namespace qrf {

// Identifies one circle particle. Stable across all operations; display
// names live in the scenario layer.
struct ParticleId {
    std::uint32_t value = 0;

    friend auto operator<=>(const ParticleId&, const ParticleId&) = default;
};

// Ordered list of distinct particles; the slot order fixes the label order
// inside every basis key of a state over this register.
class Register {
  public:
    Register() = default;
    explicit Register(std::vector<ParticleId> ids);

    std::size_t size() const { return ids_.size(); }
    ParticleId at(std::size_t slot) const { return ids_[slot]; }
    const std::vector<ParticleId>& ids() const { return ids_; }

    bool contains(ParticleId id) const;
    std::size_t slot(ParticleId id) const; // throws UnknownParticle

    // Concatenation; throws RegisterConflict on overlapping ids.
    Register joined(const Register& other) const;

    friend bool operator==(const Register&, const Register&) = default;

  private:
    std::vector<ParticleId> ids_;
};

} // namespace qrf
