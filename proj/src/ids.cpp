#include "qrf/ids.hpp"

#include <algorithm>
#include <string>

namespace qrf {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::RegisterConflict: return "register-conflict";
    case ErrorKind::UnknownParticle: return "unknown-particle";
    case ErrorKind::SystemNotVirgin: return "system-not-virgin";
    case ErrorKind::AlreadyPrepared: return "already-prepared";
    case ErrorKind::SupportViolation: return "support-violation";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::EmptyConservingSet: return "empty-conserving-set";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    }
    return "unknown";
}

Register::Register(std::vector<ParticleId> ids) : ids_(std::move(ids)) {
    for (std::size_t i = 0; i < ids_.size(); ++i)
        for (std::size_t j = i + 1; j < ids_.size(); ++j)
            if (ids_[i] == ids_[j])
                throw Error(ErrorKind::RegisterConflict,
                            "duplicate particle id " + std::to_string(ids_[i].value) +
                                " in register");
}

bool Register::contains(ParticleId id) const {
    return std::find(ids_.begin(), ids_.end(), id) != ids_.end();
}

std::size_t Register::slot(ParticleId id) const {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end())
        throw Error(ErrorKind::UnknownParticle,
                    "particle id " + std::to_string(id.value) + " not in register");
    return static_cast<std::size_t>(it - ids_.begin());
}

Register Register::joined(const Register& other) const {
    std::vector<ParticleId> ids = ids_;
    for (ParticleId id : other.ids_) {
        if (contains(id))
            throw Error(ErrorKind::RegisterConflict,
                        "particle id " + std::to_string(id.value) +
                            " present in both registers");
        ids.push_back(id);
    }
    return Register(std::move(ids));
}

} // namespace qrf
