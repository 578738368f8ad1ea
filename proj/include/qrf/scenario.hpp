#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qrf/interaction.hpp"
#include "qrf/wavefunction.hpp"

namespace qrf::scenario {

// Scenario files (.qrf) are line-oriented UTF-8 text: one declaration,
// event, or query per line, `#` comments, and multi-line `unitary ... end`
// definition groups. The full grammar is documented in the README.

struct ParseError {
    int line = 0; // 1-based
    int column = 0;
    std::string message;

    friend bool operator==(const ParseError&, const ParseError&) = default;
};

struct ParticleDecl {
    std::string name;
    Wavefunction initial;

    friend bool operator==(const ParticleDecl&, const ParticleDecl&) = default;
};

// Canonical (general) form of a unitary definition: a dense matrix over an
// ordered pair support. Block-form sugar parses into this representation.
struct UnitaryDef {
    std::string name;
    InteractionCandidate candidate;

    friend bool operator==(const UnitaryDef& a, const UnitaryDef& b) {
        return a.name == b.name && a.candidate.support == b.candidate.support &&
               a.candidate.matrix == b.candidate.matrix;
    }
};

struct PrepareStmt {
    std::string frame;
    std::string system;
    Wavefunction chi;

    friend bool operator==(const PrepareStmt&, const PrepareStmt&) = default;
};

struct InteractStmt {
    std::string a;
    std::string b;
    std::string unitary; // defined in the file or a built-in name

    friend bool operator==(const InteractStmt&, const InteractStmt&) = default;
};

struct MeasureStmt {
    std::string particle;

    friend bool operator==(const MeasureStmt&, const MeasureStmt&) = default;
};

using EventStmt = std::variant<PrepareStmt, InteractStmt, MeasureStmt>;

enum class AtPoint { Initial, AfterPreparations, End, EventIndex };

struct DistributionQuery {
    std::vector<std::string> particles;
    AtPoint at = AtPoint::End;
    std::size_t event_index = 0; // with AtPoint::EventIndex
    std::vector<std::pair<std::string, std::int64_t>> given; // End only

    friend bool operator==(const DistributionQuery&, const DistributionQuery&) = default;
};

struct ConservationQuery {
    std::vector<std::string> particles;
    AtPoint reference = AtPoint::AfterPreparations;
    std::size_t event_index = 0;

    friend bool operator==(const ConservationQuery&, const ConservationQuery&) = default;
};

struct TransformQuery {
    std::string name; // pair | chain | network

    friend bool operator==(const TransformQuery&, const TransformQuery&) = default;
};

using Query = std::variant<DistributionQuery, ConservationQuery, TransformQuery>;

struct Scenario {
    std::vector<ParticleDecl> particles;
    std::vector<UnitaryDef> unitaries;
    std::vector<EventStmt> events;
    std::vector<Query> queries;

    std::optional<std::size_t> particle_index(std::string_view name) const;
    const UnitaryDef* unitary(std::string_view name) const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct ParseResult {
    std::optional<Scenario> scenario; // set iff errors is empty
    std::vector<ParseError> errors;
};

// Full AST or a list of positioned errors; never partial execution.
ParseResult parse(std::string_view source);

// Canonical text form; parse(print(parse(x))) == parse(x).
std::string print(const Scenario& sc);

// Shortest round-trip decimal form used by the printer (and the JSON
// emitters) for amplitudes.
std::string format_double(double value);
std::string format_complex(cplx value);

// "initial" | "preparations" | "end" | "event K".
std::string print_at(AtPoint at, std::size_t event_index);

} // namespace qrf::scenario
