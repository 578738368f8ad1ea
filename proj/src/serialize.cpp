#include "qrf/serialize.hpp"

#include <algorithm>
#include <array>
#include <iomanip>
#include <set>
#include <sstream>

namespace qrf {

namespace {

std::string fmt(double value) { return scenario::format_double(value); }

json complex_json(cplx value) {
    return json::array({value.real(), value.imag()});
}

json outcomes_json(const std::vector<std::pair<ParticleId, std::int64_t>>& outcomes,
                   const std::vector<std::string>& names) {
    json j = json::object();
    for (const auto& [id, value] : outcomes) j[names[id.value]] = value;
    return j;
}

} // namespace

std::string outcome_label(const std::vector<std::pair<ParticleId, std::int64_t>>& outcomes,
                          const std::vector<std::string>& names) {
    std::string out;
    for (const auto& [id, value] : outcomes) {
        if (!out.empty()) out += ";";
        out += names[id.value] + "=" + std::to_string(value);
    }
    return out.empty() ? "-" : out;
}

json to_json(const Distribution& d) {
    json j = json::object();
    for (const auto& [value, weight] : d.weights()) j[std::to_string(value)] = weight;
    return j;
}

json to_json(const SparseState& s, const std::vector<std::string>& names) {
    json particles = json::array();
    for (ParticleId id : s.particles().ids()) particles.push_back(names[id.value]);
    json keys = json::array();
    json amps = json::array();
    for (std::size_t i = 0; i < s.size(); ++i) {
        json key = json::array();
        for (std::int64_t l : s.key(i)) key.push_back(l);
        keys.push_back(std::move(key));
        amps.push_back(complex_json(s.amp(i)));
    }
    return json{{"particles", std::move(particles)},
                {"keys", std::move(keys)},
                {"amplitudes", std::move(amps)}};
}

json to_json(const ConservationReport& report, const std::vector<std::string>& names) {
    json conserving = json::array();
    for (ParticleId id : report.conserving) conserving.push_back(names[id.value]);
    json measured = json::array();
    for (ParticleId id : report.measured) measured.push_back(names[id.value]);
    json records = json::array();
    for (const auto& record : report.records) {
        records.push_back(json{{"outcomes", outcomes_json(record.outcomes, names)},
                               {"probability", record.probability},
                               {"conditional", to_json(record.conditional)},
                               {"expected", to_json(record.expected)},
                               {"max_deviation", record.max_deviation},
                               {"pass", record.pass}});
    }
    return json{{"conserving", std::move(conserving)},
                {"measured", std::move(measured)},
                {"reference_point", report.reference_point},
                {"reference", to_json(report.reference)},
                {"tolerance", report.tolerance},
                {"pass", report.pass},
                {"max_deviation", report.max_deviation},
                {"records", std::move(records)}};
}

json to_json(const FrameNetwork& net, const std::vector<std::string>& names) {
    json j = json::object();
    for (ParticleId id : net.nodes()) {
        auto parent = net.parent(id);
        j[names[id.value]] = parent ? json(names[parent->value]) : json(nullptr);
    }
    return j;
}

json to_json(const Wavefunction& w) {
    json j = json::object();
    for (const auto& [l, c] : w.coeffs()) j[std::to_string(l)] = complex_json(c);
    return j;
}

json to_json(const LabelTransform& t) {
    auto rows = [&](const std::vector<std::int64_t>& flat) {
        json out = json::array();
        for (std::size_t r = 0; r < t.dimension(); ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < t.dimension(); ++c)
                row.push_back(flat[r * t.dimension() + c]);
            out.push_back(std::move(row));
        }
        return out;
    };
    return json{{"names", t.names()},
                {"matrix", rows(t.matrix())},
                {"inverse", rows(t.inverse())}};
}

json to_json(const RunResult& result) {
    json initials = json::object();
    for (const auto& decl : result.parsed.particles)
        initials[decl.name] = to_json(decl.initial);

    json branches = json::array();
    for (const Branch& branch : result.branches) {
        branches.push_back(json{{"outcomes", outcomes_json(branch.outcomes, result.names)},
                                {"probability", branch.probability},
                                {"state", to_json(branch.state, result.names)}});
    }

    json queries = json::array();
    for (const auto& query : result.queries) {
        if (const auto* d = std::get_if<DistributionResult>(&query)) {
            json given = json::object();
            for (const auto& [name, value] : d->query.given) given[name] = value;
            queries.push_back(json{{"type", "distribution"},
                                   {"subset", d->query.particles},
                                   {"at", scenario::print_at(d->query.at,
                                                             d->query.event_index)},
                                   {"given", std::move(given)},
                                   {"weights", to_json(d->distribution)}});
        } else if (const auto* c = std::get_if<ConservationResult>(&query)) {
            queries.push_back(json{{"type", "conservation"},
                                   {"report", to_json(c->report, result.names)}});
        } else {
            const auto& t = std::get<TransformResult>(query);
            queries.push_back(json{{"type", "transform"},
                                   {"name", t.query.name},
                                   {"transform",
                                    to_json(builtin_transforms().at(t.query.name))},
                                   {"before", to_json(t.before, result.names)},
                                   {"after", to_json(t.after, result.names)}});
        }
    }

    return json{{"schema", 1},
                {"scenario", scenario::print(result.parsed)},
                {"particles", result.names},
                {"initial_wavefunctions", std::move(initials)},
                {"network", to_json(result.network, result.names)},
                {"branches", std::move(branches)},
                {"queries", std::move(queries)}};
}

json to_json(const SampleResult& result) {
    json counts = json::array();
    for (const auto& entry : result.counts) {
        counts.push_back(
            json{{"outcomes", outcomes_json(entry.outcomes, result.names)},
                 {"count", entry.count},
                 {"frequency", result.shots == 0
                                   ? 0.0
                                   : static_cast<double>(entry.count) /
                                         static_cast<double>(result.shots)}});
    }
    return json{{"schema", 1},
                {"mode", "sample"},
                {"shots", result.shots},
                {"seed", result.seed},
                {"counts", std::move(counts)}};
}

std::string distribution_csv(const Distribution& d) {
    std::string out = "L,probability\n";
    for (const auto& [value, weight] : d.weights())
        out += std::to_string(value) + "," + fmt(weight) + "\n";
    return out;
}

std::string report_csv(const ConservationReport& report,
                       const std::vector<std::string>& names) {
    std::string out = "outcome,L,probability,expected,pass\n";
    for (const auto& record : report.records) {
        const std::string outcome = outcome_label(record.outcomes, names);
        std::set<std::int64_t> values;
        for (const auto& [value, weight] : record.conditional.weights())
            values.insert(value);
        for (const auto& [value, weight] : record.expected.weights())
            values.insert(value);
        for (std::int64_t value : values)
            out += outcome + "," + std::to_string(value) + "," +
                   fmt(record.conditional.at(value)) + "," +
                   fmt(record.expected.at(value)) + "," +
                   (record.pass ? "true" : "false") + "\n";
    }
    return out;
}

std::string run_csv(const RunResult& result) {
    std::string out;
    std::size_t index = 0;
    for (const auto& query : result.queries) {
        ++index;
        if (const auto* d = std::get_if<DistributionResult>(&query)) {
            out += "# query " + std::to_string(index) + ": distribution\n";
            out += distribution_csv(d->distribution);
        } else if (const auto* c = std::get_if<ConservationResult>(&query)) {
            out += "# query " + std::to_string(index) + ": conservation\n";
            out += report_csv(c->report, result.names);
        } else {
            out += "# query " + std::to_string(index) + ": transform (not emitted as CSV)\n";
        }
    }
    if (out.empty()) {
        // No queries: emit the branch probabilities instead.
        out = "outcome,probability\n";
        for (const Branch& branch : result.branches)
            out += outcome_label(branch.outcomes, result.names) + "," +
                   fmt(branch.probability) + "\n";
    }
    return out;
}

std::string sample_csv(const SampleResult& result) {
    std::string out = "outcome,count,frequency\n";
    for (const auto& entry : result.counts) {
        const double freq = result.shots == 0 ? 0.0
                                              : static_cast<double>(entry.count) /
                                                    static_cast<double>(result.shots);
        out += outcome_label(entry.outcomes, result.names) + "," +
               std::to_string(entry.count) + "," + fmt(freq) + "\n";
    }
    return out;
}

std::string distribution_table(const Distribution& d) {
    std::ostringstream os;
    os << std::left << std::setw(8) << "L" << "probability\n";
    for (const auto& [value, weight] : d.weights())
        os << std::left << std::setw(8) << value << fmt(weight) << "\n";
    return os.str();
}

std::string state_table(const SparseState& s, const std::vector<std::string>& names) {
    std::ostringstream os;
    os << "|";
    for (std::size_t c = 0; c < s.particles().size(); ++c) {
        if (c) os << ",";
        os << names[s.particles().at(c).value];
    }
    os << ">  amplitude\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        os << "|";
        auto key = s.key(i);
        for (std::size_t c = 0; c < key.size(); ++c) {
            if (c) os << ",";
            os << key[c];
        }
        os << ">  " << scenario::format_complex(s.amp(i)) << "\n";
    }
    return os.str();
}

std::string report_table(const ConservationReport& report,
                         const std::vector<std::string>& names) {
    std::ostringstream os;
    std::string conserving;
    for (ParticleId id : report.conserving) {
        if (!conserving.empty()) conserving += ",";
        conserving += names[id.value];
    }
    os << "individual-case conservation over {" << conserving << "}  tolerance "
       << fmt(report.tolerance) << "\n";

    // One row per (outcome, L) over the union of supports.
    std::vector<std::array<std::string, 5>> rows;
    for (const auto& record : report.records) {
        std::set<std::int64_t> values;
        for (const auto& [value, weight] : record.conditional.weights())
            values.insert(value);
        for (const auto& [value, weight] : record.expected.weights())
            values.insert(value);
        for (std::int64_t value : values)
            rows.push_back({outcome_label(record.outcomes, names), std::to_string(value),
                            fmt(record.conditional.at(value)),
                            fmt(record.expected.at(value)),
                            record.pass ? "pass" : "FAIL"});
    }
    std::array<std::size_t, 5> width{};
    const std::array<std::string, 5> header = {"outcome", "L", "conditional", "expected",
                                               "verdict"};
    for (std::size_t c = 0; c < 5; ++c) width[c] = header[c].size();
    for (const auto& row : rows)
        for (std::size_t c = 0; c < 5; ++c) width[c] = std::max(width[c], row[c].size());
    auto emit = [&](const std::array<std::string, 5>& row) {
        for (std::size_t c = 0; c < 5; ++c)
            os << std::left << std::setw(static_cast<int>(width[c]) + 2) << row[c];
        os << "\n";
    };
    emit(header);
    for (const auto& row : rows) emit(row);
    os << (report.pass ? "PASS" : "FAIL") << "  max deviation "
       << fmt(report.max_deviation) << "\n";
    return os.str();
}

std::string run_text(const RunResult& result) {
    std::ostringstream os;
    os << "branches:\n";
    for (const Branch& branch : result.branches)
        os << "  " << outcome_label(branch.outcomes, result.names) << "  p = "
           << fmt(branch.probability) << "\n";
    std::size_t index = 0;
    for (const auto& query : result.queries) {
        ++index;
        os << "\nquery " << index << ":\n";
        if (const auto* d = std::get_if<DistributionResult>(&query)) {
            os << distribution_table(d->distribution);
        } else if (const auto* c = std::get_if<ConservationResult>(&query)) {
            os << report_table(c->report, result.names);
        } else {
            const auto& t = std::get<TransformResult>(query);
            os << "transform " << t.query.name << " (coordinates";
            for (const auto& name : t.coordinate_names) os << " " << name;
            os << ")\nbefore:\n" << state_table(t.before, result.names);
            os << "after:\n" << state_table(t.after, result.names);
        }
    }
    return os.str();
}

} // namespace qrf
