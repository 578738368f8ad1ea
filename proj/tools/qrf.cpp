// Command-line front end: runs scenario files, checks individual-case
// conservation, applies coordinate transforms, validates unitaries, and
// emits the bundled example scenarios.
//
// Exit codes: 0 success, 1 scenario failure (e.g. conservation FAIL when
// --expect pass), 2 parse or usage errors.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qrf/builtin.hpp"
#include "qrf/runner.hpp"
#include "qrf/serialize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitScenarioFailure = 1;
constexpr int kExitUsage = 2;

std::optional<std::string> load_source(const std::string& path, std::ostream& err) {
    std::ifstream in(path);
    if (in) {
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    }
    // Fall back to the bundled catalog so `qrf run paradox.qrf` works
    // without emitting the file first.
    std::string name = std::filesystem::path(path).filename().string();
    if (name.size() > 4 && name.ends_with(".qrf")) name.resize(name.size() - 4);
    if (const std::string* source = qrf::builtin::scenario_source(name)) return *source;
    err << "error: cannot open '" << path << "' and no bundled scenario has that name\n";
    return std::nullopt;
}

std::optional<qrf::scenario::Scenario> parse_or_report(const std::string& path,
                                                       const std::string& source,
                                                       std::ostream& err) {
    auto result = qrf::scenario::parse(source);
    if (!result.errors.empty()) {
        for (const auto& e : result.errors)
            err << path << ":" << e.line << ":" << e.column << ": " << e.message << "\n";
        return std::nullopt;
    }
    return std::move(*result.scenario);
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(out_path);
    out << text;
}

void apply_exec_policy(const std::string& exec) {
    if (exec == "serial")
        qrf::kernels::set_policy(qrf::kernels::Policy::Serial);
    else if (exec == "parallel")
        qrf::kernels::set_policy(qrf::kernels::Policy::Parallel);
    else
        qrf::kernels::set_policy(qrf::kernels::Policy::Auto);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact simulator for networks of quantum reference frames on a circle"};
    app.require_subcommand(1);

    std::string file;
    std::string out_path;
    std::string exec = "auto";
    bool as_json = false;
    bool as_csv = false;
    double tolerance = 1e-10;

    auto* run_cmd = app.add_subcommand("run", "run a scenario file and print its queries");
    run_cmd->add_option("file", file, "scenario file (.qrf)")->required();
    run_cmd->add_flag("--json", as_json, "emit a schema-versioned JSON document");
    run_cmd->add_flag("--csv", as_csv, "emit CSV blocks for the queries");
    run_cmd->add_option("--out", out_path, "write output to this path");
    run_cmd->add_option("--tolerance", tolerance, "conservation tolerance (default 1e-10)");
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    run_cmd->add_option("--sample", shots, "sample N shots instead of enumerating");
    run_cmd->add_option("--seed", seed, "RNG seed for --sample");
    run_cmd->add_option("--exec", exec, "kernel policy: serial|parallel|auto")
        ->check(CLI::IsMember({"serial", "parallel", "auto"}));

    auto* check_cmd =
        app.add_subcommand("check", "individual-case conservation over a particle set");
    std::string set_arg;
    std::string reference_arg = "preparations";
    std::string expect_arg = "pass";
    check_cmd->add_option("file", file, "scenario file (.qrf)")->required();
    check_cmd->add_option("--set", set_arg, "comma-separated particle names")->required();
    check_cmd->add_option("--reference", reference_arg,
                          "baseline: preparations|initial|event:K");
    check_cmd->add_option("--tolerance", tolerance, "pass tolerance (default 1e-10)");
    check_cmd->add_option("--expect", expect_arg, "expected verdict: pass|fail")
        ->check(CLI::IsMember({"pass", "fail"}));
    check_cmd->add_flag("--json", as_json, "emit the report as JSON");

    auto* transform_cmd = app.add_subcommand(
        "transform", "relabel the pre-measurement state into built-in coordinates");
    std::string coords = "pair";
    transform_cmd->add_option("file", file, "scenario file (.qrf)")->required();
    transform_cmd->add_option("--coords", coords, "pair|chain|network")
        ->required()
        ->check(CLI::IsMember({"pair", "chain", "network"}));
    transform_cmd->add_flag("--json", as_json, "emit states as JSON");

    auto* validate_cmd = app.add_subcommand(
        "validate-unitary", "check the unitary definitions in a scenario file");
    validate_cmd->add_option("file", file, "scenario file (.qrf)")->required();

    auto* examples_cmd = app.add_subcommand("examples", "bundled example scenarios");
    bool list = false;
    std::string emit;
    examples_cmd->add_flag("--list", list, "list bundled scenario names");
    examples_cmd->add_option("--emit", emit, "print a bundled scenario's source");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    apply_exec_policy(exec);

    try {
        if (examples_cmd->parsed()) {
            if (!emit.empty()) {
                const std::string* source = qrf::builtin::scenario_source(emit);
                if (!source) {
                    std::cerr << "error: no bundled scenario named '" << emit << "'\n";
                    return kExitUsage;
                }
                std::cout << *source;
                return kExitOk;
            }
            for (const auto& entry : qrf::builtin::scenarios())
                std::cout << entry.name << "\n";
            (void)list;
            return kExitOk;
        }

        auto source = load_source(file, std::cerr);
        if (!source) return kExitUsage;
        auto parsed = parse_or_report(file, *source, std::cerr);
        if (!parsed) return kExitUsage;

        if (run_cmd->parsed()) {
            if (shots > 0) {
                auto result = qrf::sample(*parsed, shots, seed);
                write_output(as_json ? qrf::to_json(result).dump(2)
                                     : qrf::sample_csv(result),
                             out_path);
                return kExitOk;
            }
            qrf::RunOptions options;
            options.tolerance = tolerance;
            auto result = qrf::run(*parsed, options);
            write_output(as_json  ? qrf::to_json(result).dump(2)
                         : as_csv ? qrf::run_csv(result)
                                  : qrf::run_text(result),
                         out_path);
            return kExitOk;
        }

        if (check_cmd->parsed()) {
            auto lowered = qrf::lower(*parsed);
            std::set<qrf::ParticleId> conserving;
            std::stringstream names(set_arg);
            std::string name;
            while (std::getline(names, name, ',')) {
                auto index = parsed->particle_index(name);
                if (!index) {
                    std::cerr << "error: undeclared particle '" << name << "'\n";
                    return kExitUsage;
                }
                conserving.insert(lowered.particles.at(*index));
            }
            std::size_t reference = 0;
            if (reference_arg == "preparations") {
                reference = qrf::after_preparations_index(lowered.events);
            } else if (reference_arg == "initial") {
                reference = 0;
            } else if (reference_arg.rfind("event:", 0) == 0) {
                try {
                    std::size_t used = 0;
                    reference = std::stoul(reference_arg.substr(6), &used);
                    if (used != reference_arg.size() - 6) throw std::invalid_argument("");
                } catch (const std::exception&) {
                    std::cerr << "error: bad --reference '" << reference_arg << "'\n";
                    return kExitUsage;
                }
            } else {
                std::cerr << "error: bad --reference '" << reference_arg << "'\n";
                return kExitUsage;
            }
            auto report = qrf::check_individual_conservation(
                lowered.initial, lowered.events, conserving, reference, tolerance);
            if (as_json)
                std::cout << qrf::to_json(report, lowered.names).dump(2) << "\n";
            else
                std::cout << qrf::report_table(report, lowered.names);

            if (!report.pass && !as_json) {
                // Static rule over the preparation network: measured
                // particles, their parents, and everything up to the first
                // common frame once branches interacted.
                qrf::FrameNetwork net = qrf::FrameNetwork::over(lowered.particles.ids());
                std::vector<qrf::InteractionEvent> interactions;
                std::set<qrf::ParticleId> measured;
                int order = 0;
                for (const auto& event : lowered.events) {
                    if (const auto* prep = std::get_if<qrf::PrepareEvent>(&event))
                        net = net.with_edge(prep->system, prep->frame);
                    else if (const auto* inter = std::get_if<qrf::InteractEvent>(&event))
                        interactions.push_back({inter->a, inter->b, order});
                    else
                        measured.insert(std::get<qrf::MeasureEvent>(event).particle);
                    ++order;
                }
                if (!measured.empty()) {
                    std::string hint;
                    for (qrf::ParticleId id :
                         qrf::conserving_set(net, measured, interactions)) {
                        if (!hint.empty()) hint += ",";
                        hint += lowered.names[id.value];
                    }
                    std::cout << "hint: the preparation network suggests --set " << hint
                              << "\n";
                }
            }
            const bool expected_pass = expect_arg == "pass";
            return report.pass == expected_pass ? kExitOk : kExitScenarioFailure;
        }

        if (transform_cmd->parsed()) {
            // Reuse the runner by appending a transform query.
            qrf::scenario::Scenario sc = *parsed;
            sc.queries.clear();
            sc.queries.push_back(qrf::scenario::TransformQuery{coords});
            auto result = qrf::run(sc);
            const auto& tr = std::get<qrf::TransformResult>(result.queries.front());
            if (as_json) {
                qrf::json j{{"schema", 1},
                            {"name", coords},
                            {"transform",
                             qrf::to_json(qrf::builtin_transforms().at(coords))},
                            {"before", qrf::to_json(tr.before, result.names)},
                            {"after", qrf::to_json(tr.after, result.names)}};
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "coordinates:";
                for (const auto& cname : tr.coordinate_names) std::cout << " " << cname;
                std::cout << "\nbefore:\n"
                          << qrf::state_table(tr.before, result.names) << "after:\n"
                          << qrf::state_table(tr.after, result.names);
            }
            return kExitOk;
        }

        if (validate_cmd->parsed()) {
            if (parsed->unitaries.empty()) {
                std::cout << "no unitary definitions in " << file << "\n";
                return kExitOk;
            }
            bool all_ok = true;
            for (const auto& def : parsed->unitaries) {
                auto validation = qrf::validate_momentum_conserving(def.candidate);
                if (validation.ok) {
                    std::cout << def.name << ": momentum conserving, "
                              << validation.spec->blocks().size() << " block(s)\n";
                } else {
                    all_ok = false;
                    std::cout << def.name << ": INVALID\n";
                    for (const auto& d : validation.diagnostics)
                        std::cout << "  " << d << "\n";
                }
            }
            return all_ok ? kExitOk : kExitScenarioFailure;
        }
    } catch (const qrf::Error& e) {
        std::cerr << "error (" << qrf::error_kind_name(e.kind()) << "): " << e.what()
                  << "\n";
        return kExitScenarioFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitScenarioFailure;
    }
    return kExitUsage;
}
