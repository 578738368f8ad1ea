#include <doctest.h>

#include <random>
#include <sstream>

#include "qrf/builtin.hpp"
#include "qrf/runner.hpp"
#include "qrf/serialize.hpp"

#include "test_support.hpp"

using namespace qrf;

namespace {

scenario::Scenario parse_ok(const std::string& source) {
    auto result = scenario::parse(source);
    if (!result.errors.empty()) {
        for (const auto& e : result.errors)
            MESSAGE("parse error ", e.line, ":", e.column, ": ", e.message);
    }
    REQUIRE(result.errors.empty());
    return std::move(*result.scenario);
}

} // namespace

TEST_CASE("the bundled paradox scenario parses into the expected shape") {
    const auto sc = parse_ok(*builtin::scenario_source("paradox"));
    CHECK(sc.particles.size() == 4);
    int prepares = 0, interacts = 0, measures = 0;
    for (const auto& event : sc.events) {
        if (std::holds_alternative<scenario::PrepareStmt>(event)) ++prepares;
        if (std::holds_alternative<scenario::InteractStmt>(event)) ++interacts;
        if (std::holds_alternative<scenario::MeasureStmt>(event)) ++measures;
    }
    CHECK(prepares == 2);
    CHECK(interacts == 1);
    CHECK(measures == 2);
    CHECK(sc.queries.size() == 3);
}

TEST_CASE("undeclared names are reported with their position") {
    const auto result = scenario::parse("particle F {0: 1}\nmeasure X\n");
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].line == 2);
    CHECK(result.errors[0].column == 9); // the X of "measure X"
    CHECK(result.errors[0].message.find("'X'") != std::string::npos);
}

TEST_CASE("re-preparing a system is a parse error") {
    const auto result = scenario::parse(
        "particle F {0: 1}\nparticle G {0: 1}\nparticle S {0: 1}\n"
        "prepare F S {0: 1}\nprepare G S {0: 1}\n");
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].line == 5);
    CHECK(result.errors[0].message.find("already prepared") != std::string::npos);
}

TEST_CASE("malformed complex literals are reported") {
    const auto result = scenario::parse("particle F {0: 1/sqrt}\n");
    REQUIRE(!result.errors.empty());
    CHECK(result.errors[0].message.find("complex literal") != std::string::npos);
}

TEST_CASE("several errors are collected in one pass") {
    const auto result =
        scenario::parse("measure X\nmeasure Y\nquery transform diagonal\n");
    CHECK(result.errors.size() == 3);
    CHECK(!result.scenario.has_value());
}

TEST_CASE("complex literal grammar") {
    const auto sc = parse_ok(
        "particle A {0: 1/sqrt2, 1: -1/sqrt2}\n"
        "particle B {0: 0.5+0.5i, 1: -0.5i, 2: i, 3: 1/2-1/2i}\n");
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(sc.particles[0].initial.coeff(0) - cplx{r, 0}) < 1e-15);
    CHECK(std::abs(sc.particles[0].initial.coeff(1) - cplx{-r, 0}) < 1e-15);
    // B is normalized on construction; check ratios instead of raw values.
    const auto& b = sc.particles[1].initial;
    CHECK(std::abs(b.coeff(2) / b.coeff(0) - cplx{0, 1} / cplx{0.5, 0.5}) < 1e-12);
    CHECK(std::abs(b.coeff(1) / b.coeff(3) - cplx{0, -0.5} / cplx{0.5, -0.5}) < 1e-12);
}

TEST_CASE("unitary definitions in block and general form") {
    const auto sc = parse_ok(
        "particle S {0: 1}\nparticle T {0: 1}\n"
        "unitary rot\n"
        "block 1 pairs (0,1) (1,0)\n"
        "row 1/sqrt2 -1/sqrt2\n"
        "row 1/sqrt2 1/sqrt2\n"
        "end\n"
        "unitary gen\n"
        "support (0,0) (2,-2)\n"
        "row 0 1\n"
        "row 1 0\n"
        "end\n"
        "interact S T rot\n");
    REQUIRE(sc.unitaries.size() == 2);
    const auto rot = validate_momentum_conserving(sc.unitaries[0].candidate);
    CHECK(rot.ok);
    const auto gen = validate_momentum_conserving(sc.unitaries[1].candidate);
    CHECK(gen.ok); // both pairs share total 0
}

TEST_CASE("particle names cannot start with a digit") {
    const auto result = scenario::parse("particle 2F {0: 1}\n");
    REQUIRE(!result.errors.empty());
    CHECK(result.errors[0].message.find("particle name") != std::string::npos);
}

TEST_CASE("built-in unitary names cannot be shadowed") {
    const auto result = scenario::parse("unitary swap\nend\n");
    REQUIRE(!result.errors.empty());
    CHECK(result.errors[0].message.find("built-in") != std::string::npos);
}

TEST_CASE("parse-print-parse is a fixpoint on every bundled scenario") {
    for (const auto& entry : builtin::scenarios()) {
        const auto first = parse_ok(entry.source);
        const auto second = parse_ok(scenario::print(first));
        CHECK(first == second);
    }
}

TEST_CASE("tiny amplitudes survive the print/parse round trip") {
    // Shortest round-trip printing can produce exponent notation; the
    // complex grammar must not mistake its sign for a separator.
    const auto first = parse_ok(
        "particle A {0: 1, 1: 1e-06, 2: -2.5e-07i, 3: 1e-06+1e-06i}\n");
    const auto second = parse_ok(scenario::print(first));
    CHECK(first == second);
    // Normalization rescales by 1/sqrt(1 + ~2e-12), so compare loosely.
    CHECK(first.particles[0].initial.coeff(1).real() ==
          doctest::Approx(1e-06).epsilon(1e-9));
}

TEST_CASE("parse-print-parse is a fixpoint for unitary definitions too") {
    const auto first = parse_ok(
        "particle S {0: 1}\nparticle T {0: 1}\n"
        "unitary rot\n"
        "block 1 pairs (0,1) (1,0)\n"
        "row 1/sqrt2 -1/sqrt2\n"
        "row 1/sqrt2 1/sqrt2\n"
        "end\n"
        "unitary phases\n"
        "support (0,0) (3,-3)\n"
        "row i 0\n"
        "row 0 -i\n"
        "end\n"
        "interact S T phases\n");
    const auto second = parse_ok(scenario::print(first));
    CHECK(first == second);
}

TEST_CASE("runs are deterministic byte for byte") {
    const auto sc = parse_ok(*builtin::scenario_source("network_with_G"));
    const std::string a = to_json(run(sc)).dump(2);
    const std::string b = to_json(run(sc)).dump(2);
    CHECK(a == b);

    // Also under the forced parallel path: chunking is static, so repeated
    // runs with a fixed thread count reproduce the same bytes.
    kernels::set_policy(kernels::Policy::Parallel);
    const std::string pa = to_json(run(sc)).dump(2);
    const std::string pb = to_json(run(sc)).dump(2);
    kernels::set_policy(kernels::Policy::Auto);
    CHECK(pa == pb);
}

TEST_CASE("branch probabilities sum to one in every bundled scenario") {
    for (const auto& entry : builtin::scenarios()) {
        const auto sc = parse_ok(entry.source);
        const RunResult result = run(sc);
        double total = 0.0;
        for (const Branch& branch : result.branches) total += branch.probability;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("the paradox run reproduces the conditioned distributions") {
    const auto sc = parse_ok(*builtin::scenario_source("paradox"));
    const RunResult result = run(sc);
    REQUIRE(result.queries.size() == 3);

    const auto& baseline = std::get<DistributionResult>(result.queries[0]);
    CHECK(baseline.distribution.max_abs_difference(testing::eq10_distribution()) <
          1e-12);

    const auto& conditioned = std::get<DistributionResult>(result.queries[1]);
    CHECK(conditioned.distribution.max_abs_difference(testing::eq19_distribution()) <
          1e-12);

    const auto& check = std::get<ConservationResult>(result.queries[2]);
    CHECK(!check.report.pass);
}

TEST_CASE("the chain run shows a pass and an untouched grand-frame") {
    const auto sc = parse_ok(*builtin::scenario_source("chain"));
    const RunResult result = run(sc);
    const auto& check = std::get<ConservationResult>(result.queries[0]);
    CHECK(check.report.pass);

    // Preparing S and measuring it never touches G: its distribution at
    // the end matches the one right after G prepared F.
    const auto& g_after_prep = std::get<DistributionResult>(result.queries[1]);
    const auto& g_at_end = std::get<DistributionResult>(result.queries[2]);
    CHECK(g_at_end.distribution.max_abs_difference(g_after_prep.distribution) < 1e-12);
}

TEST_CASE("distribution CSV blocks carry the fixed header and sum to one") {
    const auto sc = parse_ok(*builtin::scenario_source("paradox"));
    const std::string csv = run_csv(run(sc));
    CHECK(csv.find("L,probability\n") != std::string::npos);
    CHECK(csv.find("outcome,L,probability,expected,pass\n") != std::string::npos);

    // Sum the first distribution block.
    std::istringstream in(csv.substr(csv.find("L,probability\n") + 14));
    std::string line;
    double total = 0.0;
    while (std::getline(in, line) && !line.empty() && line[0] != '#' &&
           line.find(',') != std::string::npos && line[0] != 'o')
        total += std::stod(line.substr(line.find(',') + 1));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sampling is seeded and consistent with the branch law") {
    const auto sc = parse_ok(*builtin::scenario_source("paradox"));
    const SampleResult a = sample(sc, 20000, 42);
    const SampleResult b = sample(sc, 20000, 42);
    REQUIRE(a.counts.size() == b.counts.size());
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < a.counts.size(); ++i) {
        CHECK(a.counts[i].count == b.counts[i].count);
        total += a.counts[i].count;
    }
    CHECK(total == 20000);

    const RunResult exact = run(sc);
    for (std::size_t i = 0; i < a.counts.size(); ++i) {
        const double freq =
            static_cast<double>(a.counts[i].count) / static_cast<double>(a.shots);
        CHECK(std::abs(freq - exact.branches[i].probability) < 0.02);
    }
}

TEST_CASE("the transform query factorizes the no-interaction network") {
    const auto sc = parse_ok(*builtin::scenario_source("network_no_interact"));
    const RunResult result = run(sc);

    // Both per-branch checks pass: conservation stays local.
    CHECK(std::get<ConservationResult>(result.queries[0]).report.pass);
    CHECK(std::get<ConservationResult>(result.queries[1]).report.pass);

    const auto& tr = std::get<TransformResult>(result.queries[2]);
    CHECK(tr.coordinate_names ==
          std::vector<std::string>{"LA", "LB", "LR", "LC", "LC'"});
    const ReducedDensity rho = reduced_density(tr.after, {result.particles.at(0)});
    CHECK(rho.largest_eigenvalue() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("invalid user unitaries surface as run errors with the event index") {
    const auto sc = parse_ok(
        "particle S {0: 1}\nparticle T {0: 1}\n"
        "unitary bad\nsupport (0,0) (0,1)\nrow 0 1\nrow 1 0\nend\n"
        "interact S T bad\n");
    CHECK_THROWS_WITH_AS((void)run(sc),
                         doctest::Contains("event 0"), Error);
}

TEST_CASE("runtime module errors carry the event index too") {
    // The state contains the pair (2,-1) with total 1, which the
    // beamsplitter claims but does not cover.
    const auto bad = parse_ok(
        "particle A {0: 1}\nparticle B {2: 1/sqrt2, -1: 1/sqrt2}\n"
        "interact A B beamsplitter\n");
    try {
        (void)run(bad);
        FAIL("expected a support violation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SupportViolation);
        CHECK(std::string(e.what()).find("event 0") != std::string::npos);
    }
}

TEST_CASE("partial given clauses mix the matching branches") {
    // Conditioning only on S = 0 mixes the (0,0) and (0,1) branches with
    // weights 4/7 and 3/7, giving {-1: 1/7, 0: 2/7, 1: 3/7, 2: 1/7}.
    const auto sc = parse_ok(
        "particle F {0: 1/sqrt2, 1: 1/sqrt2}\n"
        "particle F2 {0: 1/sqrt2, 1: 1/sqrt2}\n"
        "particle S {0: 1}\n"
        "particle S2 {0: 1}\n"
        "prepare F S {0: 1/sqrt2, 1: 1/sqrt2}\n"
        "prepare F2 S2 {0: 1/sqrt2, 1: 1/sqrt2}\n"
        "interact S S2 beamsplitter\n"
        "measure S\nmeasure S2\n"
        "query distribution F,F2 given S=0\n");
    const RunResult result = run(sc);
    const auto& d = std::get<DistributionResult>(result.queries[0]).distribution;
    CHECK(d.at(-1) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    CHECK(d.at(0) == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
    CHECK(d.at(1) == doctest::Approx(3.0 / 7.0).epsilon(1e-12));
    CHECK(d.at(2) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("distribution queries at the preparations point") {
    const auto sc = parse_ok(
        "particle F {0: 1/sqrt2, 1: 1/sqrt2}\nparticle S {0: 1}\n"
        "prepare F S {0: 1/sqrt2, 1: 1/sqrt2}\nmeasure S\n"
        "query distribution F,S at preparations\n");
    const RunResult result = run(sc);
    const auto& d = std::get<DistributionResult>(result.queries[0]).distribution;
    CHECK(d.at(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.at(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("conservation references can point at a specific event") {
    // Referencing event 1 (after the first preparation only) still passes
    // for the pair, since the second branch's preparation conserves their
    // total as well.
    const auto sc = parse_ok(
        "particle F {0: 1/sqrt2, 1: 1/sqrt2}\n"
        "particle S {0: 1}\n"
        "particle F2 {0: 1/sqrt2, 1: 1/sqrt2}\n"
        "particle S2 {0: 1}\n"
        "prepare F S {0: 1/sqrt2, 1: 1/sqrt2}\n"
        "prepare F2 S2 {0: 1/sqrt2, 1: 1/sqrt2}\n"
        "measure S\n"
        "query conservation F,S reference event 1\n"
        "query conservation F,S reference initial\n");
    const RunResult result = run(sc);
    CHECK(std::get<ConservationResult>(result.queries[0]).report.pass);
    CHECK(std::get<ConservationResult>(result.queries[1]).report.pass);
}

TEST_CASE("given clauses need a matching measurement") {
    const auto result = scenario::parse(
        "particle F {0: 1}\nparticle S {0: 1}\nprepare F S {0: 1}\n"
        "query distribution F given S=0\n");
    REQUIRE(!result.errors.empty());
    CHECK(result.errors[0].message.find("measure") != std::string::npos);
}

TEST_CASE("event indices past the pipeline are rejected") {
    const auto result = scenario::parse(
        "particle F {0: 1}\nparticle S {0: 1}\nprepare F S {0: 1}\n"
        "query distribution F at event 9\n");
    REQUIRE(!result.errors.empty());
    CHECK(result.errors[0].message.find("past the last event") != std::string::npos);
}

TEST_CASE("unitary definitions with wrong row counts are rejected") {
    const auto result = scenario::parse(
        "unitary u\nsupport (0,0) (0,1)\nrow 1 0\nend\n");
    REQUIRE(!result.errors.empty());
    CHECK(result.errors[0].message.find("rows") != std::string::npos);
}

TEST_CASE("the JSON document is schema-versioned and echoes the scenario") {
    const auto sc = parse_ok(*builtin::scenario_source("pair"));
    const json doc = to_json(run(sc));
    CHECK(doc.at("schema") == 1);
    CHECK(doc.at("scenario").get<std::string>().find("prepare F S") !=
          std::string::npos);
    // Wavefunctions serialize as {label: [re, im]} objects.
    const auto& initial = doc.at("initial_wavefunctions").at("F");
    CHECK(initial.at("0").at(0).get<double>() ==
          doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(initial.at("0").at(1).get<double>() == 0.0);
}

TEST_CASE("sampling serializes with the schema version and full counts") {
    const auto sc = parse_ok(*builtin::scenario_source("pair"));
    const json doc = to_json(sample(sc, 500, 3));
    CHECK(doc.at("schema") == 1);
    CHECK(doc.at("mode") == "sample");
    std::uint64_t total = 0;
    for (const auto& entry : doc.at("counts")) total += entry.at("count").get<std::uint64_t>();
    CHECK(total == 500);
}

TEST_CASE("the parser survives arbitrary junk with positioned errors") {
    std::mt19937_64 rng(991);
    const std::vector<std::string> fragments{
        "particle", "prepare", "interact", "measure", "query", "unitary", "end",
        "row", "block", "support", "F", "S", "{0: 1}", "{", "}", "(", ")", ",",
        "1/sqrt2", "i", "-", "0.5", "at", "given", "distribution", "conservation",
        "transform", "pairs", "=", ":", "9999999999", "#x"};
    std::uniform_int_distribution<std::size_t> pick(0, fragments.size() - 1);
    std::uniform_int_distribution<int> line_count(1, 12);
    std::uniform_int_distribution<int> word_count(0, 6);
    for (int round = 0; round < 300; ++round) {
        std::string source;
        const int lines = line_count(rng);
        for (int l = 0; l < lines; ++l) {
            const int words = word_count(rng);
            for (int w = 0; w < words; ++w) {
                source += fragments[pick(rng)];
                source += " ";
            }
            source += "\n";
        }
        const auto result = scenario::parse(source);
        if (!result.errors.empty())
            for (const auto& e : result.errors) CHECK(e.line >= 1);
        else
            CHECK(result.scenario.has_value());
    }
}

TEST_CASE("full-register distribution is invariant along the bundled pipelines") {
    for (const auto& entry : builtin::scenarios()) {
        const auto sc = parse_ok(entry.source);
        const RunResult result = run(sc);
        for (std::size_t k = 1; k < result.full_register_trace.size(); ++k)
            CHECK(result.full_register_trace[k].max_abs_difference(
                      result.full_register_trace[0]) < 1e-12);
    }
}
