#include "qrf/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace qrf::scenario {

namespace {

bool is_name_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '\'';
}

bool is_value_char(char c) {
    return (c >= '0' && c <= '9') || c == '.' || c == '/' || c == '+' || c == '-' ||
           is_name_char(c);
}

// [sign] (digits[.digits] | digits "/" digits | digits "/sqrt" digits)
std::optional<double> parse_number(std::string_view tok) {
    if (tok.empty()) return std::nullopt;
    double sign = 1.0;
    if (tok.front() == '+' || tok.front() == '-') {
        if (tok.front() == '-') sign = -1.0;
        tok.remove_prefix(1);
    }
    if (tok.empty()) return std::nullopt;
    const std::size_t slash = tok.find('/');
    std::string_view head = tok.substr(0, slash);
    double value = 0.0;
    {
        auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), value);
        if (ec != std::errc{} || ptr != head.data() + head.size()) return std::nullopt;
    }
    if (slash == std::string_view::npos) return sign * value;
    std::string_view tail = tok.substr(slash + 1);
    bool root = false;
    if (tail.rfind("sqrt", 0) == 0) {
        root = true;
        tail.remove_prefix(4);
    }
    double denom = 0.0;
    auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), denom);
    if (ec != std::errc{} || ptr != tail.data() + tail.size() || denom <= 0.0)
        return std::nullopt;
    return sign * value / (root ? std::sqrt(denom) : denom);
}

// a | a+bi | a-bi | bi | i | -i  (no spaces inside the token)
std::optional<cplx> parse_complex(std::string_view tok) {
    if (tok.empty()) return std::nullopt;
    const bool imag_tail = tok.back() == 'i';
    std::size_t split = std::string_view::npos;
    for (std::size_t i = 1; i < tok.size(); ++i)
        // A sign right after an exponent marker belongs to the number.
        if ((tok[i] == '+' || tok[i] == '-') && tok[i - 1] != 'e' && tok[i - 1] != 'E') {
            split = i;
            break;
        }
    auto imag_coeff = [](std::string_view part) -> std::optional<double> {
        // `part` still carries the trailing 'i'
        part.remove_suffix(1);
        if (part.empty() || part == "+") return 1.0;
        if (part == "-") return -1.0;
        return parse_number(part);
    };
    if (split == std::string_view::npos) {
        if (imag_tail) {
            auto im = imag_coeff(tok);
            if (!im) return std::nullopt;
            return cplx{0.0, *im};
        }
        auto re = parse_number(tok);
        if (!re) return std::nullopt;
        return cplx{*re, 0.0};
    }
    if (!imag_tail) return std::nullopt;
    auto re = parse_number(tok.substr(0, split));
    auto im = imag_coeff(tok.substr(split));
    if (!re || !im) return std::nullopt;
    return cplx{*re, *im};
}

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    int line = 1;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= text.size() || text[pos] == '#';
    }
    int column() {
        skip_ws();
        return static_cast<int>(pos) + 1;
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool consume(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    std::string_view name() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && is_name_char(text[pos])) ++pos;
        return text.substr(start, pos - start);
    }
    std::string_view value_token() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && is_value_char(text[pos])) ++pos;
        return text.substr(start, pos - start);
    }
};

struct PendingUnitary {
    std::string name;
    int line = 0;
    bool block_form = false;
    bool general_form = false;
    std::vector<std::pair<std::int64_t, std::int64_t>> support; // general
    std::vector<std::vector<cplx>> rows;                        // general
    struct PendingBlock {
        std::int64_t total = 0;
        std::vector<std::pair<std::int64_t, std::int64_t>> basis;
        std::vector<std::vector<cplx>> rows;
    };
    std::vector<PendingBlock> blocks;
};

class Parser {
  public:
    explicit Parser(std::string_view source) : source_(source) {}

    ParseResult run() {
        std::size_t begin = 0;
        int line_no = 1;
        while (begin <= source_.size()) {
            std::size_t end = source_.find('\n', begin);
            if (end == std::string_view::npos) end = source_.size();
            Cursor cursor{source_.substr(begin, end - begin), 0, line_no};
            parse_line(cursor);
            if (end == source_.size()) break;
            begin = end + 1;
            ++line_no;
        }
        if (pending_)
            error(pending_->line, 1, "unitary '" + pending_->name + "' has no 'end'");
        finish_checks();
        ParseResult result;
        result.errors = std::move(errors_);
        if (result.errors.empty()) result.scenario = std::move(sc_);
        return result;
    }

  private:
    std::string_view source_;
    Scenario sc_;
    std::vector<ParseError> errors_;
    std::optional<PendingUnitary> pending_;
    std::set<std::string> prepared_;
    std::set<std::string> measured_;
    std::vector<std::pair<std::size_t, int>> event_index_queries_; // query idx, line

    void error(int line, int column, std::string message) {
        errors_.push_back({line, column, std::move(message)});
    }

    bool is_builtin_unitary_name(std::string_view name) const {
        return name == "beamsplitter" || name == "swap" || name == "identity";
    }

    bool known_particle(std::string_view name) const {
        return sc_.particle_index(name).has_value();
    }

    // Returns false (after recording an error) if the name is unknown.
    bool require_particle(Cursor& cursor, std::string_view name, int column) {
        if (name.empty()) {
            error(cursor.line, column, "expected a particle name");
            return false;
        }
        if (!known_particle(name)) {
            error(cursor.line, column,
                  "undeclared particle '" + std::string(name) + "'");
            return false;
        }
        return true;
    }

    std::optional<std::int64_t> parse_int(Cursor& cursor, const char* what) {
        const int column = cursor.column();
        auto tok = cursor.value_token();
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
            error(cursor.line, column, std::string("expected ") + what);
            return std::nullopt;
        }
        return value;
    }

    std::optional<cplx> parse_complex_token(Cursor& cursor) {
        const int column = cursor.column();
        auto tok = cursor.value_token();
        auto value = parse_complex(tok);
        if (!value)
            error(cursor.line, column,
                  "malformed complex literal '" + std::string(tok) + "'");
        return value;
    }

    std::optional<Wavefunction> parse_wavefunction(Cursor& cursor) {
        const int column = cursor.column();
        if (!cursor.consume('{')) {
            error(cursor.line, column, "expected '{' starting a wavefunction literal");
            return std::nullopt;
        }
        std::vector<std::pair<std::int64_t, cplx>> coeffs;
        if (cursor.consume('}')) {
            error(cursor.line, column, "wavefunction literal is empty");
            return std::nullopt;
        }
        while (true) {
            auto label = parse_int(cursor, "an integer momentum label");
            if (!label) return std::nullopt;
            if (!cursor.consume(':')) {
                error(cursor.line, cursor.column(), "expected ':' after momentum label");
                return std::nullopt;
            }
            auto coeff = parse_complex_token(cursor);
            if (!coeff) return std::nullopt;
            coeffs.emplace_back(*label, *coeff);
            if (cursor.consume(',')) continue;
            if (cursor.consume('}')) break;
            error(cursor.line, cursor.column(),
                  "expected ',' or '}' in wavefunction literal");
            return std::nullopt;
        }
        try {
            return Wavefunction::from_coeffs(std::move(coeffs));
        } catch (const Error& e) {
            error(cursor.line, column, e.what());
            return std::nullopt;
        }
    }

    std::optional<std::pair<std::int64_t, std::int64_t>> parse_pair(Cursor& cursor) {
        const int column = cursor.column();
        if (!cursor.consume('(')) {
            error(cursor.line, column, "expected '(' starting a momentum pair");
            return std::nullopt;
        }
        auto a = parse_int(cursor, "an integer momentum label");
        if (!a) return std::nullopt;
        if (!cursor.consume(',')) {
            error(cursor.line, cursor.column(), "expected ',' inside momentum pair");
            return std::nullopt;
        }
        auto b = parse_int(cursor, "an integer momentum label");
        if (!b) return std::nullopt;
        if (!cursor.consume(')')) {
            error(cursor.line, cursor.column(), "expected ')' closing momentum pair");
            return std::nullopt;
        }
        return std::make_pair(*a, *b);
    }

    std::vector<std::string> parse_name_list(Cursor& cursor) {
        std::vector<std::string> names;
        while (true) {
            const int column = cursor.column();
            auto name = cursor.name();
            if (!require_particle(cursor, name, column)) return names;
            names.emplace_back(name);
            if (!cursor.consume(',')) break;
        }
        return names;
    }

    void expect_line_end(Cursor& cursor) {
        if (!cursor.done())
            error(cursor.line, cursor.column(), "unexpected trailing input");
    }

    void parse_line(Cursor& cursor) {
        if (cursor.done()) return;
        const int keyword_col = cursor.column();
        auto keyword = cursor.name();
        if (pending_) {
            parse_unitary_line(cursor, keyword, keyword_col);
            return;
        }
        if (keyword == "particle")
            parse_particle(cursor);
        else if (keyword == "unitary")
            parse_unitary_header(cursor);
        else if (keyword == "prepare")
            parse_prepare(cursor);
        else if (keyword == "interact")
            parse_interact(cursor);
        else if (keyword == "measure")
            parse_measure(cursor);
        else if (keyword == "query")
            parse_query(cursor);
        else
            error(cursor.line, keyword_col,
                  "unknown statement '" + std::string(keyword) + "'");
    }

    static bool valid_name(std::string_view name) {
        return !name.empty() && !(name.front() >= '0' && name.front() <= '9');
    }

    void parse_particle(Cursor& cursor) {
        const int column = cursor.column();
        auto name = cursor.name();
        if (!valid_name(name)) {
            error(cursor.line, column, "expected a particle name");
            return;
        }
        if (known_particle(name)) {
            error(cursor.line, column,
                  "particle '" + std::string(name) + "' declared twice");
            return;
        }
        auto wf = parse_wavefunction(cursor);
        if (!wf) return;
        expect_line_end(cursor);
        sc_.particles.push_back({std::string(name), std::move(*wf)});
    }

    void parse_unitary_header(Cursor& cursor) {
        const int column = cursor.column();
        auto name = cursor.name();
        if (!valid_name(name)) {
            error(cursor.line, column, "expected a unitary name");
            return;
        }
        if (is_builtin_unitary_name(name)) {
            error(cursor.line, column,
                  "'" + std::string(name) + "' is a built-in unitary name");
            return;
        }
        if (sc_.unitary(name)) {
            error(cursor.line, column,
                  "unitary '" + std::string(name) + "' defined twice");
            return;
        }
        expect_line_end(cursor);
        pending_ = PendingUnitary{};
        pending_->name = std::string(name);
        pending_->line = cursor.line;
    }

    void parse_unitary_line(Cursor& cursor, std::string_view keyword, int keyword_col) {
        if (keyword == "end") {
            expect_line_end(cursor);
            finish_unitary(cursor);
            return;
        }
        if (keyword == "support") {
            if (pending_->block_form) {
                error(cursor.line, keyword_col,
                      "cannot mix 'support' and 'block' forms in one unitary");
                return;
            }
            pending_->general_form = true;
            while (!cursor.done()) {
                auto pair = parse_pair(cursor);
                if (!pair) return;
                pending_->support.push_back(*pair);
            }
            if (pending_->support.empty())
                error(cursor.line, keyword_col, "support list is empty");
            return;
        }
        if (keyword == "block") {
            if (pending_->general_form) {
                error(cursor.line, keyword_col,
                      "cannot mix 'support' and 'block' forms in one unitary");
                return;
            }
            pending_->block_form = true;
            auto total = parse_int(cursor, "the block's total momentum");
            if (!total) return;
            const int kw_col = cursor.column();
            auto kw = cursor.name();
            if (kw != "pairs") {
                error(cursor.line, kw_col, "expected 'pairs' after the block total");
                return;
            }
            PendingUnitary::PendingBlock block;
            block.total = *total;
            while (!cursor.done()) {
                const int pair_col = cursor.column();
                auto pair = parse_pair(cursor);
                if (!pair) return;
                if (pair->first + pair->second != *total)
                    error(cursor.line, pair_col,
                          "pair does not sum to the block total " +
                              std::to_string(*total));
                block.basis.push_back(*pair);
            }
            if (block.basis.empty()) {
                error(cursor.line, kw_col, "block has no basis pairs");
                return;
            }
            pending_->blocks.push_back(std::move(block));
            return;
        }
        if (keyword == "row") {
            std::vector<cplx> row;
            while (!cursor.done()) {
                auto value = parse_complex_token(cursor);
                if (!value) return;
                row.push_back(*value);
            }
            if (pending_->block_form) {
                if (pending_->blocks.empty()) {
                    error(cursor.line, keyword_col, "'row' before any 'block'");
                    return;
                }
                pending_->blocks.back().rows.push_back(std::move(row));
            } else {
                pending_->general_form = true;
                pending_->rows.push_back(std::move(row));
            }
            return;
        }
        error(cursor.line, keyword_col,
              "expected 'support', 'block', 'row' or 'end' inside a unitary definition");
    }

    void finish_unitary(Cursor& cursor) {
        PendingUnitary pending = std::move(*pending_);
        pending_.reset();
        UnitaryDef def;
        def.name = std::move(pending.name);
        if (pending.block_form) {
            // Assemble the block-diagonal dense matrix over the
            // concatenated bases.
            std::size_t n = 0;
            for (const auto& block : pending.blocks) n += block.basis.size();
            def.candidate.matrix.assign(n * n, cplx{0.0, 0.0});
            std::size_t offset = 0;
            for (const auto& block : pending.blocks) {
                const std::size_t m = block.basis.size();
                if (block.rows.size() != m) {
                    error(cursor.line, 1,
                          "block with total " + std::to_string(block.total) + " has " +
                              std::to_string(block.rows.size()) + " rows, expected " +
                              std::to_string(m));
                    return;
                }
                for (const auto& row : block.rows)
                    if (row.size() != m) {
                        error(cursor.line, 1,
                              "row length does not match the block basis size");
                        return;
                    }
                for (const auto& pair : block.basis)
                    def.candidate.support.push_back(pair);
                for (std::size_t r = 0; r < m; ++r)
                    for (std::size_t c = 0; c < m; ++c)
                        def.candidate.matrix[(offset + r) * n + (offset + c)] =
                            block.rows[r][c];
                offset += m;
            }
        } else {
            const std::size_t n = pending.support.size();
            if (n == 0) {
                error(cursor.line, 1,
                      "unitary '" + def.name + "' declares no support");
                return;
            }
            if (pending.rows.size() != n) {
                error(cursor.line, 1,
                      "unitary '" + def.name + "' has " +
                          std::to_string(pending.rows.size()) + " rows, expected " +
                          std::to_string(n));
                return;
            }
            def.candidate.support = std::move(pending.support);
            def.candidate.matrix.reserve(n * n);
            for (const auto& row : pending.rows) {
                if (row.size() != n) {
                    error(cursor.line, 1, "row length does not match the support size");
                    return;
                }
                def.candidate.matrix.insert(def.candidate.matrix.end(), row.begin(),
                                            row.end());
            }
        }
        sc_.unitaries.push_back(std::move(def));
    }

    void parse_prepare(Cursor& cursor) {
        int column = cursor.column();
        auto frame = cursor.name();
        bool ok = require_particle(cursor, frame, column);
        column = cursor.column();
        auto system = cursor.name();
        ok = require_particle(cursor, system, column) && ok;
        if (ok && frame == system) {
            error(cursor.line, column, "frame and system must be distinct");
            ok = false;
        }
        if (ok && prepared_.count(std::string(system))) {
            error(cursor.line, column,
                  "system '" + std::string(system) +
                      "' was already prepared; re-preparation is not allowed");
            ok = false;
        }
        auto chi = parse_wavefunction(cursor);
        if (!ok || !chi) return;
        expect_line_end(cursor);
        prepared_.insert(std::string(system));
        sc_.events.push_back(PrepareStmt{std::string(frame), std::string(system),
                                         std::move(*chi)});
    }

    void parse_interact(Cursor& cursor) {
        int column = cursor.column();
        auto a = cursor.name();
        bool ok = require_particle(cursor, a, column);
        column = cursor.column();
        auto b = cursor.name();
        ok = require_particle(cursor, b, column) && ok;
        if (ok && a == b) {
            error(cursor.line, column, "interaction needs two distinct particles");
            ok = false;
        }
        column = cursor.column();
        auto unitary = cursor.name();
        if (unitary.empty()) {
            error(cursor.line, column, "expected a unitary name");
            ok = false;
        } else if (!is_builtin_unitary_name(unitary) && !sc_.unitary(unitary)) {
            error(cursor.line, column,
                  "undeclared unitary '" + std::string(unitary) + "'");
            ok = false;
        }
        if (!ok) return;
        expect_line_end(cursor);
        sc_.events.push_back(
            InteractStmt{std::string(a), std::string(b), std::string(unitary)});
    }

    void parse_measure(Cursor& cursor) {
        const int column = cursor.column();
        auto particle = cursor.name();
        if (!require_particle(cursor, particle, column)) return;
        expect_line_end(cursor);
        measured_.insert(std::string(particle));
        sc_.events.push_back(MeasureStmt{std::string(particle)});
    }

    // query distribution P,... [at initial|preparations|end|event K] [given P=V,...]
    // query conservation P,... [reference initial|preparations|event K]
    // query transform pair|chain|network
    void parse_query(Cursor& cursor) {
        const int kind_col = cursor.column();
        auto kind = cursor.name();
        if (kind == "distribution") {
            DistributionQuery query;
            query.particles = parse_name_list(cursor);
            while (!cursor.done()) {
                const int column = cursor.column();
                auto word = cursor.name();
                if (word == "at") {
                    if (!parse_at_point(cursor, query.at, query.event_index)) return;
                } else if (word == "given") {
                    if (!parse_given(cursor, query.given)) return;
                } else {
                    error(cursor.line, column, "expected 'at' or 'given'");
                    return;
                }
            }
            if (!query.given.empty() && query.at != AtPoint::End) {
                error(cursor.line, kind_col,
                      "'given' is only meaningful at the end of the pipeline");
                return;
            }
            sc_.queries.push_back(std::move(query));
            return;
        }
        if (kind == "conservation") {
            ConservationQuery query;
            query.particles = parse_name_list(cursor);
            if (query.particles.empty()) {
                error(cursor.line, kind_col, "conservation query needs a particle set");
                return;
            }
            while (!cursor.done()) {
                const int column = cursor.column();
                auto word = cursor.name();
                if (word != "reference") {
                    error(cursor.line, column, "expected 'reference'");
                    return;
                }
                if (!parse_at_point(cursor, query.reference, query.event_index)) return;
                if (query.reference == AtPoint::End) {
                    error(cursor.line, column,
                          "the reference point must precede the measurements");
                    return;
                }
            }
            sc_.queries.push_back(std::move(query));
            return;
        }
        if (kind == "transform") {
            const int column = cursor.column();
            auto name = cursor.name();
            if (name != "pair" && name != "chain" && name != "network") {
                error(cursor.line, column,
                      "expected a built-in transform: pair, chain or network");
                return;
            }
            expect_line_end(cursor);
            sc_.queries.push_back(TransformQuery{std::string(name)});
            return;
        }
        error(cursor.line, kind_col,
              "expected 'distribution', 'conservation' or 'transform'");
    }

    bool parse_at_point(Cursor& cursor, AtPoint& at, std::size_t& event_index) {
        const int column = cursor.column();
        auto word = cursor.name();
        if (word == "initial") {
            at = AtPoint::Initial;
            return true;
        }
        if (word == "preparations") {
            at = AtPoint::AfterPreparations;
            return true;
        }
        if (word == "end") {
            at = AtPoint::End;
            return true;
        }
        if (word == "event") {
            auto index = parse_int(cursor, "an event index");
            if (!index) return false;
            if (*index < 0) {
                error(cursor.line, column, "event index cannot be negative");
                return false;
            }
            at = AtPoint::EventIndex;
            event_index = static_cast<std::size_t>(*index);
            event_index_queries_.push_back({sc_.queries.size(), cursor.line});
            return true;
        }
        error(cursor.line, column,
              "expected 'initial', 'preparations', 'end' or 'event K'");
        return false;
    }

    bool parse_given(Cursor& cursor,
                     std::vector<std::pair<std::string, std::int64_t>>& given) {
        while (true) {
            const int column = cursor.column();
            auto name = cursor.name();
            if (!require_particle(cursor, name, column)) return false;
            if (!measured_.count(std::string(name)) ) {
                // Measurement events may appear later in the file; checked
                // again in finish_checks.
                given_pending_.push_back({std::string(name), cursor.line, column});
            }
            if (!cursor.consume('=')) {
                error(cursor.line, cursor.column(), "expected '=' in given clause");
                return false;
            }
            auto value = parse_int(cursor, "an integer outcome");
            if (!value) return false;
            given.emplace_back(std::string(name), *value);
            if (!cursor.consume(',')) break;
        }
        return true;
    }

    struct GivenPending {
        std::string name;
        int line;
        int column;
    };
    std::vector<GivenPending> given_pending_;

    void finish_checks() {
        for (const auto& pending : given_pending_)
            if (!measured_.count(pending.name))
                error(pending.line, pending.column,
                      "'given " + pending.name + "=...' needs a measure event for '" +
                          pending.name + "'");
        for (const auto& [query_idx, line] : event_index_queries_) {
            if (query_idx >= sc_.queries.size()) continue; // query itself errored
            std::size_t index = 0;
            if (const auto* d = std::get_if<DistributionQuery>(&sc_.queries[query_idx]))
                index = d->event_index;
            else if (const auto* c =
                         std::get_if<ConservationQuery>(&sc_.queries[query_idx]))
                index = c->event_index;
            if (index > sc_.events.size())
                error(line, 1,
                      "event index " + std::to_string(index) + " past the last event (" +
                          std::to_string(sc_.events.size()) + ")");
        }
    }
};

} // namespace

std::optional<std::size_t> Scenario::particle_index(std::string_view name) const {
    for (std::size_t i = 0; i < particles.size(); ++i)
        if (particles[i].name == name) return i;
    return std::nullopt;
}

const UnitaryDef* Scenario::unitary(std::string_view name) const {
    for (const auto& def : unitaries)
        if (def.name == name) return &def;
    return nullptr;
}

ParseResult parse(std::string_view source) { return Parser(source).run(); }

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string format_complex(cplx value) {
    const double re = value.real();
    const double im = value.imag();
    auto imag_part = [](double v) {
        if (v == 1.0) return std::string("i");
        if (v == -1.0) return std::string("-i");
        return format_double(v) + "i";
    };
    if (im == 0.0) return format_double(re);
    if (re == 0.0) return imag_part(im);
    std::string out = format_double(re);
    if (im > 0.0) out += "+";
    return out + imag_part(im);
}

namespace {

std::string format_wavefunction(const Wavefunction& w) {
    std::string out = "{";
    bool first = true;
    for (const auto& [l, c] : w.coeffs()) {
        if (!first) out += ", ";
        first = false;
        out += std::to_string(l) + ": " + format_complex(c);
    }
    return out + "}";
}

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ",";
        out += names[i];
    }
    return out;
}

} // namespace

std::string print_at(AtPoint at, std::size_t event_index) {
    switch (at) {
    case AtPoint::Initial: return "initial";
    case AtPoint::AfterPreparations: return "preparations";
    case AtPoint::End: return "end";
    case AtPoint::EventIndex: return "event " + std::to_string(event_index);
    }
    return "end";
}

std::string print(const Scenario& sc) {
    std::ostringstream os;
    for (const auto& decl : sc.particles)
        os << "particle " << decl.name << " " << format_wavefunction(decl.initial)
           << "\n";
    for (const auto& def : sc.unitaries) {
        os << "unitary " << def.name << "\n";
        os << "support";
        for (const auto& [a, b] : def.candidate.support)
            os << " (" << a << "," << b << ")";
        os << "\n";
        const std::size_t n = def.candidate.support.size();
        for (std::size_t r = 0; r < n; ++r) {
            os << "row";
            for (std::size_t c = 0; c < n; ++c)
                os << " " << format_complex(def.candidate.matrix[r * n + c]);
            os << "\n";
        }
        os << "end\n";
    }
    for (const auto& event : sc.events) {
        if (const auto* prep = std::get_if<PrepareStmt>(&event))
            os << "prepare " << prep->frame << " " << prep->system << " "
               << format_wavefunction(prep->chi) << "\n";
        else if (const auto* inter = std::get_if<InteractStmt>(&event))
            os << "interact " << inter->a << " " << inter->b << " " << inter->unitary
               << "\n";
        else
            os << "measure " << std::get<MeasureStmt>(event).particle << "\n";
    }
    for (const auto& query : sc.queries) {
        if (const auto* d = std::get_if<DistributionQuery>(&query)) {
            os << "query distribution " << join_names(d->particles);
            if (d->at != AtPoint::End)
                os << " at " << print_at(d->at, d->event_index);
            if (!d->given.empty()) {
                os << " given ";
                for (std::size_t i = 0; i < d->given.size(); ++i) {
                    if (i) os << ",";
                    os << d->given[i].first << "=" << d->given[i].second;
                }
            }
            os << "\n";
        } else if (const auto* c = std::get_if<ConservationQuery>(&query)) {
            os << "query conservation " << join_names(c->particles);
            if (c->reference != AtPoint::AfterPreparations)
                os << " reference " << print_at(c->reference, c->event_index);
            os << "\n";
        } else {
            os << "query transform " << std::get<TransformQuery>(query).name << "\n";
        }
    }
    return os.str();
}

} // namespace qrf::scenario
