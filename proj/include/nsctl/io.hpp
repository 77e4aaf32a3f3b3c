#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nsctl/core.hpp"

namespace nsctl {

struct SyntaxError : std::runtime_error {
    int line;
    SyntaxError(int line_, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

struct MissingContext : std::runtime_error {
    int a, b;
    MissingContext(int a_, int b_)
        : std::runtime_error("missing context (" + std::to_string(a_) + "," +
                             std::to_string(b_) + ")"),
          a(a_), b(b_) {}
};

namespace detail {

// Line-oriented tokenizer; '#' starts a comment, blank lines skipped.
class Tokenizer {
public:
    explicit Tokenizer(std::istream& in) : in_(in) {}

    // Tokens of the next non-empty logical line.
    std::optional<std::vector<std::string>> next_line() {
        std::string raw;
        while (std::getline(in_, raw)) {
            ++line_;
            auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            std::istringstream ss(raw);
            std::vector<std::string> toks;
            std::string t;
            while (ss >> t) toks.push_back(t);
            if (!toks.empty()) return toks;
        }
        return std::nullopt;
    }

    int line() const { return line_; }

private:
    std::istream& in_;
    int line_ = 0;
};

inline int parse_size(Tokenizer& tz, const std::string& tok) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw SyntaxError(tz.line(), "expected integer, got '" + tok + "'");
    }
}

inline std::vector<Rational> parse_row(Tokenizer& tz, int width) {
    auto toks = tz.next_line();
    if (!toks) throw SyntaxError(tz.line(), "unexpected end of file");
    if (int(toks->size()) != width)
        throw SyntaxError(tz.line(), "expected " + std::to_string(width) + " rationals");
    std::vector<Rational> row;
    row.reserve(width);
    for (const auto& t : *toks) {
        try {
            row.push_back(parse_rational(t));
        } catch (const ParseError& e) {
            throw SyntaxError(tz.line(), e.what());
        }
    }
    return row;
}

}  // namespace detail

/// Parses the line-oriented strategy file format. Bit-exact rationals.
inline std::pair<Strategy, std::optional<ObservationPrior>> parse_strategy(std::istream& in) {
    detail::Tokenizer tz(in);

    auto header = tz.next_line();
    if (!header || header->size() != 5 || (*header)[0] != "alphabets")
        throw SyntaxError(tz.line(), "expected 'alphabets <nA> <nB> <nX> <nY>'");
    Alphabets al{detail::parse_size(tz, (*header)[1]), detail::parse_size(tz, (*header)[2]),
                 detail::parse_size(tz, (*header)[3]), detail::parse_size(tz, (*header)[4])};
    al.require_valid();

    auto prior_line = tz.next_line();
    if (!prior_line || prior_line->empty() || (*prior_line)[0] != "prior")
        throw SyntaxError(tz.line(), "expected 'prior uniform' or 'prior table'");
    std::optional<ObservationPrior> prior;
    if (prior_line->size() == 2 && (*prior_line)[1] == "uniform") {
        prior = ObservationPrior::uniform(al);
    } else if (prior_line->size() == 2 && (*prior_line)[1] == "table") {
        std::vector<Rational> pt;
        pt.reserve(al.contexts());
        for (int a = 0; a < al.na; ++a) {
            auto row = detail::parse_row(tz, al.nb);
            pt.insert(pt.end(), row.begin(), row.end());
        }
        try {
            prior = ObservationPrior::validate(al, std::move(pt));
        } catch (const std::exception& e) {
            throw SyntaxError(tz.line(), e.what());
        }
    } else {
        throw SyntaxError(tz.line(), "expected 'prior uniform' or 'prior table'");
    }

    std::vector<Rational> table(al.cells());
    std::vector<bool> seen(al.contexts(), false);
    for (std::size_t k = 0; k < al.contexts(); ++k) {
        auto ctx = tz.next_line();
        if (!ctx) break;
        if (ctx->size() != 3 || (*ctx)[0] != "context")
            throw SyntaxError(tz.line(), "expected 'context <a> <b>'");
        int a = detail::parse_size(tz, (*ctx)[1]);
        int b = detail::parse_size(tz, (*ctx)[2]);
        if (a < 0 || a >= al.na || b < 0 || b >= al.nb)
            throw SyntaxError(tz.line(), "context index out of range");
        std::size_t ci = std::size_t(a) * al.nb + b;
        if (seen[ci])
            throw SyntaxError(tz.line(), "duplicate context (" + std::to_string(a) + "," +
                                             std::to_string(b) + ")");
        seen[ci] = true;
        for (int x = 0; x < al.nx; ++x) {
            auto row = detail::parse_row(tz, al.ny);
            for (int y = 0; y < al.ny; ++y) table[al.index(a, b, x, y)] = row[y];
        }
    }
    for (int a = 0; a < al.na; ++a)
        for (int b = 0; b < al.nb; ++b)
            if (!seen[std::size_t(a) * al.nb + b]) throw MissingContext(a, b);
    if (tz.next_line()) throw SyntaxError(tz.line(), "trailing content after last context");

    return {Strategy::validate(al, std::move(table)), std::move(prior)};
}

inline std::pair<Strategy, std::optional<ObservationPrior>> parse_strategy(const std::string& text) {
    std::istringstream ss(text);
    return parse_strategy(ss);
}

/// Canonical emission: contexts in (a,b) lexicographic order, rows x-major,
/// rationals reduced, integers without denominator.
inline void emit_strategy(std::ostream& out, const Strategy& s,
                          const std::optional<ObservationPrior>& prior = std::nullopt) {
    const Alphabets& al = s.alphabets();
    out << "alphabets " << al.na << " " << al.nb << " " << al.nx << " " << al.ny << "\n";
    if (!prior || prior->is_uniform_tag()) {
        out << "prior uniform\n";
    } else {
        if (!(prior->alphabets() == al)) throw AlphabetMismatch();
        out << "prior table\n";
        for (int a = 0; a < al.na; ++a) {
            for (int b = 0; b < al.nb; ++b)
                out << (b ? " " : "") << format_rational(prior->at(a, b));
            out << "\n";
        }
    }
    for (int a = 0; a < al.na; ++a)
        for (int b = 0; b < al.nb; ++b) {
            out << "context " << a << " " << b << "\n";
            for (int x = 0; x < al.nx; ++x) {
                for (int y = 0; y < al.ny; ++y)
                    out << (y ? " " : "") << format_rational(s.at(a, b, x, y));
                out << "\n";
            }
        }
}

inline std::string emit_strategy(const Strategy& s,
                                 const std::optional<ObservationPrior>& prior = std::nullopt) {
    std::ostringstream ss;
    emit_strategy(ss, s, prior);
    return ss.str();
}

}  // namespace nsctl
