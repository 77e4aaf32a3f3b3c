#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "nsctl/core.hpp"
#include "nsctl/simplex.hpp"

namespace nsctl {

struct CapExceeded : std::runtime_error {
    std::uint64_t count;
    explicit CapExceeded(std::uint64_t c)
        : std::runtime_error("deterministic-strategy count " + std::to_string(c) +
                             " exceeds enumeration cap"),
          count(c) {}
};

/// A pair of pure response maps f: A -> X, g: B -> Y. A vertex of the local
/// polytope.
struct DeterministicLocal {
    std::vector<int> f;  // size nA, values in [0, nX)
    std::vector<int> g;  // size nB, values in [0, nY)

    bool operator==(const DeterministicLocal&) const = default;
};

/// Point-mass strategy: table[a,b,x,y] = 1 iff x = f(a) and y = g(b).
inline Strategy induce_deterministic(const Alphabets& al, const DeterministicLocal& d) {
    std::vector<Rational> t(al.cells(), Rational(0));
    for (int a = 0; a < al.na; ++a)
        for (int b = 0; b < al.nb; ++b) t[al.index(a, b, d.f[a], d.g[b])] = 1;
    return Strategy::validate(al, std::move(t));
}

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// All nX^nA * nY^nB deterministic locals, lexicographic by (f base-nX,
/// g base-nY). f varies slowest.
inline std::vector<DeterministicLocal> enumerate_deterministic(
    const Alphabets& al, std::uint64_t cap = kDefaultEnumerationCap) {
    al.require_valid();
    long double approx = 1.0L;
    for (int i = 0; i < al.na; ++i) approx *= al.nx;
    for (int i = 0; i < al.nb; ++i) approx *= al.ny;
    if (approx > static_cast<long double>(cap) * 2)
        throw CapExceeded(static_cast<std::uint64_t>(approx));
    std::uint64_t nf = 1, ng = 1;
    for (int i = 0; i < al.na; ++i) nf *= al.nx;
    for (int i = 0; i < al.nb; ++i) ng *= al.ny;
    if (nf * ng > cap) throw CapExceeded(nf * ng);

    std::vector<DeterministicLocal> out;
    out.reserve(nf * ng);
    for (std::uint64_t fi = 0; fi < nf; ++fi) {
        // decode fi base-nX, most significant digit = f[0]
        std::vector<int> f(al.na);
        std::uint64_t r = fi;
        for (int a = al.na - 1; a >= 0; --a) {
            f[a] = int(r % al.nx);
            r /= al.nx;
        }
        for (std::uint64_t gi = 0; gi < ng; ++gi) {
            std::vector<int> g(al.nb);
            std::uint64_t q = gi;
            for (int b = al.nb - 1; b >= 0; --b) {
                g[b] = int(q % al.ny);
                q /= al.ny;
            }
            out.push_back({f, std::move(g)});
        }
    }
    return out;
}

/// Convex combination of deterministic locals; a constructive passive-W
/// representation of a strategy in the local polytope.
struct LocalDecomposition {
    Alphabets alphabets;
    std::vector<std::pair<Rational, DeterministicLocal>> atoms;  // weight > 0

    Strategy induce() const {
        std::vector<Rational> t(alphabets.cells(), Rational(0));
        for (const auto& [w, d] : atoms)
            for (int a = 0; a < alphabets.na; ++a)
                for (int b = 0; b < alphabets.nb; ++b)
                    t[alphabets.index(a, b, d.f[a], d.g[b])] += w;
        return Strategy::validate(alphabets, std::move(t));
    }
};

/// Linear functional on strategy entries witnessing non-membership in the
/// local polytope: value_on_strategy > max_on_local strictly.
struct SeparatingFunctional {
    Alphabets alphabets;
    std::vector<Rational> coeffs;  // indexed via alphabets.index(a,b,x,y)
    Rational value_on_strategy;
    Rational max_on_local;

    const Rational& coeff(int x, int y, int a, int b) const {
        return coeffs[alphabets.index(a, b, x, y)];
    }
};

inline Rational evaluate_functional(const SeparatingFunctional& c, const Strategy& s) {
    if (!(c.alphabets == s.alphabets())) throw AlphabetMismatch();
    Rational v = 0;
    const auto& t = s.table();
    for (std::size_t i = 0; i < t.size(); ++i) v += c.coeffs[i] * t[i];
    return v;
}

struct MembershipResult {
    bool feasible = false;
    std::optional<LocalDecomposition> decomposition;   // set iff feasible
    std::optional<SeparatingFunctional> certificate;   // set iff infeasible
};

/// Decides membership of s in the local polytope by exact phase-1 simplex
/// over the deterministic-local columns. Feasible results carry an exact
/// reconstruction; infeasible results a strict Farkas separator.
inline MembershipResult local_membership(const Strategy& s,
                                         std::uint64_t cap = kDefaultEnumerationCap) {
    const Alphabets& al = s.alphabets();
    auto locals = enumerate_deterministic(al, cap);
    const std::size_t cells = al.cells();
    const std::size_t m = cells + 1;  // entry rows + explicit normalization row
    const std::size_t n = locals.size();

    std::vector<Rational> A(m * n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        const auto& d = locals[j];
        for (int a = 0; a < al.na; ++a)
            for (int b = 0; b < al.nb; ++b)
                A[al.index(a, b, d.f[a], d.g[b]) * n + j] = 1;
        A[cells * n + j] = 1;
    }
    std::vector<Rational> rhs(s.table());
    rhs.push_back(1);

    Phase1Result lp = solve_equality_feasibility(m, n, std::move(A), std::move(rhs));

    MembershipResult res;
    if (lp.feasible) {
        res.feasible = true;
        LocalDecomposition dec{al, {}};
        for (std::size_t j = 0; j < n; ++j)
            if (lp.solution[j] > 0) dec.atoms.emplace_back(lp.solution[j], locals[j]);
        res.decomposition = std::move(dec);
    } else {
        // Farkas prices on the entry rows form the functional; the
        // normalization-row price is folded away by recomputing the local
        // maximum exhaustively.
        SeparatingFunctional cert{al, {}, 0, 0};
        cert.coeffs.assign(lp.farkas.begin(), lp.farkas.begin() + cells);
        cert.value_on_strategy = evaluate_functional(cert, s);
        bool first = true;
        for (const auto& d : locals) {
            Rational v = 0;
            for (int a = 0; a < al.na; ++a)
                for (int b = 0; b < al.nb; ++b)
                    v += cert.coeffs[al.index(a, b, d.f[a], d.g[b])];
            if (first || v > cert.max_on_local) cert.max_on_local = v;
            first = false;
        }
        res.certificate = std::move(cert);
    }
    return res;
}

/// Certificate text format: header, one coefficient line per (a,b,x,y) in
/// lexicographic order, then value and localmax.
inline void emit_certificate(std::ostream& out, const SeparatingFunctional& c) {
    const Alphabets& al = c.alphabets;
    out << "functional " << al.na << " " << al.nb << " " << al.nx << " " << al.ny << "\n";
    for (int a = 0; a < al.na; ++a)
        for (int b = 0; b < al.nb; ++b)
            for (int x = 0; x < al.nx; ++x)
                for (int y = 0; y < al.ny; ++y)
                    out << format_rational(c.coeff(x, y, a, b)) << "\n";
    out << "value " << format_rational(c.value_on_strategy) << "\n";
    out << "localmax " << format_rational(c.max_on_local) << "\n";
}

struct LabeledLocalVertex {
    int alpha, beta, gamma, delta;
    DeterministicLocal d;
    Strategy strategy;
};

struct LabeledNonlocalVertex {
    int alpha, beta, gamma;
    Strategy strategy;
};

/// The 16 binary local vertices: x = alpha*a xor beta, y = gamma*b xor delta.
inline std::vector<LabeledLocalVertex> binary_local_vertices() {
    Alphabets al{2, 2, 2, 2};
    std::vector<LabeledLocalVertex> out;
    out.reserve(16);
    for (int alpha = 0; alpha < 2; ++alpha)
        for (int beta = 0; beta < 2; ++beta)
            for (int gamma = 0; gamma < 2; ++gamma)
                for (int delta = 0; delta < 2; ++delta) {
                    DeterministicLocal d{{beta, alpha ^ beta}, {delta, gamma ^ delta}};
                    Strategy s = induce_deterministic(al, d);
                    out.push_back({alpha, beta, gamma, delta, std::move(d), std::move(s)});
                }
    return out;
}

/// The 8 binary non-local vertices: 1/2 on the cells with
/// x xor y = a.b xor alpha*a xor beta*b xor gamma.
inline std::vector<LabeledNonlocalVertex> binary_nonlocal_vertices() {
    Alphabets al{2, 2, 2, 2};
    std::vector<LabeledNonlocalVertex> out;
    out.reserve(8);
    for (int alpha = 0; alpha < 2; ++alpha)
        for (int beta = 0; beta < 2; ++beta)
            for (int gamma = 0; gamma < 2; ++gamma) {
                std::vector<Rational> t(al.cells(), Rational(0));
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        for (int x = 0; x < 2; ++x)
                            for (int y = 0; y < 2; ++y)
                                if ((x ^ y) == ((a & b) ^ (alpha & a) ^ (beta & b) ^ gamma))
                                    t[al.index(a, b, x, y)] = Rational(1, 2);
                out.push_back({alpha, beta, gamma, Strategy::validate(al, std::move(t))});
            }
    return out;
}

}  // namespace nsctl
