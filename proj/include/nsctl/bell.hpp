#pragma once

#include <array>
#include <utility>

#include "nsctl/core.hpp"
#include "nsctl/polytope.hpp"

namespace nsctl {

struct NotBinary : std::runtime_error {
    NotBinary() : std::runtime_error("CHSH requires binary alphabets") {}
};

inline void require_binary(const Strategy& s) {
    if (!s.alphabets().is_binary()) throw NotBinary();
}

/// One of the 8 sign patterns of the CHSH family. (0,0,0) is the classic
/// inequality with signs (+,+,+,-); labels match the non-local vertex
/// parametrization, so each vertex maximizes its own variant.
struct ChshVariant {
    int alpha = 0, beta = 0, gamma = 0;

    bool operator==(const ChshVariant&) const = default;

    // (-1)^(a.b xor alpha*a xor beta*b xor gamma)
    int sign(int a, int b) const {
        return ((a & b) ^ (alpha & a) ^ (beta & b) ^ gamma) ? -1 : 1;
    }
};

inline std::array<ChshVariant, 8> all_chsh_variants() {
    std::array<ChshVariant, 8> v{};
    int i = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int g = 0; g < 2; ++g) v[i++] = {a, b, g};
    return v;
}

/// <(-1)^x (-1)^y>_{a,b} = sum_{x,y} P(x,y|a,b) (-1)^(x+y).
inline Rational correlator(const Strategy& s, int a, int b) {
    require_binary(s);
    Rational c = 0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            c += s.at(a, b, x, y) * ((x ^ y) ? -1 : 1);
    return c;
}

/// Signed sum of the four correlators; <= 2 on the local polytope, <= 4
/// on the no-signaling polytope.
inline Rational chsh_value(const Strategy& s, const ChshVariant& v) {
    require_binary(s);
    Rational total = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) total += correlator(s, a, b) * v.sign(a, b);
    return total;
}

/// Variant maximizing chsh_value; ties broken by (alpha,beta,gamma)
/// lexicographic order.
inline std::pair<ChshVariant, Rational> max_chsh_violation(const Strategy& s) {
    require_binary(s);
    ChshVariant best{};
    Rational best_val;
    bool first = true;
    for (const auto& v : all_chsh_variants()) {
        Rational val = chsh_value(s, v);
        if (first || val > best_val) {
            best = v;
            best_val = val;
            first = false;
        }
    }
    return {best, best_val};
}

/// The CHSH variant as a functional on strategy entries:
/// coeff(x,y,a,b) = sign(a,b) * (-1)^(x+y). Its exact maximum over the
/// local polytope is 2, recorded in max_on_local; value_on_strategy is
/// filled for the given strategy.
inline SeparatingFunctional chsh_functional(const ChshVariant& v, const Strategy& s) {
    require_binary(s);
    Alphabets al{2, 2, 2, 2};
    SeparatingFunctional c{al, std::vector<Rational>(al.cells()), 0, 2};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y)
                    c.coeffs[al.index(a, b, x, y)] = v.sign(a, b) * ((x ^ y) ? -1 : 1);
    c.value_on_strategy = evaluate_functional(c, s);
    return c;
}

}  // namespace nsctl
