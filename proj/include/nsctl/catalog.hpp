#pragma once

#include <array>
#include <string>

#include "nsctl/core.hpp"
#include "nsctl/polytope.hpp"

namespace nsctl {

struct UnknownExample : std::runtime_error {
    explicit UnknownExample(const std::string& name)
        : std::runtime_error("unknown example '" + name + "'") {}
};

enum class Classification { local_ns, ns_not_local, signaling };

inline const char* classification_name(Classification c) {
    switch (c) {
        case Classification::local_ns: return "NS-and-local";
        case Classification::ns_not_local: return "NS-not-local";
        default: return "signaling";
    }
}

/// A built-in strategy with its prior and the classification the test suite
/// re-derives (never trusts).
struct NamedExample {
    std::string name;
    Strategy strategy;
    ObservationPrior prior;
    Classification expected_classification;
    bool prior_assumed = false;  // prior not stated in the source material
};

namespace detail {

inline Strategy example_ab3() {
    Alphabets al{2, 2, 3, 3};
    const Rational third(1, 3);
    // per context: positions of the 1/3 entries, rows x, columns y
    struct Cell { int a, b, x, y; };
    static const Cell cells[] = {
        {0, 0, 0, 2}, {0, 0, 1, 1}, {0, 0, 2, 0},
        {0, 1, 0, 1}, {0, 1, 1, 2}, {0, 1, 2, 0},
        {1, 0, 0, 1}, {1, 0, 1, 0}, {1, 0, 2, 2},
        {1, 1, 0, 0}, {1, 1, 1, 1}, {1, 1, 2, 2},
    };
    std::vector<Rational> t(al.cells(), Rational(0));
    for (const auto& c : cells) t[al.index(c.a, c.b, c.x, c.y)] = third;
    return Strategy::validate(al, std::move(t));
}

inline Strategy example_binary2() {
    Alphabets al{2, 2, 2, 2};
    auto q = [](long n, long d) { return Rational(n, d); };
    std::vector<Rational> t(al.cells());
    auto set_ctx = [&](int a, int b, Rational r00, Rational r01, Rational r10, Rational r11) {
        t[al.index(a, b, 0, 0)] = r00;
        t[al.index(a, b, 0, 1)] = r01;
        t[al.index(a, b, 1, 0)] = r10;
        t[al.index(a, b, 1, 1)] = r11;
    };
    set_ctx(0, 0, q(1, 2), 0, q(1, 3), q(1, 6));
    set_ctx(0, 1, q(1, 2), 0, 0, q(1, 2));
    set_ctx(1, 0, q(1, 2), 0, q(1, 3), q(1, 6));
    set_ctx(1, 1, 0, q(1, 2), q(1, 2), 0);
    return Strategy::validate(al, std::move(t));
}

}  // namespace detail

/// Built-in examples: ab3 (3x3 counterexample), binary2 (binary
/// counterexample), pr-box (non-local vertex (0,0,0)), uniform.
inline NamedExample get_example(const std::string& name) {
    if (name == "ab3") {
        Alphabets al{2, 2, 3, 3};
        return {name, detail::example_ab3(), ObservationPrior::uniform(al),
                Classification::ns_not_local, false};
    }
    if (name == "binary2") {
        Alphabets al{2, 2, 2, 2};
        // the source material states no prior for this table; uniform assumed
        return {name, detail::example_binary2(), ObservationPrior::uniform(al),
                Classification::ns_not_local, true};
    }
    if (name == "pr-box") {
        Alphabets al{2, 2, 2, 2};
        return {name, binary_nonlocal_vertices()[0].strategy, ObservationPrior::uniform(al),
                Classification::ns_not_local, false};
    }
    if (name == "uniform") {
        Alphabets al{2, 2, 2, 2};
        std::vector<Rational> t(al.cells(), Rational(1, 4));
        return {name, Strategy::validate(al, std::move(t)), ObservationPrior::uniform(al),
                Classification::local_ns, false};
    }
    throw UnknownExample(name);
}

inline const std::array<const char*, 4>& example_names() {
    static const std::array<const char*, 4> names{"ab3", "binary2", "pr-box", "uniform"};
    return names;
}

}  // namespace nsctl
