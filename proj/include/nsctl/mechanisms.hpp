#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <vector>

#include "nsctl/core.hpp"
#include "nsctl/nosignaling.hpp"
#include "nsctl/polytope.hpp"

namespace nsctl {

struct RowNotNormalized : std::runtime_error {
    explicit RowNotNormalized(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require_distribution(const std::vector<Rational>& row, const std::string& name) {
    Rational sum = 0;
    for (const auto& v : row) {
        if (v < 0) throw RowNotNormalized(name + " has a negative entry");
        sum += v;
    }
    if (sum != 1) throw RowNotNormalized(name + " sums to " + format_rational(sum));
}

}  // namespace detail

/// Passive common randomness: W ~ pW independent of (A,B), then each agent
/// randomizes locally on (own observation, W).
struct PassiveMechanism {
    Alphabets alphabets;
    int nw = 1;
    std::vector<Rational> pw;                            // [w]
    std::vector<std::vector<std::vector<Rational>>> px;  // [w][a][x]
    std::vector<std::vector<std::vector<Rational>>> py;  // [w][b][y]

    void validate() const {
        alphabets.require_valid();
        if (nw < 1 || int(pw.size()) != nw || int(px.size()) != nw || int(py.size()) != nw)
            throw std::invalid_argument("mechanism shape does not match nW");
        detail::require_distribution(pw, "P(W)");
        for (int w = 0; w < nw; ++w) {
            if (int(px[w].size()) != alphabets.na || int(py[w].size()) != alphabets.nb)
                throw std::invalid_argument("mechanism shape does not match alphabets");
            for (int a = 0; a < alphabets.na; ++a)
                detail::require_distribution(px[w][a], "P(X|a,w)");
            for (int b = 0; b < alphabets.nb; ++b)
                detail::require_distribution(py[w][b], "P(Y|b,w)");
        }
    }
};

/// Active common randomness: W's distribution depends on the realized (A,B).
struct ActiveMechanism {
    Alphabets alphabets;
    int nw = 1;
    std::vector<std::vector<std::vector<Rational>>> pw_given_ab;  // [a][b][w]
    std::vector<std::vector<std::vector<Rational>>> px;           // [w][a][x]
    std::vector<std::vector<std::vector<Rational>>> py;           // [w][b][y]

    void validate() const {
        alphabets.require_valid();
        if (nw < 1 || int(pw_given_ab.size()) != alphabets.na || int(px.size()) != nw ||
            int(py.size()) != nw)
            throw std::invalid_argument("mechanism shape does not match nW");
        for (int a = 0; a < alphabets.na; ++a) {
            if (int(pw_given_ab[a].size()) != alphabets.nb)
                throw std::invalid_argument("mechanism shape does not match alphabets");
            for (int b = 0; b < alphabets.nb; ++b) {
                if (int(pw_given_ab[a][b].size()) != nw)
                    throw std::invalid_argument("mechanism shape does not match nW");
                detail::require_distribution(pw_given_ab[a][b], "P(W|a,b)");
            }
        }
        for (int w = 0; w < nw; ++w) {
            for (int a = 0; a < alphabets.na; ++a)
                detail::require_distribution(px[w][a], "P(X|a,w)");
            for (int b = 0; b < alphabets.nb; ++b)
                detail::require_distribution(py[w][b], "P(Y|b,w)");
        }
    }
};

/// P(x,y|a,b) = P(x|a) P(y|b).
inline Strategy induce_behavioral(const Alphabets& al,
                                  const std::vector<std::vector<Rational>>& px_given_a,
                                  const std::vector<std::vector<Rational>>& py_given_b) {
    al.require_valid();
    if (int(px_given_a.size()) != al.na || int(py_given_b.size()) != al.nb)
        throw std::invalid_argument("behavioral tables do not match alphabets");
    for (const auto& row : px_given_a) detail::require_distribution(row, "P(X|a)");
    for (const auto& row : py_given_b) detail::require_distribution(row, "P(Y|b)");
    std::vector<Rational> t(al.cells());
    for (int a = 0; a < al.na; ++a)
        for (int b = 0; b < al.nb; ++b)
            for (int x = 0; x < al.nx; ++x)
                for (int y = 0; y < al.ny; ++y)
                    t[al.index(a, b, x, y)] = px_given_a[a][x] * py_given_b[b][y];
    return Strategy::validate(al, std::move(t));
}

/// P(x,y|a,b) = sum_w P(w) P(x|a,w) P(y|b,w). Always no-signaling.
inline Strategy induce_passive(const PassiveMechanism& m) {
    m.validate();
    const Alphabets& al = m.alphabets;
    std::vector<Rational> t(al.cells(), Rational(0));
    for (int w = 0; w < m.nw; ++w)
        for (int a = 0; a < al.na; ++a)
            for (int b = 0; b < al.nb; ++b)
                for (int x = 0; x < al.nx; ++x)
                    for (int y = 0; y < al.ny; ++y)
                        t[al.index(a, b, x, y)] += m.pw[w] * m.px[w][a][x] * m.py[w][b][y];
    return Strategy::validate(al, std::move(t));
}

/// P(x,y|a,b) = sum_w P(w|a,b) P(x|a,w) P(y|b,w). No NS guarantee.
inline Strategy induce_active(const ActiveMechanism& m) {
    m.validate();
    const Alphabets& al = m.alphabets;
    std::vector<Rational> t(al.cells(), Rational(0));
    for (int a = 0; a < al.na; ++a)
        for (int b = 0; b < al.nb; ++b)
            for (int w = 0; w < m.nw; ++w)
                for (int x = 0; x < al.nx; ++x)
                    for (int y = 0; y < al.ny; ++y)
                        t[al.index(a, b, x, y)] +=
                            m.pw_given_ab[a][b][w] * m.px[w][a][x] * m.py[w][b][y];
    return Strategy::validate(al, std::move(t));
}

/// The joint P(w,a,b) = P(w|a,b) P(a,b) induced by an active mechanism
/// under a prior; feed to is_passive.
inline WJoint wjoint_from_active(const ActiveMechanism& m, const ObservationPrior& p) {
    m.validate();
    if (!(m.alphabets == p.alphabets())) throw AlphabetMismatch();
    const Alphabets& al = m.alphabets;
    std::vector<Rational> t(std::size_t(m.nw) * al.na * al.nb);
    for (int w = 0; w < m.nw; ++w)
        for (int a = 0; a < al.na; ++a)
            for (int b = 0; b < al.nb; ++b)
                t[(std::size_t(w) * al.na + a) * al.nb + b] =
                    m.pw_given_ab[a][b][w] * p.at(a, b);
    return WJoint(m.nw, al, std::move(t));
}

/// Passive mechanism read off a convex decomposition: W = atom index,
/// deterministic response tables per atom.
inline PassiveMechanism decomposition_to_mechanism(const LocalDecomposition& dec) {
    const Alphabets& al = dec.alphabets;
    PassiveMechanism m;
    m.alphabets = al;
    m.nw = int(dec.atoms.size());
    for (const auto& [weight, d] : dec.atoms) {
        m.pw.push_back(weight);
        std::vector<std::vector<Rational>> px(al.na, std::vector<Rational>(al.nx, 0));
        for (int a = 0; a < al.na; ++a) px[a][d.f[a]] = 1;
        std::vector<std::vector<Rational>> py(al.nb, std::vector<Rational>(al.ny, 0));
        for (int b = 0; b < al.nb; ++b) py[b][d.g[b]] = 1;
        m.px.push_back(std::move(px));
        m.py.push_back(std::move(py));
    }
    m.validate();
    return m;
}

/// The four-valued active mechanism from the construction reproducing the
/// binary counterexample. W indices here are 0-based (paper's w = index+1).
inline ActiveMechanism paper_active_mechanism() {
    Alphabets al{2, 2, 2, 2};
    ActiveMechanism m;
    m.alphabets = al;
    m.nw = 4;
    auto q = [](long n, long d) { return Rational(n, d); };
    m.pw_given_ab = {
        {{q(1, 3), q(1, 2), q(1, 6), q(0, 1)},     // (a,b) = (0,0)
         {q(1, 4), q(1, 4), q(1, 4), q(1, 4)}},    // (0,1)
        {{q(1, 2), q(1, 3), q(0, 1), q(1, 6)},     // (1,0)
         {q(1, 4), q(1, 4), q(1, 4), q(1, 4)}}};   // (1,1)
    // x = a xor 1 for w in {1,3}; x = a for w in {2,4}
    for (int w = 0; w < 4; ++w) {
        std::vector<std::vector<Rational>> px(2, std::vector<Rational>(2, 0));
        for (int a = 0; a < 2; ++a) px[a][(w % 2 == 0) ? (a ^ 1) : a] = 1;
        m.px.push_back(std::move(px));
    }
    // y: w=1 -> b; w=2 -> 0; w=3 -> 1; w=4 -> b xor 1
    for (int w = 0; w < 4; ++w) {
        std::vector<std::vector<Rational>> py(2, std::vector<Rational>(2, 0));
        for (int b = 0; b < 2; ++b) {
            int y = (w == 0) ? b : (w == 1) ? 0 : (w == 2) ? 1 : (b ^ 1);
            py[b][y] = 1;
        }
        m.py.push_back(std::move(py));
    }
    m.validate();
    return m;
}

/// One-way protocol: uniform passive W on {1,2,3}; for W=3 Venkat shares
/// (x, a) with Vivek, who plays y = x xor a.b.
struct OneWayProtocol {
    Strategy mixed;
    std::array<Strategy, 3> per_w;  // conditional P(x,y|a,b,w), w = index+1
};

inline OneWayProtocol one_way_protocol() {
    Alphabets al{2, 2, 2, 2};
    std::array<std::vector<Rational>, 3> t;
    for (auto& v : t) v.assign(al.cells(), Rational(0));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            t[0][al.index(a, b, a ^ 1, b)] = 1;  // w=1: x = a xor 1, y = b
            t[1][al.index(a, b, a, 0)] = 1;      // w=2: x = a, y = 0
            for (int x = 0; x < 2; ++x)          // w=3: x uniform, y = x xor a.b
                t[2][al.index(a, b, x, x ^ (a & b))] = Rational(1, 2);
        }
    std::vector<Rational> mix(al.cells());
    for (std::size_t i = 0; i < mix.size(); ++i)
        mix[i] = (t[0][i] + t[1][i] + t[2][i]) / 3;
    return {Strategy::validate(al, std::move(mix)),
            {Strategy::validate(al, std::move(t[0])), Strategy::validate(al, std::move(t[1])),
             Strategy::validate(al, std::move(t[2]))}};
}

/// Per-context outcome counts from a seeded simulation run.
struct EmpiricalTable {
    Alphabets alphabets;
    std::vector<std::uint64_t> counts;              // index (a,b,x,y)
    std::vector<std::uint64_t> trials_per_context;  // index (a,b)
    std::uint64_t seed = 0;
    std::string generator_name;

    std::uint64_t count(int a, int b, int x, int y) const {
        return counts[alphabets.index(a, b, x, y)];
    }
    std::uint64_t trials(int a, int b) const {
        return trials_per_context[std::size_t(a) * alphabets.nb + b];
    }
};

namespace detail {

// Bias-free sampling of rational distributions: draw a uniform integer
// below the common denominator by rejection on raw generator bits.
class ExactSampler {
public:
    explicit ExactSampler(std::uint64_t seed) : rng_(seed) {}

    static constexpr const char* name() { return "mt19937_64"; }

    BigInt uniform_below(const BigInt& bound) {
        if (bound <= 1) return 0;
        const unsigned bits = boost::multiprecision::msb(bound) + 1;
        while (true) {
            BigInt v = 0;
            unsigned got = 0;
            while (got < bits) {
                unsigned take = std::min(64u, bits - got);
                std::uint64_t word = rng_();
                if (take < 64) word &= (std::uint64_t(1) << take) - 1;
                v |= BigInt(word) << got;
                got += take;
            }
            if (v < bound) return v;
        }
    }

    /// Index into dist (entries summing to 1) by exact inverse CDF.
    int sample(const std::vector<Rational>& dist) {
        BigInt common = 1;
        for (const auto& r : dist) common = boost::multiprecision::lcm(common, denominator(r));
        BigInt u = uniform_below(common);
        BigInt cum = 0;
        for (std::size_t i = 0; i < dist.size(); ++i) {
            cum += numerator(dist[i]) * (common / denominator(dist[i]));
            if (u < cum) return int(i);
        }
        return int(dist.size()) - 1;  // unreachable for a normalized dist
    }

private:
    std::mt19937_64 rng_;
};

inline std::vector<Rational> prior_as_vector(const ObservationPrior& p) {
    const Alphabets& al = p.alphabets();
    std::vector<Rational> v;
    v.reserve(al.contexts());
    for (int a = 0; a < al.na; ++a)
        for (int b = 0; b < al.nb; ++b) v.push_back(p.at(a, b));
    return v;
}

template <typename DrawXY>
EmpiricalTable run_simulation(const Alphabets& al, const ObservationPrior& prior,
                              std::uint64_t trials, std::uint64_t seed, DrawXY&& draw_xy) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!(al == prior.alphabets())) throw AlphabetMismatch();
    ExactSampler sampler(seed);
    auto pv = prior_as_vector(prior);
    EmpiricalTable e{al, std::vector<std::uint64_t>(al.cells(), 0),
                     std::vector<std::uint64_t>(al.contexts(), 0), seed, ExactSampler::name()};
    for (std::uint64_t t = 0; t < trials; ++t) {
        int ab = sampler.sample(pv);
        int a = ab / al.nb, b = ab % al.nb;
        auto [x, y] = draw_xy(sampler, a, b);
        ++e.counts[al.index(a, b, x, y)];
        ++e.trials_per_context[std::size_t(a) * al.nb + b];
    }
    return e;
}

}  // namespace detail

inline EmpiricalTable simulate(const PassiveMechanism& m, const ObservationPrior& prior,
                               std::uint64_t trials, std::uint64_t seed) {
    m.validate();
    return detail::run_simulation(
        m.alphabets, prior, trials, seed, [&](detail::ExactSampler& s, int a, int b) {
            int w = s.sample(m.pw);
            return std::pair<int, int>{s.sample(m.px[w][a]), s.sample(m.py[w][b])};
        });
}

inline EmpiricalTable simulate(const ActiveMechanism& m, const ObservationPrior& prior,
                               std::uint64_t trials, std::uint64_t seed) {
    m.validate();
    return detail::run_simulation(
        m.alphabets, prior, trials, seed, [&](detail::ExactSampler& s, int a, int b) {
            int w = s.sample(m.pw_given_ab[a][b]);
            return std::pair<int, int>{s.sample(m.px[w][a]), s.sample(m.py[w][b])};
        });
}

/// Simulates the one-way protocol along its causal order: w, then x from
/// (a, w), then y from (b, w) plus the shared (x, a) on the w=3 branch.
inline EmpiricalTable simulate_one_way(const ObservationPrior& prior, std::uint64_t trials,
                                       std::uint64_t seed) {
    Alphabets al{2, 2, 2, 2};
    const std::vector<Rational> pw(3, Rational(1, 3));
    const std::vector<Rational> half(2, Rational(1, 2));
    return detail::run_simulation(
        al, prior, trials, seed, [&](detail::ExactSampler& s, int a, int b) {
            int w = s.sample(pw);
            int x, y;
            switch (w) {
                case 0: x = a ^ 1; y = b; break;
                case 1: x = a; y = 0; break;
                default: x = s.sample(half); y = x ^ (a & b); break;
            }
            return std::pair<int, int>{x, y};
        });
}

/// Per-context total variation between empirical frequencies and an exact
/// strategy. Contexts with zero trials are absent (nullopt), not zero.
struct TvReport {
    std::vector<std::optional<double>> per_context;  // index (a,b)
    double max_tv = 0.0;
};

inline TvReport empirical_tv(const EmpiricalTable& e, const Strategy& s) {
    if (!(e.alphabets == s.alphabets())) throw AlphabetMismatch();
    const Alphabets& al = e.alphabets;
    TvReport rep;
    rep.per_context.resize(al.contexts());
    for (int a = 0; a < al.na; ++a)
        for (int b = 0; b < al.nb; ++b) {
            std::uint64_t n = e.trials(a, b);
            if (n == 0) continue;
            double tv = 0.0;
            for (int x = 0; x < al.nx; ++x)
                for (int y = 0; y < al.ny; ++y)
                    tv += std::abs(double(e.count(a, b, x, y)) / double(n) -
                                   to_double(s.at(a, b, x, y)));
            tv /= 2.0;
            rep.per_context[std::size_t(a) * al.nb + b] = tv;
            rep.max_tv = std::max(rep.max_tv, tv);
        }
    return rep;
}

/// Emission format: header with seed and generator, then per-context counts.
inline void emit_empirical(std::ostream& out, const EmpiricalTable& e) {
    const Alphabets& al = e.alphabets;
    out << "empirical " << al.na << " " << al.nb << " " << al.nx << " " << al.ny
        << " seed=" << e.seed << " gen=" << e.generator_name << "\n";
    for (int a = 0; a < al.na; ++a)
        for (int b = 0; b < al.nb; ++b) {
            out << "context " << a << " " << b << " n=" << e.trials(a, b) << "\n";
            for (int x = 0; x < al.nx; ++x) {
                for (int y = 0; y < al.ny; ++y) out << (y ? " " : "") << e.count(a, b, x, y);
                out << "\n";
            }
        }
}

}  // namespace nsctl
