#pragma once

#include <random>

#include "nsctl/core.hpp"
#include "nsctl/mechanisms.hpp"

// Random exact-rational instances for property tests. Entries are drawn as
// small integers and normalized, so all invariants hold by construction.
namespace testutil {

using namespace nsctl;

inline Strategy random_strategy(std::mt19937& rng, const Alphabets& al,
                                bool allow_zero = true) {
    std::uniform_int_distribution<int> draw(allow_zero ? 0 : 1, 6);
    std::vector<Rational> t(al.cells());
    for (int a = 0; a < al.na; ++a)
        for (int b = 0; b < al.nb; ++b) {
            long sum = 0;
            std::vector<long> raw(std::size_t(al.nx) * al.ny);
            for (auto& v : raw) {
                v = draw(rng);
                sum += v;
            }
            if (sum == 0) {
                raw[0] = 1;
                sum = 1;
            }
            std::size_t i = 0;
            for (int x = 0; x < al.nx; ++x)
                for (int y = 0; y < al.ny; ++y) t[al.index(a, b, x, y)] = Rational(raw[i++], sum);
        }
    return Strategy::validate(al, std::move(t));
}

inline ObservationPrior random_full_support_prior(std::mt19937& rng, const Alphabets& al) {
    std::uniform_int_distribution<int> draw(1, 6);
    std::vector<long> raw(al.contexts());
    long sum = 0;
    for (auto& v : raw) {
        v = draw(rng);
        sum += v;
    }
    std::vector<Rational> t(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) t[i] = Rational(raw[i], sum);
    return ObservationPrior::validate(al, std::move(t));
}

inline std::vector<Rational> random_distribution(std::mt19937& rng, int n) {
    std::uniform_int_distribution<int> draw(0, 6);
    std::vector<long> raw(n);
    long sum = 0;
    for (auto& v : raw) {
        v = draw(rng);
        sum += v;
    }
    if (sum == 0) {
        raw[0] = 1;
        sum = 1;
    }
    std::vector<Rational> t(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) t[i] = Rational(raw[i], sum);
    return t;
}

inline PassiveMechanism random_passive_mechanism(std::mt19937& rng, const Alphabets& al,
                                                 int max_nw = 5) {
    std::uniform_int_distribution<int> nw_draw(1, max_nw);
    PassiveMechanism m;
    m.alphabets = al;
    m.nw = nw_draw(rng);
    m.pw = random_distribution(rng, m.nw);
    for (int w = 0; w < m.nw; ++w) {
        std::vector<std::vector<Rational>> px, py;
        for (int a = 0; a < al.na; ++a) px.push_back(random_distribution(rng, al.nx));
        for (int b = 0; b < al.nb; ++b) py.push_back(random_distribution(rng, al.ny));
        m.px.push_back(std::move(px));
        m.py.push_back(std::move(py));
    }
    m.validate();
    return m;
}

}  // namespace testutil
