#pragma once

#include <cmath>
#include <optional>
#include <tuple>
#include <vector>

#include "nsctl/core.hpp"

namespace nsctl {

struct DegeneratePrior : std::runtime_error {
    DegeneratePrior(const std::string& what) : std::runtime_error(what) {}
};

/// One failed equality in a no-signaling or posterior check, with the exact
/// values on both sides.
struct NsViolation {
    Side side;     // whose action marginal (NS) / whose observation (posterior)
    int a, b;      // context of the lhs
    int alt;       // the alternative b (venkat) or a (vivek) compared against
    int action;    // the x (venkat) or y (vivek) where equality fails
    Rational lhs, rhs;
};

struct NsReport {
    bool holds = true;
    std::vector<NsViolation> violations;
};

/// Exact no-signaling check: P(x|a,b) constant in b, P(y|a,b) constant in a.
inline NsReport check_no_signaling(const Strategy& s) {
    const Alphabets& al = s.alphabets();
    NsReport rep;
    for (int a = 0; a < al.na; ++a) {
        auto ref = s.action_marginal(Side::venkat, a, 0);
        for (int b = 1; b < al.nb; ++b) {
            auto m = s.action_marginal(Side::venkat, a, b);
            for (int x = 0; x < al.nx; ++x)
                if (m[x] != ref[x])
                    rep.violations.push_back({Side::venkat, a, b, 0, x, m[x], ref[x]});
        }
    }
    for (int b = 0; b < al.nb; ++b) {
        auto ref = s.action_marginal(Side::vivek, 0, b);
        for (int a = 1; a < al.na; ++a) {
            auto m = s.action_marginal(Side::vivek, a, b);
            for (int y = 0; y < al.ny; ++y)
                if (m[y] != ref[y])
                    rep.violations.push_back({Side::vivek, a, b, 0, y, m[y], ref[y]});
        }
    }
    rep.holds = rep.violations.empty();
    return rep;
}

namespace detail {

struct JointMarginals {
    std::vector<Rational> pa, pb, pab;  // P(a), P(b), P(a,b)
    std::vector<Rational> pby, pax;     // P(b,y), P(a,x)
    std::vector<Rational> paby, pbax;   // P(a,b,y), P(b,a,x)
};

inline JointMarginals marginals(const JointDistribution& j) {
    const Alphabets& al = j.alphabets();
    JointMarginals m;
    m.pa.assign(al.na, 0);
    m.pb.assign(al.nb, 0);
    m.pab.assign(al.contexts(), 0);
    m.pby.assign(std::size_t(al.nb) * al.ny, 0);
    m.pax.assign(std::size_t(al.na) * al.nx, 0);
    m.paby.assign(std::size_t(al.na) * al.nb * al.ny, 0);
    m.pbax.assign(std::size_t(al.nb) * al.na * al.nx, 0);
    for (int a = 0; a < al.na; ++a)
        for (int b = 0; b < al.nb; ++b)
            for (int x = 0; x < al.nx; ++x)
                for (int y = 0; y < al.ny; ++y) {
                    const Rational& v = j.at(x, y, a, b);
                    m.pa[a] += v;
                    m.pb[b] += v;
                    m.pab[std::size_t(a) * al.nb + b] += v;
                    m.pby[std::size_t(b) * al.ny + y] += v;
                    m.pax[std::size_t(a) * al.nx + x] += v;
                    m.paby[(std::size_t(a) * al.nb + b) * al.ny + y] += v;
                    m.pbax[(std::size_t(b) * al.na + a) * al.nx + x] += v;
                }
    return m;
}

}  // namespace detail

/// Posterior check: P(a|b,y) = P(a|b) and P(b|a,x) = P(b|a), on events of
/// positive probability under the joint induced by the prior.
inline NsReport check_posterior(const Strategy& s, const ObservationPrior& p) {
    const Alphabets& al = s.alphabets();
    JointDistribution j = joint_from_prior(s, p);
    auto m = detail::marginals(j);
    for (int a = 0; a < al.na; ++a)
        if (m.pa[a] == 0)
            throw DegeneratePrior("P(a=" + std::to_string(a) + ") = 0; posterior undefined");
    for (int b = 0; b < al.nb; ++b)
        if (m.pb[b] == 0)
            throw DegeneratePrior("P(b=" + std::to_string(b) + ") = 0; posterior undefined");

    NsReport rep;
    // P(a|b,y) vs P(a|b): cross-multiplied, P(a,b,y) * P(b) vs P(a,b) * P(b,y)
    for (int b = 0; b < al.nb; ++b)
        for (int y = 0; y < al.ny; ++y) {
            const Rational& pby = m.pby[std::size_t(b) * al.ny + y];
            if (pby == 0) continue;
            for (int a = 0; a < al.na; ++a) {
                Rational lhs = m.paby[(std::size_t(a) * al.nb + b) * al.ny + y] / pby;
                Rational rhs = m.pab[std::size_t(a) * al.nb + b] / m.pb[b];
                if (lhs != rhs)
                    rep.violations.push_back({Side::vivek, a, b, 0, y, lhs, rhs});
            }
        }
    // P(b|a,x) vs P(b|a)
    for (int a = 0; a < al.na; ++a)
        for (int x = 0; x < al.nx; ++x) {
            const Rational& pax = m.pax[std::size_t(a) * al.nx + x];
            if (pax == 0) continue;
            for (int b = 0; b < al.nb; ++b) {
                Rational lhs = m.pbax[(std::size_t(b) * al.na + a) * al.nx + x] / pax;
                Rational rhs = m.pab[std::size_t(a) * al.nb + b] / m.pa[a];
                if (lhs != rhs)
                    rep.violations.push_back({Side::venkat, a, b, 0, x, lhs, rhs});
            }
        }
    rep.holds = rep.violations.empty();
    return rep;
}

/// Witness of the equivalence: under a full-support prior the posterior
/// condition holds iff no-signaling holds. Always returns true on valid input.
inline bool posterior_iff_ns(const Strategy& s, const ObservationPrior& p) {
    if (!p.full_support())
        throw DegeneratePrior("posterior_iff_ns requires a full-support prior");
    return check_no_signaling(s).holds == check_posterior(s, p).holds;
}

enum class CmiKind { x_b_given_a, y_a_given_b };

/// Exact factorization behind "CMI = 0": P(x|a,b) = P(x|a) on the support
/// (resp. P(y|a,b) = P(y|b)). Rational comparison, authoritative.
inline bool exact_factorization(const JointDistribution& j, CmiKind which) {
    const Alphabets& al = j.alphabets();
    auto m = detail::marginals(j);
    for (int a = 0; a < al.na; ++a)
        for (int b = 0; b < al.nb; ++b)
            for (int x = 0; x < al.nx; ++x)
                for (int y = 0; y < al.ny; ++y) {
                    const Rational& pab = m.pab[std::size_t(a) * al.nb + b];
                    if (pab == 0) continue;
                    if (which == CmiKind::x_b_given_a) {
                        // P(x,a,b) P(a) == P(x,a) P(a,b)
                        Rational pxab = 0;
                        for (int yy = 0; yy < al.ny; ++yy) pxab += j.at(x, yy, a, b);
                        if (pxab * m.pa[a] != m.pax[std::size_t(a) * al.nx + x] * pab)
                            return false;
                    } else {
                        Rational pyab = 0;
                        for (int xx = 0; xx < al.nx; ++xx) pyab += j.at(xx, y, a, b);
                        if (pyab * m.pb[b] != m.pby[std::size_t(b) * al.ny + y] * pab)
                            return false;
                    }
                }
    return true;
}

/// I(X;B|A) or I(Y;A|B) in nats, 0*log(0) = 0. Floating point, for reporting;
/// exact_factorization is the authoritative zero test.
inline double conditional_mutual_information(const JointDistribution& j, CmiKind which) {
    const Alphabets& al = j.alphabets();
    auto m = detail::marginals(j);
    double cmi = 0.0;
    if (which == CmiKind::x_b_given_a) {
        for (int a = 0; a < al.na; ++a)
            for (int b = 0; b < al.nb; ++b)
                for (int x = 0; x < al.nx; ++x) {
                    Rational pxab = 0;
                    for (int y = 0; y < al.ny; ++y) pxab += j.at(x, y, a, b);
                    if (pxab == 0) continue;
                    // P(x,b,a) * P(a) / (P(x,a) * P(b,a))
                    Rational ratio = (pxab * m.pa[a]) /
                                     (m.pax[std::size_t(a) * al.nx + x] *
                                      m.pab[std::size_t(a) * al.nb + b]);
                    cmi += to_double(pxab) * std::log(to_double(ratio));
                }
    } else {
        for (int b = 0; b < al.nb; ++b)
            for (int a = 0; a < al.na; ++a)
                for (int y = 0; y < al.ny; ++y) {
                    Rational pyab = 0;
                    for (int x = 0; x < al.nx; ++x) pyab += j.at(x, y, a, b);
                    if (pyab == 0) continue;
                    Rational ratio = (pyab * m.pb[b]) /
                                     (m.pby[std::size_t(b) * al.ny + y] *
                                      m.pab[std::size_t(a) * al.nb + b]);
                    cmi += to_double(pyab) * std::log(to_double(ratio));
                }
    }
    return cmi;
}

/// Joint distribution P(w,a,b) of a common-randomness variable with the
/// observations.
class WJoint {
public:
    WJoint(int nw, const Alphabets& al, std::vector<Rational> table)
        : nw_(nw), al_(al), table_(std::move(table)) {
        if (nw_ < 1) throw std::invalid_argument("nW must be >= 1");
        if (table_.size() != std::size_t(nw_) * al_.na * al_.nb)
            throw std::invalid_argument("WJoint size does not match (nW, nA, nB)");
        Rational sum = 0;
        for (const auto& v : table_) {
            if (v < 0) throw std::invalid_argument("negative WJoint entry");
            sum += v;
        }
        if (sum != 1) throw std::invalid_argument("WJoint does not sum to 1");
    }

    int nw() const { return nw_; }
    const Alphabets& alphabets() const { return al_; }

    const Rational& at(int w, int a, int b) const {
        return table_[(std::size_t(w) * al_.na + a) * al_.nb + b];
    }

private:
    int nw_;
    Alphabets al_;
    std::vector<Rational> table_;
};

struct PassivityResult {
    bool passive = true;
    // worst violating (w,a,b), by largest |P(w,a,b) - P(w)P(a,b)|
    std::optional<std::tuple<int, int, int>> worst;
    Rational worst_gap;
};

/// W is passive iff P(w,a,b) = P(w) P(a,b) for every entry, exactly.
inline PassivityResult is_passive(const WJoint& wj) {
    const Alphabets& al = wj.alphabets();
    std::vector<Rational> pw(wj.nw(), 0), pab(al.contexts(), 0);
    for (int w = 0; w < wj.nw(); ++w)
        for (int a = 0; a < al.na; ++a)
            for (int b = 0; b < al.nb; ++b) {
                pw[w] += wj.at(w, a, b);
                pab[std::size_t(a) * al.nb + b] += wj.at(w, a, b);
            }
    PassivityResult res;
    res.worst_gap = 0;
    for (int w = 0; w < wj.nw(); ++w)
        for (int a = 0; a < al.na; ++a)
            for (int b = 0; b < al.nb; ++b) {
                Rational gap = wj.at(w, a, b) - pw[w] * pab[std::size_t(a) * al.nb + b];
                if (gap < 0) gap = -gap;
                if (gap > 0) {
                    res.passive = false;
                    if (gap > res.worst_gap) {
                        res.worst_gap = gap;
                        res.worst = {w, a, b};
                    }
                }
            }
    return res;
}

}  // namespace nsctl
