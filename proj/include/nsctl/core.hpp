#pragma once

#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nsctl/rational.hpp"

namespace nsctl {

/// Sizes of the observation alphabets (a, b) and action alphabets (x, y).
struct Alphabets {
    int na = 2, nb = 2, nx = 2, ny = 2;

    bool operator==(const Alphabets&) const = default;

    bool is_binary() const { return na == 2 && nb == 2 && nx == 2 && ny == 2; }
    std::size_t contexts() const { return std::size_t(na) * nb; }
    std::size_t cells() const { return contexts() * nx * ny; }

    std::size_t index(int a, int b, int x, int y) const {
        return ((std::size_t(a) * nb + b) * nx + x) * ny + y;
    }

    void require_valid() const {
        if (na < 1 || nb < 1 || nx < 1 || ny < 1)
            throw std::invalid_argument("alphabet sizes must be >= 1");
    }
};

enum class Side { venkat, vivek };

inline const char* side_name(Side s) {
    return s == Side::venkat ? "venkat" : "vivek";
}

struct NegativeEntry : std::runtime_error {
    int a, b, x, y;
    NegativeEntry(int a_, int b_, int x_, int y_)
        : std::runtime_error("negative entry at (a=" + std::to_string(a_) +
                             ",b=" + std::to_string(b_) + ",x=" + std::to_string(x_) +
                             ",y=" + std::to_string(y_) + ")"),
          a(a_), b(b_), x(x_), y(y_) {}
};

struct ContextNotNormalized : std::runtime_error {
    int a, b;
    Rational deficit;  // 1 - actual sum
    ContextNotNormalized(int a_, int b_, Rational d)
        : std::runtime_error("context (" + std::to_string(a_) + "," + std::to_string(b_) +
                             ") sums to 1 - (" + format_rational(d) + ")"),
          a(a_), b(b_), deficit(std::move(d)) {}
};

struct IndexOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct AlphabetMismatch : std::runtime_error {
    AlphabetMismatch() : std::runtime_error("alphabet sizes do not match") {}
};

/// Conditional joint distribution P(x,y|a,b) over finite alphabets.
/// Immutable after construction; every context sums to 1 exactly.
class Strategy {
public:
    static Strategy validate(const Alphabets& al, std::vector<Rational> table) {
        al.require_valid();
        if (table.size() != al.cells())
            throw std::invalid_argument("table size does not match alphabets");
        for (int a = 0; a < al.na; ++a)
            for (int b = 0; b < al.nb; ++b) {
                Rational sum = 0;
                for (int x = 0; x < al.nx; ++x)
                    for (int y = 0; y < al.ny; ++y) {
                        const Rational& v = table[al.index(a, b, x, y)];
                        if (v < 0) throw NegativeEntry(a, b, x, y);
                        sum += v;
                    }
                if (sum != 1) throw ContextNotNormalized(a, b, Rational(1) - sum);
            }
        return Strategy(al, std::move(table));
    }

    const Alphabets& alphabets() const { return al_; }

    const Rational& at(int a, int b, int x, int y) const {
        check_context(a, b);
        if (x < 0 || x >= al_.nx || y < 0 || y >= al_.ny)
            throw IndexOutOfRange("action index out of range");
        return table_[al_.index(a, b, x, y)];
    }

    const std::vector<Rational>& table() const { return table_; }

    bool operator==(const Strategy& o) const {
        return al_ == o.al_ && table_ == o.table_;
    }

    /// Action marginal for one side in context (a,b):
    /// venkat -> (sum_y P(x,y|a,b))_x ; vivek -> (sum_x P(x,y|a,b))_y.
    std::vector<Rational> action_marginal(Side side, int a, int b) const {
        check_context(a, b);
        if (side == Side::venkat) {
            std::vector<Rational> m(al_.nx);
            for (int x = 0; x < al_.nx; ++x)
                for (int y = 0; y < al_.ny; ++y) m[x] += table_[al_.index(a, b, x, y)];
            return m;
        }
        std::vector<Rational> m(al_.ny);
        for (int y = 0; y < al_.ny; ++y)
            for (int x = 0; x < al_.nx; ++x) m[y] += table_[al_.index(a, b, x, y)];
        return m;
    }

private:
    Strategy(Alphabets al, std::vector<Rational> table)
        : al_(al), table_(std::move(table)) {}

    void check_context(int a, int b) const {
        if (a < 0 || a >= al_.na || b < 0 || b >= al_.nb)
            throw IndexOutOfRange("context index out of range");
    }

    Alphabets al_;
    std::vector<Rational> table_;
};

/// Joint distribution P(a,b) of the observations. Sums to 1 exactly.
class ObservationPrior {
public:
    static ObservationPrior uniform(const Alphabets& al) {
        al.require_valid();
        std::vector<Rational> t(al.contexts(), Rational(1, std::size_t(al.na) * al.nb));
        return ObservationPrior(al, std::move(t), true);
    }

    static ObservationPrior validate(const Alphabets& al, std::vector<Rational> table) {
        al.require_valid();
        if (table.size() != al.contexts())
            throw std::invalid_argument("prior size does not match alphabets");
        Rational sum = 0;
        for (std::size_t i = 0; i < table.size(); ++i) {
            if (table[i] < 0)
                throw NegativeEntry(int(i) / al.nb, int(i) % al.nb, -1, -1);
            sum += table[i];
        }
        if (sum != 1)
            throw std::invalid_argument("prior does not sum to 1 (total " +
                                        format_rational(sum) + ")");
        return ObservationPrior(al, std::move(table), false);
    }

    const Alphabets& alphabets() const { return al_; }
    bool is_uniform_tag() const { return uniform_tag_; }

    const Rational& at(int a, int b) const {
        if (a < 0 || a >= al_.na || b < 0 || b >= al_.nb)
            throw IndexOutOfRange("prior index out of range");
        return table_[std::size_t(a) * al_.nb + b];
    }

    bool full_support() const {
        for (const auto& v : table_)
            if (v == 0) return false;
        return true;
    }

    bool operator==(const ObservationPrior& o) const {
        return al_ == o.al_ && table_ == o.table_;
    }

private:
    ObservationPrior(Alphabets al, std::vector<Rational> t, bool u)
        : al_(al), table_(std::move(t)), uniform_tag_(u) {}

    Alphabets al_;
    std::vector<Rational> table_;
    bool uniform_tag_;
};

/// Full joint P(x,y,a,b); grand total 1 exactly.
class JointDistribution {
public:
    JointDistribution(const Alphabets& al, std::vector<Rational> table)
        : al_(al), table_(std::move(table)) {
        if (table_.size() != al_.cells())
            throw std::invalid_argument("joint size does not match alphabets");
        Rational sum = 0;
        for (const auto& v : table_) {
            if (v < 0) throw std::invalid_argument("negative joint entry");
            sum += v;
        }
        if (sum != 1) throw std::invalid_argument("joint does not sum to 1");
    }

    const Alphabets& alphabets() const { return al_; }

    // stored (a,b,x,y)-major like Strategy; accessor is (x,y,a,b) per role
    const Rational& at(int x, int y, int a, int b) const {
        return table_[al_.index(a, b, x, y)];
    }

private:
    Alphabets al_;
    std::vector<Rational> table_;
};

/// Chain rule P(x,y,a,b) = P(x,y|a,b) P(a,b).
inline JointDistribution joint_from_prior(const Strategy& s, const ObservationPrior& p) {
    if (!(s.alphabets() == p.alphabets())) throw AlphabetMismatch();
    const Alphabets& al = s.alphabets();
    std::vector<Rational> t(al.cells());
    for (int a = 0; a < al.na; ++a)
        for (int b = 0; b < al.nb; ++b)
            for (int x = 0; x < al.nx; ++x)
                for (int y = 0; y < al.ny; ++y)
                    t[al.index(a, b, x, y)] = s.at(a, b, x, y) * p.at(a, b);
    return JointDistribution(al, std::move(t));
}

}  // namespace nsctl
