#pragma once

#include <vector>

#include "nsctl/rational.hpp"

namespace nsctl {

/// Outcome of an exact phase-1 feasibility solve for { A λ = b, λ >= 0 }.
/// Infeasible solves carry a Farkas vector y with yᵀA_j <= 0 for every
/// column j and yᵀb > 0.
struct Phase1Result {
    bool feasible = false;
    std::vector<Rational> solution;  // size n; a basic feasible solution
    std::vector<Rational> farkas;    // size m; infeasibility certificate
};

/// Phase-1 simplex over exact rationals with Bland's anti-cycling rule.
/// Dense tableau; intended for small LPs (paper instances: <= 37 rows,
/// <= 81 columns).
class Phase1Simplex {
public:
    // a is row-major m x n
    Phase1Simplex(std::size_t m, std::size_t n, std::vector<Rational> a,
                  std::vector<Rational> b)
        : m_(m), n_(n), a_(std::move(a)), b_(std::move(b)) {
        if (a_.size() != m_ * n_ || b_.size() != m_)
            throw std::invalid_argument("simplex: dimension mismatch");
    }

    Phase1Result solve() {
        // Flip rows with negative rhs so the artificial basis is feasible.
        row_sign_.assign(m_, 1);
        for (std::size_t i = 0; i < m_; ++i)
            if (b_[i] < 0) {
                row_sign_[i] = -1;
                b_[i] = -b_[i];
                for (std::size_t j = 0; j < n_; ++j) at(i, j) = -at(i, j);
            }

        // Tableau columns: n real, m artificial, then rhs.
        const std::size_t width = n_ + m_ + 1;
        tab_.assign(m_ * width, Rational(0));
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) tab_[i * width + j] = at(i, j);
            tab_[i * width + n_ + i] = 1;
            tab_[i * width + width - 1] = b_[i];
        }
        width_ = width;

        // Reduced-cost row for minimize sum(artificials): z_j = c_j - 1ᵀA_j.
        obj_.assign(width, Rational(0));
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t i = 0; i < m_; ++i) obj_[j] -= tcell(i, j);
        for (std::size_t i = 0; i < m_; ++i) obj_[width - 1] -= tcell(i, width - 1);

        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) basis_[i] = n_ + i;

        while (true) {
            // Bland: entering column = smallest index with negative reduced cost
            std::size_t enter = width;
            for (std::size_t j = 0; j + 1 < width; ++j)
                if (obj_[j] < 0) {
                    enter = j;
                    break;
                }
            if (enter == width) break;

            // Ratio test; ties broken by smallest basis index (Bland)
            std::size_t leave = m_;
            Rational best_ratio;
            for (std::size_t i = 0; i < m_; ++i) {
                const Rational& piv = tcell(i, enter);
                if (piv <= 0) continue;
                Rational ratio = tcell(i, width - 1) / piv;
                if (leave == m_ || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == m_)
                throw std::logic_error("phase-1 objective unbounded below");  // cannot happen
            pivot(leave, enter);
        }

        Phase1Result res;
        // Optimal phase-1 value = -(objective rhs cell)
        Rational zstar = -obj_[width - 1];
        if (zstar == 0) {
            res.feasible = true;
            res.solution.assign(n_, Rational(0));
            for (std::size_t i = 0; i < m_; ++i)
                if (basis_[i] < n_) res.solution[basis_[i]] = tcell(i, width - 1);
        } else {
            res.feasible = false;
            // Dual prices from artificial reduced costs: y_i = 1 - z_{art i},
            // then undo row sign flips.
            res.farkas.assign(m_, Rational(0));
            for (std::size_t i = 0; i < m_; ++i)
                res.farkas[i] = (Rational(1) - obj_[n_ + i]) * row_sign_[i];
        }
        return res;
    }

private:
    Rational& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    Rational& tcell(std::size_t i, std::size_t j) { return tab_[i * width_ + j]; }

    void pivot(std::size_t row, std::size_t col) {
        Rational inv = Rational(1) / tcell(row, col);
        for (std::size_t j = 0; j < width_; ++j) tcell(row, j) *= inv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row) continue;
            Rational factor = tcell(i, col);
            if (factor == 0) continue;
            for (std::size_t j = 0; j < width_; ++j)
                tcell(i, j) -= factor * tcell(row, j);
        }
        Rational factor = obj_[col];
        if (factor != 0)
            for (std::size_t j = 0; j < width_; ++j) obj_[j] -= factor * tcell(row, j);
        basis_[row] = col;
    }

    std::size_t m_, n_, width_ = 0;
    std::vector<Rational> a_, b_;
    std::vector<Rational> tab_, obj_;
    std::vector<int> row_sign_;
    std::vector<std::size_t> basis_;
};

inline Phase1Result solve_equality_feasibility(std::size_t m, std::size_t n,
                                               std::vector<Rational> a,
                                               std::vector<Rational> b) {
    return Phase1Simplex(m, n, std::move(a), std::move(b)).solve();
}

}  // namespace nsctl
