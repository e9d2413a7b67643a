#pragma once

#include "rational.hpp"

#include <variant>

namespace lrfkit::simplex {

// maximize c.x subject to M x <= m, x free. Exact two-phase tableau simplex with Bland's rule.

struct Optimal {
    Vec x;
    Vec y; // y >= 0, y M = c, y . m = c . x
    Rational value;
};

struct Infeasible {
    Vec y; // y >= 0, y M = 0, y . m < 0
};

struct Unbounded {
    Vec x;   // feasible point
    Vec ray; // M ray <= 0, c . ray > 0
};

using Result = std::variant<Optimal, Infeasible, Unbounded>;

namespace detail {

class Tableau {
public:
    // Column layout: x+ (n), x- (n), slack (r), artificial (one per flipped row).
    Tableau(const std::vector<Vec>& M, const Vec& m, std::size_t n) : rows_(M.size()), n_(n) {
        sign_.assign(rows_, 1);
        for (std::size_t i = 0; i < rows_; ++i)
            if (m[i] < 0) sign_[i] = -1;
        std::size_t flipped = 0;
        for (int s : sign_)
            if (s < 0) ++flipped;
        art_begin_ = 2 * n_ + rows_;
        cols_ = art_begin_ + flipped;
        t_.assign(rows_, Vec(cols_ + 1, Rational(0)));
        basis_.assign(rows_, 0);
        id_col_.assign(rows_, 0);
        std::size_t a = art_begin_;
        for (std::size_t i = 0; i < rows_; ++i) {
            const Rational s = sign_[i];
            for (std::size_t j = 0; j < n_; ++j) {
                if (M[i][j].is_zero()) continue;
                t_[i][j] = s * M[i][j];
                t_[i][n_ + j] = -t_[i][j];
            }
            t_[i][2 * n_ + i] = s;
            t_[i][cols_] = s * m[i];
            if (sign_[i] > 0) {
                basis_[i] = 2 * n_ + i;
                id_col_[i] = 2 * n_ + i;
            } else {
                t_[i][a] = 1;
                basis_[i] = a;
                id_col_[i] = a;
                ++a;
            }
        }
    }

    bool is_artificial(std::size_t j) const { return j >= art_begin_; }

    // Returns false when unbounded; unbounded_col receives the entering column.
    bool run(const Vec& cost, bool allow_artificial, std::size_t& unbounded_col) {
        for (;;) {
            Vec d = reduced_costs(cost);
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (!allow_artificial && is_artificial(j)) continue;
                if (d[j] > 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == cols_) return true;
            std::size_t leave = rows_;
            Rational best;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (t_[i][enter] <= 0) continue;
                Rational ratio = t_[i][cols_] / t_[i][enter];
                if (leave == rows_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == rows_) {
                unbounded_col = enter;
                return false;
            }
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        Rational p = t_[r][c];
        auto& pr = t_[r];
        for (auto& v : pr)
            if (!v.is_zero()) v /= p;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r || t_[i][c].is_zero()) continue;
            Rational f = t_[i][c];
            auto& row = t_[i];
            for (std::size_t j = 0; j <= cols_; ++j)
                if (!pr[j].is_zero()) row[j] -= f * pr[j];
        }
        basis_[r] = c;
    }

    Vec reduced_costs(const Vec& cost) const {
        Vec d(cost);
        for (std::size_t i = 0; i < rows_; ++i) {
            const Rational& cb = cost[basis_[i]];
            if (cb.is_zero()) continue;
            for (std::size_t j = 0; j < cols_; ++j)
                if (!t_[i][j].is_zero()) d[j] -= cb * t_[i][j];
        }
        return d;
    }

    // Removes basic artificials at zero level where a structural pivot exists.
    void drive_out_artificials() {
        for (std::size_t i = 0; i < rows_; ++i) {
            if (!is_artificial(basis_[i])) continue;
            for (std::size_t j = 0; j < art_begin_; ++j) {
                if (!t_[i][j].is_zero()) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    // Duals of the original (unflipped) rows: y_i = sign_i * (c_B B^-1)_i.
    Vec duals(const Vec& cost) const {
        Vec y(rows_, Rational(0));
        for (std::size_t r = 0; r < rows_; ++r) {
            const Rational& cb = cost[basis_[r]];
            if (cb.is_zero()) continue;
            for (std::size_t i = 0; i < rows_; ++i)
                if (!t_[r][id_col_[i]].is_zero()) y[i] += cb * t_[r][id_col_[i]];
        }
        for (std::size_t i = 0; i < rows_; ++i)
            if (sign_[i] < 0) y[i] = -y[i];
        return y;
    }

    Vec column_values() const {
        Vec z(cols_, Rational(0));
        for (std::size_t i = 0; i < rows_; ++i) z[basis_[i]] = t_[i][cols_];
        return z;
    }

    Vec to_x(const Vec& z) const {
        Vec x(n_);
        for (std::size_t j = 0; j < n_; ++j) x[j] = z[j] - z[n_ + j];
        return x;
    }

    Vec ray_direction(std::size_t enter) const {
        Vec z(cols_, Rational(0));
        z[enter] = 1;
        for (std::size_t i = 0; i < rows_; ++i) z[basis_[i]] = -t_[i][enter];
        return z;
    }

    std::size_t cols() const { return cols_; }
    std::size_t art_begin() const { return art_begin_; }
    std::size_t n() const { return n_; }

private:
    std::size_t rows_;
    std::size_t n_;
    std::size_t cols_ = 0;
    std::size_t art_begin_ = 0;
    std::vector<int> sign_;
    std::vector<Vec> t_;
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> id_col_;
};

} // namespace detail

/// M has one row per constraint, every row of length n; c has length n.
inline Result maximize(const std::vector<Vec>& M, const Vec& m, const Vec& c) {
    const std::size_t n = c.size();
    for (const auto& row : M)
        if (row.size() != n) throw InputError("simplex: row length mismatch");
    if (M.size() != m.size()) throw InputError("simplex: bound vector length mismatch");

    detail::Tableau tab(M, m, n);
    std::size_t dummy = 0;
    if (tab.art_begin() < tab.cols()) {
        Vec phase1(tab.cols(), Rational(0));
        for (std::size_t j = tab.art_begin(); j < tab.cols(); ++j) phase1[j] = -1;
        tab.run(phase1, true, dummy);
        Vec z = tab.column_values();
        Rational infeas = 0;
        for (std::size_t j = tab.art_begin(); j < tab.cols(); ++j) infeas += z[j];
        if (infeas > 0) return Infeasible{tab.duals(phase1)};
        tab.drive_out_artificials();
    }
    Vec cost(tab.cols(), Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        cost[j] = c[j];
        cost[n + j] = -c[j];
    }
    std::size_t enter = 0;
    if (!tab.run(cost, false, enter)) {
        Vec x = tab.to_x(tab.column_values());
        Vec ray = tab.to_x(tab.ray_direction(enter));
        return Unbounded{std::move(x), std::move(ray)};
    }
    Vec x = tab.to_x(tab.column_values());
    Rational value = dot(c, x);
    return Optimal{std::move(x), tab.duals(cost), std::move(value)};
}

} // namespace lrfkit::simplex
