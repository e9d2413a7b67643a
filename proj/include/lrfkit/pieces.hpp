#pragma once

#include "loop.hpp"

namespace lrfkit {

/// A slice of a transition set: some of the 2n coordinates fixed, the rest constrained by residual.
struct Piece {
    std::vector<std::optional<Rational>> fixed;
    Polyhedron residual; // over the unfixed coordinates, in order

    std::vector<std::size_t> free_coords() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < fixed.size(); ++i)
            if (!fixed[i]) out.push_back(i);
        return out;
    }

    Constraint restrict(const Constraint& c) const {
        Constraint r{{}, c.bound, c.strict};
        for (std::size_t i = 0; i < fixed.size(); ++i) {
            if (fixed[i])
                r.bound -= c.coeffs[i] * *fixed[i];
            else
                r.coeffs.push_back(c.coeffs[i]);
        }
        return r;
    }

    Vec lift(const Vec& residual_point) const {
        Vec full(fixed.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < fixed.size(); ++i) full[i] = fixed[i] ? *fixed[i] : residual_point[k++];
        return full;
    }

    /// The piece as a polyhedron over all coordinates (fixed values as equalities).
    Polyhedron full() const {
        Polyhedron p(fixed.size());
        auto fc = free_coords();
        for (const auto& c : residual.rows()) {
            Vec v(fixed.size(), Rational(0));
            for (std::size_t k = 0; k < fc.size(); ++k) v[fc[k]] = c.coeffs[k];
            p.add({std::move(v), c.bound, c.strict});
        }
        for (std::size_t i = 0; i < fixed.size(); ++i)
            if (fixed[i]) p.add_eq(unit(fixed.size(), i), *fixed[i]);
        return p;
    }
};

inline Piece whole(const Polyhedron& P) { return {std::vector<std::optional<Rational>>(P.dim()), P}; }

namespace detail {

// Enumerates integer assignments of the coordinates in `split` (others stay free) using propagation.
inline bool enumerate_partial(const std::vector<IntRow>& rows, Box box, const std::vector<std::size_t>& split,
                              std::vector<Box>& out, std::size_t cap) {
    if (!propagate(rows, box)) return true;
    std::size_t pick = box.size();
    Integer best;
    for (std::size_t j : split) {
        if (!box[j].lo || !box[j].hi) return false;
        if (box[j].fixed()) continue;
        Integer w = *box[j].hi - *box[j].lo;
        if (pick == box.size() || w < best) {
            pick = j;
            best = w;
        }
    }
    if (pick == box.size()) {
        if (out.size() >= cap) return false;
        out.push_back(std::move(box));
        return true;
    }
    for (Integer v = *box[pick].lo; v <= *box[pick].hi; ++v) {
        Box child = box;
        child[pick].lo = v;
        child[pick].hi = v;
        if (!enumerate_partial(rows, std::move(child), split, out, cap)) return false;
    }
    return true;
}

} // namespace detail

/// Splits P (integer reading) by the integer values of the coordinates among `candidates` that
/// propagation bounds. Returns nullopt when nothing is bounded or the split exceeds cap.
inline std::optional<std::vector<Piece>> split_integer(const Piece& piece, const std::vector<std::size_t>& candidates,
                                                       std::size_t cap = 512) {
    auto rows = detail::integer_rows(piece.residual);
    Box box = full_box(piece.residual.dim());
    if (!detail::propagate(rows, box)) return std::vector<Piece>{};
    // map full coordinates to residual positions
    std::vector<std::size_t> pos(piece.fixed.size(), SIZE_MAX);
    std::size_t k = 0;
    for (std::size_t i = 0; i < piece.fixed.size(); ++i)
        if (!piece.fixed[i]) pos[i] = k++;
    std::vector<std::size_t> split;
    for (std::size_t c : candidates)
        if (pos[c] != SIZE_MAX && box[pos[c]].lo && box[pos[c]].hi) split.push_back(pos[c]);
    if (split.empty()) return std::nullopt;
    std::vector<Box> leaves;
    if (!detail::enumerate_partial(rows, box, split, leaves, cap)) return std::nullopt;
    std::vector<Piece> out;
    for (const auto& leaf : leaves) {
        std::vector<std::optional<Rational>> local(piece.residual.dim());
        for (std::size_t j : split) local[j] = Rational(*leaf[j].lo);
        Piece q;
        q.fixed = piece.fixed;
        for (std::size_t i = 0; i < piece.fixed.size(); ++i)
            if (pos[i] != SIZE_MAX && local[pos[i]]) q.fixed[i] = local[pos[i]];
        q.residual = piece.residual.restricted(local);
        out.push_back(std::move(q));
    }
    return out;
}

/// Proof evidence for one entailment: a Farkas certificate or a branch-and-bound tree.
struct Proof {
    std::string label;
    Piece piece;
    Constraint target; // over all coordinates
    std::optional<FarkasCertificate> farkas;
    std::shared_ptr<BranchTree> tree;
    bool vacuous = false; // residual empty, certificate proves infeasibility

    bool recheck() const {
        Constraint t = piece.restrict(target);
        if (farkas) {
            if (vacuous) return certifies_infeasible(piece.residual, *farkas);
            return certifies_entailment(piece.residual, t, *farkas);
        }
        if (tree) return certifies_integer_entailment(piece.residual, t, *tree);
        return false;
    }
};

struct PieceYes {
    Proof proof;
};
struct PieceNo {
    Vec point; // full coordinates
};
struct PieceUnknown {
    std::string reason;
};
using PieceResult = std::variant<PieceYes, PieceNo, PieceUnknown>;

/// Entailment of target over one piece. Integer reading uses branch and bound for fractional witnesses.
inline PieceResult entail_piece(const Piece& piece, const Constraint& target, bool integer, const std::string& label,
                                std::size_t bb_budget = 2000) {
    Constraint t = piece.restrict(target);
    auto res = entails(piece.residual, t);
    if (auto* e = std::get_if<Entailed>(&res)) return PieceYes{{label, piece, target, e->cert, nullptr, false}};
    if (auto* e = std::get_if<EmptyPremise>(&res)) return PieceYes{{label, piece, target, e->cert, nullptr, true}};
    Vec p = std::get<NotEntailed>(res).point;
    if (!integer || all_integral(p)) return PieceNo{piece.lift(p)};
    auto ir = entails_integer(piece.residual, t, bb_budget);
    if (auto* y = std::get_if<IntYes>(&ir)) return PieceYes{{label, piece, target, std::nullopt, y->tree, false}};
    if (auto* nn = std::get_if<IntNo>(&ir)) return PieceNo{piece.lift(nn->point)};
    return PieceUnknown{"branch-and-bound budget exhausted on " + label};
}

} // namespace lrfkit
