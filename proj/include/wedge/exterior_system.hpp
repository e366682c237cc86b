#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "wedge/form.hpp"

namespace wedge {

// Prescribes the exterior derivative of each element of an abstract
// coframe as a constant-coefficient 2-form (structure constants, plus any
// declared curvature terms).
struct StructureTable {
    std::vector<Form> d_coframe;
};

// Finitely generated exterior ideal on a chart or an abstract coframe.
// Generators have degree >= 1; 0-forms are out of scope.
class ExteriorSystem {
  public:
    ExteriorSystem(int dim, std::vector<Form> generators)
        : dim_(dim), abstract_(false), generators_(std::move(generators)) {
        validate();
    }

    ExteriorSystem(int dim, std::vector<Form> generators, StructureTable table)
        : dim_(dim), abstract_(true), generators_(std::move(generators)),
          structure_(std::move(table)) {
        validate();
        if (static_cast<int>(structure_->d_coframe.size()) != dim_)
            throw Error("structure table size must match the coframe dimension");
        for (const auto& f : structure_->d_coframe) {
            if (f.dim() != dim_ || f.degree() != 2)
                throw Error("structure table entries must be 2-forms on the coframe");
            require_constant(f);
        }
    }

    // Abstract coframe with no structure table: pointwise operations work,
    // differentiation does not.
    static ExteriorSystem abstract_without_structure(int dim, std::vector<Form> generators) {
        ExteriorSystem s(dim, std::move(generators));
        s.abstract_ = true;
        return s;
    }

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] bool is_abstract() const { return abstract_; }
    [[nodiscard]] const std::vector<Form>& generators() const { return generators_; }
    [[nodiscard]] const std::optional<StructureTable>& structure() const { return structure_; }

    // d of a form on this system's chart/coframe.
    [[nodiscard]] Form derivative(const Form& a) const {
        if (!abstract_) return exterior_d(a);
        if (!structure_) throw Error("abstract coframe without structure constants");
        require_constant(a);
        Form out(dim_, a.degree() + 1);
        for (const auto& [k, c] : a.terms()) {
            // d(theta^{k_1} /\ ... /\ theta^{k_p}), one slot at a time.
            for (std::size_t s = 0; s < k.size(); ++s) {
                Form piece(dim_, 0);
                piece.add_term({}, c);
                for (std::size_t t = 0; t < k.size(); ++t) {
                    if (t == s) {
                        piece = wedge(piece, structure_->d_coframe[k[t]]);
                    } else {
                        Form theta(dim_, 1);
                        theta.add_term({k[t]}, Poly::constant(dim_, Rational(1)));
                        piece = wedge(piece, theta);
                    }
                }
                out += piece;
            }
        }
        return out;
    }

  private:
    void validate() const {
        if (dim_ <= 0) throw Error("system dimension must be positive");
        for (const auto& g : generators_) {
            if (g.dim() != dim_) throw Error("generator chart dimension mismatch");
            if (g.degree() < 1) throw Error("degree-0 generators are not allowed");
        }
    }

    static void require_constant(const Form& f) {
        for (const auto& [k, c] : f.terms())
            if (!c.is_constant())
                throw Error("abstract coframe forms must have constant coefficients");
    }

    int dim_;
    bool abstract_;
    std::vector<Form> generators_;
    std::optional<StructureTable> structure_;
};

// Generators extended by their exterior derivatives; idempotent up to form
// equality.
[[nodiscard]] inline ExteriorSystem close_system(const ExteriorSystem& s) {
    std::vector<Form> gens = s.generators();
    for (const auto& g : s.generators()) {
        Form dg = s.derivative(g);
        if (dg.is_zero()) continue;
        bool present = false;
        for (const auto& have : gens)
            if (have == dg) { present = true; break; }
        if (!present) gens.push_back(std::move(dg));
    }
    if (s.is_abstract()) return ExteriorSystem(s.dim(), std::move(gens), *s.structure());
    return ExteriorSystem(s.dim(), std::move(gens));
}

struct FrobeniusResult {
    bool integrable;
    std::optional<Form> witness; // first nonzero d(omega^i) /\ omega^1 /\ ... /\ omega^r
};

// Frobenius involutivity of a Pfaffian system: integrable iff
// d(omega^i) /\ omega^1 /\ ... /\ omega^r = 0 for every i, exactly.
[[nodiscard]] inline FrobeniusResult frobenius_check(const ExteriorSystem& s) {
    const auto& gens = s.generators();
    for (const auto& g : gens)
        if (g.degree() != 1) throw Error("Frobenius check requires a Pfaffian system");
    if (gens.empty()) return {true, std::nullopt};

    Form product(s.dim(), 0);
    product.add_term({}, Poly::constant(s.dim(), Rational(1)));
    for (const auto& g : gens) product = wedge(product, g);
    if (product.is_zero())
        throw Error("generators are dependent on the generic locus");

    for (const auto& g : gens) {
        Form residual = wedge(s.derivative(g), product);
        if (!residual.is_zero()) return {false, std::move(residual)};
    }
    return {true, std::nullopt};
}

} // namespace wedge
