#pragma once

#include <memory>
#include <string>
#include <vector>

#include "barcat/dgcat.hpp"
#include "barcat/graded.hpp"

namespace barcat {

// DG-bimodule over (catL, catR) with explicit basis, differential and action
// matrices. Right modules are bimodules with the trivial category on the
// left; plain complexes use it on both sides.
template <class F>
class Bimod {
  public:
    Bimod(const F& k, const DGCategory<F>* catL, const DGCategory<F>* catR, std::string name)
        : k_(&k), catL_(catL), catR_(catR), name_(std::move(name)) {
        space_ = std::make_shared<GradedSpace>(name_);
    }

    std::int32_t add_elem(const Word& w, int deg, int lObj, int rObj) {
        std::int32_t i = space_->add(w, deg);
        lObj_.push_back(lObj);
        rObj_.push_back(rObj);
        return i;
    }

    void init_maps() {
        d_ = GLMap<F>(space_, space_, 1);
        actL_.assign(catL_->num_gens(), GLMap<F>());
        actR_.assign(catR_->num_gens(), GLMap<F>());
        for (std::int32_t g = 0; g < catL_->num_gens(); ++g)
            actL_[g] = GLMap<F>(space_, space_, catL_->gen(g).deg);
        for (std::int32_t g = 0; g < catR_->num_gens(); ++g)
            actR_[g] = GLMap<F>(space_, space_, catR_->gen(g).deg);
    }

    const F& field() const { return *k_; }
    const DGCategory<F>* catL() const { return catL_; }
    const DGCategory<F>* catR() const { return catR_; }
    const SpacePtr& space() const { return space_; }
    const std::string& name() const { return name_; }
    std::int32_t dim() const { return space_->dim(); }
    int lObj(std::int32_t i) const { return lObj_[i]; }
    int rObj(std::int32_t i) const { return rObj_[i]; }

    GLMap<F>& d() { return d_; }
    const GLMap<F>& d() const { return d_; }
    GLMap<F>& actL(std::int32_t gen) { return actL_.at(gen); }
    const GLMap<F>& actL(std::int32_t gen) const { return actL_.at(gen); }
    GLMap<F>& actR(std::int32_t gen) { return actR_.at(gen); }
    const GLMap<F>& actR(std::int32_t gen) const { return actR_.at(gen); }

    SVec<F> act_left(const SVec<F>& a, const SVec<F>& m) const {  // a.m
        SVec<F> out;
        for (const auto& [g, c] : a) svec_axpy(*k_, out, c, actL_[g].apply(*k_, m));
        return out;
    }
    SVec<F> act_right(const SVec<F>& m, const SVec<F>& b) const {  // m.b
        SVec<F> out;
        for (const auto& [g, c] : b) svec_axpy(*k_, out, c, actR_[g].apply(*k_, m));
        return out;
    }

    // Any structured provenance (chain shapes attach themselves here).
    std::shared_ptr<void> provenance;
    int provenance_tag = 0;

    struct Report {
        bool ok = true;
        std::vector<std::string> failures;
        void fail(std::string m) {
            ok = false;
            if (failures.size() < 64) failures.push_back(std::move(m));
        }
    };

    Report validate() const {
        Report r;
        const F& k = *k_;
        auto sgn = [&](long e) { return DGCategory<F>::sign(k, e); };
        // d^2 = 0, degree, fiber preservation
        for (std::int32_t j = 0; j < dim(); ++j) {
            for (const auto& [i, c] : d_.col(j)) {
                if (lObj_[i] != lObj_[j] || rObj_[i] != rObj_[j]) r.fail(name_ + ": d moves " + space_->label(j) + " across fibers");
                if (space_->deg(i) != space_->deg(j) + 1) r.fail(name_ + ": d not degree +1 on " + space_->label(j));
            }
            if (!d_.apply(k, d_.col(j)).empty()) r.fail(name_ + ": d^2 != 0 on " + space_->label(j));
        }
        // left action: fiber bookkeeping, Leibniz, associativity, unit
        for (std::int32_t g = 0; g < catL_->num_gens(); ++g) {
            const auto& gen = catL_->gen(g);
            for (std::int32_t j = 0; j < dim(); ++j) {
                const auto& col = actL_[g].col(j);
                if (lObj_[j] != gen.src) {
                    if (!col.empty()) r.fail(name_ + ": left action of " + gen.name + " defined off its source fiber");
                    continue;
                }
                for (const auto& [i, c] : col) {
                    if (lObj_[i] != gen.dst || rObj_[i] != rObj_[j]) r.fail(name_ + ": left action of " + gen.name + " lands in wrong fiber");
                    if (space_->deg(i) != space_->deg(j) + gen.deg) r.fail(name_ + ": left action of " + gen.name + " has wrong degree");
                }
                // d(g.m) = dg.m + (-1)^{deg g} g.dm
                SVec<F> m{{j, k.one()}};
                SVec<F> lhs = d_.apply(k, col);
                SVec<F> rhs = act_left(catL_->d_gen(g), m);
                svec_axpy(k, rhs, sgn(gen.deg), actL_[g].apply(k, d_.col(j)));
                svec_axpy(k, lhs, k.neg(k.one()), rhs);
                if (!lhs.empty()) r.fail(name_ + ": left Leibniz fails on (" + gen.name + ", " + space_->label(j) + ")");
            }
        }
        for (std::int32_t g = 0; g < catR_->num_gens(); ++g) {
            const auto& gen = catR_->gen(g);
            for (std::int32_t j = 0; j < dim(); ++j) {
                const auto& col = actR_[g].col(j);
                if (rObj_[j] != gen.dst) {
                    if (!col.empty()) r.fail(name_ + ": right action of " + gen.name + " defined off its fiber");
                    continue;
                }
                for (const auto& [i, c] : col) {
                    if (rObj_[i] != gen.src || lObj_[i] != lObj_[j]) r.fail(name_ + ": right action of " + gen.name + " lands in wrong fiber");
                    if (space_->deg(i) != space_->deg(j) + gen.deg) r.fail(name_ + ": right action of " + gen.name + " has wrong degree");
                }
                // d(m.b) = dm.b + (-1)^{deg m} m.db
                SVec<F> m{{j, k.one()}};
                SVec<F> lhs = d_.apply(k, col);
                SVec<F> rhs = actR_[g].apply(k, d_.col(j));
                svec_axpy(k, rhs, sgn(space_->deg(j)), act_right(m, catR_->d_gen(g)));
                svec_axpy(k, lhs, k.neg(k.one()), rhs);
                if (!lhs.empty()) r.fail(name_ + ": right Leibniz fails on (" + gen.name + ", " + space_->label(j) + ")");
            }
        }
        // unit actions are the identity
        for (std::int32_t j = 0; j < dim(); ++j) {
            SVec<F> m{{j, k.one()}};
            SVec<F> u = actL_[catL_->unit(lObj_[j])].apply(k, m);
            if (!svec_eq(k, u, m)) r.fail(name_ + ": left unit does not fix " + space_->label(j));
            u = actR_[catR_->unit(rObj_[j])].apply(k, m);
            if (!svec_eq(k, u, m)) r.fail(name_ + ": right unit does not fix " + space_->label(j));
        }
        // associativity of the left action and compatibility of both actions
        for (std::int32_t g1 = 0; g1 < catL_->num_gens() && r.failures.size() < 64; ++g1)
            for (std::int32_t g2 = 0; g2 < catL_->num_gens(); ++g2) {
                if (catL_->gen(g2).dst != catL_->gen(g1).src) continue;
                // (g1∘g2).m = g1.(g2.m)
                SVec<F> comp = catL_->compose(g1, g2);
                for (std::int32_t j = 0; j < dim(); ++j) {
                    if (lObj_[j] != catL_->gen(g2).src) continue;
                    SVec<F> m{{j, k.one()}};
                    SVec<F> lhs = act_left(comp, m);
                    SVec<F> rhs = actL_[g1].apply(k, actL_[g2].apply(k, m));
                    svec_axpy(k, lhs, k.neg(k.one()), rhs);
                    if (!lhs.empty()) {
                        r.fail(name_ + ": left associativity fails on (" + catL_->gen(g1).name + ", " + catL_->gen(g2).name + ", " + space_->label(j) + ")");
                        break;
                    }
                }
            }
        for (std::int32_t g1 = 0; g1 < catR_->num_gens() && r.failures.size() < 64; ++g1)
            for (std::int32_t g2 = 0; g2 < catR_->num_gens(); ++g2) {
                if (catR_->gen(g1).dst != catR_->gen(g2).src) continue;
                // m.(g2∘g1) = (m.g2).g1
                SVec<F> comp = catR_->compose(g2, g1);
                for (std::int32_t j = 0; j < dim(); ++j) {
                    if (rObj_[j] != catR_->gen(g2).dst) continue;
                    SVec<F> m{{j, k.one()}};
                    SVec<F> lhs = act_right(m, comp);
                    SVec<F> rhs = actR_[g1].apply(k, actR_[g2].apply(k, m));
                    svec_axpy(k, lhs, k.neg(k.one()), rhs);
                    if (!lhs.empty()) {
                        r.fail(name_ + ": right associativity fails on (" + catR_->gen(g1).name + ", " + catR_->gen(g2).name + ", " + space_->label(j) + ")");
                        break;
                    }
                }
            }
        for (std::int32_t gl = 0; gl < catL_->num_gens() && r.failures.size() < 64; ++gl)
            for (std::int32_t gr = 0; gr < catR_->num_gens(); ++gr)
                for (std::int32_t j = 0; j < dim(); ++j) {
                    if (lObj_[j] != catL_->gen(gl).src || rObj_[j] != catR_->gen(gr).dst) continue;
                    SVec<F> m{{j, k.one()}};
                    SVec<F> lhs = actR_[gr].apply(k, actL_[gl].apply(k, m));
                    SVec<F> rhs = actL_[gl].apply(k, actR_[gr].apply(k, m));
                    svec_axpy(k, lhs, k.neg(k.one()), rhs);
                    if (!lhs.empty()) {
                        r.fail(name_ + ": actions do not commute on (" + catL_->gen(gl).name + ", " + catR_->gen(gr).name + ", " + space_->label(j) + ")");
                        break;
                    }
                }
        return r;
    }

  private:
    const F* k_;
    const DGCategory<F>* catL_;
    const DGCategory<F>* catR_;
    std::string name_;
    SpacePtr space_;
    std::vector<int> lObj_, rObj_;
    GLMap<F> d_;
    std::vector<GLMap<F>> actL_, actR_;
};

template <class F>
using BimodPtr = std::shared_ptr<Bimod<F>>;

// Diagonal bimodule of a category: fiber over (x, y) is hom(y, x), both
// actions by composition.
template <class F>
BimodPtr<F> diagonal_bimodule(const DGCategory<F>& C) {
    const F& k = C.field();
    auto M = std::make_shared<Bimod<F>>(k, &C, &C, C.name() + ".diag");
    for (std::int32_t g = 0; g < C.num_gens(); ++g)
        M->add_elem(Word{static_cast<std::uint32_t>(g)}, C.gen(g).deg, C.gen(g).dst, C.gen(g).src);
    M->space()->printer = [&C](const Word& w) { return C.gen(static_cast<std::int32_t>(w[0])).name; };
    M->init_maps();
    for (std::int32_t g = 0; g < C.num_gens(); ++g) {
        for (const auto& [i, c] : C.d_gen(g)) M->d().add_entry(k, g, i, c);
        for (std::int32_t a = 0; a < C.num_gens(); ++a) {
            if (C.gen(a).src == C.gen(g).dst) {  // a.m = a∘g
                for (const auto& [i, c] : C.compose(a, g)) M->actL(a).add_entry(k, g, i, c);
            }
            if (C.gen(a).dst == C.gen(g).src) {  // m.a = g∘a
                for (const auto& [i, c] : C.compose(g, a)) M->actR(a).add_entry(k, g, i, c);
            }
        }
    }
    M->d().finish(k);
    for (std::int32_t a = 0; a < C.num_gens(); ++a) {
        M->actL(a).finish(k);
        M->actR(a).finish(k);
    }
    return M;
}

// Shift M[n]: degrees drop by n, d becomes (-1)^n d, the left action twists
// by (-1)^{n deg a}, the right action is untouched.
template <class F>
BimodPtr<F> shift_bimodule(const Bimod<F>& M, int n) {
    const F& k = M.field();
    auto S = std::make_shared<Bimod<F>>(k, M.catL(), M.catR(), M.name() + "[" + std::to_string(n) + "]");
    for (std::int32_t i = 0; i < M.dim(); ++i)
        S->add_elem(M.space()->word(i), M.space()->deg(i) - n, M.lObj(i), M.rObj(i));
    S->space()->printer = M.space()->printer;
    S->init_maps();
    auto sgn = [&](long e) { return DGCategory<F>::sign(k, e); };
    for (std::int32_t j = 0; j < M.dim(); ++j) {
        for (const auto& [i, c] : M.d().col(j)) S->d().add_entry(k, j, i, k.mul(sgn(n), c));
        for (std::int32_t a = 0; a < M.catL()->num_gens(); ++a)
            for (const auto& [i, c] : M.actL(a).col(j))
                S->actL(a).add_entry(k, j, i, k.mul(sgn(static_cast<long>(n) * M.catL()->gen(a).deg), c));
        for (std::int32_t a = 0; a < M.catR()->num_gens(); ++a)
            for (const auto& [i, c] : M.actR(a).col(j)) S->actR(a).add_entry(k, j, i, c);
    }
    S->d().finish(k);
    for (std::int32_t a = 0; a < M.catL()->num_gens(); ++a) S->actL(a).finish(k);
    for (std::int32_t a = 0; a < M.catR()->num_gens(); ++a) S->actR(a).finish(k);
    return S;
}

}  // namespace barcat
