#pragma once

#include <sstream>

#include "barcat/chain.hpp"

namespace barcat {

// Provenance tags on Bimod.
enum : int { PROV_NONE = 0, PROV_DIAGONAL = 1, PROV_CHAIN = 2, PROV_HOM = 3 };

template <class F>
const DGCategory<F>* diagonal_of(const Bimod<F>& M) {
    return M.provenance_tag == PROV_DIAGONAL ? static_cast<const DGCategory<F>*>(M.provenance.get()) : nullptr;
}

template <class F>
const ChainShape<F>* chain_shape_of(const Bimod<F>& M) {
    return M.provenance_tag == PROV_CHAIN ? static_cast<const ChainShape<F>*>(M.provenance.get()) : nullptr;
}

// ---------------------------------------------------------------------------
// Context owning the truncation, the elementwise operators and the caches of
// enumerated chain spaces / product bimodules.

template <class F>
class ChainContext {
  public:
    ChainContext(const F& k, int nbar, std::size_t size_guard = 1u << 23)
        : k_(k), nbar_(nbar), guard_(size_guard), ops_(k) {}

    const F& field() const { return k_; }
    int nbar() const { return nbar_; }
    ChainOps<F>& ops() { return ops_; }
    const ChainOps<F>& ops() const { return ops_; }

    BimodPtr<F> diagonal(const DGCategory<F>& C) {
        auto it = diag_.find(&C);
        if (it != diag_.end()) return it->second;
        auto D = diagonal_bimodule(C);
        D->provenance = std::shared_ptr<void>(const_cast<DGCategory<F>*>(&C), [](void*) {});
        D->provenance_tag = PROV_DIAGONAL;
        diag_[&C] = D;
        return D;
    }

    // Flatten a bimodule into chain segments: chain-backed bimodules splice
    // their segments, diagonal bimodules vanish into the surrounding bars,
    // anything else is a leaf.
    std::vector<Seg<F>> flatten(const BimodPtr<F>& M) {
        if (diagonal_of(*M)) return {};
        if (const auto* sh = chain_shape_of(*M)) return sh->segs;
        Seg<F> s;
        s.bar = false;
        s.mod = M.get();
        leaf_keepalive_[M.get()] = M;
        return {s};
    }

    ChainShape<F> shape_of(const BimodPtr<F>& M) {
        if (const auto* sh = chain_shape_of(*M)) return *sh;
        ChainShape<F> sh;
        sh.nbar = nbar_;
        sh.segs = flatten(M);
        return sh;
    }

    static Seg<F> bar_seg(const DGCategory<F>& C) {
        Seg<F> s;
        s.bar = true;
        s.cat = &C;
        return s;
    }

    // M ⊗̄ N over the category between them.
    ChainShape<F> tensor_shape(const BimodPtr<F>& M, const BimodPtr<F>& N) {
        if (M->catR() != N->catL()) throw std::logic_error("bar tensor: middle categories differ");
        ChainShape<F> sh;
        sh.nbar = nbar_;
        auto a = flatten(M), b = flatten(N);
        sh.segs = a;
        sh.segs.push_back(bar_seg(*M->catR()));
        sh.segs.insert(sh.segs.end(), b.begin(), b.end());
        return sh;
    }

    // Full envelope of a bimodule morphism domain; `left`/`right` toggle the
    // bar factors (two-sided morphisms have both, module morphisms only the
    // right one, left-module morphisms only the left one). The middle stays a
    // single opaque segment; diagonal middles melt into the bars.
    ChainShape<F> envelope_shape(const BimodPtr<F>& X, bool left, bool right) {
        ChainShape<F> sh;
        sh.nbar = nbar_;
        if (left) sh.segs.push_back(bar_seg(*X->catL()));
        if (!diagonal_of(*X)) {
            Seg<F> s;
            s.bar = false;
            s.mod = X.get();
            leaf_keepalive_[X.get()] = X;
            sh.segs.push_back(s);
        }
        if (right) sh.segs.push_back(bar_seg(*X->catR()));
        return sh;
    }

    ChainShape<F> restricted(ChainShape<F> sh, bool left, bool right) {
        sh.stripL = left;
        sh.stripR = right;
        return sh;
    }

    // --- enumeration -----------------------------------------------------
    struct Enumerated {
        SpacePtr space;
        std::vector<int> lObj, rObj;
        ChainShape<F> shape;
    };
    using EnumPtr = std::shared_ptr<Enumerated>;

    EnumPtr enumerate(const ChainShape<F>& sh, std::optional<std::pair<int, int>> window = {}) {
        std::string key = shape_key(sh, window);
        auto it = spaces_.find(key);
        if (it != spaces_.end()) return it->second;
        auto out = std::make_shared<Enumerated>();
        out->shape = sh;
        out->space = std::make_shared<GradedSpace>(sh.describe());
        // leftmost boundary objects to try
        std::vector<int> anchors;
        if (!sh.segs.empty() && sh.segs[0].bar) {
            for (int o = 0; o < sh.segs[0].cat->num_objects(); ++o) anchors.push_back(o);
        } else {
            anchors.push_back(-1);  // implied by the first module element
        }
        Word w;
        for (int a : anchors) {
            w.assign(1, a < 0 ? 0u : static_cast<std::uint32_t>(a));
            dfs(sh, 0, a, a, w, *out, window);
        }
        auto shapeCopy = sh;
        out->space->printer = [shapeCopy](const Word& word) { return print_word(shapeCopy, word); };
        spaces_[key] = out;
        return out;
    }

    // Product bimodule with differential and outer actions.
    BimodPtr<F> chain_bimod(const ChainShape<F>& sh, const std::string& name) {
        std::string key = shape_key(sh, {});
        auto it = mods_.find(key);
        if (it != mods_.end()) return it->second;
        if (sh.stripL || sh.stripR) throw std::logic_error("product bimodules cannot be outer-stripped");
        if (sh.segs.empty()) throw std::logic_error("empty chain shape");
        const DGCategory<F>* cl = sh.segs.front().bar ? sh.segs.front().cat : sh.segs.front().mod->catL();
        const DGCategory<F>* cr = sh.segs.back().bar ? sh.segs.back().cat : sh.segs.back().mod->catR();
        auto en = enumerate(sh);
        auto B = std::make_shared<Bimod<F>>(k_, cl, cr, name);
        for (std::int32_t i = 0; i < en->space->dim(); ++i)
            B->add_elem(en->space->word(i), en->space->deg(i), en->lObj[i], en->rObj[i]);
        B->space()->printer = en->space->printer;
        B->init_maps();
        for (std::int32_t i = 0; i < en->space->dim(); ++i) {
            TermVec<F> dv = ops_.diff(sh, en->space->word(i));
            if (dv.overflow) throw std::logic_error("differential overflowed the bar budget");
            for (auto& t : dv.terms) B->d().add_entry(k_, i, B->space()->at(t.w), t.c);
            // outer actions
            for (std::int32_t g = 0; g < cl->num_gens(); ++g) {
                if (cl->gen(g).src != en->lObj[i]) continue;
                TermVec<F> r = act_left_word(sh, en->space->word(i), g);
                for (auto& t : r.terms) B->actL(g).add_entry(k_, i, B->space()->at(t.w), t.c);
            }
            for (std::int32_t g = 0; g < cr->num_gens(); ++g) {
                if (cr->gen(g).dst != en->rObj[i]) continue;
                TermVec<F> r = act_right_word(sh, en->space->word(i), g);
                for (auto& t : r.terms) B->actR(g).add_entry(k_, i, B->space()->at(t.w), t.c);
            }
        }
        B->d().finish(k_);
        for (std::int32_t g = 0; g < cl->num_gens(); ++g) B->actL(g).finish(k_);
        for (std::int32_t g = 0; g < cr->num_gens(); ++g) B->actR(g).finish(k_);
        auto shapePtr = std::make_shared<ChainShape<F>>(sh);
        B->provenance = shapePtr;
        B->provenance_tag = PROV_CHAIN;
        mods_[key] = B;
        return B;
    }

    BimodPtr<F> bar_tensor(const BimodPtr<F>& M, const BimodPtr<F>& N, const std::string& name) {
        return chain_bimod(tensor_shape(M, N), name);
    }

    // left action of a generator on a chain word (into the leftmost end)
    TermVec<F> act_left_word(const ChainShape<F>& sh, const Word& w, std::int32_t g) {
        TermVec<F> out;
        auto cur = decode(sh, w);
        const auto& gen = (sh.segs[0].bar ? sh.segs[0].cat : sh.segs[0].mod->catL())->gen(g);
        Word nw = w;
        nw[0] = static_cast<std::uint32_t>(gen.dst);
        if (!sh.segs[0].bar) {
            const auto* M = sh.segs[0].mod;
            std::int32_t m = static_cast<std::int32_t>(w[cur.offset[0]]);
            for (const auto& [mi, c] : M->actL(g).col(m)) {
                Word xw = nw;
                xw[cur.offset[0]] = static_cast<std::uint32_t>(mi);
                out.add(std::move(xw), c);
            }
        } else {
            // left action on the shifted bar component: twist (-1)^{(n-2) deg g}
            int n = cur.len[0] + sh.strips(0);
            auto tw = pow_sign(k_, static_cast<long>(n - 2) * gen.deg);
            std::int32_t h = static_cast<std::int32_t>(w[cur.offset[0]]);
            for (const auto& [hi, c] : sh.segs[0].cat->compose(g, h)) {
                Word xw = nw;
                xw[cur.offset[0]] = static_cast<std::uint32_t>(hi);
                out.add(std::move(xw), k_.mul(tw, c));
            }
        }
        return out;
    }

    TermVec<F> act_right_word(const ChainShape<F>& sh, const Word& w, std::int32_t g) {
        TermVec<F> out;
        auto cur = decode(sh, w);
        int last = sh.size() - 1;
        if (!sh.segs[last].bar) {
            const auto* M = sh.segs[last].mod;
            std::int32_t m = static_cast<std::int32_t>(w[cur.offset[last]]);
            for (const auto& [mi, c] : M->actR(g).col(m)) {
                Word xw = w;
                xw[cur.offset[last]] = static_cast<std::uint32_t>(mi);
                out.add(std::move(xw), c);
            }
        } else {
            std::int32_t h = static_cast<std::int32_t>(w[cur.offset[last] + cur.len[last] - 1]);
            for (const auto& [hi, c] : sh.segs[last].cat->compose(h, g)) {
                Word xw = w;
                xw[cur.offset[last] + cur.len[last] - 1] = static_cast<std::uint32_t>(hi);
                out.add(std::move(xw), c);
            }
        }
        return out;
    }

    static std::string print_word(const ChainShape<F>& sh, const Word& w) {
        auto cur = decode(sh, w);
        std::ostringstream os;
        for (int i = 0; i < sh.size(); ++i) {
            if (i) os << "|";
            if (sh.segs[i].bar) {
                if (cur.len[i] == 0) {
                    os << (sh.strips(i) == 2 ? "1,1" : "1");
                    continue;
                }
                if (sh.lead_stripped(i)) os << "1,";
                for (int t = 0; t < cur.len[i]; ++t) {
                    if (t) os << ",";
                    os << sh.segs[i].cat->gen(static_cast<std::int32_t>(w[cur.offset[i] + t])).name;
                }
                if (sh.trail_stripped(i)) os << ",1";
            } else {
                os << sh.segs[i].mod->space()->label(static_cast<std::int32_t>(w[cur.offset[i]]));
            }
        }
        return os.str();
    }

  private:
    void dfs(const ChainShape<F>& sh, int seg, int anchor, int current, Word& w, Enumerated& out,
             const std::optional<std::pair<int, int>>& window) {
        if (seg == sh.size()) {
            if (anchor < 0) return;  // degenerate with no object: skip (requires object)
            int deg = chain_degree(sh, w);
            if (window && (deg < window->first || deg > window->second)) return;
            if (out.space->dim() >= static_cast<std::int32_t>(guard_))
                throw BudgetError("chain space exceeds the configured size guard: " + sh.describe());
            out.space->add(w, deg);
            out.lObj.push_back(anchor);
            out.rObj.push_back(current < 0 ? anchor : current);
            return;
        }
        const Seg<F>& s = sh.segs[seg];
        if (!s.bar) {
            for (std::int32_t m = 0; m < s.mod->dim(); ++m) {
                if (current >= 0 && s.mod->lObj(m) != current) continue;
                int a2 = anchor < 0 ? s.mod->lObj(m) : anchor;
                if (anchor < 0) w[0] = static_cast<std::uint32_t>(a2);
                w.push_back(static_cast<std::uint32_t>(m));
                dfs(sh, seg + 1, a2, s.mod->rObj(m), w, out, window);
                w.pop_back();
                if (anchor < 0) w[0] = 0;
            }
            return;
        }
        for (int l = sh.min_core(seg); l <= sh.max_core(seg); ++l) {
            w.push_back(static_cast<std::uint32_t>(l));
            bar_dfs(sh, seg, 0, l, anchor, current, w, out, window);
            w.pop_back();
        }
    }

    void bar_dfs(const ChainShape<F>& sh, int seg, int t, int l, int anchor, int current, Word& w, Enumerated& out,
                 const std::optional<std::pair<int, int>>& window) {
        if (t == l) {
            dfs(sh, seg + 1, anchor, current, w, out, window);
            return;
        }
        const auto* cat = sh.segs[seg].cat;
        for (std::int32_t g = 0; g < cat->num_gens(); ++g) {
            if (current >= 0 && cat->gen(g).dst != current) continue;
            int a2 = anchor < 0 ? cat->gen(g).dst : anchor;
            if (anchor < 0) w[0] = static_cast<std::uint32_t>(a2);
            w.push_back(static_cast<std::uint32_t>(g));
            bar_dfs(sh, seg, t + 1, l, a2, cat->gen(g).src, w, out, window);
            w.pop_back();
            if (anchor < 0) w[0] = 0;
        }
    }

    std::string shape_key(const ChainShape<F>& sh, std::optional<std::pair<int, int>> window) const {
        std::ostringstream os;
        os << sh.nbar << "/" << sh.stripL << sh.stripR << "/";
        for (const auto& s : sh.segs) os << (s.bar ? "b" : "m") << static_cast<const void*>(s.bar ? (const void*)s.cat : (const void*)s.mod) << ";";
        if (window) os << "W" << window->first << ":" << window->second;
        return os.str();
    }

    const F& k_;
    int nbar_;
    std::size_t guard_;
    ChainOps<F> ops_;
    std::map<const DGCategory<F>*, BimodPtr<F>> diag_;
    std::map<std::string, EnumPtr> spaces_;
    std::map<std::string, BimodPtr<F>> mods_;
    std::map<const Bimod<F>*, BimodPtr<F>> leaf_keepalive_;
};

}  // namespace barcat
