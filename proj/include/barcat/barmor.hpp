#pragma once

#include "barcat/chainspace.hpp"

namespace barcat {

// Which bar envelopes a morphism carries. Two-sided morphisms are the
// bimodule bar-category ones; Right covers right-module morphisms and the
// elements of right Hom objects; Left the mirror case.
enum class MorSide { Right, Left, Two };

template <class F>
class BarMorphism {
  public:
    BarMorphism() = default;

    static BarMorphism make(ChainContext<F>& ctx, MorSide side, BimodPtr<F> src, BimodPtr<F> dst, int degree) {
        BarMorphism f;
        f.ctx_ = &ctx;
        f.side_ = side;
        f.src_ = std::move(src);
        f.dst_ = std::move(dst);
        f.degree_ = degree;
        f.full_ = ctx.envelope_shape(f.src_, side != MorSide::Right, side != MorSide::Left);
        f.res_ = ctx.restricted(f.full_, side != MorSide::Right, side != MorSide::Left);
        f.dom_ = ctx.enumerate(f.res_);
        f.mat_ = GLMap<F>(f.dom_->space, f.dst_->space(), degree);
        return f;
    }

    template <class Fn>
    static BarMorphism build(ChainContext<F>& ctx, MorSide side, BimodPtr<F> src, BimodPtr<F> dst, int degree,
                             Fn&& column) {
        BarMorphism f = make(ctx, side, std::move(src), std::move(dst), degree);
        const F& k = ctx.field();
        for (std::int32_t j = 0; j < f.dom_->space->dim(); ++j) {
            SVec<F> v = column(f.dom_->space->word(j), j);
            svec_normalize(k, v);
            f.mat_.set_col(j, std::move(v));
        }
        return f;
    }

    bool valid() const { return ctx_ != nullptr; }
    ChainContext<F>& ctx() const { return *ctx_; }
    MorSide side() const { return side_; }
    const BimodPtr<F>& src() const { return src_; }
    const BimodPtr<F>& dst() const { return dst_; }
    int degree() const { return degree_; }
    const ChainShape<F>& full_shape() const { return full_; }
    const ChainShape<F>& restricted_shape() const { return res_; }
    const typename ChainContext<F>::EnumPtr& domain() const { return dom_; }
    GLMap<F>& mat() { return mat_; }
    const GLMap<F>& mat() const { return mat_; }

    // --- evaluation on a full-envelope word -----------------------------
    // Strips the free outer slots using the (twisted) outer linearity:
    //  φ((a1,..)|x|(..,bq)) = (-1)^{(nA-2)deg a1} (-1)^{deg a1 deg φ} a1.φ((1,..)|x|(..,1)).bq
    SVec<F> eval_full(const Word& w) const {
        const F& k = ctx_->field();
        Word rw = w;
        std::int32_t aGen = -1, bGen = -1;
        long twist = 0;
        if (side_ != MorSide::Right) {
            // left bar is segment 0
            auto c2 = decode(full_, rw);
            int len = c2.len[0];
            if (len < 1) throw std::logic_error("empty lead bar in envelope");
            aGen = static_cast<std::int32_t>(rw[c2.offset[0]]);
            int nA = len + full_.strips(0);
            twist += static_cast<long>(nA - 2 + degree_) * full_.segs[0].cat->gen(aGen).deg;
            Word nw;
            nw.insert(nw.end(), rw.begin(), rw.begin() + c2.offset[0] - 1);
            nw.push_back(static_cast<std::uint32_t>(len - 1));
            nw.insert(nw.end(), rw.begin() + c2.offset[0] + 1, rw.end());
            rw = std::move(nw);
        }
        if (side_ != MorSide::Left) {
            int last = full_.size() - 1;
            auto c2 = decode(full_, rw);
            int len = c2.len[last];
            if (len < 1) throw std::logic_error("empty trail bar in envelope");
            bGen = static_cast<std::int32_t>(rw[c2.offset[last] + len - 1]);
            Word nw;
            nw.insert(nw.end(), rw.begin(), rw.begin() + c2.offset[last] - 1);
            nw.push_back(static_cast<std::uint32_t>(len - 1));
            nw.insert(nw.end(), rw.begin() + c2.offset[last], rw.begin() + c2.offset[last] + len - 1);
            nw.insert(nw.end(), rw.begin() + c2.offset[last] + len, rw.end());
            rw = std::move(nw);
        }
        fix_anchor(res_, rw);
        std::int32_t idx = dom_->space->find(rw);
        if (idx < 0) return {};
        SVec<F> v = mat_.col(idx);
        if (v.empty()) return {};
        if (bGen >= 0 && !dst_->catR()->is_unit_gen(bGen))
            v = dst_->actR(bGen).apply(k, v);
        if (aGen >= 0 && !dst_->catL()->is_unit_gen(aGen))
            v = dst_->actL(aGen).apply(k, v);
        if (twist % 2 != 0)
            for (auto& e : v) e.second = k.neg(e.second);
        return v;
    }

    static void fix_anchor(const ChainShape<F>& sh, Word& w) {
        // recompute the leftmost boundary object after outer slots changed
        auto cur = decode(sh, w);
        for (int i = 0; i < sh.size(); ++i) {
            if (!sh.segs[i].bar) {
                w[0] = static_cast<std::uint32_t>(sh.segs[i].mod->lObj(static_cast<std::int32_t>(w[cur.offset[i]])));
                return;
            }
            if (cur.len[i] > 0) {
                w[0] = static_cast<std::uint32_t>(sh.segs[i].cat->gen(static_cast<std::int32_t>(w[cur.offset[i]])).dst);
                return;
            }
        }
        // fully degenerate: keep the existing anchor
    }

    // number of segments the full envelope occupies inside a larger chain
    int envelope_segment_count() const { return full_.size(); }

    // --- structural helpers ---------------------------------------------
    BarMorphism plus(const BarMorphism& o, const typename F::Elem& scale) const {
        BarMorphism f = *this;
        f.mat_ = mat_.plus(ctx_->field(), o.mat_, scale);
        return f;
    }
    BarMorphism scaled(const typename F::Elem& c) const {
        BarMorphism f = *this;
        f.mat_ = mat_.scaled(ctx_->field(), c);
        return f;
    }
    bool equals(const BarMorphism& o) const { return degree_ == o.degree_ && mat_.equals(ctx_->field(), o.mat_); }
    bool is_zero() const { return mat_.is_zero(ctx_->field()); }

  private:
    ChainContext<F>* ctx_ = nullptr;
    MorSide side_ = MorSide::Two;
    BimodPtr<F> src_, dst_;
    int degree_ = 0;
    ChainShape<F> full_, res_;
    typename ChainContext<F>::EnumPtr dom_;
    GLMap<F> mat_;
};

// ---------------------------------------------------------------------------
// Flows: sparse elements threaded through a sequence of chain operations.

template <class F>
struct Flow {
    ChainShape<F> sh;
    TermVec<F> tv;
};

template <class F, class Op>
Flow<F> flow_map(const F& k, Flow<F> in, ChainShape<F> outSh, Op&& op) {
    Flow<F> out;
    out.sh = std::move(outSh);
    out.tv.overflow = in.tv.overflow;
    for (auto& t : in.tv.terms) out.tv.merge(k, op(in.sh, t.w), t.c);
    return out;
}

template <class F>
Flow<F> flow_start(const ChainShape<F>& sh, const Word& w, const F& k) {
    Flow<F> f;
    f.sh = sh;
    f.tv.add(w, k.one());
    return f;
}

template <class F>
Flow<F> flow_delta(ChainContext<F>& ctx, Flow<F> in, int seg) {
    auto out_sh = ChainOps<F>::split_shape(in.sh, seg);
    return flow_map(ctx.field(), std::move(in), out_sh,
                    [&ctx, seg](const ChainShape<F>& s, const Word& w) { return ctx.ops().delta_at(s, seg, w); });
}

template <class F>
Flow<F> flow_mu(ChainContext<F>& ctx, Flow<F> in, int seg) {
    auto out_sh = ChainOps<F>::merge_shape(in.sh, seg);
    return flow_map(ctx.field(), std::move(in), out_sh,
                    [&ctx, seg](const ChainShape<F>& s, const Word& w) { return ctx.ops().mu_at(s, seg, w); });
}

template <class F>
Flow<F> flow_tau(ChainContext<F>& ctx, Flow<F> in, int seg) {
    auto out_sh = ChainOps<F>::erase_shape(in.sh, seg);
    return flow_map(ctx.field(), std::move(in), out_sh,
                    [&ctx, seg](const ChainShape<F>& s, const Word& w) { return ctx.ops().tau_at(s, seg, w); });
}

template <class F>
Flow<F> flow_lambda(ChainContext<F>& ctx, Flow<F> in, int seg, int kk) {
    auto out_sh = in.sh;
    return flow_map(ctx.field(), std::move(in), out_sh,
                    [&ctx, seg, kk](const ChainShape<F>& s, const Word& w) { return ctx.ops().lambda_at(s, seg, kk, w); });
}

template <class F>
Flow<F> flow_diff(ChainContext<F>& ctx, Flow<F> in) {
    auto out_sh = in.sh;
    return flow_map(ctx.field(), std::move(in), out_sh,
                    [&ctx](const ChainShape<F>& s, const Word& w) { return ctx.ops().diff(s, w); });
}

// Materialize the pinned lead/trail unit of a bar segment so that the word is
// laid out for the corresponding less-stripped shape. Sign-free: the content
// is a unit.
template <class F>
Word materialize_lead(const ChainShape<F>& sh, const Word& w, int seg, const ChainOps<F>& ops) {
    auto cur = decode(sh, w);
    int obj = ops.object_left_of_segment(sh, w, cur, seg);
    Word nw;
    nw.insert(nw.end(), w.begin(), w.begin() + cur.offset[seg] - 1);
    nw.push_back(static_cast<std::uint32_t>(cur.len[seg] + 1));
    nw.push_back(static_cast<std::uint32_t>(sh.segs[seg].cat->unit(obj)));
    nw.insert(nw.end(), w.begin() + cur.offset[seg], w.end());
    return nw;
}

template <class F>
Word materialize_trail(const ChainShape<F>& sh, const Word& w, int seg, const ChainOps<F>& ops) {
    auto cur = decode(sh, w);
    // object on the right boundary of the segment
    int obj;
    if (cur.len[seg] > 0)
        obj = sh.segs[seg].cat->gen(static_cast<std::int32_t>(w[cur.offset[seg] + cur.len[seg] - 1])).src;
    else
        obj = ops.object_left_of_segment(sh, w, cur, seg);
    Word nw;
    nw.insert(nw.end(), w.begin(), w.begin() + cur.offset[seg] - 1);
    nw.push_back(static_cast<std::uint32_t>(cur.len[seg] + 1));
    nw.insert(nw.end(), w.begin() + cur.offset[seg], w.begin() + cur.offset[seg] + cur.len[seg]);
    nw.push_back(static_cast<std::uint32_t>(sh.segs[seg].cat->unit(obj)));
    nw.insert(nw.end(), w.begin() + cur.offset[seg] + cur.len[seg], w.end());
    return nw;
}

// Apply a stored morphism to the segment range [seg, seg + count) of a chain,
// replacing it by the morphism's target module. Applies the Koszul prefix for
// the segments to the left and re-canonicalizes junctions. A diagonal target
// melts into a neighbour, contracted to the left when both sides exist.
template <class F>
Flow<F> flow_apply(ChainContext<F>& ctx, Flow<F> in, const BarMorphism<F>& f, int seg) {
    const F& k = ctx.field();
    const auto& env = f.full_shape();
    int count = env.size();
    bool diag_target = diagonal_of(*f.dst()) != nullptr;
    // target shape
    ChainShape<F> out_sh = in.sh;
    out_sh.segs.erase(out_sh.segs.begin() + seg, out_sh.segs.begin() + seg + count);
    bool lone_diag = diag_target && out_sh.segs.empty();
    if (!diag_target || lone_diag) {
        Seg<F> ms;
        ms.bar = false;
        ms.mod = f.dst().get();
        out_sh.segs.insert(out_sh.segs.begin() + seg, ms);
    }
    Flow<F> out;
    out.sh = out_sh;
    out.tv.overflow = in.tv.overflow;
    for (auto& t : in.tv.terms) {
        auto cur = decode(in.sh, t.w);
        // Koszul prefix across earlier segments
        long pre = 0;
        for (int i = 0; i < seg; ++i) pre += seg_degree(in.sh, i, t.w, cur);
        auto sgn = pow_sign(k, pre * f.degree());
        // extract the sub-word; coerce pinned ends to the envelope's layout
        Word sub;
        sub.push_back(0);  // anchor placeholder
        int from = cur.offset[seg] - (in.sh.segs[seg].bar ? 1 : 0);
        int lastSeg = seg + count - 1;
        int to = cur.offset[lastSeg] + cur.len[lastSeg];
        sub.insert(sub.end(), t.w.begin() + from, t.w.begin() + to);
        // shape of the subrange as sliced out of in.sh; boundary pinning that
        // came from the surrounding segments is carried by the outer strips
        ChainShape<F> subSh;
        subSh.nbar = in.sh.nbar;
        subSh.segs.assign(in.sh.segs.begin() + seg, in.sh.segs.begin() + seg + count);
        subSh.stripL = in.sh.segs[seg].bar && in.sh.lead_stripped(seg);
        subSh.stripR = in.sh.segs[lastSeg].bar && in.sh.trail_stripped(lastSeg);
        BarMorphism<F>::fix_anchor(subSh, sub);
        // coerce: if envelope expects a free lead but the sliced shape pins it
        if (env.segs.front().bar && !env.lead_stripped(0) && subSh.lead_stripped(0))
            sub = materialize_lead(subSh, sub, 0, ctx.ops());
        ChainShape<F> subSh2 = subSh;
        subSh2.stripL = false;
        if (env.segs.back().bar && !env.trail_stripped(count - 1) && subSh.trail_stripped(count - 1))
            sub = materialize_trail(subSh2, sub, count - 1, ctx.ops());
        SVec<F> val = f.eval_full(sub);
        if (val.empty()) continue;
        auto coef = k.mul(t.c, sgn);
        Word stub;
        stub.reserve(t.w.size());
        stub.insert(stub.end(), t.w.begin(), t.w.begin() + from);
        Word tail(t.w.begin() + to, t.w.end());
        if (diag_target && !lone_diag) {
            Word nw = stub;
            nw.insert(nw.end(), tail.begin(), tail.end());
            TermVec<F> t2;
            if (seg > 0)
                ctx.ops().absorb(std::move(nw), seg - 1, -1, val, coef, t2, out_sh,
                                 !in.sh.trail_stripped(seg - 1));
            else
                ctx.ops().absorb(std::move(nw), -1, 0, val, coef, t2, out_sh);
            for (auto& u : t2.terms) {
                BarMorphism<F>::fix_anchor(out_sh, u.w);
                out.tv.add(std::move(u.w), std::move(u.c));
            }
            continue;
        }
        // when the segment left of the spliced module is a bar whose trail
        // becomes pinned by the insertion, its explicit trail slot moves
        // through onto the new module element
        bool repin = seg > 0 && in.sh.segs[seg - 1].bar && !in.sh.trail_stripped(seg - 1) &&
                     out_sh.trail_stripped(seg - 1);
        for (const auto& [yi, c] : val) {
            Word nw = stub;
            nw.push_back(static_cast<std::uint32_t>(yi));
            nw.insert(nw.end(), tail.begin(), tail.end());
            TermVec<F> fixed;
            if (repin)
                ctx.ops().repin_trail(out_sh, std::move(nw), seg - 1, k.mul(coef, c), fixed);
            else
                fixed.add(std::move(nw), k.mul(coef, c));
            for (auto& u : fixed.terms) {
                BarMorphism<F>::fix_anchor(out_sh, u.w);
                out.tv.add(std::move(u.w), std::move(u.c));
            }
        }
    }
    return out;
}

// Splice a chain-backed middle segment into its constituent segments. The
// junction on the left re-canonicalizes with the shift twist of the spliced
// bar's lead.
template <class F>
Flow<F> flow_unpack(ChainContext<F>& ctx, Flow<F> in, int seg) {
    const F& k = ctx.field();
    const Bimod<F>* Y = in.sh.segs[seg].mod;
    const auto* ysh = chain_shape_of(*Y);
    if (!ysh) return in;  // leaf middles stay opaque
    ChainShape<F> out_sh = in.sh;
    out_sh.segs.erase(out_sh.segs.begin() + seg);
    out_sh.segs.insert(out_sh.segs.begin() + seg, ysh->segs.begin(), ysh->segs.end());
    bool convert = seg > 0 && in.sh.segs[seg - 1].bar && ysh->segs.front().bar;
    Flow<F> out;
    out.sh = out_sh;
    out.tv.overflow = in.tv.overflow;
    for (auto& t : in.tv.terms) {
        auto cur = decode(in.sh, t.w);
        std::int32_t yi = static_cast<std::int32_t>(t.w[cur.offset[seg]]);
        const Word& yw = Y->space()->word(yi);
        Word nw;
        nw.reserve(t.w.size() + yw.size());
        nw.insert(nw.end(), t.w.begin(), t.w.begin() + cur.offset[seg]);
        nw.insert(nw.end(), yw.begin() + 1, yw.end());  // drop Y's anchor
        nw.insert(nw.end(), t.w.begin() + cur.offset[seg] + 1, t.w.end());
        if (!convert) {
            out.tv.add(std::move(nw), t.c);
            continue;
        }
        // move the spliced bar's lead slot across the junction:
        //   [x (.., 1-pinned)] ⊗ [(c1, c2..) ⊗ ..]
        //     = (-1)^{(n-2) deg c1} [x (.., c1)] ⊗ [(1-pinned, c2..) ⊗ ..]
        auto ncur = decode(out_sh, nw);
        int bs = seg;  // spliced bar position in out_sh
        if (ncur.len[bs] < 1) throw std::logic_error("unpack: empty spliced lead bar");
        std::int32_t c1 = static_cast<std::int32_t>(nw[ncur.offset[bs]]);
        int n1 = ncur.len[bs] + (out_sh.trail_stripped(bs) ? 1 : 0);  // full length in Y's own shape
        auto tw = pow_sign(k, static_cast<long>(n1 - 2) * out_sh.segs[bs].cat->gen(c1).deg);
        // drop c1 from the bar
        Word xw;
        xw.reserve(nw.size());
        xw.insert(xw.end(), nw.begin(), nw.begin() + ncur.offset[bs] - 1);
        xw.push_back(static_cast<std::uint32_t>(ncur.len[bs] - 1));
        xw.insert(xw.end(), nw.begin() + ncur.offset[bs] + 1, nw.end());
        // extend the left bar's trail by c1 (its trail slot is free in out_sh)
        auto xcur = decode(out_sh, xw);
        int pb = seg - 1;
        Word fw;
        fw.reserve(xw.size() + 1);
        fw.insert(fw.end(), xw.begin(), xw.begin() + xcur.offset[pb] - 1);
        fw.push_back(static_cast<std::uint32_t>(xcur.len[pb] + 1));
        fw.insert(fw.end(), xw.begin() + xcur.offset[pb], xw.begin() + xcur.offset[pb] + xcur.len[pb]);
        fw.push_back(static_cast<std::uint32_t>(c1));
        fw.insert(fw.end(), xw.begin() + xcur.offset[pb] + xcur.len[pb], xw.end());
        out.tv.add(std::move(fw), k.mul(t.c, tw));
    }
    return out;
}

// Collect a finished flow into a target bimodule.
template <class F>
SVec<F> flow_collect(ChainContext<F>& ctx, const Flow<F>& in, const Bimod<F>& target, bool* overflow = nullptr) {
    const F& k = ctx.field();
    if (overflow) *overflow = *overflow || in.tv.overflow;
    SVec<F> out;
    const auto* tsh = chain_shape_of(target);
    for (const auto& t : in.tv.terms) {
        std::int32_t idx;
        if (tsh) {
            if (!(in.sh == *tsh)) throw std::logic_error("flow shape does not match the chain target " + target.name());
            idx = target.space()->at(t.w);
        } else {
            if (in.sh.size() != 1 || in.sh.segs[0].bar || in.sh.segs[0].mod != &target)
                throw std::logic_error("flow shape does not match the leaf target " + target.name());
            idx = static_cast<std::int32_t>(t.w[1]);
        }
        out.emplace_back(idx, t.c);
    }
    svec_normalize(k, out);
    return out;
}

// Coerce a restricted-envelope word to the full envelope layout.
template <class F>
Word coerce_to_full(ChainContext<F>& ctx, const ChainShape<F>& res, const ChainShape<F>& full, const Word& w) {
    Word out = w;
    ChainShape<F> cur_sh = res;
    if (res.stripL && full.segs.front().bar) {
        out = materialize_lead(cur_sh, out, 0, ctx.ops());
        cur_sh.stripL = false;
    }
    if (res.stripR && full.segs.back().bar) {
        out = materialize_trail(cur_sh, out, full.size() - 1, ctx.ops());
        cur_sh.stripR = false;
    }
    BarMorphism<F>::fix_anchor(full, out);
    return out;
}

// --- composition, identity, differential ----------------------------------

template <class F>
BarMorphism<F> bar_identity(ChainContext<F>& ctx, const BimodPtr<F>& X, MorSide side = MorSide::Two) {
    const F& k = ctx.field();
    auto f = BarMorphism<F>::make(ctx, side, X, X, 0);
    const auto& res = f.restricted_shape();
    const auto& full = f.full_shape();
    for (std::int32_t j = 0; j < f.domain()->space->dim(); ++j) {
        Word w = coerce_to_full(ctx, res, full, f.domain()->space->word(j));
        Flow<F> fl = flow_start(full, w, k);
        if (side != MorSide::Left) fl = flow_tau(ctx, std::move(fl), full.size() - 1);
        if (side != MorSide::Right) fl = flow_tau(ctx, std::move(fl), 0);
        bool ov = false;
        f.mat().set_col(j, flow_collect(ctx, fl, *X, &ov));
    }
    return f;
}

template <class F>
BarMorphism<F> bar_compose(ChainContext<F>& ctx, const BarMorphism<F>& g, const BarMorphism<F>& f) {
    if (f.dst().get() != g.src().get()) throw std::logic_error("bar_compose: target/source mismatch");
    if (f.side() != g.side()) throw std::logic_error("bar_compose: mixed sidedness");
    const F& k = ctx.field();
    MorSide side = f.side();
    auto h = BarMorphism<F>::make(ctx, side, f.src(), g.dst(), f.degree() + g.degree());
    const auto& res = h.restricted_shape();
    const auto& full = h.full_shape();
    bool overflow = false;
    for (std::int32_t j = 0; j < h.domain()->space->dim(); ++j) {
        Word w = coerce_to_full(ctx, res, full, h.domain()->space->word(j));
        Flow<F> fl = flow_start(full, w, k);
        if (side != MorSide::Left) fl = flow_delta(ctx, std::move(fl), full.size() - 1);
        if (side != MorSide::Right) fl = flow_delta(ctx, std::move(fl), 0);
        int from = side == MorSide::Right ? 0 : 1;
        fl = flow_apply(ctx, std::move(fl), f, from);
        fl = flow_apply(ctx, std::move(fl), g, 0);
        bool ov = false;
        SVec<F> col = flow_collect(ctx, fl, *g.dst(), &ov);
        overflow = overflow || ov;
        h.mat().set_col(j, std::move(col));
    }
    if (overflow) throw BudgetError("bar_compose exceeded the bar budget");
    return h;
}

template <class F>
BarMorphism<F> bar_differential(ChainContext<F>& ctx, const BarMorphism<F>& f) {
    const F& k = ctx.field();
    auto h = BarMorphism<F>::make(ctx, f.side(), f.src(), f.dst(), f.degree() + 1);
    const auto& res = h.restricted_shape();
    const auto& full = h.full_shape();
    auto sgn = pow_sign(k, f.degree());
    for (std::int32_t j = 0; j < h.domain()->space->dim(); ++j) {
        // d_dst ∘ f
        SVec<F> col = f.dst()->d().apply(k, f.mat().col(j));
        // -(±) f ∘ d_env
        Word w = coerce_to_full(ctx, res, full, h.domain()->space->word(j));
        TermVec<F> dw = ctx.ops().diff(full, w);
        if (dw.overflow) throw BudgetError("bar_differential exceeded the bar budget");
        for (const auto& t : dw.terms) {
            SVec<F> v = f.eval_full(t.w);
            svec_axpy(k, col, k.neg(k.mul(sgn, t.c)), v);
        }
        h.mat().set_col(j, std::move(col));
    }
    return h;
}

// Strict module/bimodule map -> bar morphism (precompose the counits).
template <class F>
BarMorphism<F> embed_strict(ChainContext<F>& ctx, const BimodPtr<F>& X, const BimodPtr<F>& Y, const GLMap<F>& s,
                            MorSide side = MorSide::Two) {
    if (s.src().get() != X->space().get() || s.dst().get() != Y->space().get())
        throw std::logic_error("embed_strict: map does not connect the given bimodules");
    const F& k = ctx.field();
    auto idX = bar_identity(ctx, X, side);
    auto f = BarMorphism<F>::make(ctx, side, X, Y, s.degree());
    for (std::int32_t j = 0; j < f.domain()->space->dim(); ++j)
        f.mat().set_col(j, s.apply(k, idX.mat().col(j)));
    return f;
}

}  // namespace barcat
