#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "barcat/chainspace.hpp"
#include "seeds.hpp"

using namespace barcat;

using FQ = RationalField;

namespace {

template <class F>
std::map<Word, typename F::Elem> normal(const F& k, const TermVec<F>& tv) {
    std::map<Word, typename F::Elem> m;
    for (const auto& t : tv.terms) {
        auto it = m.find(t.w);
        if (it == m.end())
            m.emplace(t.w, t.c);
        else
            it->second = k.add(it->second, t.c);
    }
    for (auto it = m.begin(); it != m.end();) {
        if (k.is_zero(it->second))
            it = m.erase(it);
        else
            ++it;
    }
    return m;
}

template <class F>
bool same(const F& k, const TermVec<F>& a, const TermVec<F>& b) {
    auto ma = normal(k, a), mb = normal(k, b);
    if (ma.size() != mb.size()) return false;
    for (const auto& [w, c] : ma) {
        auto it = mb.find(w);
        if (it == mb.end() || !k.eq(c, it->second)) return false;
    }
    return true;
}

template <class F, class Op>
TermVec<F> chain_apply(const ChainOps<F>& ops, const ChainShape<F>&, const TermVec<F>& in, Op&& op) {
    TermVec<F> out;
    out.overflow = in.overflow;
    const F& k = ops.field();
    for (const auto& t : in.terms) out.merge(k, op(t.w), t.c);
    return out;
}

struct BarFixture {
    const FQ k;
    DGCategory<FQ> cat;
    ChainContext<FQ> ctx;
    ChainShape<FQ> one, two, three;

    BarFixture(DGCategory<FQ> c, int nbar) : k(), cat(std::move(c)), ctx(k, nbar) {
        one.nbar = two.nbar = three.nbar = nbar;
        auto b = ChainContext<FQ>::bar_seg(cat);
        one.segs = {b};
        two.segs = {b, b};
        three.segs = {b, b, b};
    }
};

}  // namespace

TEST_CASE("seed categories validate") {
    FQ k;
    CHECK(seeds::dual_numbers(k).validate().ok);
    CHECK(seeds::square_zero_xy(k).validate().ok);
    CHECK(seeds::exterior_line(k).validate().ok);
    CHECK(trivial_category(k).validate().ok);
}

TEST_CASE("bar differential squares to zero") {
    FQ k;
    for (auto mk : {+[](const FQ& kk) { return seeds::dual_numbers(kk); },
                    +[](const FQ& kk) { return seeds::square_zero_xy(kk); },
                    +[](const FQ& kk) { return seeds::exterior_line(kk); }}) {
        BarFixture fx(mk(k), 5);
        auto& ops = fx.ctx.ops();
        for (const auto* sh : {&fx.one, &fx.two}) {
            auto en = fx.ctx.enumerate(*sh);
            for (std::int32_t i = 0; i < en->space->dim(); ++i) {
                TermVec<FQ> d1 = ops.diff(*sh, en->space->word(i));
                REQUIRE(!d1.overflow);
                TermVec<FQ> d2 = chain_apply(ops, *sh, d1, [&](const Word& w) { return ops.diff(*sh, w); });
                CHECK(normal(k, d2).empty());
            }
        }
    }
}

TEST_CASE("counit laws and coassociativity") {
    FQ k;
    for (auto mk : {+[](const FQ& kk) { return seeds::dual_numbers(kk); },
                    +[](const FQ& kk) { return seeds::square_zero_xy(kk); }}) {
        BarFixture fx(mk(k), 5);
        auto& ops = fx.ctx.ops();
        auto en = fx.ctx.enumerate(fx.one);
        int checked = 0;
        for (std::int32_t i = 0; i < en->space->dim(); ++i) {
            const Word& w = en->space->word(i);
            TermVec<FQ> dl = ops.delta_at(fx.one, 0, w);
            if (dl.overflow) continue;
            // (tau ⊗ id) ∘ Delta = id and (id ⊗ tau) ∘ Delta = id
            TermVec<FQ> l = chain_apply(ops, fx.two, dl, [&](const Word& u) { return ops.tau_at(fx.two, 0, u); });
            TermVec<FQ> r = chain_apply(ops, fx.two, dl, [&](const Word& u) { return ops.tau_at(fx.two, 1, u); });
            TermVec<FQ> idv;
            idv.add(w, k.one());
            CHECK(same(k, l, idv));
            CHECK(same(k, r, idv));
            // coassociativity
            TermVec<FQ> a = chain_apply(ops, fx.two, dl, [&](const Word& u) { return ops.delta_at(fx.two, 0, u); });
            TermVec<FQ> b = chain_apply(ops, fx.two, dl, [&](const Word& u) { return ops.delta_at(fx.two, 1, u); });
            if (a.overflow || b.overflow) continue;
            CHECK(same(k, a, b));
            ++checked;
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("d(mu) = tau⊗id - id⊗tau and tau∘mu = 0") {
    FQ k;
    for (auto mk : {+[](const FQ& kk) { return seeds::dual_numbers(kk); },
                    +[](const FQ& kk) { return seeds::square_zero_xy(kk); }}) {
        BarFixture fx(mk(k), 5);
        auto& ops = fx.ctx.ops();
        auto en = fx.ctx.enumerate(fx.two);
        int checked = 0;
        for (std::int32_t i = 0; i < en->space->dim(); ++i) {
            const Word& w = en->space->word(i);
            TermVec<FQ> mu = ops.mu_at(fx.two, 0, w);
            TermVec<FQ> dw = ops.diff(fx.two, w);
            if (mu.overflow) continue;
            TermVec<FQ> mudw = chain_apply(ops, fx.two, dw, [&](const Word& u) { return ops.mu_at(fx.two, 0, u); });
            if (mudw.overflow) continue;
            // d∘mu + mu∘d   (deg mu = -1)
            TermVec<FQ> lhs = chain_apply(ops, fx.one, mu, [&](const Word& u) { return ops.diff(fx.one, u); });
            lhs.merge(k, std::move(mudw), k.one());
            TermVec<FQ> rhs = ops.tau_at(fx.two, 0, w);
            TermVec<FQ> r2 = ops.tau_at(fx.two, 1, w);
            rhs.merge(k, std::move(r2), k.neg(k.one()));
            CHECK(same(k, lhs, rhs));
            // tau ∘ mu = 0 (outputs have bar length >= 3)
            for (const auto& t : mu.terms) {
                SVec<FQ> lone;
                TermVec<FQ> tv = ops.tau_at(fx.one, 0, t.w, &lone);
                CHECK(tv.terms.empty());
                CHECK(lone.empty());
            }
            ++checked;
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("Delta∘mu = (id⊗mu)(Delta⊗id) + (mu⊗id)(id⊗Delta)") {
    FQ k;
    for (auto mk : {+[](const FQ& kk) { return seeds::dual_numbers(kk); },
                    +[](const FQ& kk) { return seeds::square_zero_xy(kk); }}) {
        BarFixture fx(mk(k), 5);
        auto& ops = fx.ctx.ops();
        auto en = fx.ctx.enumerate(fx.two);
        int checked = 0;
        for (std::int32_t i = 0; i < en->space->dim(); ++i) {
            const Word& w = en->space->word(i);
            TermVec<FQ> mu = ops.mu_at(fx.two, 0, w);
            TermVec<FQ> lhs = chain_apply(ops, fx.one, mu, [&](const Word& u) { return ops.delta_at(fx.one, 0, u); });
            TermVec<FQ> d0 = ops.delta_at(fx.two, 0, w);
            TermVec<FQ> t1 = chain_apply(ops, fx.three, d0, [&](const Word& u) { return ops.mu_at(fx.three, 1, u); });
            TermVec<FQ> d1 = ops.delta_at(fx.two, 1, w);
            TermVec<FQ> t2 = chain_apply(ops, fx.three, d1, [&](const Word& u) { return ops.mu_at(fx.three, 0, u); });
            if (mu.overflow || lhs.overflow || d0.overflow || t1.overflow || d1.overflow || t2.overflow) continue;
            TermVec<FQ> rhs = std::move(t1);
            rhs.merge(k, std::move(t2), k.one());
            CHECK(same(k, lhs, rhs));
            ++checked;
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("lambda: recursion matches the insertion formula and d-parity") {
    FQ k;
    for (auto mk : {+[](const FQ& kk) { return seeds::dual_numbers(kk); },
                    +[](const FQ& kk) { return seeds::square_zero_xy(kk); }}) {
        BarFixture fx(mk(k), 6);
        auto& ops = fx.ctx.ops();
        auto en = fx.ctx.enumerate(fx.one);
        for (int kk2 = 1; kk2 <= 3; ++kk2) {
            int checked = 0;
            for (std::int32_t i = 0; i < en->space->dim(); ++i) {
                const Word& w = en->space->word(i);
                TermVec<FQ> lam = ops.lambda_at(fx.one, 0, kk2, w);
                if (lam.overflow) continue;
                // d∘lambda_k - (-1)^k lambda_k∘d = lambda_{k-1} (k even) or 0
                TermVec<FQ> dl = chain_apply(ops, fx.one, lam, [&](const Word& u) { return ops.diff(fx.one, u); });
                TermVec<FQ> dw = ops.diff(fx.one, w);
                TermVec<FQ> ld = chain_apply(ops, fx.one, dw, [&](const Word& u) { return ops.lambda_at(fx.one, 0, kk2, u); });
                if (ld.overflow) continue;
                dl.merge(k, std::move(ld), kk2 % 2 == 0 ? k.neg(k.one()) : k.one());
                TermVec<FQ> rhs;
                if (kk2 % 2 == 0) rhs = ops.lambda_at(fx.one, 0, kk2 - 1, w);
                if (rhs.overflow) continue;
                CHECK(same(k, dl, rhs));
                ++checked;
            }
            CHECK(checked > 0);
        }
    }
}
