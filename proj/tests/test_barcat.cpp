#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "barcat/barmor.hpp"
#include "seeds.hpp"

using namespace barcat;
using FQ = RationalField;

namespace {

struct Fix {
    FQ k;
    DGCategory<FQ> triv, B;
    ChainContext<FQ> ctx;
    BimodPtr<FQ> M;

    explicit Fix(int nbar, bool signs = false)
        : triv(trivial_category(k)), B(signs ? seeds::square_zero_xy(k) : seeds::dual_numbers(k)), ctx(k, nbar) {
        M = seeds::regular_right_module(k, triv, B, "M");
    }
};

template <class F>
BarMorphism<F> random_morphism(ChainContext<F>& ctx, const BimodPtr<F>& X, const BimodPtr<F>& Y, int degree,
                               std::mt19937_64& rng) {
    const F& k = ctx.field();
    return BarMorphism<F>::build(ctx, MorSide::Two, X, Y, degree, [&](const Word&, std::int32_t j) {
        SVec<F> col;
        auto dom = ctx.enumerate(ctx.restricted(ctx.envelope_shape(X, true, true), true, true));
        int d = dom->space->deg(j) + degree;
        for (std::int32_t i = 0; i < Y->dim(); ++i) {
            if (Y->space()->deg(i) != d) continue;
            if (Y->lObj(i) != dom->lObj[j] || Y->rObj(i) != dom->rObj[j]) continue;
            long r = static_cast<long>(rng() % 7) - 3;
            if (r != 0) col.emplace_back(i, k.from_int(r));
        }
        return col;
    });
}

}  // namespace

TEST_CASE("bar identity is a unit for composition") {
    for (bool signs : {false, true}) {
        Fix fx(4, signs);
        auto idM = bar_identity(fx.ctx, fx.M);
        // d(id) = 0
        CHECK(bar_differential(fx.ctx, idM).is_zero());
        // id ∘ id = id
        auto ii = bar_compose(fx.ctx, idM, idM);
        CHECK(ii.equals(idM));
        std::mt19937_64 rng(42);
        auto f = random_morphism(fx.ctx, fx.M, fx.M, signs ? -1 : 0, rng);
        CHECK(bar_compose(fx.ctx, idM, f).equals(f));
        CHECK(bar_compose(fx.ctx, f, idM).equals(f));
    }
}

TEST_CASE("composition is associative and d is a derivation") {
    for (bool signs : {false, true}) {
        Fix fx(4, signs);
        std::mt19937_64 rng(7);
        auto AbarM = fx.ctx.bar_tensor(fx.ctx.diagonal(fx.triv), fx.M, "k⊗̄M");
        auto f = random_morphism(fx.ctx, fx.M, AbarM, -1, rng);
        auto g = random_morphism(fx.ctx, AbarM, AbarM, 1, rng);
        auto h = random_morphism(fx.ctx, AbarM, fx.M, 0, rng);
        auto a = bar_compose(fx.ctx, h, bar_compose(fx.ctx, g, f));
        auto b = bar_compose(fx.ctx, bar_compose(fx.ctx, h, g), f);
        CHECK(a.equals(b));
        // derivation: d(g∘f) = dg∘f + (-1)^{deg g} g∘df
        auto lhs = bar_differential(fx.ctx, bar_compose(fx.ctx, g, f));
        auto rhs = bar_compose(fx.ctx, bar_differential(fx.ctx, g), f)
                       .plus(bar_compose(fx.ctx, g, bar_differential(fx.ctx, f)),
                             pow_sign(fx.k, g.degree()));
        CHECK(lhs.equals(rhs));
        // d^2 = 0
        CHECK(bar_differential(fx.ctx, bar_differential(fx.ctx, f)).is_zero());
        CHECK(bar_differential(fx.ctx, bar_differential(fx.ctx, g)).is_zero());
    }
}

TEST_CASE("embed_strict is functorial and embeds the identity") {
    Fix fx(4, true);
    const FQ& k = fx.k;
    // strict endomorphism of M: multiplication by y (degree -1, left action by y
    // is not right-linear; use right action by a central-ish element instead).
    // Use s = action of x on the right: m -> m.x, a strict closed degree-0 map?
    // d(m.x) = dm.x + (-1)^{deg m} m.dx; dx = 0, so s is a chain map; it is
    // right-B-linear only if x is central, which holds in this algebra.
    auto x = fx.B.gen_by_name("x");
    GLMap<FQ> s(fx.M->space(), fx.M->space(), 0);
    for (std::int32_t j = 0; j < fx.M->dim(); ++j) s.set_col(j, fx.M->actR(x).col(j));
    auto es = embed_strict(fx.ctx, fx.M, fx.M, s);
    auto idM = bar_identity(fx.ctx, fx.M);
    CHECK(embed_strict(fx.ctx, fx.M, fx.M, GLMap<FQ>::identity(k, fx.M->space())).equals(idM));
    // embed(s)∘embed(s) = embed(s∘s) = 0 since x^2 = 0
    auto ss = bar_compose(fx.ctx, es, es);
    CHECK(ss.is_zero());
    CHECK(bar_differential(fx.ctx, es).is_zero());
}
