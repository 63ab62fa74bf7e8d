#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "barcat/graded.hpp"
#include "barcat/solve.hpp"

using namespace barcat;

using FQ = RationalField;
using FP = PrimeField;

namespace {

template <class F>
SpacePtr make_space(const std::string& name, const std::vector<int>& degs) {
    auto s = std::make_shared<GradedSpace>(name);
    for (std::size_t i = 0; i < degs.size(); ++i) s->add(Word{static_cast<std::uint32_t>(i)}, degs[i]);
    return s;
}

// dense multiply oracle
template <class F>
std::vector<std::vector<typename F::Elem>> dense(const F& k, const GLMap<F>& m) {
    std::vector<std::vector<typename F::Elem>> out(m.dst()->dim(), std::vector<typename F::Elem>(m.src()->dim(), k.zero()));
    for (std::int32_t j = 0; j < m.src()->dim(); ++j)
        for (const auto& [i, c] : m.col(j)) out[i][j] = c;
    return out;
}

}  // namespace

TEST_CASE("field arithmetic is exact") {
    FQ q;
    auto a = q.parse("2/3"), b = q.parse("-5/7");
    CHECK(q.eq(q.add(a, q.neg(a)), q.zero()));
    CHECK(q.to_string(q.mul(a, b)) == "-10/21");
    CHECK(q.to_string(q.inv(b)) == "-7/5");
    FP p(101);
    for (std::uint64_t v = 1; v < 101; ++v) CHECK(p.eq(p.mul(v, p.inv(v)), p.one()));
}

TEST_CASE("composition: identity, zero, dense oracle over F101") {
    FP k(101);
    auto X = make_space<FP>("X", {-1, -1, 0, 0, 0});
    GLMap<FP> f(X, X, -1), g(X, X, -1);
    std::mt19937_64 rng(12345);
    auto rnd = [&]() { return static_cast<std::uint64_t>(rng() % 101); };
    for (std::int32_t j = 0; j < X->dim(); ++j) {
        SVec<FP> cf, cg;
        for (std::int32_t i = 0; i < X->dim(); ++i) {
            if (X->deg(i) != X->deg(j) - 1) continue;
            cf.emplace_back(i, rnd());
            cg.emplace_back(i, rnd());
        }
        svec_normalize(k, cf);
        svec_normalize(k, cg);
        f.set_col(j, cf);
        g.set_col(j, cg);
    }
    auto id = GLMap<FP>::identity(k, X);
    CHECK(id.compose_after(k, f).equals(k, f));
    CHECK(f.compose_after(k, id).equals(k, f));
    auto z = GLMap<FP>::zero(X, X, -1);
    CHECK(z.compose_after(k, f).is_zero(k));
    auto gf = g.compose_after(k, f);
    auto dg = dense(k, g), df = dense(k, f), dgf = dense(k, gf);
    for (std::int32_t i = 0; i < X->dim(); ++i)
        for (std::int32_t j = 0; j < X->dim(); ++j) {
            FP::Elem acc = 0;
            for (std::int32_t t = 0; t < X->dim(); ++t) acc = k.add(acc, k.mul(dg[i][t], df[t][j]));
            CHECK(k.eq(acc, dgf[i][j]));
        }
}

TEST_CASE("graded cohomology of small complexes") {
    FQ k;
    SUBCASE("zero differential: H is everything") {
        auto X = make_space<FQ>("X", {0, 0, 1});
        GLMap<FQ> d(X, X, 1);
        auto H = cohomology(k, d);
        CHECK(H.dim[0] == 2);
        CHECK(H.dim[1] == 1);
    }
    SUBCASE("k --id--> k is acyclic") {
        auto X = make_space<FQ>("X", {0, 1});
        GLMap<FQ> d(X, X, 1);
        d.set_col(0, {{1, k.one()}});
        auto H = cohomology(k, d);
        CHECK(H.dim[0] == 0);
        CHECK(H.dim[1] == 0);
    }
    SUBCASE("Koszul-style square-zero differential") {
        // basis u (deg -1), v (deg -1), w (deg 0) with du = w, dv = w
        auto X = make_space<FQ>("X", {-1, -1, 0});
        GLMap<FQ> d(X, X, 1);
        d.set_col(0, {{2, k.one()}});
        d.set_col(1, {{2, k.one()}});
        auto H = cohomology(k, d);
        CHECK(H.dim[-1] == 1);  // u - v
        CHECK(H.dim[0] == 0);
    }
}

TEST_CASE("solve_boundary returns preimages and obstructions") {
    FQ k;
    auto X = make_space<FQ>("X", {-1, 0, 0, 1});
    GLMap<FQ> d(X, X, 1);
    d.set_col(0, {{1, k.one()}, {2, k.neg(k.one())}});  // d(a) = b - c
    // z = d(5a)
    SVec<FQ> z{{1, k.from_int(5)}, {2, k.from_int(-5)}};
    auto sol = solve_boundary(k, d, z, 0);
    REQUIRE(sol.solved);
    CHECK(svec_eq(k, d.apply(k, sol.preimage), z));
    // b + c is closed but not exact
    SVec<FQ> nz{{1, k.one()}, {2, k.one()}};
    auto s2 = solve_boundary(k, d, nz, 0);
    CHECK(!s2.solved);
    CHECK(!s2.obstruction.empty());
    // z = 0 -> y = 0
    auto s3 = solve_boundary(k, d, {}, 0);
    CHECK(s3.solved);
    CHECK(s3.preimage.empty());
}

TEST_CASE("iterated extraction preserves cohomology") {
    FP k(101);
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 20; ++trial) {
        // random complex: build d as strictly upper-triangular by degree, then
        // force d^2 = 0 by taking d = (boundary of a random filtered basis):
        // use a two-step complex A -> B -> C with d2∘d1 = 0 via d2 = projection
        int na = 3 + static_cast<int>(rng() % 3), nb = 4 + static_cast<int>(rng() % 3), nc = 3;
        std::vector<int> degs;
        for (int i = 0; i < na; ++i) degs.push_back(-1);
        for (int i = 0; i < nb; ++i) degs.push_back(0);
        for (int i = 0; i < nc; ++i) degs.push_back(1);
        auto X = make_space<FP>("X", degs);
        GLMap<FP> d(X, X, 1);
        // d1: A -> B random; d2: B -> C chosen in the left kernel of d1:
        // pick d2 random then subtract to satisfy d2 d1 = 0 over F101 by
        // construction: d2 := R - correction, easier: choose d1 with last rows
        // zero and d2 supported on those rows.
        int split = nb / 2;
        for (int j = 0; j < na; ++j) {
            SVec<FP> col;
            for (int i = 0; i < split; ++i) col.emplace_back(na + i, rng() % 101);
            svec_normalize(k, col);
            d.set_col(j, col);
        }
        for (int j = 0; j < nb - split; ++j) {
            SVec<FP> col;
            for (int i = 0; i < nc; ++i) col.emplace_back(na + nb + i, rng() % 101);
            svec_normalize(k, col);
            d.set_col(na + split + j, col);
        }
        REQUIRE(differential_squares_to_zero(k, d));
        auto H = cohomology(k, d);
        ReducedComplex<FP> red(k, d);
        auto H2 = cohomology(k, red.differential());
        for (int deg = -1; deg <= 1; ++deg) {
            std::int32_t h1 = H.dim.count(deg) ? H.dim[deg] : 0;
            std::int32_t h2 = H2.dim.count(deg) ? H2.dim[deg] : 0;
            CHECK(h1 == h2);
        }
        // transport: project then include is homotopic to the identity on H:
        // check that project∘include = id on the reduced complex
        for (std::int32_t i = 0; i < red.space()->dim(); ++i) {
            SVec<FP> v{{i, k.one()}};
            auto w = red.project(red.include(v));
            CHECK(svec_eq(k, w, v));
        }
    }
}
