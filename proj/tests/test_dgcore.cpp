#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "barcat/chainspace.hpp"
#include "seeds.hpp"

using namespace barcat;
using FQ = RationalField;

TEST_CASE("diagonal bimodules validate") {
    FQ k;
    auto C2 = seeds::dual_numbers(k);
    auto C3 = seeds::square_zero_xy(k);
    auto D2 = diagonal_bimodule(C2);
    auto D3 = diagonal_bimodule(C3);
    CHECK(D2->validate().ok);
    CHECK(D3->validate().ok);
}

TEST_CASE("validate flags corrupted structure constants") {
    FQ k;
    auto C = seeds::square_zero_xy(k);
    auto x = C.gen_by_name("x"), y = C.gen_by_name("y");
    // corrupt Leibniz: y∘y = x is inconsistent with d
    C.set_comp(y, y, {{x, k.one()}});
    auto r = C.validate();
    CHECK(!r.ok);
    bool mentions = false;
    for (const auto& f : r.failures)
        if (f.find("Leibniz") != std::string::npos || f.find("degree") != std::string::npos) mentions = true;
    CHECK(mentions);
}

TEST_CASE("shift twists the differential and the left action") {
    FQ k;
    auto C = seeds::square_zero_xy(k);
    auto D = diagonal_bimodule(C);
    auto S = shift_bimodule(*D, 1);
    CHECK(S->validate().ok);
    auto back = shift_bimodule(*S, -1);
    CHECK(back->validate().ok);
    // shift by 0 is the identity on everything
    auto Z = shift_bimodule(*D, 0);
    for (std::int32_t j = 0; j < D->dim(); ++j) {
        CHECK(Z->space()->deg(j) == D->space()->deg(j));
        CHECK(svec_eq(k, Z->d().col(j), D->d().col(j)));
    }
    // degrees drop by one and d flips sign
    for (std::int32_t j = 0; j < D->dim(); ++j) {
        CHECK(S->space()->deg(j) == D->space()->deg(j) - 1);
        SVec<FQ> neg = D->d().col(j);
        for (auto& e : neg) e.second = k.neg(e.second);
        CHECK(svec_eq(k, S->d().col(j), neg));
    }
}

TEST_CASE("regular right module validates and chain products validate") {
    FQ k;
    auto triv = trivial_category(k);
    auto B = seeds::dual_numbers(k);
    auto M = seeds::regular_right_module(k, triv, B, "M");
    CHECK(M->validate().ok);

    ChainContext<FQ> ctx(k, 4);
    // M ⊗̄_B B  =  M ⊗_B bar(B): a right-free chain product
    auto MB = ctx.bar_tensor(M, ctx.diagonal(B), "M⊗̄B");
    CHECK(MB->validate().ok);
    // (M ⊗̄ B) ⊗̄ B
    auto MBB = ctx.bar_tensor(MB, ctx.diagonal(B), "M⊗̄B⊗̄B");
    CHECK(MBB->validate().ok);
    // components M ⊗ B^{⊗(n-2)} ⊗ B for 2 <= n <= 4 -> 4+8+16 = 28
    CHECK(MB->dim() == 28);
}
