#pragma once

// Small fixture algebras used across the test suites.

#include "barcat/bimodule.hpp"
#include "barcat/dgcat.hpp"

namespace barcat::seeds {

// k[e]/e^2, deg e = 0, d = 0.
template <class F>
DGCategory<F> dual_numbers(const F& k) {
    DGCategory<F> C(k, "k[e]");
    int o = C.add_object("*");
    auto u = C.add_gen(o, o, 0, "1");
    auto e = C.add_gen(o, o, 0, "e");
    C.set_unit(o, u);
    C.set_comp(e, e, {});
    return C;
}

// k<x,y>/(x^2, xy, yx, y^2), deg x = 0, deg y = -1, dy = x.
template <class F>
DGCategory<F> square_zero_xy(const F& k) {
    DGCategory<F> C(k, "k[x,y]");
    int o = C.add_object("*");
    auto u = C.add_gen(o, o, 0, "1");
    auto x = C.add_gen(o, o, 0, "x");
    auto y = C.add_gen(o, o, -1, "y");
    C.set_unit(o, u);
    C.set_d(y, {{x, k.one()}});
    C.set_comp(x, x, {});
    C.set_comp(x, y, {});
    C.set_comp(y, x, {});
    C.set_comp(y, y, {});
    return C;
}

// k[y]/y^2, deg y = -1, d = 0.
template <class F>
DGCategory<F> exterior_line(const F& k) {
    DGCategory<F> C(k, "k[y]");
    int o = C.add_object("*");
    auto u = C.add_gen(o, o, 0, "1");
    auto y = C.add_gen(o, o, -1, "y");
    C.set_unit(o, u);
    C.set_comp(y, y, {});
    return C;
}

// The category B viewed as a (triv, B)-bimodule: the regular right module.
template <class F>
BimodPtr<F> regular_right_module(const F& k, const DGCategory<F>& triv, const DGCategory<F>& B,
                                 const std::string& name) {
    auto M = std::make_shared<Bimod<F>>(k, &triv, &B, name);
    for (std::int32_t g = 0; g < B.num_gens(); ++g)
        M->add_elem(Word{static_cast<std::uint32_t>(g)}, B.gen(g).deg, 0, B.gen(g).src);
    M->space()->printer = [&B](const Word& w) { return "m:" + B.gen(static_cast<std::int32_t>(w[0])).name; };
    M->init_maps();
    for (std::int32_t g = 0; g < B.num_gens(); ++g) {
        for (const auto& [i, c] : B.d_gen(g)) M->d().add_entry(k, g, i, c);
        M->actL(triv.unit(0)).add_entry(k, g, g, k.one());
        for (std::int32_t a = 0; a < B.num_gens(); ++a)
            if (B.gen(a).dst == B.gen(g).src)
                for (const auto& [i, c] : B.compose(g, a)) M->actR(a).add_entry(k, g, i, c);
    }
    M->d().finish(k);
    M->actL(triv.unit(0)).finish(k);
    for (std::int32_t a = 0; a < B.num_gens(); ++a) M->actR(a).finish(k);
    return M;
}

}  // namespace barcat::seeds
