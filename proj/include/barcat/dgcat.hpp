#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "barcat/graded.hpp"

namespace barcat {

// Finite DG-category given by structure constants. hom(a,b) is the space of
// arrows a -> b; composition comp(g, f) = g∘f needs dst(f) = src(g). The
// diagonal bimodule fiber over (x, y) is hom(y, x).
template <class F>
class DGCategory {
  public:
    struct Gen {
        int src, dst;
        int deg;
        std::string name;
    };

    DGCategory(const F& k, std::string name) : k_(&k), name_(std::move(name)) {}

    int add_object(const std::string& obj) {
        objects_.push_back(obj);
        return static_cast<int>(objects_.size()) - 1;
    }

    std::int32_t add_gen(int src, int dst, int deg, const std::string& gname) {
        Gen g{src, dst, deg, gname};
        gens_.push_back(g);
        d_.push_back({});
        std::int32_t id = static_cast<std::int32_t>(gens_.size()) - 1;
        by_name_[gname] = id;
        return id;
    }

    void set_unit(int obj, std::int32_t gen) {
        if (static_cast<std::size_t>(obj) >= objects_.size()) throw std::logic_error("bad object");
        if (units_.size() < objects_.size()) units_.resize(objects_.size(), -1);
        units_[obj] = gen;
    }

    void set_d(std::int32_t gen, SVec<F> v) { d_.at(gen) = std::move(v); }

    void set_comp(std::int32_t g, std::int32_t f, SVec<F> v) {  // g∘f
        comp_[key(g, f)] = std::move(v);
    }

    // --- accessors ---
    const F& field() const { return *k_; }
    const std::string& name() const { return name_; }
    int num_objects() const { return static_cast<int>(objects_.size()); }
    const std::string& object_name(int o) const { return objects_[o]; }
    std::int32_t num_gens() const { return static_cast<std::int32_t>(gens_.size()); }
    const Gen& gen(std::int32_t i) const { return gens_[i]; }
    std::int32_t unit(int obj) const { return units_.at(obj); }
    bool is_unit_gen(std::int32_t g) const { return units_.at(gens_[g].src) == g; }
    std::int32_t gen_by_name(const std::string& n) const {
        auto it = by_name_.find(n);
        return it == by_name_.end() ? -1 : it->second;
    }

    const SVec<F>& d_gen(std::int32_t g) const { return d_.at(g); }

    // g∘f as a sparse combination of generators (empty when zero)
    SVec<F> compose(std::int32_t g, std::int32_t f) const {
        if (gens_[f].dst != gens_[g].src) throw std::logic_error("non-composable generators");
        if (is_unit_gen(g)) return {{f, k_->one()}};
        if (is_unit_gen(f)) return {{g, k_->one()}};
        auto it = comp_.find(key(g, f));
        if (it == comp_.end()) return {};
        return it->second;
    }

    SVec<F> compose_vec(const SVec<F>& g, const SVec<F>& f) const {
        SVec<F> out;
        for (const auto& [gi, gc] : g)
            for (const auto& [fi, fc] : f) {
                SVec<F> t = compose(gi, fi);
                svec_axpy(*k_, out, k_->mul(gc, fc), t);
            }
        return out;
    }

    SVec<F> d_vec(const SVec<F>& v) const {
        SVec<F> out;
        for (const auto& [i, c] : v) svec_axpy(*k_, out, c, d_[i]);
        return out;
    }

    std::vector<std::int32_t> gens_between(int src, int dst) const {
        std::vector<std::int32_t> out;
        for (std::int32_t i = 0; i < num_gens(); ++i)
            if (gens_[i].src == src && gens_[i].dst == dst) out.push_back(i);
        return out;
    }

    // --- validation: d^2, Leibniz, associativity, unit laws, degrees ---
    struct Report {
        bool ok = true;
        std::vector<std::string> failures;
        void fail(std::string m) {
            ok = false;
            failures.push_back(std::move(m));
        }
    };

    Report validate() const {
        Report r;
        const F& k = *k_;
        if (units_.size() != objects_.size()) {
            r.fail("missing unit declarations");
            return r;
        }
        for (int o = 0; o < num_objects(); ++o) {
            std::int32_t u = units_[o];
            if (u < 0 || gens_[u].src != o || gens_[u].dst != o || gens_[u].deg != 0)
                r.fail("unit of object " + objects_[o] + " is not a degree-0 endo-generator");
            else if (!d_[u].empty())
                r.fail("unit of object " + objects_[o] + " is not closed");
        }
        for (std::int32_t g = 0; g < num_gens(); ++g) {
            for (const auto& [i, c] : d_[g]) {
                if (gens_[i].src != gens_[g].src || gens_[i].dst != gens_[g].dst)
                    r.fail("d(" + gens_[g].name + ") leaves its hom space");
                if (gens_[i].deg != gens_[g].deg + 1) r.fail("d(" + gens_[g].name + ") is not homogeneous of degree +1");
            }
            SVec<F> dd = d_vec(d_[g]);
            if (!dd.empty()) r.fail("d^2 != 0 on " + gens_[g].name);
        }
        for (std::int32_t g = 0; g < num_gens(); ++g)
            for (std::int32_t f = 0; f < num_gens(); ++f) {
                if (gens_[f].dst != gens_[g].src) continue;
                SVec<F> gf = compose(g, f);
                for (const auto& [i, c] : gf) {
                    if (gens_[i].src != gens_[f].src || gens_[i].dst != gens_[g].dst)
                        r.fail("composition " + gens_[g].name + "∘" + gens_[f].name + " leaves its hom space");
                    if (gens_[i].deg != gens_[g].deg + gens_[f].deg)
                        r.fail("composition " + gens_[g].name + "∘" + gens_[f].name + " has wrong degree");
                }
                // Leibniz: d(g∘f) = dg∘f + (-1)^{deg g} g∘df
                SVec<F> lhs = d_vec(gf);
                SVec<F> rhs = compose_vec(d_[g], SVec<F>{{f, k.one()}});
                SVec<F> t = compose_vec(SVec<F>{{g, k.one()}}, d_[f]);
                svec_axpy(k, rhs, sign(k, gens_[g].deg), t);
                svec_axpy(k, lhs, k.neg(k.one()), rhs);
                if (!lhs.empty()) r.fail("Leibniz fails on (" + gens_[g].name + ", " + gens_[f].name + ")");
            }
        for (std::int32_t h = 0; h < num_gens() && r.failures.size() < 32; ++h)
            for (std::int32_t g = 0; g < num_gens(); ++g) {
                if (gens_[g].dst != gens_[h].src) continue;
                for (std::int32_t f = 0; f < num_gens(); ++f) {
                    if (gens_[f].dst != gens_[g].src) continue;
                    SVec<F> a = compose_vec(compose(h, g), SVec<F>{{f, k.one()}});
                    SVec<F> b = compose_vec(SVec<F>{{h, k.one()}}, compose(g, f));
                    svec_axpy(k, a, k.neg(k.one()), b);
                    if (!a.empty())
                        r.fail("associativity fails on (" + gens_[h].name + ", " + gens_[g].name + ", " + gens_[f].name + ")");
                }
            }
        return r;
    }

    static typename F::Elem sign(const F& k, long e) { return (e % 2 == 0) ? k.one() : k.neg(k.one()); }

  private:
    static std::uint64_t key(std::int32_t g, std::int32_t f) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(g)) << 32) | static_cast<std::uint32_t>(f);
    }

    const F* k_;
    std::string name_;
    std::vector<std::string> objects_;
    std::vector<Gen> gens_;
    std::vector<SVec<F>> d_;
    std::unordered_map<std::uint64_t, SVec<F>> comp_;
    std::vector<std::int32_t> units_;
    std::unordered_map<std::string, std::int32_t> by_name_;
};

// The one-object category with hom = k, the base field.
template <class F>
DGCategory<F> trivial_category(const F& k, const std::string& name = "k") {
    DGCategory<F> c(k, name);
    int o = c.add_object("*");
    std::int32_t u = c.add_gen(o, o, 0, "1");
    c.set_unit(o, u);
    c.set_comp(u, u, {{u, k.one()}});
    return c;
}

}  // namespace barcat
