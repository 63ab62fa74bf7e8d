#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "barcat/graded.hpp"

namespace barcat {

// ---------------------------------------------------------------------------
// Column reduction (persistence-style): columns are reduced against recorded
// pivot columns, pivot = largest remaining row index. Deterministic given the
// basis order. Tracks the combination so kernels and preimages come out.

template <class F>
class ColumnReducer {
  public:
    explicit ColumnReducer(const F& k) : k_(k) {}

    // Reduces v in place; combo accumulates the coefficients of previously
    // added columns that were subtracted (by slot).
    void reduce(SVec<F>& v, SVec<F>* combo = nullptr) const {
        while (!v.empty()) {
            std::int32_t low = v.back().first;
            auto it = owner_.find(low);
            if (it == owner_.end()) break;
            std::int32_t slot = it->second;
            auto c = k_.neg(k_.mul(v.back().second, inv_pivot_[slot]));
            svec_axpy(k_, v, c, rcols_[slot]);
            if (combo) combo->emplace_back(slot, c);
        }
        if (combo) svec_normalize(k_, *combo);
    }

    // Adds a column; returns the slot if it contributed a new pivot, -1 if it
    // reduced to zero. `tag` is caller bookkeeping (e.g. source column index).
    std::int32_t add(SVec<F> v, std::int32_t tag, SVec<F>* combo = nullptr) {
        reduce(v, combo);
        if (v.empty()) return -1;
        std::int32_t slot = static_cast<std::int32_t>(rcols_.size());
        owner_[v.back().first] = slot;
        inv_pivot_.push_back(k_.inv(v.back().second));
        rcols_.push_back(std::move(v));
        tags_.push_back(tag);
        return slot;
    }

    std::int32_t rank() const { return static_cast<std::int32_t>(rcols_.size()); }
    const SVec<F>& column(std::int32_t slot) const { return rcols_[slot]; }
    std::int32_t tag(std::int32_t slot) const { return tags_[slot]; }

  private:
    const F& k_;
    std::unordered_map<std::int32_t, std::int32_t> owner_;
    std::vector<SVec<F>> rcols_;
    std::vector<typename F::Elem> inv_pivot_;
    std::vector<std::int32_t> tags_;
};

template <class F>
std::int32_t rank_of(const F& k, const GLMap<F>& m) {
    ColumnReducer<F> red(k);
    for (std::int32_t j = 0; j < m.src()->dim(); ++j)
        if (!m.col(j).empty()) red.add(m.col(j), j);
    return red.rank();
}

// ---------------------------------------------------------------------------
// Cohomology of (X, d) with d : X -> X of degree +1.

template <class F>
struct Cohomology {
    std::map<int, std::int32_t> dim;                 // degree -> dim H^d
    std::map<int, std::vector<SVec<F>>> reps;        // chosen cycle representatives
    bool d_squared_zero = true;
};

template <class F>
bool differential_squares_to_zero(const F& k, const GLMap<F>& d) {
    for (std::int32_t j = 0; j < d.src()->dim(); ++j) {
        SVec<F> dd = d.apply(k, d.col(j));
        if (!dd.empty()) return false;
    }
    return true;
}

// Restrict to basis elements of one degree and run the reduction. `lo`/`hi`
// bound the degrees for which results are produced (the full support when
// omitted). Representatives: kernel elements of d_deg reduced against the
// image of d_{deg-1}, kept in basis order.
template <class F>
Cohomology<F> cohomology(const F& k, const GLMap<F>& d, std::optional<int> lo = {}, std::optional<int> hi = {}) {
    if (d.src().get() != d.dst().get() || d.degree() != 1)
        throw std::logic_error("cohomology expects an endo-differential of degree +1");
    Cohomology<F> out;
    out.d_squared_zero = differential_squares_to_zero(k, d);
    if (!out.d_squared_zero) throw std::logic_error("differential does not square to zero");
    const auto& X = *d.src();
    int dlo = lo.value_or(X.min_degree());
    int dhi = hi.value_or(X.max_degree());
    // image reducers per target degree
    std::map<int, ColumnReducer<F>> image;
    auto image_at = [&](int deg) -> ColumnReducer<F>& {
        auto it = image.find(deg);
        if (it == image.end()) it = image.emplace(deg, ColumnReducer<F>(k)).first;
        return it->second;
    };
    for (int deg = dlo - 1; deg <= dhi; ++deg) {
        auto& img = image_at(deg + 1);
        for (std::int32_t j : X.in_degree(deg))
            if (!d.col(j).empty()) img.add(d.col(j), j);
    }
    for (int deg = dlo; deg <= dhi; ++deg) {
        // kernel of d restricted to degree `deg`
        ColumnReducer<F> kred(k);
        std::vector<SVec<F>> kernel;
        {
            std::vector<std::int32_t> idx = X.in_degree(deg);
            for (std::int32_t j : idx) {
                SVec<F> v = d.col(j);
                SVec<F> combo;
                std::int32_t slot = kred.add(std::move(v), j, &combo);
                if (slot < 0) {
                    SVec<F> cycle{{j, k.one()}};
                    for (const auto& [s, c] : combo) svec_axpy(k, cycle, c, SVec<F>{{kred.tag(s), k.one()}});
                    svec_normalize(k, cycle);
                    kernel.push_back(std::move(cycle));
                }
            }
        }
        auto& img = image_at(deg);
        ColumnReducer<F> hred(k);
        // seed with the boundary columns so new pivots mean new cohomology
        for (std::int32_t s = 0; s < img.rank(); ++s) hred.add(img.column(s), -1);
        std::vector<SVec<F>> reps;
        for (auto& z : kernel) {
            SVec<F> v = z;
            std::int32_t slot = hred.add(std::move(v), -1);
            if (slot >= 0) reps.push_back(z);
        }
        out.dim[deg] = static_cast<std::int32_t>(reps.size());
        out.reps[deg] = std::move(reps);
    }
    return out;
}

// ---------------------------------------------------------------------------
// solve_boundary: given closed z (as a sparse vector of uniform degree) and a
// differential d, produce y with d(y) = z or report the obstruction class.

template <class F>
struct BoundarySolution {
    bool solved = false;
    SVec<F> preimage;      // y with d(y) = z (when solved)
    SVec<F> obstruction;   // reduced residual representing [z] (when not)
};

template <class F>
BoundarySolution<F> solve_boundary(const F& k, const GLMap<F>& d, const SVec<F>& z, int z_degree) {
    if (d.src().get() != d.dst().get() || d.degree() != 1)
        throw std::logic_error("solve_boundary expects an endo-differential of degree +1");
    // z must be closed
    SVec<F> dz = d.apply(k, z);
    if (!dz.empty()) throw std::logic_error("solve_boundary: input is not closed");
    const auto& X = *d.src();
    ColumnReducer<F> red(k);
    for (std::int32_t j : X.in_degree(z_degree - 1))
        if (!d.col(j).empty()) red.add(d.col(j), j);
    SVec<F> v = z;
    SVec<F> combo;
    red.reduce(v, &combo);
    BoundarySolution<F> out;
    if (v.empty()) {
        out.solved = true;
        for (const auto& [slot, c] : combo) {
            out.preimage.emplace_back(red.tag(slot), k.neg(c));
        }
        svec_normalize(k, out.preimage);
        // d(y) = z because z reduced to zero via subtracting c * d(col)
    } else {
        out.solved = false;
        out.obstruction = std::move(v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Iterated extraction of contractible pairs (Gaussian elimination of unit
// pivots). Produces a smaller complex with the same cohomology, plus replayable
// transport of vectors both ways. Pair (x deg n, y deg n+1, pivot λ):
//   d'(w) = d(w) - d_y(w) λ^{-1} d(x)|_rest,   i(w) = w - d_y(w) λ^{-1} x,
//   p(x) = 0, p(y) = -λ^{-1} d(x)|_rest, h(y) = λ^{-1} x.

template <class F>
class ReducedComplex {
  public:
    ReducedComplex(const F& k, const GLMap<F>& d, std::size_t max_passes = 64) : k_(k), orig_(d.src()) {
        if (d.src().get() != d.dst().get() || d.degree() != 1)
            throw std::logic_error("reduction expects an endo-differential of degree +1");
        const std::int32_t n = orig_->dim();
        cols_.resize(n);
        rows_.resize(n);
        alive_.assign(n, true);
        for (std::int32_t j = 0; j < n; ++j)
            for (const auto& [i, c] : d.col(j)) {
                cols_[j][i] = c;
                rows_[i].insert(j);
            }
        run(max_passes);
        build_result();
    }

    const SpacePtr& space() const { return red_space_; }
    const GLMap<F>& differential() const { return red_d_; }
    const SpacePtr& original() const { return orig_; }

    // p : original -> reduced (chain map).
    SVec<F> project(SVec<F> v) const {
        // replay eliminations in order: p_total = p_m ∘ ... ∘ p_1
        for (const auto& e : log_) {
            // decompose v over {x, y, rest}; apply single-pair p
            typename F::Elem cy = k_.zero();
            typename F::Elem cx = k_.zero();
            SVec<F> rest;
            for (const auto& [i, c] : v) {
                if (i == e.y) cy = c;
                else if (i == e.x) cx = c;
                else rest.emplace_back(i, c);
            }
            (void)cx;  // p(x) = 0
            if (!k_.is_zero(cy)) {
                auto s = k_.neg(k_.mul(cy, e.inv_pivot));
                svec_axpy(k_, rest, s, e.dx_rest);
            }
            v = std::move(rest);
        }
        // re-index into reduced space
        SVec<F> out;
        for (const auto& [i, c] : v) out.emplace_back(orig_to_red_.at(i), c);
        svec_normalize(k_, out);
        return out;
    }

    // i : reduced -> original (chain map).
    SVec<F> include(const SVec<F>& v) const {
        SVec<F> w;
        for (const auto& [i, c] : v) w.emplace_back(red_to_orig_.at(i), c);
        svec_normalize(k_, w);
        // replay in reverse: i_total = i_1 ∘ ... ∘ i_m
        for (auto it = log_.rbegin(); it != log_.rend(); ++it) {
            // i(w) = w - d_y(w) λ^{-1} x, where d_y(w) uses the differential at
            // that stage; we stored the needed row of d (restricted to rest).
            typename F::Elem acc = k_.zero();
            for (const auto& [i, c] : w) {
                auto rit = it->row_y.find(i);
                if (rit != it->row_y.end()) acc = k_.add(acc, k_.mul(c, rit->second));
            }
            if (!k_.is_zero(acc)) {
                auto s = k_.neg(k_.mul(acc, it->inv_pivot));
                svec_axpy(k_, w, s, SVec<F>{{it->x, k_.one()}});
            }
        }
        return w;
    }

    std::int32_t eliminated_pairs() const { return static_cast<std::int32_t>(log_.size()); }

  private:
    struct Elim {
        std::int32_t x, y;
        typename F::Elem inv_pivot;
        SVec<F> dx_rest;                                  // d(x) minus the pivot term, at elimination time
        std::unordered_map<std::int32_t, typename F::Elem> row_y;  // d_y(w) for remaining w, at elimination time
    };

    void run(std::size_t max_passes) {
        const std::int32_t n = orig_->dim();
        for (std::size_t pass = 0; pass < max_passes; ++pass) {
            bool progress = false;
            for (std::int32_t x = 0; x < n; ++x) {
                if (!alive_[x] || cols_[x].empty()) continue;
                // choose a unit pivot with minimal fill (Markowitz-style), ties by row index
                std::int32_t best_y = -1;
                long best_cost = -1;
                for (const auto& [y, c] : cols_[x]) {
                    if (!is_unit(c)) continue;
                    long cost = static_cast<long>(cols_[x].size() - 1) * static_cast<long>(rows_[y].size() - 1);
                    if (best_y < 0 || cost < best_cost || (cost == best_cost && y < best_y)) {
                        best_y = y;
                        best_cost = cost;
                    }
                }
                if (best_y < 0) continue;
                eliminate(x, best_y);
                progress = true;
            }
            if (!progress) break;
        }
    }

    bool is_unit(const typename F::Elem& c) const {
        if constexpr (F::is_prime_field) {
            return !k_.is_zero(c);
        } else {
            return k_.eq(c, k_.one()) || k_.eq(c, k_.neg(k_.one()));
        }
    }

    void eliminate(std::int32_t x, std::int32_t y) {
        Elim e;
        e.x = x;
        e.y = y;
        e.inv_pivot = k_.inv(cols_[x].at(y));
        for (const auto& [i, c] : cols_[x])
            if (i != y) e.dx_rest.emplace_back(i, c);
        svec_normalize(k_, e.dx_rest);
        // columns with a y-entry (other than x): update
        std::vector<std::int32_t> touched(rows_[y].begin(), rows_[y].end());
        std::sort(touched.begin(), touched.end());
        for (std::int32_t w : touched) {
            if (w == x) continue;
            auto cw = cols_[w].find(y);
            if (cw == cols_[w].end()) continue;
            e.row_y.emplace(w, cw->second);
        }
        for (std::int32_t w : touched) {
            if (w == x) continue;
            auto cw = cols_[w].find(y);
            if (cw == cols_[w].end()) continue;
            auto s = k_.neg(k_.mul(cw->second, e.inv_pivot));
            // cols_[w] += s * dx_rest
            for (const auto& [i, c] : e.dx_rest) {
                auto& cell = cols_[w][i];
                cell = k_.add(cell, k_.mul(s, c));
                if (k_.is_zero(cell)) {
                    cols_[w].erase(i);
                    rows_[i].erase(w);
                } else {
                    rows_[i].insert(w);
                }
            }
            cols_[w].erase(y);
            rows_[y].erase(w);
        }
        // drop x and y entirely
        for (const auto& [i, c] : cols_[x]) rows_[i].erase(x);
        cols_[x].clear();
        for (const auto& [i, c] : cols_[y]) rows_[i].erase(y);
        cols_[y].clear();
        for (std::int32_t w : std::vector<std::int32_t>(rows_[y].begin(), rows_[y].end())) {
            cols_[w].erase(y);
        }
        rows_[y].clear();
        // remove x as a row of anything below
        for (std::int32_t w : std::vector<std::int32_t>(rows_[x].begin(), rows_[x].end())) {
            cols_[w].erase(x);
        }
        rows_[x].clear();
        alive_[x] = alive_[y] = false;
        log_.push_back(std::move(e));
    }

    void build_result() {
        red_space_ = std::make_shared<GradedSpace>(orig_->name() + "/reduced");
        red_space_->printer = [sp = orig_, this](const Word& w) { return sp->label(static_cast<std::int32_t>(w[0])); };
        for (std::int32_t i = 0; i < orig_->dim(); ++i) {
            if (!alive_[i]) continue;
            std::int32_t r = red_space_->add(Word{static_cast<std::uint32_t>(i)}, orig_->deg(i));
            orig_to_red_[i] = r;
            red_to_orig_[r] = i;
        }
        red_d_ = GLMap<F>(red_space_, red_space_, 1);
        for (const auto& [i, r] : orig_to_red_) {
            SVec<F> col;
            for (const auto& [row, c] : cols_[i]) col.emplace_back(orig_to_red_.at(row), c);
            svec_normalize(k_, col);
            red_d_.set_col(r, std::move(col));
        }
    }

    const F& k_;
    SpacePtr orig_;
    std::vector<std::unordered_map<std::int32_t, typename F::Elem>> cols_;
    std::vector<std::set<std::int32_t>> rows_;
    std::vector<bool> alive_;
    std::vector<Elim> log_;
    SpacePtr red_space_;
    GLMap<F> red_d_;
    std::map<std::int32_t, std::int32_t> orig_to_red_;
    std::map<std::int32_t, std::int32_t> red_to_orig_;
};

}  // namespace barcat
