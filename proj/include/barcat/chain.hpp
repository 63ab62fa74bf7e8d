#pragma once

#include <cassert>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "barcat/bimodule.hpp"
#include "barcat/dgcat.hpp"

namespace barcat {

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Chain shapes: a bimodule built as an alternating product of leaf bimodules
// and bar complexes, flattened with canonical representatives. At each tensor
// junction the contraction is normalized: a bar factor standing right of a
// junction has its lead slot pinned to a unit (not stored); a bar factor whose
// right neighbour is a module has its trail slot pinned likewise. `stripL` /
// `stripR` additionally pin the free outer slots; those shapes are the
// component domains of bar-category morphisms.

template <class F>
struct Seg {
    bool bar = false;
    const DGCategory<F>* cat = nullptr;  // bar segment
    const Bimod<F>* mod = nullptr;       // leaf segment
};

template <class F>
struct ChainShape {
    std::vector<Seg<F>> segs;
    int nbar = 6;
    bool stripL = false, stripR = false;

    int size() const { return static_cast<int>(segs.size()); }
    bool lead_stripped(int i) const { return segs[i].bar && (i > 0 || stripL); }
    bool trail_stripped(int i) const {
        return segs[i].bar && ((i + 1 < size() && !segs[i + 1].bar) || (i + 1 == size() && stripR));
    }
    int strips(int i) const { return (lead_stripped(i) ? 1 : 0) + (trail_stripped(i) ? 1 : 0); }
    int min_core(int i) const { return std::max(0, 2 - strips(i)); }
    int max_core(int i) const { return nbar - strips(i); }

    std::string describe() const {
        std::string s;
        for (int i = 0; i < size(); ++i) {
            if (i) s += "*";
            if (segs[i].bar)
                s += "Bar(" + segs[i].cat->name() + (lead_stripped(i) ? ",l" : "") + (trail_stripped(i) ? ",t" : "") + ")";
            else
                s += segs[i].mod->name();
        }
        if (stripL) s = "<" + s;
        if (stripR) s += ">";
        return s;
    }

    bool operator==(const ChainShape& o) const {
        if (nbar != o.nbar || stripL != o.stripL || stripR != o.stripR || segs.size() != o.segs.size()) return false;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            if (segs[i].bar != o.segs[i].bar || segs[i].cat != o.segs[i].cat || segs[i].mod != o.segs[i].mod)
                return false;
        }
        return true;
    }
};

// Word layout: [lObj] then per segment: bar -> [len, g_1..g_len], mod -> [idx].

template <class F>
struct ChainCursor {
    // decoded positions of each segment within a word
    std::vector<int> offset;  // start of segment payload
    std::vector<int> len;     // bar core length (mods: 1)
};

template <class F>
ChainCursor<F> decode(const ChainShape<F>& sh, const Word& w) {
    ChainCursor<F> cur;
    int pos = 1;
    for (int i = 0; i < sh.size(); ++i) {
        if (sh.segs[i].bar) {
            int l = static_cast<int>(w[pos]);
            cur.offset.push_back(pos + 1);
            cur.len.push_back(l);
            pos += 1 + l;
        } else {
            cur.offset.push_back(pos);
            cur.len.push_back(1);
            pos += 1;
        }
    }
    return cur;
}

// Degree of one segment's content.
template <class F>
int seg_degree(const ChainShape<F>& sh, int i, const Word& w, const ChainCursor<F>& cur) {
    if (!sh.segs[i].bar) return sh.segs[i].mod->space()->deg(static_cast<std::int32_t>(w[cur.offset[i]]));
    int n = cur.len[i] + sh.strips(i);
    int s = 2 - n;
    for (int t = 0; t < cur.len[i]; ++t) s += sh.segs[i].cat->gen(static_cast<std::int32_t>(w[cur.offset[i] + t])).deg;
    return s;
}

template <class F>
int chain_degree(const ChainShape<F>& sh, const Word& w) {
    auto cur = decode(sh, w);
    int d = 0;
    for (int i = 0; i < sh.size(); ++i) d += seg_degree(sh, i, w, cur);
    return d;
}

// ---------------------------------------------------------------------------
// Terms: sparse results of elementwise operators, tagged by overflow when a
// bar length left the truncation (the caller decides whether that is an error
// or a budget-limited skip).

template <class F>
struct Term {
    Word w;
    typename F::Elem c;
};

template <class F>
struct TermVec {
    std::vector<Term<F>> terms;
    bool overflow = false;

    void add(Word w, typename F::Elem c) { terms.push_back({std::move(w), std::move(c)}); }
    void merge(const F& k, TermVec&& o, const typename F::Elem& scale) {
        overflow = overflow || o.overflow;
        for (auto& t : o.terms) {
            t.c = k.mul(t.c, scale);
            if (!k.is_zero(t.c)) terms.push_back(std::move(t));
        }
    }
};

template <class F>
typename F::Elem pow_sign(const F& k, long e) {
    return (e % 2 == 0) ? k.one() : k.neg(k.one());
}

// ---------------------------------------------------------------------------
// Elementwise operators. Every operator takes and returns whole chain words;
// Koszul prefixes across earlier segments are applied by the caller through
// `prefix_exponent`.

template <class F>
class ChainOps {
  public:
    ChainOps(const F& k) : k_(k) {}

    const F& field() const { return k_; }

    // --- helpers -------------------------------------------------------
    static Word slice(const Word& w, int from, int to) { return Word(w.begin() + from, w.begin() + to); }

    int full_len(const ChainShape<F>& sh, int i, const ChainCursor<F>& cur) const {
        return cur.len[i] + sh.strips(i);
    }

    // degree sum of the first `fullpos` slots of bar factor i in full indexing
    int full_prefix_deg(const ChainShape<F>& sh, int i, const Word& w, const ChainCursor<F>& cur, int fullpos) const {
        int lead = sh.lead_stripped(i) ? 1 : 0;
        int d = 0;
        for (int t = 0; t < cur.len[i]; ++t) {
            int pos = lead + t + 1;  // full position of core slot t (1-based)
            if (pos <= fullpos) d += sh.segs[i].cat->gen(static_cast<std::int32_t>(w[cur.offset[i] + t])).deg;
        }
        return d;
    }

    // total (shifted) degree of segments [0, i)
    int prefix_degree(const ChainShape<F>& sh, const Word& w, const ChainCursor<F>& cur, int i) const {
        int d = 0;
        for (int t = 0; t < i; ++t) d += seg_degree(sh, t, w, cur);
        return d;
    }

    // object sitting at full position `p` boundary of bar i: the object chain
    // c_0 .. c_n with slot t: c_t -> c_{t-1}. We need it to mint unit gens.
    int object_left_of_core_slot(const ChainShape<F>& sh, const Word& w, const ChainCursor<F>& cur, int i, int t) const {
        // object c at the source side of core slot t-1 / target side of slot t
        const auto* cat = sh.segs[i].cat;
        if (t < cur.len[i]) return cat->gen(static_cast<std::int32_t>(w[cur.offset[i] + t])).dst;
        if (cur.len[i] > 0) return cat->gen(static_cast<std::int32_t>(w[cur.offset[i] + cur.len[i] - 1])).src;
        return object_left_of_segment(sh, w, cur, i);
    }

    // leftmost object of segment i (dst of its first slot / fiber object)
    int object_left_of_segment(const ChainShape<F>& sh, const Word& w, const ChainCursor<F>& cur, int i) const {
        for (int t = i; t < sh.size(); ++t) {
            if (!sh.segs[t].bar) return sh.segs[t].mod->lObj(static_cast<std::int32_t>(w[cur.offset[t]]));
            if (cur.len[t] > 0) return sh.segs[t].cat->gen(static_cast<std::int32_t>(w[cur.offset[t]])).dst;
        }
        for (int t = i; t-- > 0;) {
            if (!sh.segs[t].bar) return sh.segs[t].mod->rObj(static_cast<std::int32_t>(w[cur.offset[t]]));
            if (cur.len[t] > 0) return sh.segs[t].cat->gen(static_cast<std::int32_t>(w[cur.offset[t] + cur.len[t] - 1])).src;
        }
        return static_cast<int>(w[0]);
    }

    // Replace one core slot by a combination of generators (same shape).
    void substitute_slot(const ChainShape<F>& sh, const Word& w, const ChainCursor<F>& cur, int i, int t,
                         const SVec<F>& v, const typename F::Elem& coef, TermVec<F>& out) const {
        for (const auto& [g, c] : v) {
            Word nw = w;
            nw[cur.offset[i] + t] = static_cast<std::uint32_t>(g);
            out.add(std::move(nw), k_.mul(coef, c));
        }
    }

    // --- absorption into a neighbour -----------------------------------
    // Multiplies a diagonal combination `v` into the element `w` (laid out
    // bytewise for shape `outSh`, possibly with one transitional explicit
    // trail slot on the receiving bar). Left absorption hits the left
    // neighbour's outgoing end; right absorption is only legal when the
    // receiving segment is leftmost, where a bar has a free lead and v is
    // prepended with the shift twist of the left action.
    void absorb(Word w, int leftSeg, int rightSeg, const SVec<F>& v, const typename F::Elem& coef,
                TermVec<F>& out, const ChainShape<F>& outSh, bool left_trail_explicit = true) const {
        auto ocur = decode(outSh, w);
        if (leftSeg >= 0) {
            if (!outSh.segs[leftSeg].bar) {
                const auto* M = outSh.segs[leftSeg].mod;
                std::int32_t m = static_cast<std::int32_t>(w[ocur.offset[leftSeg]]);
                for (const auto& [g, cg] : v) {
                    SVec<F> res = M->actR(g).apply(k_, SVec<F>{{m, k_.one()}});
                    for (const auto& [mi, cm] : res) {
                        Word nw = w;
                        nw[ocur.offset[leftSeg]] = static_cast<std::uint32_t>(mi);
                        out.add(std::move(nw), k_.mul(coef, k_.mul(cg, cm)));
                    }
                }
            } else if (!left_trail_explicit && outSh.trail_stripped(leftSeg)) {
                // canonical pinned trail eats v: push it through into the
                // module segment behind the bar.
                if (leftSeg + 1 >= outSh.size() || outSh.segs[leftSeg + 1].bar)
                    throw std::logic_error("absorb through a pinned trail without a module behind");
                const auto* M = outSh.segs[leftSeg + 1].mod;
                std::int32_t m = static_cast<std::int32_t>(w[ocur.offset[leftSeg + 1]]);
                for (const auto& [g, cg] : v) {
                    SVec<F> res = M->actL(g).apply(k_, SVec<F>{{m, k_.one()}});
                    for (const auto& [mi, cm] : res) {
                        Word nw = w;
                        nw[ocur.offset[leftSeg + 1]] = static_cast<std::uint32_t>(mi);
                        out.add(std::move(nw), k_.mul(coef, k_.mul(cg, cm)));
                    }
                }
            } else {
                // compose into the (explicitly stored) trail slot of the left
                // bar; if the target shape pins that trail, push the result
                // through into the module behind it.
                int t = ocur.len[leftSeg] - 1;
                if (t < 0) throw std::logic_error("absorb into empty bar");
                std::int32_t h = static_cast<std::int32_t>(w[ocur.offset[leftSeg] + t]);
                for (const auto& [g, cg] : v) {
                    SVec<F> res = outSh.segs[leftSeg].cat->compose(h, g);
                    for (const auto& [hi, cm] : res) {
                        Word nw = w;
                        nw[ocur.offset[leftSeg] + t] = static_cast<std::uint32_t>(hi);
                        if (outSh.trail_stripped(leftSeg))
                            repin_trail(outSh, std::move(nw), leftSeg, k_.mul(coef, k_.mul(cg, cm)), out);
                        else
                            out.add(std::move(nw), k_.mul(coef, k_.mul(cg, cm)));
                    }
                }
            }
            return;
        }
        if (rightSeg >= 0) {
            if (!outSh.segs[rightSeg].bar) {
                const auto* M = outSh.segs[rightSeg].mod;
                std::int32_t m = static_cast<std::int32_t>(w[ocur.offset[rightSeg]]);
                for (const auto& [g, cg] : v) {
                    SVec<F> res = M->actL(g).apply(k_, SVec<F>{{m, k_.one()}});
                    for (const auto& [mi, cm] : res) {
                        Word nw = w;
                        nw[ocur.offset[rightSeg]] = static_cast<std::uint32_t>(mi);
                        out.add(std::move(nw), k_.mul(coef, k_.mul(cg, cm)));
                    }
                }
            } else {
                if (outSh.lead_stripped(rightSeg))
                    throw std::logic_error("right absorption into a pinned bar lead");
                // left action on the shifted bar component picks up the shift
                // twist: a.(a_1 ⊗ ... ⊗ a_n) = (-1)^{(n-2) deg a} (a a_1) ⊗ ...
                int n_after = ocur.len[rightSeg] + 1 + (outSh.trail_stripped(rightSeg) ? 1 : 0);
                for (const auto& [g, cg] : v) {
                    auto tw = pow_sign(k_, static_cast<long>(n_after - 2) *
                                               outSh.segs[rightSeg].cat->gen(g).deg);
                    Word nw;
                    nw.reserve(w.size() + 1);
                    nw.insert(nw.end(), w.begin(), w.begin() + ocur.offset[rightSeg] - 1);
                    nw.push_back(static_cast<std::uint32_t>(ocur.len[rightSeg] + 1));
                    nw.push_back(static_cast<std::uint32_t>(g));
                    nw.insert(nw.end(), w.begin() + ocur.offset[rightSeg], w.end());
                    out.add(std::move(nw), k_.mul(k_.mul(coef, cg), tw));
                }
            }
            return;
        }
        throw std::logic_error("absorb with no neighbour");
    }

    // The stored core of bar `seg` carries one transitional explicit trail
    // slot that the shape pins: strip it and push its content through into
    // the module segment behind.
    void repin_trail(const ChainShape<F>& sh, Word w, int seg, typename F::Elem c, TermVec<F>& out) const {
        auto cur = decode(sh, w);
        if (cur.len[seg] < 1) throw std::logic_error("repin on empty bar");
        std::int32_t g = static_cast<std::int32_t>(w[cur.offset[seg] + cur.len[seg] - 1]);
        Word nw;
        nw.reserve(w.size() - 1);
        nw.insert(nw.end(), w.begin(), w.begin() + cur.offset[seg]);
        nw[cur.offset[seg] - 1] = static_cast<std::uint32_t>(cur.len[seg] - 1);
        nw.insert(nw.end(), w.begin() + cur.offset[seg], w.begin() + cur.offset[seg] + cur.len[seg] - 1);
        nw.insert(nw.end(), w.begin() + cur.offset[seg] + cur.len[seg], w.end());
        const auto* cat = sh.segs[seg].cat;
        if (cat->is_unit_gen(g)) {
            out.add(std::move(nw), std::move(c));
            return;
        }
        if (seg + 1 >= sh.size() || sh.segs[seg + 1].bar)
            throw std::logic_error("repin without a module to push into");
        auto ncur = decode(sh, nw);
        const auto* M = sh.segs[seg + 1].mod;
        std::int32_t m = static_cast<std::int32_t>(nw[ncur.offset[seg + 1]]);
        SVec<F> res = M->actL(g).apply(k_, SVec<F>{{m, k_.one()}});
        for (const auto& [mi, cm] : res) {
            Word xw = nw;
            xw[ncur.offset[seg + 1]] = static_cast<std::uint32_t>(mi);
            out.add(std::move(xw), k_.mul(c, cm));
        }
    }

    // --- the bar differential on one factor, junction couplings included ---
    // natural part: sum_i (-1)^{n + deg(a_1..a_{i-1})} a_1..da_i..a_n
    // product part: sum_{i=1}^{n-1} (-1)^{i-1} a_1..(a_i a_{i+1})..a_n
    void bar_diff_at(const ChainShape<F>& sh, int i, const Word& w, const typename F::Elem& pre, TermVec<F>& out) const {
        auto cur = decode(sh, w);
        const auto* cat = sh.segs[i].cat;
        int n = full_len(sh, i, cur);
        int lead = sh.lead_stripped(i) ? 1 : 0;
        // natural part (only core slots can be differentiated)
        for (int t = 0; t < cur.len[i]; ++t) {
            std::int32_t g = static_cast<std::int32_t>(w[cur.offset[i] + t]);
            const SVec<F>& dg = cat->d_gen(g);
            if (dg.empty()) continue;
            int fullpos = lead + t + 1;
            long e = n + full_prefix_deg(sh, i, w, cur, fullpos - 1);
            substitute_slot(sh, w, cur, i, t, dg, k_.mul(pre, pow_sign(k_, e)), out);
        }
        // product part
        if (n < 3) return;
        for (int p = 1; p <= n - 1; ++p) {
            auto sgn = k_.mul(pre, pow_sign(k_, p - 1));
            bool firstIsLead = sh.lead_stripped(i) && p == 1;
            bool secondIsTrail = sh.trail_stripped(i) && p == n - 1;
            if (firstIsLead && secondIsTrail) continue;  // cannot happen for n >= 3
            if (firstIsLead) {
                // 1·a -> a : the merged tensor has a as its lead; its canonical
                // representative pushes a across the junction, with the shift
                // twist of the left action on the (n-1)-fold component.
                std::int32_t g = static_cast<std::int32_t>(w[cur.offset[i]]);
                auto tw = pow_sign(k_, static_cast<long>(n - 3) * cat->gen(g).deg);
                Word nw = erase_core_slot(w, cur, i, 0);
                ChainShape<F> same = sh;  // shape unchanged
                absorb_left_of(sh, i, std::move(nw), SVec<F>{{g, k_.one()}}, k_.mul(sgn, tw), out, same);
            } else if (secondIsTrail) {
                std::int32_t g = static_cast<std::int32_t>(w[cur.offset[i] + cur.len[i] - 1]);
                Word nw = erase_core_slot(w, cur, i, cur.len[i] - 1);
                ChainShape<F> same = sh;
                absorb_right_of(sh, i, std::move(nw), SVec<F>{{g, k_.one()}}, sgn, out, same);
            } else {
                int t = p - lead;  // merge core slots t-1? positions: full p and p+1 are core slots (p-lead-1? )
                // full position p corresponds to core slot (p - lead); merging
                // full slots p, p+1 -> core slots (p-lead-1)+.. let s = p - lead:
                int s = p - lead;  // 1-based core index of the first merged slot
                std::int32_t g1 = static_cast<std::int32_t>(w[cur.offset[i] + s - 1]);
                std::int32_t g2 = static_cast<std::int32_t>(w[cur.offset[i] + s]);
                SVec<F> prod = cat->compose(g1, g2);
                if (prod.empty()) continue;
                Word nw = erase_core_slot(w, cur, i, s);
                auto ncur = decode(sh, nw);
                for (const auto& [gi, cg] : prod) {
                    Word xw = nw;
                    xw[ncur.offset[i] + s - 1] = static_cast<std::uint32_t>(gi);
                    out.add(std::move(xw), k_.mul(sgn, cg));
                }
            }
        }
    }

    // full differential of the chain element
    TermVec<F> diff(const ChainShape<F>& sh, const Word& w) const {
        TermVec<F> out;
        auto cur = decode(sh, w);
        typename F::Elem pre = k_.one();
        for (int i = 0; i < sh.size(); ++i) {
            if (sh.segs[i].bar) {
                bar_diff_at(sh, i, w, pre, out);
            } else {
                const auto* M = sh.segs[i].mod;
                std::int32_t m = static_cast<std::int32_t>(w[cur.offset[i]]);
                for (const auto& [mi, c] : M->d().col(m)) {
                    Word nw = w;
                    nw[cur.offset[i]] = static_cast<std::uint32_t>(mi);
                    out.add(std::move(nw), k_.mul(pre, c));
                }
            }
            pre = k_.mul(pre, pow_sign(k_, seg_degree(sh, i, w, cur)));
        }
        return out;
    }

    // --- comultiplication at a bar factor ------------------------------
    // target shape: factor i split into (lead | trail-full with explicit unit)
    // and (lead-stripped | original trail).
    static ChainShape<F> split_shape(const ChainShape<F>& sh, int i) {
        ChainShape<F> out = sh;
        out.segs.insert(out.segs.begin() + i, sh.segs[i]);
        return out;
    }

    TermVec<F> delta_at(const ChainShape<F>& sh, int i, const Word& w, int koszul_from = 0) const {
        TermVec<F> out;
        auto cur = decode(sh, w);
        (void)koszul_from;  // Δ has degree 0
        const auto* cat = sh.segs[i].cat;
        int n = full_len(sh, i, cur);
        int lead = sh.lead_stripped(i) ? 1 : 0;
        ChainShape<F> tgt = split_shape(sh, i);
        for (int p = 1; p <= n - 1; ++p) {
            // lengths after split: first p+1, second n-p+1
            if (p + 1 > sh.nbar || n - p + 1 > sh.nbar) {
                out.overflow = true;
                continue;
            }
            // sign twist: (second factor length) × (degree of the first factor),
            // matching the shift identifications H^{⊗p}[p] ⊗ H^{⊗q}[q] ≅ H^{⊗p+q}[p+q]
            long e = static_cast<long>(n - p + 1) * full_prefix_deg(sh, i, w, cur, p);
            auto sgn = pow_sign(k_, e);
            // build the word: first factor core = full slots (lead..p) minus lead
            // strip, plus explicit trailing unit; second factor core = full slots
            // (p+1..n) minus its lead unit minus original trail strip.
            int s = p - lead;  // number of core slots going to the first factor
            if (s < 0 || s > cur.len[i]) continue;
            // unit object at the split point
            int obj = object_left_of_core_slot(sh, w, cur, i, s);
            std::int32_t ug = cat->unit(obj);
            Word nw;
            nw.reserve(w.size() + 3);
            nw.insert(nw.end(), w.begin(), w.begin() + cur.offset[i] - 1);
            nw.push_back(static_cast<std::uint32_t>(s + 1));  // first core: s slots + explicit unit
            nw.insert(nw.end(), w.begin() + cur.offset[i], w.begin() + cur.offset[i] + s);
            nw.push_back(static_cast<std::uint32_t>(ug));
            nw.push_back(static_cast<std::uint32_t>(cur.len[i] - s));  // second core
            nw.insert(nw.end(), w.begin() + cur.offset[i] + s, w.begin() + cur.offset[i] + cur.len[i]);
            nw.insert(nw.end(), w.begin() + cur.offset[i] + cur.len[i], w.end());
            // second factor: full = (unit, remaining slots, original trail?) --
            // length check: n2 = (len - s) + 1 (its stripped lead) + trailstrip
            out.add(std::move(nw), sgn);
        }
        return out;
    }

    // --- product µ merging bar factors i, i+1 --------------------------
    static ChainShape<F> merge_shape(const ChainShape<F>& sh, int i) {
        ChainShape<F> out = sh;
        out.segs.erase(out.segs.begin() + i + 1);
        return out;
    }

    // µ((a_1..a_p) ⊗ (b_1..b_q)) = (-1)^{p + q·deg(a_1..a_p)} a_1..(a_p b_1)..b_q
    TermVec<F> mu_at(const ChainShape<F>& sh, int i, const Word& w) const {
        TermVec<F> out;
        auto cur = decode(sh, w);
        if (!sh.segs[i].bar || i + 1 >= sh.size() || !sh.segs[i + 1].bar) throw std::logic_error("mu needs adjacent bars");
        int p = full_len(sh, i, cur), q = full_len(sh, i + 1, cur);
        if (p + q - 1 > sh.nbar) {
            out.overflow = true;
            return out;
        }
        // Koszul prefix for the degree -1 operator acting at factor pair (i,i+1)
        long pref = prefix_degree(sh, w, cur, i);
        long e = p + static_cast<long>(q) * (full_prefix_deg(sh, i, w, cur, p)) + pref;
        auto sgn = pow_sign(k_, e);
        Word nw;
        nw.reserve(w.size() - 1);
        nw.insert(nw.end(), w.begin(), w.begin() + cur.offset[i] - 1);
        nw.push_back(static_cast<std::uint32_t>(cur.len[i] + cur.len[i + 1]));
        nw.insert(nw.end(), w.begin() + cur.offset[i], w.begin() + cur.offset[i] + cur.len[i]);
        nw.insert(nw.end(), w.begin() + cur.offset[i + 1], w.begin() + cur.offset[i + 1] + cur.len[i + 1]);
        nw.insert(nw.end(), w.begin() + cur.offset[i + 1] + cur.len[i + 1], w.end());
        out.add(std::move(nw), sgn);
        return out;
    }

    // --- counit τ at a bar factor ---------------------------------------
    // Nonzero only on bar length 2; multiplies the two slots and absorbs the
    // result into a neighbour (left first). When the shape consists of that
    // factor alone the result is a combination of category generators,
    // returned through `lone` instead.
    static ChainShape<F> erase_shape(const ChainShape<F>& sh, int i) {
        ChainShape<F> out = sh;
        out.segs.erase(out.segs.begin() + i);
        return out;
    }

    TermVec<F> tau_at(const ChainShape<F>& sh, int i, const Word& w, SVec<F>* lone = nullptr) const {
        TermVec<F> out;
        auto cur = decode(sh, w);
        const auto* cat = sh.segs[i].cat;
        int n = full_len(sh, i, cur);
        if (n != 2) return out;  // τ vanishes
        // value of τ on the factor
        SVec<F> val;
        if (cur.len[i] == 2) {
            std::int32_t g1 = static_cast<std::int32_t>(w[cur.offset[i]]);
            std::int32_t g2 = static_cast<std::int32_t>(w[cur.offset[i] + 1]);
            val = cat->compose(g1, g2);
        } else if (cur.len[i] == 1) {
            val = {{static_cast<std::int32_t>(w[cur.offset[i]]), k_.one()}};
        } else {
            int obj = object_left_of_segment(sh, w, cur, i);
            val = {{cat->unit(obj), k_.one()}};
        }
        if (val.empty()) return out;
        if (sh.size() == 1) {
            if (!lone) throw std::logic_error("tau on a lone bar needs a receiver");
            for (auto& e : val) lone->push_back(e);
            svec_normalize(k_, *lone);
            return out;
        }
        ChainShape<F> tgt = erase_shape(sh, i);
        Word nw;
        nw.reserve(w.size());
        nw.insert(nw.end(), w.begin(), w.begin() + cur.offset[i] - 1);
        nw.insert(nw.end(), w.begin() + cur.offset[i] + cur.len[i], w.end());
        if (i > 0)
            absorb(std::move(nw), i - 1, -1, val, k_.one(), out, tgt, !sh.trail_stripped(i - 1));
        else
            absorb(std::move(nw), -1, 0, val, k_.one(), out, tgt);
        return out;
    }

    // --- λ_k (insertion of k units), by the recursion λ_k = µ∘(id⊗λ_{k-1})∘Δ
    TermVec<F> lambda_at(const ChainShape<F>& sh, int i, int kk, const Word& w) const {
        TermVec<F> out;
        if (kk == 0) {
            out.add(w, k_.one());
            return out;
        }
        ChainShape<F> mid = split_shape(sh, i);
        TermVec<F> d = delta_at(sh, i, w);
        out.overflow = d.overflow;
        for (auto& t : d.terms) {
            TermVec<F> l = lambda_at(mid, i + 1, kk - 1, t.w);
            out.overflow = out.overflow || l.overflow;
            for (auto& u : l.terms) {
                TermVec<F> m = mu_at(mid, i, u.w);
                out.overflow = out.overflow || m.overflow;
                for (auto& v : m.terms) out.add(std::move(v.w), k_.mul(t.c, k_.mul(u.c, v.c)));
            }
        }
        return out;
    }

  private:
    // push v into whatever sits left of factor i; if nothing, fail loudly.
    void absorb_left_of(const ChainShape<F>&, int i, Word nw, const SVec<F>& v, const typename F::Elem& c,
                        TermVec<F>& out, const ChainShape<F>& tgt) const {
        if (i > 0)
            absorb(std::move(nw), i - 1, -1, v, c, out, tgt);
        else
            throw std::logic_error("lead merge with no left neighbour");
    }
    void absorb_right_of(const ChainShape<F>&, int i, Word nw, const SVec<F>& v, const typename F::Elem& c,
                         TermVec<F>& out, const ChainShape<F>& tgt) const {
        if (i + 1 < tgt.size())
            absorb(std::move(nw), -1, i + 1, v, c, out, tgt);
        else
            throw std::logic_error("trail merge with no right neighbour");
    }

    static Word erase_core_slot(const Word& w, const ChainCursor<F>& cur, int i, int t) {
        Word nw;
        nw.reserve(w.size() - 1);
        nw.insert(nw.end(), w.begin(), w.begin() + cur.offset[i] - 1);
        nw.push_back(static_cast<std::uint32_t>(cur.len[i] - 1));
        for (int s = 0; s < cur.len[i]; ++s)
            if (s != t) nw.push_back(w[cur.offset[i] + s]);
        nw.insert(nw.end(), w.begin() + cur.offset[i] + cur.len[i], w.end());
        return nw;
    }

    const F& k_;
};

}  // namespace barcat
