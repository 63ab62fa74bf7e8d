#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "barcat/field.hpp"

namespace barcat {

// Structured basis label: an opaque word of 32-bit symbols. Spaces built from
// tensor constructions pack slot indices here; lookup by word is the hot path
// when evaluating operators element by element.
using Word = std::vector<std::uint32_t>;

struct WordHash {
    std::size_t operator()(const Word& w) const {
        std::size_t h = 1469598103934665603ull;
        for (auto x : w) {
            h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

// Finitely based Z-graded vector space. Basis order is creation order and is
// the deterministic tie-break for every pivot choice downstream.
class GradedSpace {
  public:
    explicit GradedSpace(std::string name = "") : name_(std::move(name)) {}

    std::int32_t add(const Word& w, int degree) {
        auto it = index_.find(w);
        if (it != index_.end()) throw std::logic_error("duplicate basis label in " + name_);
        std::int32_t i = static_cast<std::int32_t>(deg_.size());
        deg_.push_back(degree);
        words_.push_back(w);
        index_.emplace(w, i);
        by_deg_[degree].push_back(i);
        return i;
    }

    std::int32_t dim() const { return static_cast<std::int32_t>(deg_.size()); }
    int deg(std::int32_t i) const { return deg_[i]; }
    const Word& word(std::int32_t i) const { return words_[i]; }
    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    std::int32_t find(const Word& w) const {
        auto it = index_.find(w);
        return it == index_.end() ? -1 : it->second;
    }
    std::int32_t at(const Word& w) const {
        std::int32_t i = find(w);
        if (i < 0) throw std::logic_error("basis label not found in " + name_);
        return i;
    }

    const std::vector<std::int32_t>& in_degree(int d) const {
        static const std::vector<std::int32_t> empty;
        auto it = by_deg_.find(d);
        return it == by_deg_.end() ? empty : it->second;
    }
    std::int32_t dim_in_degree(int d) const { return static_cast<std::int32_t>(in_degree(d).size()); }
    const std::map<int, std::vector<std::int32_t>>& degrees() const { return by_deg_; }
    int min_degree() const { return by_deg_.empty() ? 0 : by_deg_.begin()->first; }
    int max_degree() const { return by_deg_.empty() ? 0 : by_deg_.rbegin()->first; }

    // Human-readable label; the printer is set by whichever builder owns the space.
    std::function<std::string(const Word&)> printer;
    std::string label(std::int32_t i) const {
        if (printer) return printer(words_[i]);
        std::string s = "[";
        for (std::size_t k = 0; k < words_[i].size(); ++k) {
            if (k) s += ",";
            s += std::to_string(words_[i][k]);
        }
        return s + "]";
    }

  private:
    std::string name_;
    std::vector<int> deg_;
    std::vector<Word> words_;
    std::unordered_map<Word, std::int32_t, WordHash> index_;
    std::map<int, std::vector<std::int32_t>> by_deg_;
};

using SpacePtr = std::shared_ptr<GradedSpace>;

// ---------------------------------------------------------------------------
// Sparse vectors: sorted (index, coefficient) pairs, no explicit zeros.

template <class F>
using SVec = std::vector<std::pair<std::int32_t, typename F::Elem>>;

template <class F>
void svec_normalize(const F& k, SVec<F>& v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < v.size();) {
        std::int32_t idx = v[i].first;
        typename F::Elem acc = v[i].second;
        ++i;
        while (i < v.size() && v[i].first == idx) {
            acc = k.add(acc, v[i].second);
            ++i;
        }
        if (!k.is_zero(acc)) v[out++] = {idx, acc};
    }
    v.resize(out);
}

template <class F>
void svec_axpy(const F& k, SVec<F>& acc, const typename F::Elem& c, const SVec<F>& x) {
    if (k.is_zero(c) || x.empty()) return;
    SVec<F> merged;
    merged.reserve(acc.size() + x.size());
    std::size_t i = 0, j = 0;
    while (i < acc.size() || j < x.size()) {
        if (j >= x.size() || (i < acc.size() && acc[i].first < x[j].first)) {
            merged.push_back(acc[i++]);
        } else if (i >= acc.size() || x[j].first < acc[i].first) {
            merged.emplace_back(x[j].first, k.mul(c, x[j].second));
            ++j;
        } else {
            auto s = k.add(acc[i].second, k.mul(c, x[j].second));
            if (!k.is_zero(s)) merged.emplace_back(acc[i].first, s);
            ++i;
            ++j;
        }
    }
    acc = std::move(merged);
}

template <class F>
bool svec_eq(const F& k, const SVec<F>& a, const SVec<F>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].first != b[i].first || !k.eq(a[i].second, b[i].second)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Degree-d linear map between graded spaces, stored column-sparse.

template <class F>
class GLMap {
  public:
    GLMap() = default;
    GLMap(SpacePtr src, SpacePtr dst, int degree)
        : src_(std::move(src)), dst_(std::move(dst)), degree_(degree), col_(src_->dim()) {}

    const SpacePtr& src() const { return src_; }
    const SpacePtr& dst() const { return dst_; }
    int degree() const { return degree_; }
    bool valid() const { return src_ != nullptr; }

    void set_col(std::int32_t j, SVec<F> v) { col_.at(j) = std::move(v); }
    void add_entry(const F& k, std::int32_t j, std::int32_t i, const typename F::Elem& c) {
        col_.at(j).emplace_back(i, c);
        dirty_ = true;
        (void)k;
    }
    void finish(const F& k) {
        if (!dirty_) return;
        for (auto& c : col_) svec_normalize(k, c);
        dirty_ = false;
    }
    const SVec<F>& col(std::int32_t j) const { return col_.at(j); }

    SVec<F> apply(const F& k, const SVec<F>& v) const {
        SVec<F> out;
        for (const auto& [j, c] : v) svec_axpy(k, out, c, col_[j]);
        return out;
    }

    bool is_zero(const F& k) const {
        for (const auto& c : col_)
            for (const auto& e : c)
                if (!k.is_zero(e.second)) return false;
        return true;
    }

    static GLMap identity(const F& k, const SpacePtr& s) {
        GLMap m(s, s, 0);
        for (std::int32_t j = 0; j < s->dim(); ++j) m.col_[j] = {{j, k.one()}};
        return m;
    }

    static GLMap zero(const SpacePtr& s, const SpacePtr& t, int degree) { return GLMap(s, t, degree); }

    GLMap compose_after(const F& k, const GLMap& f) const {  // (*this) ∘ f
        if (f.dst_.get() != src_.get()) throw std::logic_error("mismatched spaces in composition");
        GLMap out(f.src_, dst_, degree_ + f.degree_);
        for (std::int32_t j = 0; j < f.src_->dim(); ++j) out.col_[j] = apply(k, f.col_[j]);
        return out;
    }

    GLMap plus(const F& k, const GLMap& other, const typename F::Elem& scale) const {
        if (other.src_.get() != src_.get() || other.dst_.get() != dst_.get() || other.degree_ != degree_)
            throw std::logic_error("mismatched spaces in sum");
        GLMap out(src_, dst_, degree_);
        for (std::int32_t j = 0; j < src_->dim(); ++j) {
            out.col_[j] = col_[j];
            svec_axpy(k, out.col_[j], scale, other.col_[j]);
        }
        return out;
    }

    GLMap scaled(const F& k, const typename F::Elem& c) const {
        GLMap out(src_, dst_, degree_);
        for (std::int32_t j = 0; j < src_->dim(); ++j) {
            out.col_[j] = col_[j];
            for (auto& e : out.col_[j]) e.second = k.mul(c, e.second);
            if (k.is_zero(c)) out.col_[j].clear();
        }
        return out;
    }

    bool equals(const F& k, const GLMap& other) const {
        if (other.src_.get() != src_.get() || other.dst_.get() != dst_.get()) return false;
        for (std::int32_t j = 0; j < src_->dim(); ++j)
            if (!svec_eq(k, col_[j], other.col_[j])) return false;
        return true;
    }

  private:
    SpacePtr src_, dst_;
    int degree_ = 0;
    std::vector<SVec<F>> col_;
    bool dirty_ = false;
};

}  // namespace barcat
