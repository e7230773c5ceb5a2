#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qgal/errors.hpp"
#include "qgal/label.hpp"
#include "qgal/scalar.hpp"

namespace qgal {

// Multiplication and involution rules for a labeled basis. Basis products
// map a pair of labels to at most one scaled label; this holds for group
// algebras, matrix-unit/shift algebras and their tensor products, and keeps
// every product sparse.
class Descriptor {
public:
    virtual ~Descriptor() = default;

    virtual std::string name() const = 0;
    virtual int arity() const = 0;

    // e_a * e_b = coef * e_out, or zero (returns false).
    virtual bool mul(const Label& a, const Label& b, Label& out, cplx& coef) const = 0;

    // e_a^* = coef * e_out.
    virtual void star(const Label& a, Label& out, cplx& coef) const = 0;

    // The unit written in the basis (all coefficients 1).
    virtual const std::vector<Label>& unit_labels() const = 0;

    // Join keys: e_a * e_b can be non-zero only if col_key(a) == row_key(b).
    // The default (a shared constant key) means a full convolution.
    virtual Label row_key(const Label&) const { return Label{}; }
    virtual Label col_key(const Label&) const { return Label{}; }

    // Basis-label coproduct, where one exists (group algebras are diagonal).
    virtual bool has_label_coproduct() const { return false; }
    virtual std::vector<std::tuple<Label, Label, cplx>> label_coproduct(const Label&) const {
        return {};
    }
};

// Sparse element of a concrete *-algebra: finitely many labels with complex
// coefficients. Immutable-by-convention value type; all operations return
// fresh elements.
class Element {
public:
    using Map = std::unordered_map<Label, cplx, LabelHash>;

    Element() : desc_(nullptr) {}
    explicit Element(const Descriptor* d) : desc_(d) {}

    static Element unit(const Descriptor* d) {
        Element e(d);
        for (const Label& l : d->unit_labels()) e.add(l, 1.0);
        return e;
    }

    static Element basis(const Descriptor* d, const Label& l, cplx c = 1.0) {
        Element e(d);
        e.add(l, c);
        return e;
    }

    const Descriptor* descriptor() const { return desc_; }
    const Map& terms() const { return terms_; }
    bool zero() const { return terms_.empty(); }
    std::size_t nnz() const { return terms_.size(); }

    cplx coef(const Label& l) const {
        auto it = terms_.find(l);
        return it == terms_.end() ? cplx(0.0) : it->second;
    }

    void add(const Label& l, cplx c) {
        if (c == cplx(0.0)) return;
        auto [it, fresh] = terms_.emplace(l, c);
        if (!fresh) {
            it->second += c;
            if (it->second == cplx(0.0)) terms_.erase(it);
        }
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& [l, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    // Remove coefficients below eps_rel * max|coef|.
    Element& drop(double eps_rel = kDropTolerance) {
        double cut = eps_rel * max_abs();
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (std::abs(it->second) < cut) it = terms_.erase(it);
            else ++it;
        }
        return *this;
    }

    Element operator-() const {
        Element r(desc_);
        for (const auto& [l, c] : terms_) r.terms_.emplace(l, -c);
        return r;
    }

    friend Element operator+(const Element& a, const Element& b) {
        check_same(a, b);
        Element r = a.terms_.size() >= b.terms_.size() ? a : b;
        const Element& s = a.terms_.size() >= b.terms_.size() ? b : a;
        if (r.desc_ == nullptr) r.desc_ = s.desc_;
        for (const auto& [l, c] : s.terms_) r.add(l, c);
        return r;
    }

    friend Element operator-(const Element& a, const Element& b) {
        check_same(a, b);
        Element r = a;
        if (r.desc_ == nullptr) r.desc_ = b.desc_;
        for (const auto& [l, c] : b.terms_) r.add(l, -c);
        return r;
    }

    friend Element operator*(cplx s, const Element& a) {
        Element r(a.desc_);
        if (s == cplx(0.0)) return r;
        for (const auto& [l, c] : a.terms_) r.terms_.emplace(l, s * c);
        return r;
    }

    friend Element operator*(const Element& a, cplx s) { return s * a; }

    // Bilinear product through the descriptor's label rule, joined on
    // row/col keys so that diagonal-heavy operands multiply in linear time.
    friend Element operator*(const Element& a, const Element& b) {
        check_same(a, b);
        Element r(a.desc_ ? a.desc_ : b.desc_);
        if (a.zero() || b.zero()) return r;
        const Descriptor* d = r.desc_;

        std::unordered_map<Label, std::vector<const std::pair<const Label, cplx>*>, LabelHash> byrow;
        byrow.reserve(b.terms_.size());
        for (const auto& term : b.terms_) byrow[d->row_key(term.first)].push_back(&term);

        Label out;
        cplx coef;
        for (const auto& [la, ca] : a.terms_) {
            auto it = byrow.find(d->col_key(la));
            if (it == byrow.end()) continue;
            for (const auto* tb : it->second) {
                if (d->mul(la, tb->first, out, coef)) r.add(out, ca * tb->second * coef);
            }
        }
        r.drop();
        return r;
    }

    Element star() const {
        Element r(desc_);
        Label out;
        cplx coef;
        for (const auto& [l, c] : terms_) {
            desc_->star(l, out, coef);
            r.add(out, std::conj(c) * coef);
        }
        return r;
    }

    static constexpr double kDropTolerance = 1e-16;

private:
    static void check_same(const Element& a, const Element& b) {
        if (a.desc_ && b.desc_ && a.desc_ != b.desc_)
            throw DescriptorMismatch("elements over '" + a.desc_->name() + "' and '" +
                                     b.desc_->name() + "'");
    }

    const Descriptor* desc_;
    Map terms_;
};

// Linear functional given by its values on basis labels. When the labels are
// pairwise orthogonal under the induced GNS form (true for every descriptor
// in this library), `l2_weight` gives phi(e_l^* e_l) and inner products
// reduce to weighted dot products.
class Functional {
public:
    Functional() = default;
    Functional(const Descriptor* d, std::function<cplx(const Label&)> value,
               std::function<double(const Label&)> l2_weight, bool is_state)
        : desc_(d), value_(std::move(value)), l2w_(std::move(l2_weight)), state_(is_state) {}

    const Descriptor* descriptor() const { return desc_; }
    bool is_state() const { return state_; }

    cplx operator()(const Element& x) const {
        if (desc_ && x.descriptor() && x.descriptor() != desc_)
            throw DescriptorMismatch("functional applied across descriptors");
        cplx s = 0.0;
        for (const auto& [l, c] : x.terms()) s += c * value_(l);
        return s;
    }

    cplx value(const Label& l) const { return value_(l); }
    double l2_weight(const Label& l) const { return l2w_(l); }

private:
    const Descriptor* desc_ = nullptr;
    std::function<cplx(const Label&)> value_;
    std::function<double(const Label&)> l2w_;
    bool state_ = false;
};

// <x,y>_phi = phi(y^* x).
inline cplx gns_inner(const Element& x, const Element& y, const Functional& phi) {
    if (x.descriptor() != y.descriptor())
        throw DescriptorMismatch("gns_inner across descriptors");
    cplx s = 0.0;
    const auto& xt = x.terms();
    const auto& yt = y.terms();
    if (xt.size() <= yt.size()) {
        for (const auto& [l, c] : xt) {
            auto it = yt.find(l);
            if (it != yt.end()) s += c * std::conj(it->second) * phi.l2_weight(l);
        }
    } else {
        for (const auto& [l, c] : yt) {
            auto it = xt.find(l);
            if (it != xt.end()) s += std::conj(c) * it->second * phi.l2_weight(l);
        }
    }
    return s;
}

// Same inner product evaluated the long way, phi(y^* x); used to cross-check
// the weighted fast path.
inline cplx gns_inner_slow(const Element& x, const Element& y, const Functional& phi) {
    return phi(y.star() * x);
}

inline double l2_norm(const Element& x, const Functional& phi) {
    double v = gns_inner(x, x, phi).real();
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

// ---------------------------------------------------------------------------
// Concrete descriptors
// ---------------------------------------------------------------------------

// Full matrix-unit algebra B(H) over indices [lo, hi): labels (i,j).
class MatrixUnitDescriptor final : public Descriptor {
public:
    MatrixUnitDescriptor(int lo, int hi, std::string nm = "")
        : lo_(lo), hi_(hi), name_(nm.empty() ? "mat[" + std::to_string(lo) + "," + std::to_string(hi) + ")" : std::move(nm)) {
        for (int i = lo_; i < hi_; ++i) unit_.push_back(Label{i, i});
    }

    std::string name() const override { return name_; }
    int arity() const override { return 2; }

    bool mul(const Label& a, const Label& b, Label& out, cplx& coef) const override {
        if (a[1] != b[0]) return false;
        out = Label{a[0], b[1]};
        coef = 1.0;
        return true;
    }

    void star(const Label& a, Label& out, cplx& coef) const override {
        out = Label{a[1], a[0]};
        coef = 1.0;
    }

    const std::vector<Label>& unit_labels() const override { return unit_; }

    Label row_key(const Label& l) const override { return Label{l[0]}; }
    Label col_key(const Label& l) const override { return Label{l[1]}; }

    int lo() const { return lo_; }
    int hi() const { return hi_; }
    int dim() const { return hi_ - lo_; }

private:
    int lo_, hi_;
    std::string name_;
    std::vector<Label> unit_;
};

// Matrix units tensored with bilateral shift powers: labels (r,c,k) stand
// for e_{rc} (x) S^k, with r,c in [lo, hi) and k unconstrained. The ambient
// algebra for the truncated quantum-SU(2) model and its coefficient corner.
class ShiftMatrixDescriptor final : public Descriptor {
public:
    ShiftMatrixDescriptor(int lo, int hi, std::string nm = "")
        : lo_(lo), hi_(hi), name_(nm.empty() ? "shiftmat[" + std::to_string(lo) + "," + std::to_string(hi) + ")" : std::move(nm)) {
        for (int i = lo_; i < hi_; ++i) unit_.push_back(Label{i, i, 0});
    }

    std::string name() const override { return name_; }
    int arity() const override { return 3; }

    bool mul(const Label& a, const Label& b, Label& out, cplx& coef) const override {
        if (a[1] != b[0]) return false;
        out = Label{a[0], b[1], a[2] + b[2]};
        coef = 1.0;
        return true;
    }

    void star(const Label& a, Label& out, cplx& coef) const override {
        out = Label{a[1], a[0], -a[2]};
        coef = 1.0;
    }

    const std::vector<Label>& unit_labels() const override { return unit_; }

    Label row_key(const Label& l) const override { return Label{l[0]}; }
    Label col_key(const Label& l) const override { return Label{l[1]}; }

    int lo() const { return lo_; }
    int hi() const { return hi_; }

private:
    int lo_, hi_;
    std::string name_;
    std::vector<Label> unit_;
};

// Tensor product of two descriptors; labels concatenate.
class TensorDescriptor final : public Descriptor {
public:
    TensorDescriptor(const Descriptor* a, const Descriptor* b)
        : a_(a), b_(b), name_(a->name() + " (x) " + b->name()) {}

    std::string name() const override { return name_; }
    int arity() const override { return a_->arity() + b_->arity(); }

    bool mul(const Label& x, const Label& y, Label& out, cplx& coef) const override {
        const int na = a_->arity();
        Label oa, ob;
        cplx ca, cb;
        if (!a_->mul(x.slice(0, na), y.slice(0, na), oa, ca)) return false;
        if (!b_->mul(x.slice(na, x.size() - na), y.slice(na, y.size() - na), ob, cb)) return false;
        out = oa + ob;
        coef = ca * cb;
        return true;
    }

    void star(const Label& x, Label& out, cplx& coef) const override {
        const int na = a_->arity();
        Label oa, ob;
        cplx ca, cb;
        a_->star(x.slice(0, na), oa, ca);
        b_->star(x.slice(na, x.size() - na), ob, cb);
        out = oa + ob;
        coef = ca * cb;
    }

    const std::vector<Label>& unit_labels() const override {
        if (unit_.empty()) {
            for (const Label& la : a_->unit_labels())
                for (const Label& lb : b_->unit_labels()) unit_.push_back(la + lb);
        }
        return unit_;
    }

    Label row_key(const Label& l) const override {
        const int na = a_->arity();
        return a_->row_key(l.slice(0, na)) + b_->row_key(l.slice(na, l.size() - na));
    }
    Label col_key(const Label& l) const override {
        const int na = a_->arity();
        return a_->col_key(l.slice(0, na)) + b_->col_key(l.slice(na, l.size() - na));
    }

    bool has_label_coproduct() const override {
        return a_->has_label_coproduct() && b_->has_label_coproduct();
    }

    const Descriptor* first() const { return a_; }
    const Descriptor* second() const { return b_; }

private:
    const Descriptor* a_;
    const Descriptor* b_;
    std::string name_;
    mutable std::vector<Label> unit_;
};

// x (x) y as an element of the tensor descriptor.
inline Element tensor(const Element& x, const Element& y, const TensorDescriptor* td) {
    Element r(td);
    for (const auto& [lx, cx] : x.terms())
        for (const auto& [ly, cy] : y.terms()) r.add(lx + ly, cx * cy);
    r.drop();
    return r;
}

// (phi (x) psi)(x (x) y) = phi(x) psi(y) on basis labels.
inline Functional tensor_functional(const Functional& phi, const Functional& psi,
                                    const TensorDescriptor* td) {
    const int na = td->first()->arity();
    return Functional(
        td,
        [phi, psi, na](const Label& l) {
            return phi.value(l.slice(0, na)) * psi.value(l.slice(na, l.size() - na));
        },
        [phi, psi, na](const Label& l) {
            return phi.l2_weight(l.slice(0, na)) * psi.l2_weight(l.slice(na, l.size() - na));
        },
        phi.is_state() && psi.is_state());
}

} // namespace qgal
