#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "qgal/algebra.hpp"
#include "qgal/descriptor_pool.hpp"

namespace qgal {

// Block matrix with algebra-element entries, representing a unitary in
// A (x) B(H). The first leg may be rectangular (co-object coefficients map
// one GNS space into another); rows and columns are plain integer indices.
class Corep {
public:
    Corep() : desc_(nullptr) {}
    Corep(const Descriptor* d, std::vector<int> rows, std::vector<int> cols)
        : desc_(d), rows_(std::move(rows)), cols_(std::move(cols)) {}

    static Corep identity(const Descriptor* d, const Element& one, const std::vector<int>& idx) {
        Corep u(d, idx, idx);
        for (int i : idx) u.set(i, i, one);
        return u;
    }

    const Descriptor* descriptor() const { return desc_; }
    const std::vector<int>& rows() const { return rows_; }
    const std::vector<int>& cols() const { return cols_; }

    const Element& entry(int i, int j) const {
        auto it = ent_.find({i, j});
        return it == ent_.end() ? zero_ : it->second;
    }

    void set(int i, int j, Element e) {
        if (e.zero()) return;
        ent_[{i, j}] = std::move(e);
    }

    const std::map<std::pair<int, int>, Element>& entries() const { return ent_; }

    // Right-multiply every entry by m (e.g. translating a corepresentation
    // by a group-like unitary).
    Corep right_multiplied(const Element& m) const {
        Corep r(desc_, rows_, cols_);
        for (const auto& [ij, e] : ent_) r.set(ij.first, ij.second, e * m);
        return r;
    }

    Corep left_multiplied(const Element& m) const {
        Corep r(desc_, rows_, cols_);
        for (const auto& [ij, e] : ent_) r.set(ij.first, ij.second, m * e);
        return r;
    }

private:
    const Descriptor* desc_;
    std::vector<int> rows_, cols_;
    std::map<std::pair<int, int>, Element> ent_;
    inline static const Element zero_{};
};

namespace detail {
inline std::map<int, int> positions(const std::vector<int>& idx) {
    std::map<int, int> p;
    for (int i = 0; i < static_cast<int>(idx.size()); ++i) p[idx[i]] = i;
    return p;
}
} // namespace detail

// G_12 U_13 on H (x) K: entry((i,k),(j,l)) = G_ij * U_kl, with the pair
// (i,k) flattened as pos(i)*dim(K)+pos(k).
inline Corep leg_product(const Corep& g, const Corep& u) {
    const int nk = static_cast<int>(u.rows().size());
    auto flat = [nk](int gpos, int upos) { return gpos * nk + upos; };

    std::vector<int> rows, cols;
    for (int gi = 0; gi < static_cast<int>(g.rows().size()); ++gi)
        for (int ui = 0; ui < nk; ++ui) rows.push_back(flat(gi, ui));
    for (int gj = 0; gj < static_cast<int>(g.cols().size()); ++gj)
        for (int uj = 0; uj < static_cast<int>(u.cols().size()); ++uj) cols.push_back(flat(gj, uj));

    auto grow = detail::positions(g.rows()), gcol = detail::positions(g.cols());
    auto urow = detail::positions(u.rows()), ucol = detail::positions(u.cols());

    Corep r(g.descriptor(), rows, cols);
    for (const auto& [gij, ge] : g.entries()) {
        for (const auto& [uij, ue] : u.entries()) {
            r.set(flat(grow.at(gij.first), urow.at(uij.first)),
                  flat(gcol.at(gij.second), ucol.at(uij.second)), ge * ue);
        }
    }
    return r;
}

struct ResidualReport {
    double residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

// Column orthogonality sum_k U_{ki}^* U_{kj} = delta_{ij} * one, measured in
// L^2(phi) and maximized over column pairs.
inline ResidualReport check_unitary(const Corep& u, const Element& one, const Functional& phi,
                                    double tol) {
    ResidualReport rep;
    rep.tol = tol;
    for (int i : u.cols()) {
        for (int j : u.cols()) {
            Element acc(u.descriptor());
            for (int k : u.rows()) {
                const Element& a = u.entry(k, i);
                const Element& b = u.entry(k, j);
                if (a.zero() || b.zero()) continue;
                acc = acc + a.star() * b;
            }
            if (i == j) acc = acc - one;
            rep.residual = std::max(rep.residual, l2_norm(acc, phi));
        }
    }
    rep.pass = rep.residual <= tol;
    return rep;
}

// Row orthogonality sum_k U_{ik} U_{jk}^* = delta_{ij} * one.
inline ResidualReport check_counitary(const Corep& u, const Element& one, const Functional& phi,
                                      double tol) {
    ResidualReport rep;
    rep.tol = tol;
    for (int i : u.rows()) {
        for (int j : u.rows()) {
            Element acc(u.descriptor());
            for (int k : u.cols()) {
                const Element& a = u.entry(i, k);
                const Element& b = u.entry(j, k);
                if (a.zero() || b.zero()) continue;
                acc = acc + a * b.star();
            }
            if (i == j) acc = acc - one;
            rep.residual = std::max(rep.residual, l2_norm(acc, phi));
        }
    }
    rep.pass = rep.residual <= tol;
    return rep;
}

// (Delta (x) iota)U = U_13 U_23, i.e. Delta(U_ij) = sum_k U_ik (x) U_kj.
// `delta_entry(i,j)` supplies the coproduct of the (i,j) entry; the sum
// side is built from the entries themselves. Entrywise L^2(phi (x) phi).
inline ResidualReport check_corep_identity(const Corep& u,
                                           const std::function<Element(int, int)>& delta_entry,
                                           const TensorDescriptor* td, const Functional& phi2,
                                           double tol) {
    ResidualReport rep;
    rep.tol = tol;
    for (int i : u.rows()) {
        for (int j : u.cols()) {
            Element rhs(td);
            for (int k : u.rows()) {
                const Element& a = u.entry(i, k);
                const Element& b = u.entry(k, j);
                if (a.zero() || b.zero()) continue;
                rhs = rhs + tensor(a, b, td);
            }
            Element res = delta_entry(i, j) - rhs;
            rep.residual = std::max(rep.residual, l2_norm(res, phi2));
        }
    }
    rep.pass = rep.residual <= tol;
    return rep;
}

} // namespace qgal
