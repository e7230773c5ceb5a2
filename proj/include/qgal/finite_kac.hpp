#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qgal/algebra.hpp"
#include "qgal/corep.hpp"
#include "qgal/descriptor_pool.hpp"
#include "qgal/engine.hpp"
#include "qgal/finite_group.hpp"

namespace qgal {

// Group algebra L(Gamma): labels (g), lambda_g lambda_h = lambda_{gh},
// diagonal coproduct, invariant trace tau(lambda_g) = delta_{g,e}.
class GroupAlgebraDescriptor final : public Descriptor {
public:
    explicit GroupAlgebraDescriptor(const FiniteGroup* g)
        : g_(g), name_("L(" + g->name() + ")"), unit_{Label{0}} {}

    std::string name() const override { return name_; }
    int arity() const override { return 1; }

    bool mul(const Label& a, const Label& b, Label& out, cplx& coef) const override {
        out = Label{g_->mul(a[0], b[0])};
        coef = 1.0;
        return true;
    }

    void star(const Label& a, Label& out, cplx& coef) const override {
        out = Label{g_->inv(a[0])};
        coef = 1.0;
    }

    const std::vector<Label>& unit_labels() const override { return unit_; }

    bool has_label_coproduct() const override { return true; }
    std::vector<std::tuple<Label, Label, cplx>> label_coproduct(const Label& l) const override {
        return {{l, l, cplx(1.0)}};
    }

    const FiniteGroup& group() const { return *g_; }

private:
    const FiniteGroup* g_;
    std::string name_;
    std::vector<Label> unit_;
};

// Bundled descriptors and functionals for one discrete group:
// M = L(Gamma) with trace tau, B = B(l^2 Gamma) with its normalized trace,
// regular corepresentations V and W.
class GroupModel {
public:
    explicit GroupModel(FiniteGroup g) : group_(std::move(g)) {
        m_ = pool_.make<GroupAlgebraDescriptor>(&group_);
        b_ = pool_.make<MatrixUnitDescriptor>(0, group_.order(), "B(l2 " + group_.name() + ")");

        tau_ = Functional(
            m_, [](const Label& l) { return l[0] == 0 ? cplx(1.0) : cplx(0.0); },
            [](const Label&) { return 1.0; }, true);

        const int n = group_.order();
        trb_ = Functional(
            b_, [n](const Label& l) { return l[0] == l[1] ? cplx(1.0 / n) : cplx(0.0); },
            [n](const Label&) { return 1.0 / n; }, true);
    }

    GroupModel(const GroupModel&) = delete;
    GroupModel& operator=(const GroupModel&) = delete;

    const FiniteGroup& group() const { return group_; }
    DescriptorPool& pool() { return pool_; }
    const GroupAlgebraDescriptor* m() const { return m_; }
    const MatrixUnitDescriptor* b() const { return b_; }
    const Functional& tau() const { return tau_; }
    const Functional& trb() const { return trb_; }

    const TensorDescriptor* mm() { return pool_.tensor(m_, m_); }
    const TensorDescriptor* mmm() { return pool_.tensor3(m_); }
    const TensorDescriptor* bm() { return pool_.tensor(b_, m_); }
    const TensorDescriptor* mb() { return pool_.tensor(m_, b_); }
    const TensorDescriptor* bb() { return pool_.tensor(b_, b_); }

    Functional tau2() { return tensor_functional(tau_, tau_, mm()); }
    Functional tau3() {
        return tensor_functional(tensor_functional(tau_, tau_, pool_.tensor(m_, m_)), tau_, mmm());
    }

    Element lambda(int g) const { return Element::basis(m_, Label{g}); }
    Element one_m() const { return Element::unit(m_); }
    Element one_b() const { return Element::unit(b_); }

    // Left regular representation of lambda_g on l^2(Gamma).
    Element reg(int g) const {
        Element e(b_);
        for (int k = 0; k < group_.order(); ++k) e.add(Label{group_.mul(g, k), k}, 1.0);
        return e;
    }

    Element reg_of(const Element& x) const {
        Element e(b_);
        for (const auto& [l, c] : x.terms()) {
            for (int k = 0; k < group_.order(); ++k) e.add(Label{group_.mul(l[0], k), k}, c);
        }
        return e;
    }

    // Diagonal coproduct, extended linearly.
    Element delta(const Element& x) {
        Element r(mm());
        for (const auto& [l, c] : x.terms()) r.add(l + l, c);
        return r;
    }

    // Right regular corepresentation V = sum_g e_{gg} (x) lambda_g.
    Element v_element() {
        Element e(bm());
        for (int g = 0; g < group_.order(); ++g) e.add(Label{g, g, g}, 1.0);
        return e;
    }

    // Left regular corepresentation W = sum_g lambda_{g^{-1}} (x) e_{gg}.
    Element w_element() {
        Element e(mb());
        for (int g = 0; g < group_.order(); ++g) e.add(Label{group_.inv(g), g, g}, 1.0);
        return e;
    }

private:
    FiniteGroup group_;
    DescriptorPool pool_;
    const GroupAlgebraDescriptor* m_ = nullptr;
    const MatrixUnitDescriptor* b_ = nullptr;
    Functional tau_, trb_;
};

// View an element of B(l^2) (x) M as a block matrix over the first leg.
inline Corep corep_from_bm(const Element& e, const GroupModel& gm, const std::vector<int>& window) {
    Corep c(gm.m(), window, window);
    std::map<std::pair<int, int>, Element> ent;
    for (const auto& [l, coef] : e.terms()) {
        auto key = std::make_pair(l[0], l[1]);
        auto it = ent.find(key);
        if (it == ent.end()) it = ent.emplace(key, Element(gm.m())).first;
        it->second.add(l.slice(2, l.size() - 2), coef);
    }
    std::set<int> win(window.begin(), window.end());
    for (auto& [ij, el] : ent)
        if (win.count(ij.first) && win.count(ij.second)) c.set(ij.first, ij.second, el);
    return c;
}

// ---------------------------------------------------------------------------
// Unitary 2-cocycles over L(H)
// ---------------------------------------------------------------------------

// Exact unimodular table over pairs of characters: omega(chi, chi') =
// exp(2 pi i turn[chi][chi'] / den).
struct CocycleTable {
    int den = 1;
    std::vector<std::vector<int>> turn;

    cplx value(int c1, int c2) const {
        double t = 2.0 * M_PI * turn[static_cast<std::size_t>(c1)][static_cast<std::size_t>(c2)] / den;
        return {std::cos(t), std::sin(t)};
    }
};

// Unitary 2-cocycle Omega in L(H) (x) L(H), kept both as a sparse element
// and (abelian case) as an exact phase table over the dual.
struct Cocycle2 {
    Element omega;                      // in mm() of the H-model
    std::optional<CocycleTable> table;  // abelian case
};

// Omega = sum_{chi,chi'} omega(chi,chi') p_chi (x) p_chi' expanded over
// lambda_g (x) lambda_h.
inline Cocycle2 cocycle_from_table(GroupModel& h, const CharacterTable& chars, CocycleTable table) {
    const int n = h.group().order();
    Element om(h.mm());
    for (int g = 0; g < n; ++g) {
        for (int k = 0; k < n; ++k) {
            cplx c = 0.0;
            for (int c1 = 0; c1 < n; ++c1)
                for (int c2 = 0; c2 < n; ++c2)
                    c += table.value(c1, c2) * std::conj(chars.value(c1, g)) * std::conj(chars.value(c2, k));
            c /= static_cast<double>(n) * n;
            om.add(Label{g, k}, c);
        }
    }
    om.drop(1e-14);
    return Cocycle2{om, std::move(table)};
}

// The non-degenerate cocycle on H = A x A^ coming from the evaluation
// bicharacter: with characters of H written chi_{(psi,b)}(a,phi) =
// psi(a) phi(b), set omega(chi_{(psi,b)}, chi_{(psi',b')}) = psi'(b).
struct HeisenbergData {
    FiniteGroup h;                     // A x A^
    std::vector<std::pair<int, int>> char_split; // chi -> (psi in A^, b in A)
};

// Build H = A x A^ together with the evaluation cocycle table on H^.
inline std::pair<FiniteGroup, CocycleTable> heisenberg_cocycle_data(const FiniteGroup& a) {
    if (!a.abelian()) throw NotAbelian("heisenberg cocycle requires an abelian group");
    CharacterTable ca(a);
    FiniteGroup ahat = dual_group(a, ca);
    // index maps: element of ahat at position i corresponds to character perm[i]
    // (reconstructed by matching values)
    const int n = a.order();
    FiniteGroup h = direct_product(a, ahat, a.name() + "x" + a.name() + "^");

    // characters of H; split each as (psi, b)
    CharacterTable ch(h);
    const int nh = h.order();

    // element (x,y) of h has index x*n + y, where y indexes a character of A.
    // The character chi of H decomposes as chi(a, phi) = psi(a) phi(b):
    // psi = chi restricted to A x {e}, and b is the unique element of A with
    // chi(e, y) = value of character y at b, for all y.
    auto char_perm = [&]() {
        // position y in ahat -> character index in ca
        std::vector<int> p(static_cast<std::size_t>(n));
        int triv = ca.trivial();
        p[0] = triv;
        int nxt = 1;
        for (int c = 0; c < n; ++c)
            if (c != triv) p[static_cast<std::size_t>(nxt++)] = c;
        return p;
    }();

    CocycleTable table;
    table.den = ch.den();
    table.turn.assign(static_cast<std::size_t>(nh), std::vector<int>(static_cast<std::size_t>(nh), 0));

    // b-component of each character of H
    std::vector<int> bcomp(static_cast<std::size_t>(nh), -1);
    std::vector<int> psiturns; // psi as turns on A, flattened per chi
    std::vector<std::vector<int>> psi_of_chi(static_cast<std::size_t>(nh));
    for (int c = 0; c < nh; ++c) {
        std::vector<int>& psi = psi_of_chi[static_cast<std::size_t>(c)];
        psi.resize(static_cast<std::size_t>(n));
        for (int x = 0; x < n; ++x) psi[static_cast<std::size_t>(x)] = ch.turn(c, x * n + 0);
        for (int b = 0; b < n; ++b) {
            bool ok = true;
            for (int y = 0; y < n && ok; ++y) {
                int lhs = ch.turn(c, 0 * n + y);
                int rhs = ca.turn(char_perm[static_cast<std::size_t>(y)], b) * (ch.den() / ca.den());
                ok = (lhs % ch.den()) == (rhs % ch.den());
            }
            if (ok) {
                bcomp[static_cast<std::size_t>(c)] = b;
                break;
            }
        }
        if (bcomp[static_cast<std::size_t>(c)] < 0) throw Error("heisenberg: character split failed");
    }

    for (int c1 = 0; c1 < nh; ++c1)
        for (int c2 = 0; c2 < nh; ++c2) {
            // omega(chi1, chi2) = psi2(b1)
            int b1 = bcomp[static_cast<std::size_t>(c1)];
            table.turn[static_cast<std::size_t>(c1)][static_cast<std::size_t>(c2)] =
                psi_of_chi[static_cast<std::size_t>(c2)][static_cast<std::size_t>(b1)] % ch.den();
        }
    return {std::move(h), std::move(table)};
}

// 2-cocycle identity (Omega (x) 1)(Delta (x) i)(Omega) =
// (1 (x) Omega)(i (x) Delta)(Omega), measured in L^2(tau^3).
inline double check_cocycle(GroupModel& gm, const Element& omega) {
    const TensorDescriptor* m3 = gm.mmm();
    auto lift12 = [&](const Element& e) { // x (x) y -> x (x) y (x) 1
        Element r(m3);
        for (const auto& [l, c] : e.terms()) r.add(l + Label{0}, c);
        return r;
    };
    auto lift23 = [&](const Element& e) { // x (x) y -> 1 (x) x (x) y
        Element r(m3);
        for (const auto& [l, c] : e.terms()) r.add(Label{0} + l, c);
        return r;
    };
    auto delta1 = [&](const Element& e) { // (Delta (x) i)
        Element r(m3);
        for (const auto& [l, c] : e.terms()) r.add(Label{l[0]} + l, c);
        return r;
    };
    auto delta2 = [&](const Element& e) { // (i (x) Delta)
        Element r(m3);
        for (const auto& [l, c] : e.terms()) r.add(l + Label{l[1]}, c);
        return r;
    };
    Element lhs = lift12(omega) * delta1(omega);
    Element rhs = lift23(omega) * delta2(omega);
    Functional t3 = gm.tau3();
    return l2_norm(lhs - rhs, t3);
}

inline double cocycle_unitarity_residual(GroupModel& gm, const Element& omega) {
    Functional t2 = gm.tau2();
    Element one2 = Element::unit(gm.mm());
    return std::max(l2_norm(omega.star() * omega - one2, t2),
                    l2_norm(omega * omega.star() - one2, t2));
}

// Coboundary twist (u^* (x) u^*) Omega Delta(u).
inline Element coboundary_twist(GroupModel& gm, const Element& omega, const Element& u) {
    Element us = u.star();
    Element t(gm.mm());
    for (const auto& [l1, c1] : us.terms())
        for (const auto& [l2, c2] : us.terms()) t.add(l1 + l2, c1 * c2);
    return t * omega * gm.delta(u);
}

// Haar-random-ish unitary exp(i h) for a random self-adjoint h in L(Gamma),
// computed through the regular picture (functions of h stay in the span).
inline Element random_group_unitary(GroupModel& gm, std::mt19937_64& rng) {
    const int n = gm.group().order();
    std::normal_distribution<double> nd(0.0, 1.0);
    Element x(gm.m());
    for (int g = 0; g < n; ++g) x.add(Label{g}, cplx(nd(rng), nd(rng)));
    Element h = x + x.star();

    MatrixXcd hmat = MatrixXcd::Zero(n, n);
    for (const auto& [l, c] : h.terms())
        for (int k = 0; k < n; ++k) hmat(gm.group().mul(l[0], k), k) += c;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(hmat);
    MatrixXcd umat = es.eigenvectors() *
                     (es.eigenvalues().array() * cplx(0, 1)).exp().matrix().asDiagonal() *
                     es.eigenvectors().adjoint();

    Element u(gm.m());
    for (int g = 0; g < n; ++g) {
        cplx c = 0.0;
        for (int k = 0; k < n; ++k) c += umat(gm.group().mul(g, k), k);
        u.add(Label{g}, c / static_cast<double>(n));
    }
    return u.drop(1e-15);
}

// ---------------------------------------------------------------------------
// Non-degeneracy: slices of Omega V_H generate the dual algebra
// ---------------------------------------------------------------------------

struct NondegeneracyReport {
    bool nondegenerate = false;
    int algebra_dim = 0;
    int center_dim = 0;
};

namespace detail {

// Orthonormal closure of a set of B(l^2 H) elements under multiplication,
// in the HS inner product given by the normalized trace.
inline std::vector<Element> algebra_closure(std::vector<Element> gens, const Functional& tr,
                                            double tol = 1e-10) {
    std::vector<Element> basis;
    auto add = [&](Element x) {
        for (const auto& b : basis) x = x - gns_inner(x, b, tr) * b;
        double n = l2_norm(x, tr);
        if (n > tol) {
            basis.push_back((1.0 / n) * x);
            return true;
        }
        return false;
    };
    for (auto& g : gens) add(g);
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Element> cur = basis;
        for (const auto& x : cur) {
            if (add(x.star())) grew = true;
            for (const auto& y : cur)
                if (add(x * y)) grew = true;
        }
    }
    return basis;
}

} // namespace detail

// Build V_H = sum_h e_{hh} (x) lambda_h over the model of H itself, slice the
// second leg of Omega V_H, and close under products: Omega is non-degenerate
// iff this algebra is all |H| dimensions of a single factor.
inline NondegeneracyReport is_nondegenerate(GroupModel& h, const Element& omega) {
    const int n = h.group().order();

    // Omega V_H in B(l^2 H) (x) L(H): first legs of Omega act by left
    // multiplication.
    Element omreg(h.bm());
    for (const auto& [l, c] : omega.terms()) {
        for (int k = 0; k < n; ++k) omreg.add(Label{h.group().mul(l[0], k), k, l[1]}, c);
    }
    Element vh = h.v_element();
    Element x = omreg * vh;

    // slices (i (x) tau(lambda_g^{-1} . )): one element of B(l^2 H) per g
    std::vector<Element> slices(static_cast<std::size_t>(n), Element(h.b()));
    for (const auto& [l, c] : x.terms())
        slices[static_cast<std::size_t>(l[2])].add(Label{l[0], l[1]}, c);

    std::vector<Element> basis = detail::algebra_closure(std::move(slices), h.trb());

    NondegeneracyReport rep;
    rep.algebra_dim = static_cast<int>(basis.size());

    // center of the closed algebra: solve [z, b_j] = 0 within the span
    if (!basis.empty()) {
        ElementLinearSystem sys(static_cast<int>(basis.size()), h.trb());
        for (const auto& b : basis) {
            std::vector<std::pair<int, Element>> terms;
            for (int j = 0; j < static_cast<int>(basis.size()); ++j) {
                Element comm = basis[static_cast<std::size_t>(j)] * b - b * basis[static_cast<std::size_t>(j)];
                if (!comm.zero()) terms.emplace_back(j, comm);
            }
            if (!terms.empty()) sys.add_equation(terms);
        }
        // if all commutators vanish the system is empty; then center = algebra
        auto ns = sys.nullspace(3e-7);
        rep.center_dim = (ns.scale == 0.0) ? rep.algebra_dim : static_cast<int>(ns.basis.cols());
    }

    rep.nondegenerate = (rep.center_dim == 1 && rep.algebra_dim == n);
    return rep;
}

// ---------------------------------------------------------------------------
// Cohomology class (abelian case)
// ---------------------------------------------------------------------------

// The alternating bicharacter beta(chi,chi') = omega(chi,chi')/omega(chi',chi)
// classifies cocycles on abelian duals up to coboundary.
struct BicharacterClass {
    int den = 1;
    std::vector<std::vector<int>> turn;

    friend bool operator==(const BicharacterClass& a, const BicharacterClass& b) {
        if (a.turn.size() != b.turn.size()) return false;
        for (std::size_t i = 0; i < a.turn.size(); ++i)
            for (std::size_t j = 0; j < a.turn.size(); ++j) {
                long ta = static_cast<long>(a.turn[i][j]) * b.den;
                long tb = static_cast<long>(b.turn[i][j]) * a.den;
                long m = static_cast<long>(a.den) * b.den;
                if (((ta - tb) % m + m) % m != 0) return false;
            }
        return true;
    }

    bool trivial() const {
        for (const auto& row : turn)
            for (int t : row)
                if (t % den != 0) return false;
        return true;
    }

    // radical {chi : beta(chi, .) = 1}; non-degenerate iff trivial radical
    int radical_size() const {
        int r = 0;
        for (std::size_t i = 0; i < turn.size(); ++i) {
            bool in_rad = true;
            for (std::size_t j = 0; j < turn.size() && in_rad; ++j)
                if (turn[i][j] % den != 0) in_rad = false;
            if (in_rad) ++r;
        }
        return r;
    }
};

// Extract omega(chi,chi') = (chi (x) chi')(Omega) and antisymmetrize. Phases
// are snapped to exact rational turns over the group exponent.
inline BicharacterClass cohomology_class_abelian(GroupModel& h, const Element& omega,
                                                 const CharacterTable& chars) {
    if (!h.group().abelian()) throw NotAbelian("cohomology_class_abelian");
    const int n = h.group().order();
    const int den = chars.den();
    BicharacterClass cls;
    cls.den = den;
    cls.turn.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));

    std::vector<std::vector<cplx>> om(static_cast<std::size_t>(n), std::vector<cplx>(static_cast<std::size_t>(n), 0.0));
    for (const auto& [l, c] : omega.terms())
        for (int c1 = 0; c1 < n; ++c1)
            for (int c2 = 0; c2 < n; ++c2)
                om[static_cast<std::size_t>(c1)][static_cast<std::size_t>(c2)] +=
                    c * chars.value(c1, l[0]) * chars.value(c2, l[1]);

    for (int c1 = 0; c1 < n; ++c1)
        for (int c2 = 0; c2 < n; ++c2) {
            cplx beta = om[static_cast<std::size_t>(c1)][static_cast<std::size_t>(c2)] /
                        om[static_cast<std::size_t>(c2)][static_cast<std::size_t>(c1)];
            double t = std::arg(beta) / (2.0 * M_PI) * den;
            int ti = static_cast<int>(std::lround(t));
            if (std::abs(t - ti) > 1e-6)
                throw Error("bicharacter phase not a rational turn: " + std::to_string(t));
            cls.turn[static_cast<std::size_t>(c1)][static_cast<std::size_t>(c2)] = ((ti % den) + den) % den;
        }
    return cls;
}

// ---------------------------------------------------------------------------
// Classification of co-object data over L(Gamma)
// ---------------------------------------------------------------------------

struct CoobjectClass {
    std::vector<int> subgroup;  // elements of H in Gamma
    bool trivial = false;       // H = {e}
    bool needs_user_cocycle = false; // non-abelian square-order H
    std::optional<BicharacterClass> bicharacter; // abelian non-trivial case
};

namespace detail {

// Basis of a finite abelian group: generators g_1..g_k with
// H = <g_1> (+) ... (+) <g_k>, so every element has a unique exponent tuple.
inline bool find_cyclic_basis_rec(const FiniteGroup& g, const std::vector<int>& carrier,
                                  std::vector<int>& gens) {
    if (carrier.size() == 1) return true;
    // candidates of maximal order inside the carrier
    int maxord = 0;
    for (int x : carrier)
        if (x != 0) maxord = std::max(maxord, g.element_order(x));
    for (int x : carrier) {
        if (x == 0 || g.element_order(x) != maxord) continue;
        auto cyc = g.generated({x});
        // brute-force complement: a subgroup of the carrier of matching size
        // meeting <x> trivially
        for (const auto& k : g.subgroups()) {
            if (k.size() * cyc.size() != carrier.size()) continue;
            if (!std::includes(carrier.begin(), carrier.end(), k.begin(), k.end())) continue;
            std::vector<int> meet;
            std::set_intersection(cyc.begin(), cyc.end(), k.begin(), k.end(), std::back_inserter(meet));
            if (meet.size() != 1) continue;
            gens.push_back(x);
            if (k.size() == 1) return true;
            if (find_cyclic_basis_rec(g, k, gens)) return true;
            gens.pop_back();
        }
    }
    return false;
}

inline std::vector<int> find_cyclic_basis(const FiniteGroup& g) {
    std::vector<int> carrier;
    for (int x = 0; x < g.order(); ++x) carrier.push_back(x);
    std::vector<int> gens;
    if (g.order() > 1 && !find_cyclic_basis_rec(g, carrier, gens))
        throw Error("no cyclic basis found for abelian group " + g.name());
    return gens;
}

// All alternating bimultiplicative forms on an abelian group, as turn tables.
inline std::vector<BicharacterClass> alternating_bicharacters(const FiniteGroup& g) {
    const int n = g.order();
    const int den = g.exponent();

    std::vector<int> gens = find_cyclic_basis(g);
    const int k = static_cast<int>(gens.size());
    std::vector<int> ords;
    for (int i = 0; i < k; ++i) ords.push_back(g.element_order(gens[static_cast<std::size_t>(i)]));

    // unique exponent tuples
    std::vector<std::vector<int>> expv(static_cast<std::size_t>(n));
    {
        std::vector<int> e(static_cast<std::size_t>(k), 0);
        int count = 0;
        while (true) {
            int x = 0;
            for (int i = 0; i < k; ++i) x = g.mul(x, g.pow(gens[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(i)]));
            expv[static_cast<std::size_t>(x)] = e;
            ++count;
            int p = 0;
            while (p < k) {
                if (++e[static_cast<std::size_t>(p)] < ords[static_cast<std::size_t>(p)]) break;
                e[static_cast<std::size_t>(p)] = 0;
                ++p;
            }
            if (p == k) break;
        }
        if (count != n) throw Error("cyclic basis does not enumerate the group");
    }

    // free parameters t_ij = beta(gen_i, gen_j) for i < j, of order gcd(o_i, o_j)
    struct Par {
        int i, j, ord;
    };
    std::vector<Par> pars;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) pars.push_back({i, j, std::gcd(ords[static_cast<std::size_t>(i)], ords[static_cast<std::size_t>(j)])});

    std::vector<BicharacterClass> out;
    std::vector<int> choice(pars.size(), 0);
    auto emit = [&]() {
        std::vector<std::vector<int>> tg(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(k), 0));
        for (std::size_t p = 0; p < pars.size(); ++p) {
            int t = den / pars[p].ord * choice[p];
            tg[static_cast<std::size_t>(pars[p].i)][static_cast<std::size_t>(pars[p].j)] = t % den;
            tg[static_cast<std::size_t>(pars[p].j)][static_cast<std::size_t>(pars[p].i)] = (den - t % den) % den;
        }
        BicharacterClass cls;
        cls.den = den;
        cls.turn.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                long t = 0;
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j)
                        t += static_cast<long>(expv[static_cast<std::size_t>(x)][static_cast<std::size_t>(i)]) *
                             expv[static_cast<std::size_t>(y)][static_cast<std::size_t>(j)] *
                             tg[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                cls.turn[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = static_cast<int>(((t % den) + den) % den);
            }
        out.push_back(std::move(cls));
    };
    // odometer over all parameter choices
    while (true) {
        emit();
        std::size_t p = 0;
        while (p < pars.size()) {
            if (++choice[p] < pars[p].ord) break;
            choice[p] = 0;
            ++p;
        }
        if (p == pars.size()) break;
        if (pars.empty()) break;
    }
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Regular corepresentations twisted by a cocycle, and their pentagons
// ---------------------------------------------------------------------------

struct RegularCoreps {
    Element v;       // in B(l^2) (x) M
    Element w;       // in M (x) B(l^2)
    Element v_tilde; // Omega V
    Element w_tilde; // (Omega W^*)^*
    double pentagon_v = 0.0; // Vt_12 Vt_13 V_23 - Vt_23 Vt_12
    double pentagon_w = 0.0; // W_12 Wt_13 Wt_23 - Wt_23 Wt_12
};

namespace detail {

// Lift an element of B (x) M or M (x) B onto three B-legs at the given slots,
// sending M through the left regular representation.
inline Element lift3(const GroupModel& gm, const TensorDescriptor* b3, const Element& e,
                     int slot1, int slot2, bool first_is_b) {
    const int n = gm.group().order();
    Element r(b3);
    auto reg_labels = [&](int g) {
        std::vector<Label> ls;
        for (int k = 0; k < n; ++k) ls.push_back(Label{gm.group().mul(g, k), k});
        return ls;
    };
    for (const auto& [l, c] : e.terms()) {
        Label l1 = first_is_b ? Label{l[0], l[1]} : Label{l[0]};
        Label l2 = first_is_b ? Label{l[2]} : Label{l[1], l[2]};
        std::vector<Label> exp1 = first_is_b ? std::vector<Label>{l1} : reg_labels(l1[0]);
        std::vector<Label> exp2 = first_is_b ? reg_labels(l2[0]) : std::vector<Label>{l2};
        const int empty = 3 - (slot1 - 1) - (slot2 - 1);
        for (const Label& a : exp1)
            for (const Label& b : exp2) {
                Label full[3];
                full[static_cast<std::size_t>(slot1) - 1] = a;
                full[static_cast<std::size_t>(slot2) - 1] = b;
                for (int k = 0; k < n; ++k) {
                    full[static_cast<std::size_t>(empty)] = Label{k, k};
                    r.add(full[0] + full[1] + full[2], c);
                }
            }
    }
    return r;
}

} // namespace detail

// V, W and their Omega-twists for the cleft co-object over L(Gamma), with
// both pentagon identities evaluated in L^2 of the triple trace.
inline RegularCoreps build_regular_coreps(GroupModel& gm, const Element& omega) {
    const int n = gm.group().order();
    RegularCoreps rc;
    rc.v = gm.v_element();
    rc.w = gm.w_element();

    // Omega acting on the two legs of V (B-leg via regular representation)
    Element om_bm(gm.bm());
    for (const auto& [l, c] : omega.terms())
        for (int k = 0; k < n; ++k) om_bm.add(Label{gm.group().mul(l[0], k), k, l[1]}, c);
    rc.v_tilde = om_bm * rc.v;

    // W~* = Omega W*, with the second leg of Omega in the regular picture
    Element om_mb(gm.mb());
    for (const auto& [l, c] : omega.terms())
        for (int k = 0; k < n; ++k) om_mb.add(Label{l[0], gm.group().mul(l[1], k), k}, c);
    rc.w_tilde = (om_mb * rc.w.star()).star();

    const TensorDescriptor* b3 = gm.pool().tensor3(gm.b());
    Functional trb3 = tensor_functional(
        tensor_functional(gm.trb(), gm.trb(), gm.pool().tensor(gm.b(), gm.b())), gm.trb(), b3);

    Element vt12 = detail::lift3(gm, b3, rc.v_tilde, 1, 2, true);
    Element vt13 = detail::lift3(gm, b3, rc.v_tilde, 1, 3, true);
    Element v23 = detail::lift3(gm, b3, rc.v, 2, 3, true);
    Element vt23 = detail::lift3(gm, b3, rc.v_tilde, 2, 3, true);
    rc.pentagon_v = l2_norm(vt12 * vt13 * v23 - vt23 * vt12, trb3);

    Element w12 = detail::lift3(gm, b3, rc.w, 1, 2, false);
    Element wt13 = detail::lift3(gm, b3, rc.w_tilde, 1, 3, false);
    Element wt23 = detail::lift3(gm, b3, rc.w_tilde, 2, 3, false);
    Element wt12 = detail::lift3(gm, b3, rc.w_tilde, 1, 2, false);
    rc.pentagon_w = l2_norm(w12 * wt13 * wt23 - wt23 * wt12, trb3);

    return rc;
}

// ---------------------------------------------------------------------------
// Induced irreducible families
// ---------------------------------------------------------------------------

struct InducedFamily {
    std::vector<Corep> coreps;          // one per right coset, entries in L(Gamma)
    std::vector<int> section;            // coset representatives
    Corep base;                          // the corep over L(H), window H
    double corep_identity_residual = 0.0;
    double unitarity_residual = 0.0;
};

// Lift a cocycle over L(H) to L(Gamma) along a subgroup embedding.
inline Element lift_cocycle(GroupModel& gamma, const std::vector<int>& h, const Element& omega_h) {
    Element om(gamma.mm());
    for (const auto& [l, c] : omega_h.terms())
        om.add(Label{h[static_cast<std::size_t>(l[0])], h[static_cast<std::size_t>(l[1])]}, c);
    return om;
}

// The one irreducible Omega-corepresentation of L(H), obtained by splitting
// the twisted regular block Sigma(Omega V_H)Sigma on l^2(H), then the family
// over L(Gamma) given by right translates along a coset section.
inline InducedFamily induce_irreducibles(GroupModel& gamma, const std::vector<int>& hsub,
                                         GroupModel& hmodel, const Element& omega_h,
                                         std::uint64_t seed = 7) {
    auto nd = is_nondegenerate(hmodel, omega_h);
    if (!nd.nondegenerate)
        throw DegenerateCocycle("induction requires a non-degenerate cocycle on H");

    const int nh = hmodel.group().order();
    // X = Sigma (Omega V_H) Sigma as a block matrix over l^2(H) with entries
    // in L(H) ... lifted to L(Gamma) right away.
    Element om_bm(hmodel.bm());
    for (const auto& [l, c] : omega_h.terms())
        for (int k = 0; k < nh; ++k)
            om_bm.add(Label{hmodel.group().mul(l[0], k), k, l[1]}, c);
    Element x = om_bm * hmodel.v_element();

    std::vector<int> window(static_cast<std::size_t>(nh));
    for (int i = 0; i < nh; ++i) window[static_cast<std::size_t>(i)] = i;
    Corep xh = corep_from_bm(x, hmodel, window);

    // entries into L(Gamma)
    Corep xg(gamma.m(), window, window);
    for (const auto& [ij, e] : xh.entries()) {
        Element lifted(gamma.m());
        for (const auto& [l, c] : e.terms()) lifted.add(Label{hsub[static_cast<std::size_t>(l[0])]}, c);
        xg.set(ij.first, ij.second, lifted);
    }

    InducedFamily fam;
    Element om_g = lift_cocycle(gamma, hsub, omega_h);
    auto delta_n = [&](const Element& m) { return om_g * gamma.delta(m); };
    Functional tau2 = gamma.tau2();
    fam.corep_identity_residual =
        check_corep_identity(xg, [&](int i, int j) { return delta_n(xg.entry(i, j)); }, gamma.mm(),
                             tau2, 1e-10)
            .residual;
    fam.unitarity_residual = check_unitary(xg, gamma.one_m(), gamma.tau(), 1e-10).residual;

    auto dec = decompose(xg, gamma.tau(), seed);
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(nh))));
    const Corep* block = nullptr;
    for (const auto& b : dec.blocks)
        if (static_cast<int>(b.block.cols().size()) == d) {
            block = &b.block;
            break;
        }
    if (!block) throw ValidationFailure("twisted regular block did not yield a dim sqrt(|H|) piece");
    fam.base = *block;

    auto cosets = right_cosets(gamma.group(), hsub);
    fam.section = cosets.section;
    for (int rep : cosets.section) fam.coreps.push_back(fam.base.right_multiplied(gamma.lambda(rep)));
    return fam;
}

// ---------------------------------------------------------------------------
// Ergodic coactions of L(Gamma) on B(H): spectral support and traciality
// ---------------------------------------------------------------------------

struct CoactionData {
    const Descriptor* mdesc = nullptr;       // coefficients
    const TensorDescriptor* mb = nullptr;    // mdesc (x) B(H)
    int dim = 0;
    std::function<Element(int, int)> alpha;  // alpha(e_ij), in mb
};

struct InvariantStateReport {
    std::vector<int> support;           // {g : B_g != 0}
    bool support_is_subgroup = false;
    bool ergodic = false;
    std::vector<int> bg_dims;
    double traciality_residual = 0.0;   // invariant state vs normalized trace
    double invariant_residual = 0.0;    // scalarness of (tau (x) i) alpha
    bool galois_order_law = false;      // |H| = dim^2
};

// Spectral subspaces B_g = {x : alpha(x) = lambda_g (x) x} of a coaction of
// L(Gamma), the support subgroup, and the trace identity for the invariant
// state.
inline InvariantStateReport invariant_state_check(const GroupModel& gm, const CoactionData& cd) {
    const int n = gm.group().order();
    const int d = cd.dim;
    InvariantStateReport rep;

    // alpha(x) for x = sum x_ij e_ij; group coefficients of lambda_g rows
    // equations per g: alpha(x) - lambda_g (x) x = 0 restricted to row g
    std::vector<Element> alpha_ij;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) alpha_ij.push_back(cd.alpha(i, j));

    Functional phi2 = tensor_functional(
        gm.tau(),
        Functional(
            cd.mb->second(), [d](const Label& l) { return l[0] == l[1] ? cplx(1.0 / d) : cplx(0.0); },
            [d](const Label&) { return 1.0 / d; }, true),
        cd.mb);

    rep.bg_dims.assign(static_cast<std::size_t>(n), 0);
    for (int g = 0; g < n; ++g) {
        ElementLinearSystem sys(d * d, phi2);
        // residual element: sum_ij x_ij [alpha(e_ij)] - lambda_g (x) sum x_ij e_ij
        std::vector<std::pair<int, Element>> terms;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                Element e = alpha_ij[static_cast<std::size_t>(i * d + j)];
                Element lg(cd.mb);
                lg.add(Label{g} + Label{i, j}, 1.0);
                terms.emplace_back(i * d + j, e - lg);
            }
        sys.add_equation(terms);
        auto ns = sys.nullspace(3e-7);
        rep.bg_dims[static_cast<std::size_t>(g)] = static_cast<int>(ns.basis.cols());
        if (ns.basis.cols() > 0) rep.support.push_back(g);
    }

    rep.ergodic = rep.bg_dims[0] == 1;

    // support closed under multiplication and inverse
    rep.support_is_subgroup = true;
    std::set<int> sup(rep.support.begin(), rep.support.end());
    for (int g : rep.support) {
        if (!sup.count(gm.group().inv(g))) rep.support_is_subgroup = false;
        for (int h : rep.support)
            if (!sup.count(gm.group().mul(g, h))) rep.support_is_subgroup = false;
    }

    // invariant state phi_B(x) = (tau (x) i) alpha(x): must be scalar; compare
    // with the normalized trace.
    double offdiag = 0.0;
    std::vector<cplx> diag(static_cast<std::size_t>(d * d), 0.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            // slice tau on the first leg
            Element s(cd.mb->second());
            for (const auto& [l, c] : alpha_ij[static_cast<std::size_t>(i * d + j)].terms()) {
                Label m = l.slice(0, l.size() - 2);
                cplx t = gm.tau().value(m);
                if (t != cplx(0.0)) s.add(l.slice(l.size() - 2, 2), c * t);
            }
            // s should equal phi_B(e_ij) * 1
            cplx mean = 0.0;
            for (int k = 0; k < d; ++k) mean += s.coef(Label{k, k});
            mean /= static_cast<double>(d);
            Element dev = s;
            for (int k = 0; k < d; ++k) dev.add(Label{k, k}, -mean);
            offdiag = std::max(offdiag, dev.max_abs());
            diag[static_cast<std::size_t>(i * d + j)] = mean;
            double expected = (i == j) ? 1.0 / d : 0.0;
            rep.traciality_residual = std::max(rep.traciality_residual, std::abs(mean - expected));
        }
    rep.invariant_residual = offdiag;
    rep.galois_order_law = static_cast<int>(rep.support.size()) == d * d;
    return rep;
}

// Enumerate (subgroup H, class of non-degenerate cocycle) pairs for L(Gamma).
// Only square-order subgroups can carry one; abelian subgroups are classified
// exactly through their alternating bicharacters, non-abelian ones are
// reported as needing a user-supplied table. Output is deduplicated under
// Gamma-conjugacy.
inline std::vector<CoobjectClass> classify_coobjects(const FiniteGroup& gamma) {
    std::vector<CoobjectClass> out;
    CoobjectClass triv;
    triv.subgroup = {0};
    triv.trivial = true;
    out.push_back(triv);

    auto subs = gamma.subgroups();
    auto is_square = [](int m) {
        int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
        return r * r == m;
    };

    std::vector<std::vector<int>> taken; // conjugacy representatives handled
    for (const auto& h : subs) {
        if (h.size() <= 1 || !is_square(static_cast<int>(h.size()))) continue;
        bool dup = false;
        for (const auto& k : taken)
            if (gamma.subgroups_conjugate(h, k)) dup = true;
        if (dup) continue;
        taken.push_back(h);

        // group structure of H
        std::vector<std::vector<int>> table(h.size(), std::vector<int>(h.size()));
        std::vector<std::string> names;
        for (std::size_t i = 0; i < h.size(); ++i) {
            names.push_back(gamma.elem_name(h[i]));
            for (std::size_t j = 0; j < h.size(); ++j) {
                int prod = gamma.mul(h[i], h[j]);
                table[i][j] = static_cast<int>(std::find(h.begin(), h.end(), prod) - h.begin());
            }
        }
        FiniteGroup hg("H<=" + gamma.name(), names, table);

        if (!hg.abelian()) {
            CoobjectClass c;
            c.subgroup = h;
            c.needs_user_cocycle = true;
            out.push_back(c);
            continue;
        }

        // dual of H carries the forms; H^ = H for finite abelian groups, and
        // the enumeration only depends on the abstract type.
        for (auto& beta : detail::alternating_bicharacters(hg)) {
            if (beta.trivial() || beta.radical_size() != 1) continue;
            CoobjectClass c;
            c.subgroup = h;
            c.bicharacter = beta;
            out.push_back(c);
        }
    }
    return out;
}

} // namespace qgal
