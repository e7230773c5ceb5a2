#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qgal/coobject.hpp"
#include "qgal/engine.hpp"
#include "qgal/finite_kac.hpp"

namespace qgal {

// ---------------------------------------------------------------------------
// Reflection of a finite Kac algebra across a cleft co-object:
// P = span{x y^*} with Delta_P(x y^*) = Delta_N(x) Delta_N(y)^*. In the cleft
// picture P is M as a space and Delta_P(z) = Omega Delta(z) Omega^*.
// ---------------------------------------------------------------------------

struct ReflectedBialgebra {
    GroupModel* gm = nullptr;
    Element omega;
    std::vector<cplx> phi_values;  // phi_P(lambda_g), normalized phi_P(1) = 1
    std::vector<cplx> psi_values;  // right-invariant counterpart
    double coassociativity_residual = 0.0;
    double left_invariance_residual = 0.0;
    double right_invariance_residual = 0.0;
    double traciality_residual = 0.0;

    cplx phi(const Element& x) const {
        cplx s = 0.0;
        for (const auto& [l, c] : x.terms()) s += c * phi_values[static_cast<std::size_t>(l[0])];
        return s;
    }
    cplx psi(const Element& x) const {
        cplx s = 0.0;
        for (const auto& [l, c] : x.terms()) s += c * psi_values[static_cast<std::size_t>(l[0])];
        return s;
    }
};

namespace detail {

// (phi (x) i) z and (i (x) phi) z for z in M (x) M, phi given on labels.
inline Element slice_first(const Element& z, const std::vector<cplx>& phi, const Descriptor* m) {
    Element r(m);
    for (const auto& [l, c] : z.terms()) {
        cplx t = phi[static_cast<std::size_t>(l[0])];
        if (t != cplx(0.0)) r.add(Label{l[1]}, c * t);
    }
    return r;
}

inline Element slice_second(const Element& z, const std::vector<cplx>& phi, const Descriptor* m) {
    Element r(m);
    for (const auto& [l, c] : z.terms()) {
        cplx t = phi[static_cast<std::size_t>(l[1])];
        if (t != cplx(0.0)) r.add(Label{l[0]}, c * t);
    }
    return r;
}

} // namespace detail

inline ReflectedBialgebra build_reflection(GroupModel& gm, const Element& omega) {
    ReflectedBialgebra rb;
    rb.gm = &gm;
    rb.omega = omega;
    const int n = gm.group().order();

    auto delta_p = [&](const Element& z) { return omega * gm.delta(z) * omega.star(); };

    // coassociativity of Delta_P on the basis
    {
        const TensorDescriptor* m3 = gm.mmm();
        Functional t3 = gm.tau3();
        double worst = 0.0;
        for (int g = 0; g < n; ++g) {
            Element d = delta_p(gm.lambda(g));
            Element lhs(m3), rhs(m3);
            // leg-wise extension of Delta_P
            for (const auto& [l, c] : d.terms()) {
                Element d1 = delta_p(gm.lambda(l[0]));
                for (const auto& [l1, c1] : d1.terms()) lhs.add(l1 + Label{l[1]}, c * c1);
                Element d2 = delta_p(gm.lambda(l[1]));
                for (const auto& [l2, c2] : d2.terms()) rhs.add(Label{l[0]} + l2, c * c2);
            }
            worst = std::max(worst, l2_norm(lhs - rhs, t3));
        }
        rb.coassociativity_residual = worst;
    }

    // invariant functionals: (phi (x) i) Delta_P(z) = phi(z) 1 and the
    // right-handed twin, solved as nullspaces over the functional values.
    auto solve_invariant = [&](bool left) {
        ElementLinearSystem sys(n, gm.tau());
        std::vector<Element> dp;
        for (int g = 0; g < n; ++g) dp.push_back(delta_p(gm.lambda(g)));
        for (int g = 0; g < n; ++g) {
            // sum_h x_h * [slice_h(Delta_P(lambda_g))] - x_g * 1 = 0
            std::vector<std::pair<int, Element>> terms(static_cast<std::size_t>(n));
            for (int h = 0; h < n; ++h) terms[static_cast<std::size_t>(h)] = {h, Element(gm.m())};
            for (const auto& [l, c] : dp[static_cast<std::size_t>(g)].terms()) {
                int h = left ? l[0] : l[1];
                int rest = left ? l[1] : l[0];
                terms[static_cast<std::size_t>(h)].second.add(Label{rest}, c);
            }
            terms[static_cast<std::size_t>(g)].second = terms[static_cast<std::size_t>(g)].second - gm.one_m();
            std::vector<std::pair<int, Element>> nonzero;
            for (auto& t : terms)
                if (!t.second.zero()) nonzero.push_back(std::move(t));
            sys.add_equation(nonzero);
        }
        auto ns = sys.nullspace(3e-7);
        if (ns.basis.cols() < 1) throw Error("no invariant functional found on the reflection");
        std::vector<cplx> vals(static_cast<std::size_t>(n));
        cplx unit = ns.basis(0, 0); // phi(lambda_e) = phi(1) normalizes to 1
        for (int h = 0; h < n; ++h) vals[static_cast<std::size_t>(h)] = ns.basis(h, 0) / unit;
        return vals;
    };
    rb.phi_values = solve_invariant(true);
    rb.psi_values = solve_invariant(false);

    // residuals of the invariance identities and of traciality
    {
        double worstl = 0.0, worstr = 0.0, worstt = 0.0;
        for (int g = 0; g < n; ++g) {
            Element d = delta_p(gm.lambda(g));
            Element l = detail::slice_first(d, rb.phi_values, gm.m()) -
                        rb.phi_values[static_cast<std::size_t>(g)] * gm.one_m();
            Element r = detail::slice_second(d, rb.psi_values, gm.m()) -
                        rb.psi_values[static_cast<std::size_t>(g)] * gm.one_m();
            worstl = std::max(worstl, l2_norm(l, gm.tau()));
            worstr = std::max(worstr, l2_norm(r, gm.tau()));
            for (int h = 0; h < n; ++h)
                worstt = std::max(worstt,
                                  std::abs(rb.phi(gm.lambda(g) * gm.lambda(h)) -
                                           rb.phi(gm.lambda(h) * gm.lambda(g))));
        }
        rb.left_invariance_residual = worstl;
        rb.right_invariance_residual = worstr;
        rb.traciality_residual = worstt;
    }
    return rb;
}

// ---------------------------------------------------------------------------
// Weight tables over an irreducible coefficient family
// ---------------------------------------------------------------------------

struct WeightTable {
    double offdiag_max = 0.0;
    double fit_scale = 1.0;          // global scalar freedom
    double diag_rel_residual = 0.0;  // vs T_{r,j} / A_{r,j} after the fit
    std::vector<std::vector<double>> a_eigen; // extracted A, normalized A_max = 1
    double a_dev_from_one = 0.0;     // Kac degeneration: A == 1
};

// phi_P(x_{r,ij} x_{s,kl}^*) against delta delta delta T/A, with the global
// scalar fixed by least squares over the diagonal. In the Kac case T = 1/n_r
// and A = 1.
inline WeightTable weight_formula_check(const ReflectedBialgebra& rb,
                                        const std::vector<Corep>& family,
                                        const std::vector<std::vector<double>>& t_eigen) {
    WeightTable wt;
    GroupModel& gm = *rb.gm;

    // collect tables
    std::vector<std::vector<std::vector<cplx>>> diag(family.size());
    double num = 0.0, den = 0.0;
    for (std::size_t r = 0; r < family.size(); ++r) {
        const auto& fam = family[r];
        const int nr = static_cast<int>(fam.cols().size());
        diag[r].assign(static_cast<std::size_t>(nr), std::vector<cplx>(static_cast<std::size_t>(nr)));
        for (std::size_t s = 0; s < family.size(); ++s) {
            const int ns = static_cast<int>(family[s].cols().size());
            for (int i = 0; i < nr; ++i)
                for (int j = 0; j < nr; ++j)
                    for (int k = 0; k < ns; ++k)
                        for (int l = 0; l < ns; ++l) {
                            cplx v = rb.phi(fam.entry(fam.cols()[static_cast<std::size_t>(i)],
                                                      fam.cols()[static_cast<std::size_t>(j)]) *
                                            family[s]
                                                .entry(family[s].cols()[static_cast<std::size_t>(k)],
                                                       family[s].cols()[static_cast<std::size_t>(l)])
                                                .star());
                            if (r == s && i == k && j == l) {
                                diag[r][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
                                double expected = t_eigen[r][static_cast<std::size_t>(j)]; // T/A with A fitted below
                                num += expected * v.real();
                                den += expected * expected;
                            } else {
                                wt.offdiag_max = std::max(wt.offdiag_max, std::abs(v));
                            }
                        }
        }
    }
    wt.fit_scale = num / den;

    // extracted A_{r,j} = fit * T_{r,j} / diag_{r,ij}; report its deviation
    // from constancy in i and from 1 after normalization
    double amax = 0.0;
    wt.a_eigen.resize(family.size());
    for (std::size_t r = 0; r < family.size(); ++r) {
        const int nr = static_cast<int>(family[r].cols().size());
        wt.a_eigen[r].assign(static_cast<std::size_t>(nr), 0.0);
        for (int j = 0; j < nr; ++j) {
            double acc = 0.0;
            for (int i = 0; i < nr; ++i) {
                double d = diag[r][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].real();
                wt.diag_rel_residual = std::max(
                    wt.diag_rel_residual,
                    std::abs(d - wt.fit_scale * t_eigen[r][static_cast<std::size_t>(j)]) /
                        std::abs(wt.fit_scale * t_eigen[r][static_cast<std::size_t>(j)]));
                acc += wt.fit_scale * t_eigen[r][static_cast<std::size_t>(j)] / d;
            }
            wt.a_eigen[r][static_cast<std::size_t>(j)] = acc / nr;
            amax = std::max(amax, std::abs(acc / nr));
        }
    }
    for (auto& row : wt.a_eigen)
        for (double& a : row) {
            a /= amax;
            wt.a_dev_from_one = std::max(wt.a_dev_from_one, std::abs(a - 1.0));
        }
    (void)gm;
    return wt;
}

// ---------------------------------------------------------------------------
// Dual weights
// ---------------------------------------------------------------------------

struct DualWeightReport {
    int nhat_dim = 0;
    int center_dim = 0;
    double range_residual = 0.0;      // alpha range inside Nhat (x) Mhat
    double invariance_residual = 0.0; // phi_Mhat((omega (x) i) alpha(x)) = Tr(x)
};

// The adjoint coaction alpha_Nhat(x) = Sigma W~ (x (x) 1) W~^* Sigma of the
// dual function algebra on the dual of the co-object. In the Kac case the
// invariant dual weight is the plain operator trace, and invariance against
// the counting weight on Mhat = functions(Gamma) is checked on every vector
// state and basis element.
inline DualWeightReport dual_weight_check(GroupModel& gm, const Element& omega) {
    DualWeightReport rep;
    const int n = gm.group().order();
    auto rc = build_regular_coreps(gm, omega);

    // everything on two explicit legs
    const TensorDescriptor* bb = gm.bb();
    auto mb_to_bb = [&](const Element& e) {
        Element r(bb);
        for (const auto& [l, c] : e.terms())
            for (int k = 0; k < n; ++k) r.add(Label{gm.group().mul(l[0], k), k, l[1], l[2]}, c);
        return r;
    };
    Element wt = mb_to_bb(rc.w_tilde);
    Element wts = wt.star();

    // Nhat = {x : V~^*(x (x) 1) V~ = x (x) 1}
    auto bm_to_bb = [&](const Element& e) {
        Element r(bb);
        for (const auto& [l, c] : e.terms())
            for (int k = 0; k < n; ++k) r.add(Label{l[0], l[1], gm.group().mul(l[2], k), k}, c);
        return r;
    };
    Element vt = bm_to_bb(rc.v_tilde);
    Functional trbb = tensor_functional(gm.trb(), gm.trb(), bb);

    std::vector<Element> nhat;
    {
        ElementLinearSystem sys(n * n, trbb);
        std::vector<std::pair<int, Element>> terms;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                Element x1(bb);
                for (int k = 0; k < n; ++k) x1.add(Label{a, b, k, k}, 1.0);
                terms.emplace_back(a * n + b, vt.star() * x1 * vt - x1);
            }
        sys.add_equation(terms);
        auto ns = sys.nullspace(3e-7);
        rep.nhat_dim = static_cast<int>(ns.basis.cols());
        for (int c = 0; c < ns.basis.cols(); ++c) {
            Element x(gm.b());
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) x.add(Label{a, b}, ns.basis(a * n + b, c));
            x.drop(1e-13);
            nhat.push_back(std::move(x));
        }
    }

    // center dimension of Nhat
    {
        ElementLinearSystem sys(static_cast<int>(nhat.size()), gm.trb());
        for (const auto& y : nhat) {
            std::vector<std::pair<int, Element>> terms;
            for (int j = 0; j < static_cast<int>(nhat.size()); ++j) {
                Element comm = nhat[static_cast<std::size_t>(j)] * y - y * nhat[static_cast<std::size_t>(j)];
                if (!comm.zero()) terms.emplace_back(j, comm);
            }
            if (!terms.empty()) sys.add_equation(terms);
        }
        auto ns = sys.nullspace(3e-7);
        rep.center_dim = (ns.scale == 0.0) ? static_cast<int>(nhat.size()) : static_cast<int>(ns.basis.cols());
    }

    // alpha_Nhat(x) = Sigma W~ (x (x) 1) W~^* Sigma
    auto flip = [&](const Element& e) {
        Element r(bb);
        for (const auto& [l, c] : e.terms()) r.add(Label{l[2], l[3], l[0], l[1]}, c);
        return r;
    };
    for (const auto& x : nhat) {
        Element xb(bb);
        for (const auto& [l, c] : x.terms())
            for (int k = 0; k < n; ++k) xb.add(Label{l[0], l[1], k, k}, c);
        Element ax = flip(wt * xb * wts);
        ax.drop(1e-13);

        // trace of x on l^2(Gamma)
        cplx trx = 0.0;
        for (int a = 0; a < n; ++a) trx += x.coef(Label{a, a});

        // second leg must be diagonal (inside Mhat = functions on Gamma)
        // and every vector state on the first leg must average to Tr(x)
        std::map<int, cplx> per_state; // g -> phi_Mhat((omega_g (x) i) alpha(x))
        for (const auto& [l, c] : ax.terms()) {
            if (l[2] != l[3]) {
                rep.range_residual = std::max(rep.range_residual, std::abs(c));
                continue;
            }
            if (l[0] == l[1]) per_state[l[0]] += c; // sum over the Mhat leg
        }
        for (int g = 0; g < n; ++g)
            rep.invariance_residual = std::max(rep.invariance_residual, std::abs(per_state[g] - trx));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Compact-vs-noncompact dichotomy of the reflection
// ---------------------------------------------------------------------------

struct DichotomyReport {
    // finite side: sum_j T_{r,j} per class
    std::vector<double> t_sums;
    double t_sum_dev = 0.0; // max |sum - 1|
    // infinite side: growth of partial sums of 1/T
    std::vector<double> inverse_t_growth; // ratios of successive increments
    double growth_dev = 0.0;              // max relative deviation from q^{-2}
};

inline DichotomyReport dichotomy_finite(const std::vector<std::vector<double>>& t_eigen) {
    DichotomyReport rep;
    for (const auto& row : t_eigen) {
        double s = 0.0;
        for (double t : row) s += t;
        rep.t_sums.push_back(s);
        rep.t_sum_dev = std::max(rep.t_sum_dev, std::abs(s - 1.0));
    }
    return rep;
}

// T_{n,j} measured from the Haar diagonal; the increments of sum_j 1/T grow
// by q^{-2}, certifying that the reflected side carries no finite invariant
// state (the infinite-dimensional phenomenon).
inline DichotomyReport dichotomy_infinite(const std::vector<double>& t_diag, double q) {
    DichotomyReport rep;
    for (std::size_t j = 0; j + 1 < t_diag.size(); ++j) {
        double ratio = (1.0 / t_diag[j + 1]) / (1.0 / t_diag[j]);
        rep.inverse_t_growth.push_back(ratio);
        rep.growth_dev = std::max(rep.growth_dev, std::abs(ratio - 1.0 / (q * q)) * q * q);
    }
    return rep;
}

} // namespace qgal
