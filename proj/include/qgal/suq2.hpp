#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qgal/algebra.hpp"
#include "qgal/corep.hpp"
#include "qgal/descriptor_pool.hpp"
#include "qgal/engine.hpp"
#include "qgal/qseries.hpp"

namespace qgal {

// Truncation controls: Fock cutoff D (row/column indices below D), shift
// window half-width K, coproduct series order P, drop tolerance.
struct TruncationParams {
    int fock_cutoff = 48;   // D
    int shift_window = 8;   // K
    int series_order = 40;  // P
    int coeff_window = 6;   // w, largest matrix-coefficient index reported
    int nmin = -3;
    int nmax = 3;
    double drop_tol = 1e-16;
    int row_floor = 0; // 0 means "use -fock_cutoff"

    void validate() const {
        if (fock_cutoff < 4) throw ConfigError("fock cutoff must be >= 4");
        if (shift_window < 1) throw ConfigError("shift window must be >= 1");
        if (series_order < 1) throw ConfigError("series order must be >= 1");
        if (!(drop_tol > 0.0 && drop_tol <= 1e-8)) throw ConfigError("drop tolerance out of (0, 1e-8]");
    }

    int floor_row() const { return row_floor != 0 ? row_floor : -fock_cutoff; }
};

// Letters of the symbolic layer. Words evaluate to sparse operators; their
// coproducts are evaluated letterwise, which is the only way coproducts of
// non-generator elements are ever formed.
enum class Gen { A, As, B, Bs, V, Vs, L };

using Word = std::vector<Gen>;

struct WordSum {
    std::vector<std::pair<cplx, Word>> terms;

    WordSum& add(cplx c, Word w) {
        terms.emplace_back(c, std::move(w));
        return *this;
    }
};

// Truncated operator model of quantum SU(2) together with the coefficient
// space of its non-trivial co-object. Everything lives inside one ambient
// algebra of matrix units (x) shift powers, with rows in [-D, D); the
// quantum-group corner M keeps rows and columns in [0, D).
class SUq2Model {
public:
    SUq2Model(double q, TruncationParams params) : q_(QValue(q)), par_(params) {
        par_.validate();
        const int lo = par_.floor_row();
        const int hi = par_.fock_cutoff;
        amb_ = pool_.make<ShiftMatrixDescriptor>(lo, hi, "suq2 ambient");
        amb2_ = pool_.tensor(amb_, amb_);
        amb3_ = pool_.tensor(amb2_, amb_);

        const double qq = q_;
        a_ = Element(amb_);
        for (int k = 1; k < hi; ++k) a_.add(Label{k - 1, k, 0}, std::sqrt(1.0 - std::pow(qq, 2 * k)));
        as_ = a_.star();
        b_ = Element(amb_);
        for (int k = 0; k < hi; ++k) b_.add(Label{k, k, 1}, std::pow(qq, k));
        bs_ = b_.star();
        v_ = Element(amb_);
        for (int m = lo + 1; m < hi; ++m) v_.add(Label{m - 1, m, 0}, 1.0);
        vs_ = v_.star();
        l_ = Element(amb_);
        for (int n = 0; n < hi; ++n)
            l_.add(Label{n, n, 0}, std::sqrt(qpochhammer_inf(std::pow(qq, 2 * n + 2), qq * qq).real()));
        one_m_ = Element(amb_);
        for (int i = 0; i < hi; ++i) one_m_.add(Label{i, i, 0}, 1.0);

        const double c = 1.0 - qq * qq;
        phi_plus_ = Functional(
            amb_,
            [c, qq](const Label& l) {
                return (l[0] == l[1] && l[0] >= 0 && l[2] == 0) ? cplx(c * std::pow(qq, 2 * l[0]))
                                                                : cplx(0.0);
            },
            [c, qq](const Label& l) { return l[1] >= 0 ? c * std::pow(qq, 2 * l[1]) : 0.0; }, true);

        phi0_ = Functional(
            amb_,
            [qq](const Label& l) {
                return (l[0] == l[1] && l[2] == 0) ? cplx(std::pow(qq, 2 * l[0])) : cplx(0.0);
            },
            [qq](const Label& l) { return std::pow(qq, 2 * l[1]); }, false);

        phi2_ = tensor_functional(phi_plus_, phi_plus_, amb2_);
        phi3_ = tensor_functional(phi2_, phi_plus_, amb3_);
    }

    SUq2Model(const SUq2Model&) = delete;
    SUq2Model& operator=(const SUq2Model&) = delete;

    double q() const { return q_; }
    const TruncationParams& params() const { return par_; }
    DescriptorPool& pool() { return pool_; }
    const ShiftMatrixDescriptor* ambient() const { return amb_; }
    const TensorDescriptor* ambient2() const { return amb2_; }
    const TensorDescriptor* ambient3() const { return amb3_; }
    const Functional& phi_plus() const { return phi_plus_; }
    const Functional& phi2() const { return phi2_; }
    const Functional& phi3() const { return phi3_; }
    const Element& one_m() const { return one_m_; }

    const Element& a() const { return a_; }
    const Element& a_star() const { return as_; }
    const Element& b() const { return b_; }
    const Element& b_star() const { return bs_; }
    const Element& v() const { return v_; }
    const Element& v_star() const { return vs_; }
    const Element& l0p() const { return l_; }

    // ---------------------------------------------------------------
    // Symbolic layer
    // ---------------------------------------------------------------

    const Element& gen(Gen g) const {
        switch (g) {
            case Gen::A: return a_;
            case Gen::As: return as_;
            case Gen::B: return b_;
            case Gen::Bs: return bs_;
            case Gen::V: return v_;
            case Gen::Vs: return vs_;
            case Gen::L: return l_;
        }
        throw Error("unknown generator");
    }

    Element eval(const Word& w) const {
        Element r = one_ambient();
        for (Gen g : w) r = r * gen(g);
        return r;
    }

    Element eval(const WordSum& ws) const {
        Element r(amb_);
        for (const auto& [c, w] : ws.terms) r = r + c * eval(w);
        return r;
    }

    // Delta on one generator letter, as a concrete element of M (x) M.
    Element delta_gen(Gen g) const {
        Element r(amb2_);
        auto put = [&](const Element& x, const Element& y, cplx c) { r = r + c * tensor(x, y, amb2_); };
        switch (g) {
            case Gen::A:
                put(a_, a_, 1.0);
                put(bs_, b_, -q_);
                break;
            case Gen::As:
                put(as_, as_, 1.0);
                put(b_, bs_, -q_);
                break;
            case Gen::B:
                put(b_, a_, 1.0);
                put(as_, b_, 1.0);
                break;
            case Gen::Bs:
                put(bs_, as_, 1.0);
                put(a_, bs_, 1.0);
                break;
            default:
                throw Error("coproduct defined on a, b and their adjoints only");
        }
        return r;
    }

    // Homomorphic extension of Delta to words in {a, a*, b, b*}.
    Element delta_m(const Word& w) const {
        Element r = tensor(one_m_, one_m_, amb2_);
        for (Gen g : w) r = r * delta_gen(g);
        return r;
    }

    Element delta_m(const WordSum& ws) const {
        Element r(amb2_);
        for (const auto& [c, w] : ws.terms) r = r + c * delta_m(w);
        return r;
    }

    // ---------------------------------------------------------------
    // Co-object generators and coproduct series
    // ---------------------------------------------------------------

    Element vpow(int n) const {
        Element r = one_ambient();
        const Element& f = n >= 0 ? v_ : vs_;
        for (int i = 0; i < std::abs(n); ++i) r = r * f;
        return r;
    }

    // One series term v^{n+p} L b^p (x) v^{n+p} L (-q b*)^p with coefficient
    // 1/(q^2;q^2)_p.
    Element delta_n_term(int n, int p) const {
        Element left = vpow(n + p) * l_;
        Element right = left;
        Element bp = one_ambient(), bsp = one_ambient();
        for (int i = 0; i < p; ++i) {
            bp = bp * b_;
            bsp = bsp * bs_;
        }
        left = left * bp;
        right = right * (std::pow(-q_, p) * bsp);
        double cp = 1.0 / qpochhammer(q_ * q_, q_ * q_, p).real();
        return cp * tensor(left, right, amb2_);
    }

    // Delta_N(v^n L), truncated at the series order; the tail is bounded by
    // q^{P+1}/(q^2;q^2)_inf.
    Element delta_n_vnl(int n, double tail_tol = 1e-9) const {
        const int pmax = par_.series_order;
        if (series_tail(pmax) > tail_tol)
            throw SeriesOrderTooSmall("series tail " + std::to_string(series_tail(pmax)) +
                                      " exceeds " + std::to_string(tail_tol));
        Element r(amb2_);
        for (int p = 0; p <= pmax; ++p) r = r + delta_n_term(n, p);
        r.drop();
        return r;
    }

    double series_tail(int pmax) const {
        return std::pow(q_, pmax + 1) / qpochhammer_inf(q_ * q_, q_ * q_).real();
    }

    // ---------------------------------------------------------------
    // Matrix coefficients of the irreducible family
    // ---------------------------------------------------------------

    // G_{ts} as a word sum (n = 0 member; left-multiply by v^n for the rest).
    WordSum g_word(int t, int s) const {
        const double Q = q_ * q_;
        WordSum ws;
        const int lo = std::min(t, s), hi = std::max(t, s);
        const int d = hi - lo; // |s - t|
        double pref = std::pow(q_, lo * (lo - hi)) *
                      std::sqrt(qpochhammer(Q, Q, hi).real() / qpochhammer(Q, Q, lo).real()) /
                      qpochhammer(Q, Q, d).real();
        // Wall polynomial p_lo(x; q^{2d}, 0 | q^2) = sum_k c_k x^k
        const double a = std::pow(q_, 2 * d);
        for (int k = 0; k <= lo; ++k) {
            double ck = (qpochhammer(std::pow(Q, -lo), Q, k).real() /
                         (qpochhammer(Q * a, Q, k).real() * qpochhammer(Q, Q, k).real())) *
                        std::pow(Q, k);
            Word w;
            for (int i = 0; i < s + t; ++i) w.push_back(Gen::V);
            w.push_back(Gen::L);
            for (int i = 0; i < d; ++i) w.push_back(t <= s ? Gen::B : Gen::Bs);
            for (int i = 0; i < k; ++i) {
                w.push_back(Gen::Bs);
                w.push_back(Gen::B);
            }
            double sign = (t <= s) ? 1.0 : std::pow(-q_, d);
            ws.add(pref * ck * sign, std::move(w));
        }
        return ws;
    }

    // Concrete G^{(n)}_{ts}, assembled entrywise: column m carries
    //   pref * (+-q)^{d m} * L_m * p_{lo}(q^{2m}; q^{2d} | q^2)
    // on row m - s - t - n with shift index +-d. Scalar factors are formed in
    // double-double arithmetic and the Wall values come from the stable
    // recurrence; the terminating series would lose the low columns to
    // cancellation once min(t,s) grows past ~7.
    Element g_coeff(int n, int t, int s) const {
        const double Q = q_ * q_;
        const int lo = std::min(t, s), hi = std::max(t, s), d = hi - lo;
        const bool lower = t > s; // b^* branch with sign (-q)^d

        dd pref = dd_pow(dd(q_), -lo * d); // q^{lo(lo-hi)}
        dd ratio(1.0);
        for (int k = lo + 1; k <= hi; ++k) ratio = ratio * (dd(1.0) - dd_pow(dd(Q), k));
        pref = pref * dd(std::sqrt(ratio.value()));
        dd poch_d(1.0);
        for (int k = 1; k <= d; ++k) poch_d = poch_d * (dd(1.0) - dd_pow(dd(Q), k));
        pref = pref / poch_d;
        if (lower) pref = pref * dd_pow(dd(-q_), d);

        Element r(amb_);
        const int rlo = amb_->lo(), rhi = amb_->hi();
        for (int m = 0; m < rhi; ++m) {
            int row = m - s - t - n;
            if (row < rlo || row >= rhi) continue;
            double lm = std::sqrt(qpochhammer_inf(std::pow(Q, m + 1), Q).real());
            double wm = wall_polynomial_grid(lo, m, d, Q);
            dd coef = pref * dd_pow(dd(q_), d * m) * dd(lm) * dd(wm);
            r.add(Label{row, m, lower ? -d : d}, coef.value());
        }
        r.drop();
        return r;
    }

    // Delta_N(G^{(n)}_{ts}) through right M-linearity: each word is
    // v^{n+s+t} L m with m in M, so Delta_N = Delta_N(v^{n+s+t} L) Delta_M(m).
    Element delta_n_g(int n, int t, int s, double tail_tol = 1e-9) const {
        WordSum ws = g_word(t, s);
        Element head = delta_n_vnl(n + s + t, tail_tol);
        Element r(amb2_);
        for (const auto& [c, w] : ws.terms) {
            // strip the v^{s+t} L prefix
            Word tail(w.begin() + (s + t) + 1, w.end());
            r = r + c * (head * delta_m(tail));
        }
        r.drop();
        return r;
    }

    // Windowed corepresentation with entries G^{(n)}_{ts}, 0 <= t,s <= imax.
    Corep g_corep(int n, int imax) const {
        std::vector<int> idx;
        for (int i = 0; i <= imax; ++i) idx.push_back(i);
        Corep c(amb_, idx, idx);
        for (int t = 0; t <= imax; ++t)
            for (int s = 0; s <= imax; ++s) c.set(t, s, g_coeff(n, t, s));
        return c;
    }

    // ---------------------------------------------------------------
    // Weights
    // ---------------------------------------------------------------

    cplx phi_plus_apply(const Element& x) const { return phi_plus_(x); }

    struct WeightValue {
        cplx value{0.0};
        double boundary_mass = 0.0; // mass within 4 rows of the window floor
        bool window_dominated = false;
    };

    // phi_0(x) as a truncated sum over the bilateral window; flagged when the
    // window floor carries a non-negligible share.
    WeightValue phi0_apply(const Element& x) const {
        WeightValue wv;
        const int lo = par_.floor_row();
        double total = 0.0;
        for (const auto& [l, c] : x.terms()) {
            if (l[0] != l[1] || l[2] != 0) continue;
            cplx contrib = c * std::pow(q_, 2 * l[0]);
            wv.value += contrib;
            total += std::abs(contrib);
            if (l[0] < lo + 4) wv.boundary_mass += std::abs(contrib);
        }
        wv.window_dominated = wv.boundary_mass > 0.1 * std::max(total, 1e-300);
        return wv;
    }

    const Functional& phi0() const { return phi0_; }

    Element one_ambient() const { return Element::unit(amb_); }

private:
    double q_;
    TruncationParams par_;
    DescriptorPool pool_;
    const ShiftMatrixDescriptor* amb_ = nullptr;
    const TensorDescriptor* amb2_ = nullptr;
    const TensorDescriptor* amb3_ = nullptr;
    Element a_, as_, b_, bs_, v_, vs_, l_, one_m_;
    Functional phi_plus_, phi0_, phi2_, phi3_;
};

// ---------------------------------------------------------------------------
// Structure checks
// ---------------------------------------------------------------------------

// Defining relations away from the cutoff row: a^*a + b^*b = 1, ab = qba,
// ab^* = qb^*a, bb^* = b^*b, aa^* = 1 - q^2 b^*b.
inline double generator_relations_residual(const SUq2Model& m) {
    const double q = m.q();
    const int hi = m.params().fock_cutoff;
    auto clip = [&](Element e) {
        // ignore the boundary row i = D-1 where the truncated a fails to reach
        Element r(m.ambient());
        for (const auto& [l, c] : e.terms())
            if (l[0] < hi - 1 && l[1] < hi - 1) r.add(l, c);
        return r;
    };
    double worst = 0.0;
    auto upd = [&](const Element& e) { worst = std::max(worst, clip(e).max_abs()); };
    upd(m.a_star() * m.a() + m.b_star() * m.b() - m.one_m());
    upd(m.a() * m.b() - q * (m.b() * m.a()));
    upd(m.a() * m.b_star() - q * (m.b_star() * m.a()));
    upd(m.b() * m.b_star() - m.b_star() * m.b());
    upd(m.a() * m.a_star() - m.one_m() + (q * q) * (m.b_star() * m.b()));
    return worst;
}

// v^* L_{0+} = L_{0+} a^*, and L_{0+}^* L_{0+} = (q^2 b^* b; q^2)_inf.
inline double galois_generator_residual(const SUq2Model& m) {
    double worst = (m.v_star() * m.l0p() - m.l0p() * m.a_star()).max_abs();
    Element lhs = m.l0p().star() * m.l0p();
    Element rhs(m.ambient());
    const double Q = m.q() * m.q();
    for (int k = 0; k < m.params().fock_cutoff; ++k)
        rhs.add(Label{k, k, 0}, qpochhammer_inf(Q * std::pow(Q, k), Q).real());
    worst = std::max(worst, (lhs - rhs).max_abs());
    return worst;
}

// Spin-1/2 corepresentation as a word-level matrix ((a, -q b*), (b, a*)).
struct WordCorep {
    std::vector<int> idx;
    std::vector<std::vector<WordSum>> entries;

    Corep evaluate(const SUq2Model& m) const {
        Corep c(m.ambient(), idx, idx);
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < idx.size(); ++j) c.set(idx[i], idx[j], m.eval(entries[i][j]));
        return c;
    }

    Element delta_entry(const SUq2Model& m, int i, int j) const {
        return m.delta_m(entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
};

inline WordCorep spin_half_words() {
    WordCorep wc;
    wc.idx = {0, 1};
    wc.entries.assign(2, std::vector<WordSum>(2));
    wc.entries[0][0].add(1.0, {Gen::A});
    wc.entries[0][1].add(-1.0, {Gen::Bs}); // scaled by q below
    wc.entries[1][0].add(1.0, {Gen::B});
    wc.entries[1][1].add(1.0, {Gen::As});
    return wc;
}

// U_{1/2} validated against unitarity and the comultiplication identity.
inline Corep spin_half_corep(const SUq2Model& m, double tol = 1e-8, double* residual_out = nullptr) {
    WordCorep wc = spin_half_words();
    Corep u(m.ambient(), {0, 1}, {0, 1});
    u.set(0, 0, m.a());
    u.set(0, 1, -m.q() * m.b_star());
    u.set(1, 0, m.b());
    u.set(1, 1, m.a_star());

    auto delta_entry = [&](int i, int j) -> Element {
        if (i == 0 && j == 1) return -m.q() * m.delta_m(Word{Gen::Bs});
        return wc.delta_entry(m, i, j);
    };
    auto cid = check_corep_identity(u, delta_entry, m.ambient2(), m.phi2(), tol);
    auto un = check_unitary(u, m.one_m(), m.phi_plus(), tol);
    if (residual_out) *residual_out = std::max(cid.residual, un.residual);
    if (!cid.pass || !un.pass)
        throw ValidationFailure("spin-1/2 candidate failed validation: corep residual " +
                                std::to_string(cid.residual) + ", unitarity " +
                                std::to_string(un.residual));
    return u;
}

// U_r for 2r >= 2 by splitting U_{1/2}^{(x) 2r} and keeping the unique block
// of dimension 2r+1.
inline Corep spin_corep(const SUq2Model& m, int two_r, std::uint64_t seed = 13, double tol = 1e-8) {
    if (two_r == 0) return Corep::identity(m.ambient(), m.one_m(), {0});
    Corep u = spin_half_corep(m, tol);
    if (two_r == 1) return u;
    Corep prod = u;
    for (int i = 1; i < two_r; ++i) prod = leg_product(prod, u);
    auto dec = decompose(prod, m.phi_plus(), seed, 1e-4);
    for (const auto& blk : dec.blocks)
        if (static_cast<int>(blk.block.cols().size()) == two_r + 1) return blk.block;
    throw ValidationFailure("no spin block of dimension " + std::to_string(two_r + 1));
}

} // namespace qgal
