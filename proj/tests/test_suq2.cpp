#include <catch2/catch_amalgamated.hpp>

#include "qgal/suq2.hpp"
#include "qgal/suq2_checks.hpp"

using namespace qgal;
using Catch::Approx;

namespace {

// small but honest parameters for unit-test speed; the acceptance binary runs
// the full-scale configuration
TruncationParams test_params() {
    TruncationParams p;
    p.fock_cutoff = 32;
    p.shift_window = 8;
    p.series_order = 36;
    p.coeff_window = 4;
    p.nmin = -1;
    p.nmax = 1;
    return p;
}

SUq2Model& model() {
    static SUq2Model m(0.5, test_params());
    return m;
}

} // namespace

TEST_CASE("model construction and Haar state") {
    SUq2Model& m = model();
    CHECK(std::abs(m.phi_plus()(m.one_m()) - cplx(1.0)) <= 1e-12);

    // phi_+(b^* b) = (1-q^2) sum q^{4k} = 1/(1+q^2)
    Element bsb = m.b_star() * m.b();
    CHECK(m.phi_plus()(bsb).real() == Approx(0.8).margin(1e-12));
    CHECK(gns_inner(m.b(), m.b(), m.phi_plus()).real() == Approx(0.8).margin(1e-12));
    CHECK(std::abs(gns_inner(m.a(), m.b(), m.phi_plus())) <= 1e-14);

    CHECK(generator_relations_residual(m) <= 1e-12);
    CHECK(galois_generator_residual(m) <= 1e-12);

    // v v^* = 1 on the window interior
    Element vvs = m.v() * m.v_star();
    int misses = 0;
    for (int r = m.ambient()->lo(); r < m.ambient()->hi(); ++r)
        if (vvs.coef(Label{r, r, 0}) != cplx(1.0)) ++misses;
    CHECK(misses <= 1); // only the top boundary row
}

TEST_CASE("coproduct of words is a homomorphism into the tensor square") {
    SUq2Model& m = model();
    // Delta(a^* a) + Delta(b^* b) = 1 (x) 1 up to the cutoff boundary
    Element lhs = m.delta_m(Word{Gen::As, Gen::A}) + m.delta_m(Word{Gen::Bs, Gen::B});
    Element one2 = tensor(m.one_m(), m.one_m(), m.ambient2());
    Functional phi2 = m.phi2();
    CHECK(l2_norm(lhs - one2, phi2) <= 1e-9);

    // Delta(b^* b) equals Delta(b)^* Delta(b) evaluated concretely
    Element d1 = m.delta_m(Word{Gen::Bs, Gen::B});
    Element d2 = m.delta_gen(Gen::B).star() * m.delta_gen(Gen::B);
    CHECK(l2_norm(d1 - d2, phi2) <= 1e-12);
}

TEST_CASE("coefficient values and norms") {
    SUq2Model& m = model();
    const double q = m.q();

    // G_{00} = L_{0+}
    CHECK((m.g_coeff(0, 0, 0) - m.l0p()).max_abs() <= 1e-13);

    // leading entry of L: (q^2; q^2)_inf^{1/2}
    CHECK(m.l0p().coef(Label{0, 0, 0}).real() ==
          Approx(std::sqrt(qpochhammer_inf(q * q, q * q).real())).margin(1e-13));

    // diagonal norms phi_+(G_{ts}^* G_{ts}) = (1-q^2) q^{2t}
    for (int t = 0; t <= 2; ++t)
        for (int s = 0; s <= 2; ++s) {
            Element g = m.g_coeff(0, t, s);
            double norm2 = gns_inner(g, g, m.phi_plus()).real();
            CHECK(norm2 == Approx((1 - q * q) * std::pow(q, 2 * t)).margin(1e-10));
        }
}

TEST_CASE("phi_0 weight values") {
    SUq2Model& m = model();
    const double q = m.q();

    auto ll = m.phi0_apply(m.l0p() * m.l0p().star());
    CHECK_FALSE(ll.window_dominated);
    CHECK(ll.value.real() == Approx(1.0).margin(1e-10)); // q-binomial theorem

    auto vv = m.phi0_apply(m.v() * m.v_star());
    CHECK(vv.window_dominated); // weight of 1 diverges with the window

    Element g01 = m.g_coeff(0, 0, 1);
    auto v01 = m.phi0_apply(g01 * g01.star());
    CHECK(v01.value.real() == Approx(1.0 / (q * q)).epsilon(1e-10));
}

TEST_CASE("coproduct series") {
    SUq2Model& m = model();

    // p = 0 term of Delta_N(L) is L (x) L
    Element t0 = m.delta_n_term(0, 0);
    Element ll = tensor(m.l0p(), m.l0p(), m.ambient2());
    CHECK((t0 - ll).max_abs() <= 1e-13);

    // condition 5 with x = y = L: <Delta_N(L), Delta_N(L)> = phi(L^* L)
    Element d = m.delta_n_vnl(0);
    Functional phi2 = m.phi2();
    double lhs = gns_inner(d, d, phi2).real();
    double rhs = gns_inner(m.l0p(), m.l0p(), m.phi_plus()).real();
    CHECK(lhs == Approx(rhs).margin(1e-8));

    // full isometry law across the generator family
    CHECK(isometry_law_residual(m, 0, 0) <= 1e-8);
    CHECK(isometry_law_residual(m, 1, -1) <= 1e-8);
    CHECK(isometry_law_residual(m, -1, 1) <= 1e-8);

    // series order guard
    TruncationParams bad = test_params();
    bad.series_order = 4;
    SUq2Model small(0.5, bad);
    CHECK_THROWS_AS(small.delta_n_vnl(0), SeriesOrderTooSmall);
}

TEST_CASE("coassociativity of the series coproduct") {
    SUq2Model& m = model();
    CHECK(coassociativity_residual(m, 1, 28) <= 1e-7);
}

TEST_CASE("corepresentation identity for the coefficient matrix") {
    SUq2Model& m = model();
    CHECK(g_corep_identity_residual(m, 0, 2, 28) <= 1e-8);
    CHECK(g_corep_identity_residual(m, -1, 2, 28) <= 1e-8);
}

TEST_CASE("column unitarity of the coefficient matrix") {
    SUq2Model& m = model();
    const int w = 3, pad = 14;
    std::vector<int> rows, cols;
    for (int i = 0; i <= w + pad; ++i) rows.push_back(i);
    for (int i = 0; i <= w; ++i) cols.push_back(i);
    Corep g(m.ambient(), rows, cols);
    for (int k : rows)
        for (int i : cols) g.set(k, i, m.g_coeff(0, k, i));
    auto rep = check_unitary(g, m.one_m(), m.phi_plus(), 1e-6);
    CHECK(rep.pass);
}

TEST_CASE("spin-1/2 corepresentation validates") {
    SUq2Model& m = model();
    double residual = 0.0;
    Corep u = spin_half_corep(m, 1e-8, &residual);
    CHECK(residual <= 1e-8);
    CHECK(u.cols().size() == 2);

    // spin 0 is the unit
    Corep u0 = spin_corep(m, 0);
    CHECK((u0.entry(0, 0) - m.one_m()).max_abs() == 0.0);
}

TEST_CASE("Clebsch-Gordan split of two spin-1/2 factors") {
    SUq2Model& m = model();
    Corep u = spin_half_corep(m);
    Corep prod = leg_product(u, u);
    auto dec = decompose(prod, m.phi_plus(), 31, 1e-4);
    std::multiset<std::size_t> dims;
    for (const auto& b : dec.blocks) dims.insert(b.block.cols().size());
    CHECK(dims == std::multiset<std::size_t>{1, 3});

    Corep u1 = spin_corep(m, 2, 31);
    CHECK(u1.cols().size() == 3);
    auto un = check_unitary(u1, m.one_m(), m.phi_plus(), 1e-7);
    CHECK(un.pass);
}

TEST_CASE("orthogonality tables at test scale") {
    SUq2Model& m = model();
    auto rep = orthogonality_suite(m, 3, -1, 1);
    CHECK(rep.phi_plus_offdiag <= 1e-8);
    CHECK(rep.phi_plus_cross <= 1e-8);
    CHECK(rep.phi_plus_diag_err <= 1e-8);
    CHECK(rep.phi0_offdiag <= 1e-8);
    CHECK(rep.phi0_diag_rel_err <= 1e-6);
    CHECK(rep.rescaled_gram_err <= 1e-8);
    CHECK_FALSE(rep.window_dominated);

    // negative control: corrupting one coefficient must blow the table up
    Element good = m.g_coeff(0, 0, 1);
    Element bad = m.g_coeff(0, 0, 1) + 0.2 * m.g_coeff(0, 1, 1);
    double off = std::abs(gns_inner(bad, m.g_coeff(0, 1, 1), m.phi_plus()));
    CHECK(off > 1e-2);
    (void)good;
}

TEST_CASE("modular element ratios") {
    SUq2Model& m = model();
    auto rep = modular_element_check(m, 3, -1, 1);
    CHECK(rep.ratio_spread_rel <= 1e-5);
    CHECK(rep.dn_fit_rel_err <= 1e-5);
    CHECK(rep.aj_tj_spread_rel <= 1e-5);
}

TEST_CASE("fusion with spin 1/2 at test scale") {
    SUq2Model& m = model();
    auto fc = fusion_case(m, 0, 1, 3, 6, 41);
    CHECK(fc.detected == std::vector<int>{-1, 1});
    CHECK(fc.pass);
}

TEST_CASE("Podles coaction checks") {
    SUq2Model& m = model();
    auto pc = podles_coaction(m, 16);
    CHECK(pc.transport_residual <= 1e-8);
    CHECK(pc.invariant_state_residual <= 1e-8);
    CHECK(pc.fixed_point_dim == 1);

    auto rec = suq2_reconstruct_check(m, pc, 3);
    CHECK(rec.implementing_residual <= 1e-4);
    CHECK(std::abs(rec.phase - cplx(1.0)) <= 1e-6);
    CHECK(rec.coeff_residual <= 1e-6);
}

TEST_CASE("truncation stability of a reported quantity") {
    TruncationParams p1 = test_params();
    TruncationParams p2 = test_params();
    p2.fock_cutoff += 8;
    p2.shift_window += 2;
    SUq2Model m1(0.5, p1), m2(0.5, p2);
    for (int t = 0; t <= 2; ++t)
        for (int s = 0; s <= 2; ++s) {
            Element g1 = m1.g_coeff(0, t, s), g2 = m2.g_coeff(0, t, s);
            double v1 = gns_inner(g1, g1, m1.phi_plus()).real();
            double v2 = gns_inner(g2, g2, m2.phi_plus()).real();
            CHECK(std::abs(v1 - v2) <= 1e-6);
        }
    double i1 = isometry_law_residual(m1, 0, 0);
    double i2 = isometry_law_residual(m2, 0, 0);
    CHECK(std::abs(i1 - i2) <= 1e-6);
}
