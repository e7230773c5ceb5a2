#include <catch2/catch_amalgamated.hpp>

#include "qgal/reflection.hpp"
#include "qgal/suq2.hpp"

using namespace qgal;
using Catch::Approx;

namespace {

Cocycle2 heisenberg_on(GroupModel& hm, const std::string& base) {
    auto [h, table] = heisenberg_cocycle_data(group_preset(base));
    CharacterTable chars(hm.group());
    return cocycle_from_table(hm, chars, table);
}

} // namespace

TEST_CASE("reflection of the trivial co-object is the algebra itself") {
    GroupModel gm(group_preset("Z3"));
    auto rb = build_reflection(gm, Element::unit(gm.mm()));
    CHECK(rb.coassociativity_residual <= 1e-12);
    CHECK(rb.left_invariance_residual <= 1e-12);
    CHECK(rb.traciality_residual <= 1e-12);
    // phi_P = tau
    for (int g = 1; g < 3; ++g) CHECK(std::abs(rb.phi_values[static_cast<std::size_t>(g)]) <= 1e-12);
    CHECK(std::abs(rb.phi_values[0] - cplx(1.0)) <= 1e-12);
}

TEST_CASE("reflection across the Pauli co-object is a compact Kac algebra") {
    GroupModel gm(group_preset("Z2xZ2"));
    Cocycle2 om = heisenberg_on(gm, "Z2");
    auto rb = build_reflection(gm, om.omega);
    CHECK(rb.coassociativity_residual <= 1e-10);
    CHECK(rb.left_invariance_residual <= 1e-10);
    CHECK(rb.right_invariance_residual <= 1e-10);
    CHECK(rb.traciality_residual <= 1e-10);
}

TEST_CASE("reflection across the Heisenberg Z3 co-object") {
    GroupModel gm(group_preset("Z3xZ3"));
    Cocycle2 om = heisenberg_on(gm, "Z3");
    auto rb = build_reflection(gm, om.omega);
    CHECK(rb.coassociativity_residual <= 1e-10);
    CHECK(rb.left_invariance_residual <= 1e-10);
    CHECK(rb.traciality_residual <= 1e-10);
}

TEST_CASE("weight tables reproduce T/A = 1/n_r with A = 1") {
    GroupModel gamma(group_preset("Z2xZ2xZ2"));
    GroupModel hm(group_preset("Z2xZ2"));
    Cocycle2 om = heisenberg_on(hm, "Z2");
    std::vector<int> hsub = {0, 1, 2, 3};
    auto fam = induce_irreducibles(gamma, hsub, hm, om.omega, 7);
    REQUIRE(fam.coreps.size() == 2);

    Element om_g = lift_cocycle(gamma, hsub, om.omega);
    auto rb = build_reflection(gamma, om_g);
    CHECK(rb.traciality_residual <= 1e-10);

    std::vector<std::vector<double>> t_eigen(fam.coreps.size(), std::vector<double>(2, 0.5));
    auto wt = weight_formula_check(rb, fam.coreps, t_eigen);
    CHECK(wt.offdiag_max <= 1e-9);
    CHECK(wt.diag_rel_residual <= 1e-9);
    CHECK(wt.a_dev_from_one <= 1e-10); // Kac degeneration

    auto dich = dichotomy_finite(t_eigen);
    CHECK(dich.t_sum_dev <= 1e-10);
}

TEST_CASE("dual weights: Pauli co-object") {
    GroupModel gm(group_preset("Z2xZ2"));
    Cocycle2 om = heisenberg_on(gm, "Z2");
    auto rep = dual_weight_check(gm, om.omega);
    CHECK(rep.nhat_dim == 4);
    CHECK(rep.center_dim == 1); // single 2x2 block: phi_Nhat(e_ii) = n_r = 2
    CHECK(rep.range_residual <= 1e-10);
    CHECK(rep.invariance_residual <= 1e-9);
}

TEST_CASE("dual weights: trivial co-object of Z3") {
    GroupModel gm(group_preset("Z3"));
    auto rep = dual_weight_check(gm, Element::unit(gm.mm()));
    CHECK(rep.nhat_dim == 3);
    CHECK(rep.center_dim == 3); // Mhat = functions on the group, D_r = 1, c_r = 1
    CHECK(rep.range_residual <= 1e-12);
    CHECK(rep.invariance_residual <= 1e-12);
}

TEST_CASE("dichotomy on the quantum SU(2) side") {
    TruncationParams p;
    p.fock_cutoff = 28;
    p.series_order = 30;
    SUq2Model m(0.5, p);
    // measured Haar diagonal T_{0,j} = phi(G_{j0}^* G_{j0})... the row weight
    std::vector<double> tdiag;
    for (int j = 0; j <= 5; ++j) {
        Element g = m.g_coeff(0, j, 0);
        tdiag.push_back(gns_inner(g, g, m.phi_plus()).real());
    }
    auto rep = dichotomy_infinite(tdiag, m.q());
    CHECK(rep.inverse_t_growth.size() == 5);
    for (double r : rep.inverse_t_growth) CHECK(r == Approx(4.0).epsilon(0.01));
    CHECK(rep.growth_dev <= 0.01);
}
