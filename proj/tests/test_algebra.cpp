#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qgal/algebra.hpp"
#include "qgal/descriptor_pool.hpp"
#include "qgal/finite_kac.hpp"

#include <Eigen/Dense>

using namespace qgal;
using Catch::Approx;

namespace {

Element random_element(const Descriptor* d, const std::vector<Label>& labels, std::mt19937_64& rng,
                       int nnz) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Element e(d);
    for (int t = 0; t < nnz; ++t)
        e.add(labels[rng() % labels.size()], cplx(nd(rng), nd(rng)));
    return e;
}

std::vector<Label> all_group_labels(const FiniteGroup& g) {
    std::vector<Label> l;
    for (int i = 0; i < g.order(); ++i) l.push_back(Label{i});
    return l;
}

} // namespace

TEST_CASE("group algebra basics") {
    GroupModel z2(group_preset("Z2"));
    Element l1 = z2.lambda(1);
    Element p = l1 * l1;
    CHECK(p.coef(Label{0}) == cplx(1.0));
    CHECK(p.nnz() == 1);

    Element one = z2.one_m();
    CHECK((one * l1 - l1).zero());
    CHECK((l1.star() - l1).zero()); // order-two element is self-adjoint

    CHECK(z2.tau()(one) == cplx(1.0));
    CHECK(z2.tau()(l1) == cplx(0.0));
}

TEST_CASE("descriptor mismatch is rejected") {
    GroupModel z2(group_preset("Z2"));
    GroupModel z3(group_preset("Z3"));
    Element a = z2.lambda(1);
    Element b = z3.lambda(1);
    CHECK_THROWS_AS(a * b, DescriptorMismatch);
    CHECK_THROWS_AS(a + b, DescriptorMismatch);
    CHECK_THROWS_AS(z2.tau()(b), DescriptorMismatch);
}

TEST_CASE("shift-matrix algebra composes matrix units and shifts") {
    DescriptorPool pool;
    const auto* d = pool.make<ShiftMatrixDescriptor>(-4, 8);
    Element x = Element::basis(d, Label{0, 1, 0});  // e_{01} (x) S^0
    Element y = Element::basis(d, Label{1, 2, 1});  // e_{12} (x) S^1
    Element xy = x * y;
    CHECK(xy.coef(Label{0, 2, 1}) == cplx(1.0));
    CHECK(xy.nnz() == 1);
    CHECK((y * x).zero());

    Element s = Element::basis(d, Label{0, 1, 1}).star();
    CHECK(s.coef(Label{1, 0, -1}) == cplx(1.0));
}

TEST_CASE("associativity and star anti-multiplicativity on random triples") {
    std::mt19937_64 rng(1234);
    GroupModel s3(group_preset("S3"));
    auto labels = all_group_labels(s3.group());

    DescriptorPool pool;
    const auto* sm = pool.make<ShiftMatrixDescriptor>(-3, 6);
    std::vector<Label> smlabels;
    for (int r = -3; r < 6; ++r)
        for (int c = -3; c < 6; ++c)
            for (int k = -2; k <= 2; ++k) smlabels.push_back(Label{r, c, k});

    for (int trial = 0; trial < 100; ++trial) {
        const bool use_group = trial % 2 == 0;
        const Descriptor* d = use_group ? static_cast<const Descriptor*>(s3.m()) : sm;
        const auto& ls = use_group ? labels : smlabels;
        Element x = random_element(d, ls, rng, 5);
        Element y = random_element(d, ls, rng, 5);
        Element z = random_element(d, ls, rng, 5);

        Element assoc = (x * y) * z - x * (y * z);
        CHECK(assoc.max_abs() <= 1e-12);

        Element anti = (x * y).star() - y.star() * x.star();
        CHECK(anti.max_abs() <= 1e-12);

        Element invol = x.star().star() - x;
        CHECK(invol.max_abs() == 0.0);
    }
}

TEST_CASE("gns_inner fast path agrees with phi(y^* x)") {
    std::mt19937_64 rng(99);
    GroupModel g(group_preset("Z2xZ2"));
    auto labels = all_group_labels(g.group());
    for (int trial = 0; trial < 40; ++trial) {
        Element x = random_element(g.m(), labels, rng, 4);
        Element y = random_element(g.m(), labels, rng, 4);
        cplx fast = gns_inner(x, y, g.tau());
        cplx slow = gns_inner_slow(x, y, g.tau());
        CHECK(std::abs(fast - slow) <= 1e-12 * std::max(1.0, std::abs(slow)));
    }

    // and for the truncated shift-matrix Haar functional
    DescriptorPool pool;
    const auto* sm = pool.make<ShiftMatrixDescriptor>(0, 12);
    double q = 0.5;
    Functional phi(
        sm,
        [q](const Label& l) {
            return (l[0] == l[1] && l[2] == 0) ? cplx((1 - q * q) * std::pow(q, 2 * l[0])) : cplx(0.0);
        },
        [q](const Label& l) { return (1 - q * q) * std::pow(q, 2 * l[1]); }, true);
    std::vector<Label> ls;
    for (int r = 0; r < 12; ++r)
        for (int c = 0; c < 12; ++c)
            for (int k = -2; k <= 2; ++k) ls.push_back(Label{r, c, k});
    for (int trial = 0; trial < 40; ++trial) {
        Element x = random_element(sm, ls, rng, 6);
        Element y = random_element(sm, ls, rng, 6);
        cplx fast = gns_inner(x, y, phi);
        cplx slow = gns_inner_slow(x, y, phi);
        CHECK(std::abs(fast - slow) <= 1e-12 * std::max(1.0, std::abs(slow)));
    }
}

TEST_CASE("gns Gram matrices are positive semi-definite") {
    std::mt19937_64 rng(7);
    GroupModel g(group_preset("S3"));
    auto labels = all_group_labels(g.group());
    for (int rep = 0; rep < 10; ++rep) {
        const int m = 6;
        std::vector<Element> fam;
        for (int i = 0; i < m; ++i) fam.push_back(random_element(g.m(), labels, rng, 4));
        Eigen::MatrixXcd gram(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) gram(i, j) = gns_inner(fam[j], fam[i], g.tau());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("tensor functional is multiplicative on basis labels") {
    GroupModel g(group_preset("Z3"));
    DescriptorPool& pool = g.pool();
    const TensorDescriptor* mm = pool.tensor(g.m(), g.m());
    Functional t2 = tensor_functional(g.tau(), g.tau(), mm);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            Element e(mm);
            e.add(Label{a, b}, 1.0);
            cplx lhs = t2(e);
            cplx rhs = g.tau()(g.lambda(a)) * g.tau()(g.lambda(b));
            CHECK(std::abs(lhs - rhs) == 0.0);
        }
}

TEST_CASE("drop tolerance prunes relative dust") {
    GroupModel g(group_preset("Z2"));
    Element e(g.m());
    e.add(Label{0}, 1.0);
    e.add(Label{1}, 1e-20);
    e.drop();
    CHECK(e.nnz() == 1);
}
