#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qgal/algebra.hpp"
#include "qgal/corep.hpp"
#include "qgal/descriptor_pool.hpp"

namespace qgal {

using Eigen::MatrixXcd;
using Eigen::VectorXd;

// Homogeneous linear system whose unknowns are scalars and whose equations
// say that algebra elements vanish. Each equation sum_j x_j E_j = 0 is
// expanded over labels, with rows weighted by the L^2(phi) label weights, so
// the least singular directions are exactly the small-residual solutions.
class ElementLinearSystem {
public:
    ElementLinearSystem(int nunknowns, const Functional& phi)
        : n_(nunknowns), phi_(&phi), nn_(MatrixXcd::Zero(nunknowns, nunknowns)) {}

    void add_equation(const std::vector<std::pair<int, Element>>& terms) {
        std::unordered_map<Label, std::vector<std::pair<int, cplx>>, LabelHash> rows;
        for (const auto& [j, e] : terms)
            for (const auto& [l, c] : e.terms()) rows[l].emplace_back(j, c);
        for (const auto& [l, row] : rows) {
            double w = phi_->l2_weight(l);
            if (w <= 0.0) continue;
            for (const auto& [j1, c1] : row)
                for (const auto& [j2, c2] : row) nn_(j1, j2) += w * std::conj(c1) * c2;
        }
    }

    struct Nullspace {
        MatrixXcd basis;  // columns: orthonormal null vectors
        VectorXd sigma;   // all singular values, ascending
        double scale;
    };

    // Null vectors are those with singular value below rel_tol * scale.
    Nullspace nullspace(double rel_tol) const {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(nn_);
        VectorXd ev = es.eigenvalues().cwiseMax(0.0);
        VectorXd sig = ev.cwiseSqrt();
        double scale = sig.size() ? sig.maxCoeff() : 0.0;
        double cut = rel_tol * std::max(scale, 1e-300);
        int k = 0;
        while (k < sig.size() && sig(k) <= cut) ++k;
        Nullspace ns;
        ns.basis = es.eigenvectors().leftCols(k);
        ns.sigma = sig;
        ns.scale = scale;
        return ns;
    }

private:
    int n_;
    const Functional* phi_;
    MatrixXcd nn_;
};

// ---------------------------------------------------------------------------
// Intertwiners and fixed points
// ---------------------------------------------------------------------------

struct HomSpace {
    int dim = 0;
    std::vector<MatrixXcd> basis; // maps H1 -> H2
    VectorXd sigma;
    double scale = 0.0;
};

// {T : G2 (1 (x) T) = (1 (x) T) G1}, solved as a weighted least-squares
// nullspace over the entry labels.
inline HomSpace hom_space(const Corep& g1, const Corep& g2, const Functional& phi,
                          double rel_tol = 1e-5) {
    const auto& i1 = g1.cols();
    const auto& i2 = g2.cols();
    const int n1 = static_cast<int>(i1.size());
    const int n2 = static_cast<int>(i2.size());
    auto unknown = [n1](int kpos, int jpos) { return kpos * n1 + jpos; };

    ElementLinearSystem sys(n1 * n2, phi);
    for (int rpos = 0; rpos < n2; ++rpos) {
        for (int jpos = 0; jpos < n1; ++jpos) {
            std::vector<std::pair<int, Element>> terms;
            for (int kpos = 0; kpos < n2; ++kpos) {
                const Element& e = g2.entry(i2[rpos], i2[kpos]);
                if (!e.zero()) terms.emplace_back(unknown(kpos, jpos), e);
            }
            for (int lpos = 0; lpos < n1; ++lpos) {
                const Element& e = g1.entry(i1[lpos], i1[jpos]);
                if (!e.zero()) terms.emplace_back(unknown(rpos, lpos), -1.0 * e);
            }
            if (!terms.empty()) sys.add_equation(terms);
        }
    }

    auto ns = sys.nullspace(rel_tol);
    HomSpace hs;
    hs.dim = static_cast<int>(ns.basis.cols());
    hs.sigma = ns.sigma;
    hs.scale = ns.scale;
    for (int c = 0; c < hs.dim; ++c) {
        MatrixXcd t(n2, n1);
        for (int k = 0; k < n2; ++k)
            for (int j = 0; j < n1; ++j) t(k, j) = ns.basis(unknown(k, j), c);
        hs.basis.push_back(std::move(t));
    }
    return hs;
}

struct FixedPointAlgebra {
    int dim = 0;
    std::vector<MatrixXcd> basis; // Hilbert-Schmidt orthonormal
    double closure_residual = 0.0;
    VectorXd sigma;
};

// {x in B(H) : G(1 (x) x) = (1 (x) x)G}; basis orthonormalized in HS norm
// and checked for closure under product and star.
inline FixedPointAlgebra fixed_point_algebra(const Corep& g, const Functional& phi,
                                             double rel_tol = 1e-5) {
    if (g.cols().empty()) throw Error("fixed_point_algebra: empty index set");
    HomSpace hs = hom_space(g, g, phi, rel_tol);
    FixedPointAlgebra fp;
    fp.dim = hs.dim;
    fp.sigma = hs.sigma;

    // Gram-Schmidt in HS inner product (the nullspace basis is already
    // orthonormal under vec-dot, which coincides with HS).
    fp.basis = hs.basis;

    auto project_residual = [&fp](const MatrixXcd& x) {
        MatrixXcd r = x;
        for (const auto& b : fp.basis) r -= (b.conjugate().cwiseProduct(r)).sum() * b;
        return r.norm();
    };
    for (const auto& a : fp.basis) {
        fp.closure_residual = std::max(fp.closure_residual, project_residual(a.adjoint()));
        for (const auto& b : fp.basis)
            fp.closure_residual = std::max(fp.closure_residual, project_residual(a * b));
    }
    return fp;
}

// ---------------------------------------------------------------------------
// Peter-Weyl decomposition
// ---------------------------------------------------------------------------

// Restriction (1 (x) W^*) G (1 (x) W) of a corepresentation to the range of
// an isometry W (columns orthonormal).
inline Corep restrict_corep(const Corep& g, const MatrixXcd& w) {
    const auto& idx = g.cols();
    const int n = static_cast<int>(idx.size());
    const int k = static_cast<int>(w.cols());
    std::vector<int> sub(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a) sub[static_cast<std::size_t>(a)] = a;
    Corep r(g.descriptor(), sub, sub);
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            Element acc(g.descriptor());
            for (int i = 0; i < n; ++i) {
                if (std::abs(w(i, a)) == 0.0) continue;
                for (int j = 0; j < n; ++j) {
                    const Element& e = g.entry(idx[i], idx[j]);
                    if (e.zero() || std::abs(w(j, b)) == 0.0) continue;
                    acc = acc + (std::conj(w(i, a)) * w(j, b)) * e;
                }
            }
            acc.drop();
            r.set(a, b, acc);
        }
    }
    return r;
}

struct DecompositionBlock {
    MatrixXcd isometry; // dim(H) x dim(block)
    Corep block;
};

struct Decomposition {
    std::vector<DecompositionBlock> blocks;
    int degenerate_retries = 0;
};

namespace detail {

inline void decompose_rec(const Corep& g, const MatrixXcd& embed, const Functional& phi,
                          double rel_tol, std::mt19937_64& rng, Decomposition& out, int depth) {
    if (depth > 64) throw Error("decompose: recursion depth exceeded");
    FixedPointAlgebra fp = fixed_point_algebra(g, phi, rel_tol);
    if (fp.dim <= 1) {
        out.blocks.push_back({embed, g});
        return;
    }

    const int n = static_cast<int>(g.cols().size());
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int attempt = 0;; ++attempt) {
        if (attempt >= 5) throw Error("decompose: degenerate spectrum after 5 retries");
        MatrixXcd f = MatrixXcd::Zero(n, n);
        for (const auto& b : fp.basis) f += cplx(nd(rng), nd(rng)) * b;
        f = (f + f.adjoint()).eval() / 2.0;
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(f);
        VectorXd ev = es.eigenvalues();
        double spread = std::max(ev(n - 1) - ev(0), 1.0);

        // split the spectrum at gaps
        std::vector<std::pair<int, int>> clusters;
        int start = 0;
        for (int i = 1; i <= n; ++i) {
            if (i == n || ev(i) - ev(i - 1) > 1e-6 * spread) {
                clusters.emplace_back(start, i);
                start = i;
            }
        }
        if (clusters.size() < 2) {
            ++out.degenerate_retries;
            continue;
        }
        bool tight = true;
        for (std::size_t c = 0; c + 1 < clusters.size(); ++c)
            if (ev(clusters[c + 1].first) - ev(clusters[c].second - 1) < 1e-8 * spread) tight = false;
        if (!tight) {
            ++out.degenerate_retries;
            continue;
        }
        for (const auto& [lo, hi] : clusters) {
            MatrixXcd w = es.eigenvectors().middleCols(lo, hi - lo);
            decompose_rec(restrict_corep(g, w), embed * w, phi, rel_tol, rng, out, depth + 1);
        }
        return;
    }
}

} // namespace detail

// Split a unitary corepresentation into blocks whose fixed-point algebra is
// one-dimensional, via spectral projections of generic self-adjoint fixed
// elements. Deterministic for a given seed.
inline Decomposition decompose(const Corep& g, const Functional& phi, std::uint64_t seed,
                               double rel_tol = 1e-5) {
    Decomposition out;
    std::mt19937_64 rng(seed);
    const int n = static_cast<int>(g.cols().size());
    detail::decompose_rec(g, MatrixXcd::Identity(n, n), phi, rel_tol, rng, out, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Orthogonality tables
// ---------------------------------------------------------------------------

struct CoefficientFamily {
    std::string name;
    std::vector<int> idx;
    std::function<Element(int, int)> coef; // (i,j) -> element
};

struct OrthogonalityTable {
    // diag[f][ipos][jpos] = phi(x_{f,ij}^* x_{f,ij})
    std::vector<std::vector<std::vector<double>>> diag;
    double offdiag_max = 0.0;          // same family, mismatched indices
    double cross_family_max = 0.0;     // distinct families
    double diag_j_dependence = 0.0;    // max over i of spread over j
    // T per family: diagonal averaged over the second index
    std::vector<std::vector<double>> t_eigen;
};

// phi(x_{r,ij}^* x_{s,kl}) over one or more coefficient families. The
// diagonal depends on the first index only; its value is the orthogonality
// weight of that row.
inline OrthogonalityTable orthogonality_table(const std::vector<CoefficientFamily>& fams,
                                              const Functional& phi) {
    OrthogonalityTable t;
    const int nf = static_cast<int>(fams.size());
    std::vector<std::vector<std::vector<Element>>> x(static_cast<std::size_t>(nf));
    for (int f = 0; f < nf; ++f) {
        const auto& fam = fams[static_cast<std::size_t>(f)];
        const int n = static_cast<int>(fam.idx.size());
        x[static_cast<std::size_t>(f)].resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            x[static_cast<std::size_t>(f)][static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j)
                x[static_cast<std::size_t>(f)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    fam.coef(fam.idx[static_cast<std::size_t>(i)], fam.idx[static_cast<std::size_t>(j)]);
        }
    }

    t.diag.resize(static_cast<std::size_t>(nf));
    t.t_eigen.resize(static_cast<std::size_t>(nf));
    for (int f = 0; f < nf; ++f) {
        const int n = static_cast<int>(fams[static_cast<std::size_t>(f)].idx.size());
        auto& df = t.diag[static_cast<std::size_t>(f)];
        df.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        // phi(x_{ij}^* x_{kl}) = <x_kl, x_ij>
                        cplx v = gns_inner(x[static_cast<std::size_t>(f)][static_cast<std::size_t>(k)][static_cast<std::size_t>(l)],
                                           x[static_cast<std::size_t>(f)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], phi);
                        if (i == k && j == l) df[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v.real();
                        else t.offdiag_max = std::max(t.offdiag_max, std::abs(v));
                    }
        // row weight: diagonal averaged over the column index
        std::vector<double> trow(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            double avg = 0.0, lo = 1e300, hi = -1e300;
            for (int j = 0; j < n; ++j) {
                double v = df[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                avg += v;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            avg /= n;
            trow[static_cast<std::size_t>(i)] = avg;
            t.diag_j_dependence = std::max(t.diag_j_dependence, hi - lo);
        }
        t.t_eigen[static_cast<std::size_t>(f)] = trow;
    }

    for (int f = 0; f < nf; ++f)
        for (int g2 = f + 1; g2 < nf; ++g2) {
            const int n1 = static_cast<int>(fams[static_cast<std::size_t>(f)].idx.size());
            const int n2 = static_cast<int>(fams[static_cast<std::size_t>(g2)].idx.size());
            for (int i = 0; i < n1; ++i)
                for (int j = 0; j < n1; ++j)
                    for (int k = 0; k < n2; ++k)
                        for (int l = 0; l < n2; ++l)
                            t.cross_family_max = std::max(
                                t.cross_family_max,
                                std::abs(gns_inner(x[static_cast<std::size_t>(g2)][static_cast<std::size_t>(k)][static_cast<std::size_t>(l)],
                                                   x[static_cast<std::size_t>(f)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], phi)));
        }
    return t;
}

// ---------------------------------------------------------------------------
// Fusion detection
// ---------------------------------------------------------------------------

struct FusionComponent {
    int catalog_index;
    int multiplicity;
    double max_pairing;
};

struct FusionResult {
    std::vector<FusionComponent> components;
    double noise_floor = 0.0; // largest pairing among absent labels
};

// Which catalog classes pair non-trivially with the entries of `prod`, and
// with what intertwiner multiplicity. Pairings are Haar inner products of
// normalized coefficients; anything between `noise` and `signal` raises
// AmbiguousDetection.
inline FusionResult fusion_detect(const Corep& prod, const std::vector<Corep>& catalog,
                                  const Functional& phi, double signal = 1e-4,
                                  double noise = 1e-8, double hom_tol = 0.3) {
    std::vector<std::pair<Element, double>> pentries;
    for (const auto& [ij, e] : prod.entries()) {
        double n = l2_norm(e, phi);
        if (n > 0.0) pentries.emplace_back(e, n);
    }

    FusionResult res;
    for (int m = 0; m < static_cast<int>(catalog.size()); ++m) {
        double best = 0.0;
        for (const auto& [ij, c] : catalog[static_cast<std::size_t>(m)].entries()) {
            double nc = l2_norm(c, phi);
            if (nc == 0.0) continue;
            for (const auto& [p, np] : pentries)
                best = std::max(best, std::abs(gns_inner(p, c, phi)) / (nc * np));
        }
        if (best > noise && best < signal)
            throw AmbiguousDetection("fusion pairing " + std::to_string(best) +
                                     " between noise floor and signal threshold");
        if (best >= signal) {
            // Genuine intertwiners of windowed corepresentations carry a
            // residual ~q^{window+1} from edge leakage; non-intertwiners sit
            // at the scale of the system. The cut lives inside that gap.
            int mult = hom_space(catalog[static_cast<std::size_t>(m)], prod, phi, hom_tol).dim;
            res.components.push_back({m, mult, best});
        } else {
            res.noise_floor = std::max(res.noise_floor, best);
        }
    }
    return res;
}

} // namespace qgal
