#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "qgal/coobject.hpp"
#include "qgal/finite_kac.hpp"
#include "qgal/qseries.hpp"
#include "qgal/reflection.hpp"
#include "qgal/report.hpp"
#include "qgal/suq2.hpp"
#include "qgal/suq2_checks.hpp"

namespace qgal {

struct SuiteConfig {
    std::string suite;
    double q = 0.5;
    int fock_cutoff = 48;
    int shift_window = 8;
    int series_order = 40;
    int coeff_window = 6;
    int nmin = -3;
    int nmax = 3;
    std::string group = "catalog";
    std::string group_file;
    std::string cocycle_file;
    std::uint64_t seed = 1;
    bool corrupt = false;
    std::map<std::string, double> tol;
    std::string out;

    double tol_or(const std::string& name, double def) const {
        auto it = tol.find(name);
        return it == tol.end() ? def : it->second;
    }

    void validate() const {
        for (const auto& [k, v] : tol)
            if (!(v > 0.0)) throw ConfigError("tolerance '" + k + "' must be positive");
        TruncationParams tp = truncation();
        tp.validate();
    }

    TruncationParams truncation() const {
        TruncationParams tp;
        tp.fock_cutoff = fock_cutoff;
        tp.shift_window = shift_window;
        tp.series_order = series_order;
        tp.coeff_window = coeff_window;
        tp.nmin = nmin;
        tp.nmax = nmax;
        return tp;
    }

    ojson params_json() const {
        ojson j;
        j["q"] = q;
        j["fock_cutoff"] = fock_cutoff;
        j["shift_window"] = shift_window;
        j["series_order"] = series_order;
        j["coeff_window"] = coeff_window;
        j["nmin"] = nmin;
        j["nmax"] = nmax;
        j["group"] = group;
        if (!group_file.empty()) j["group_file"] = group_file;
        if (!cocycle_file.empty()) j["cocycle_file"] = cocycle_file;
        j["seed"] = seed;
        j["corrupt"] = corrupt;
        if (!tol.empty()) j["tol_overrides"] = tol;
        return j;
    }
};

// The convention note carried by every quantum-SU(2) report.
inline std::string haar_weight_note() {
    return "haar-weight-convention: phi(e_{ii} (x) S^0) = (1-q^2) q^{2i}; the weight decays in "
           "the matrix index i, the reading with the shift exponent instead is inconsistent with "
           "the orthogonality diagonals and the sphere's invariant state, and is not used";
}

// ---------------------------------------------------------------------------
// Input formats
// ---------------------------------------------------------------------------

inline FiniteGroup group_from_json_text(const std::string& text) {
    ojson j = ojson::parse(text, nullptr, true);
    if (!j.contains("elements") || !j.contains("table"))
        throw ConfigError("group JSON needs 'elements' and 'table'");
    std::vector<std::string> elems = j["elements"].get<std::vector<std::string>>();
    std::vector<std::vector<int>> table = j["table"].get<std::vector<std::vector<int>>>();
    return FiniteGroup("custom", elems, table);
}

inline CocycleTable cocycle_from_json_text(const std::string& text) {
    ojson j = ojson::parse(text, nullptr, true);
    CocycleTable t;
    t.den = j.at("den").get<int>();
    t.turn = j.at("turn").get<std::vector<std::vector<int>>>();
    if (t.den <= 0) throw ConfigError("cocycle table: denominator must be positive");
    for (const auto& row : t.turn)
        if (row.size() != t.turn.size()) throw ConfigError("cocycle table: not square");
    return t;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline FiniteGroup resolve_group(const SuiteConfig& cfg, const std::string& fallback = "Z2xZ2") {
    if (!cfg.group_file.empty()) return group_from_json_text(read_file(cfg.group_file));
    if (cfg.group.empty() || cfg.group == "catalog") return group_preset(fallback);
    return group_preset(cfg.group);
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

inline Report suite_qcalc_identities(const SuiteConfig& cfg) {
    Report rep;
    rep.suite = "qcalc-identities";
    const double tol_binom = cfg.tol_or("qbinomial", 1e-12);

    for (double q : {0.3, 0.5, 0.7}) {
        const double Q = q * q;
        double sum = 0.0, term = 1.0;
        for (int k = 0;; ++k) {
            sum += term;
            if (k >= 60) break;
            term *= Q / (1.0 - std::pow(Q, k + 1));
        }
        double lhs = sum * qpochhammer_inf(Q, Q).real();
        rep.add(CaseResult::check("qbinomial identity q=" + std::to_string(q), lhs, 1.0, tol_binom,
                                  std::pow(Q, 61) / qpochhammer_inf(Q, Q).real()));
    }

    // Pochhammer recurrence over the tested range
    {
        double worst = 0.0;
        for (int n = 0; n <= 64; ++n) {
            cplx a(0.37, -0.21);
            double q = 0.62;
            cplx lhs = qpochhammer(a, q, n + 1);
            cplx rhs = qpochhammer(a, q, n) * (1.0 - std::pow(q, n) * a);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        rep.add(CaseResult::residual("pochhammer recurrence n<=64", worst, cfg.tol_or("recurrence", 1e-13)));
    }

    // Wall polynomial degree: order-(n+1) finite differences vanish
    {
        double worst = 0.0;
        for (int n : {2, 4, 6}) {
            std::vector<double> d;
            for (int i = 0; i <= n + 1; ++i) d.push_back(wall_polynomial(n, 0.1 + 0.2 * i, 0.3, 0.5));
            for (int ord = 0; ord < n + 1; ++ord) {
                for (std::size_t i = 0; i + 1 < d.size(); ++i) d[i] = d[i + 1] - d[i];
                d.pop_back();
            }
            worst = std::max(worst, std::abs(d[0]));
        }
        rep.add(CaseResult::residual("wall polynomial degree", worst, cfg.tol_or("wall_degree", 1e-10)));
    }

    // terminating 2phi1 against the closed two-term form
    {
        double q = 0.45, a = 0.3, x = 1.2;
        double got = hyper_2phi1(1.0 / q, 0.0, q * a, q, q * x).real();
        rep.add(CaseResult::check("terminating 2phi1", got, 1.0 - x / (1.0 - q * a),
                                  cfg.tol_or("2phi1", 1e-12)));
    }
    return rep;
}

inline Report suite_suq2_orthogonality(const SuiteConfig& cfg) {
    Report rep;
    rep.suite = "suq2-orthogonality";
    rep.notes.push_back(haar_weight_note());
    SUq2Model model(cfg.q, cfg.truncation());
    const int w = cfg.coeff_window;

    auto orth = orthogonality_suite(model, w, cfg.nmin, cfg.nmax);
    rep.add(CaseResult::residual("phi_+ off-diagonal", orth.phi_plus_offdiag, cfg.tol_or("plus_offdiag", 1e-8)));
    rep.add(CaseResult::residual("phi_+ cross-class", orth.phi_plus_cross, cfg.tol_or("plus_offdiag", 1e-8)));
    rep.add(CaseResult::residual("phi_+ diagonal vs (1-q^2) q^{2i}", orth.phi_plus_diag_err,
                                 cfg.tol_or("plus_diag", 1e-8)));
    rep.add(CaseResult::residual("phi_0 off-diagonal", orth.phi0_offdiag, cfg.tol_or("zero_offdiag", 1e-8)));
    rep.add(CaseResult::residual("phi_0 diagonal vs q^{-2n-2j} (relative)", orth.phi0_diag_rel_err,
                                 cfg.tol_or("zero_diag_rel", 1e-6)));
    rep.add(CaseResult::residual("rescaled coefficients orthonormal", orth.rescaled_gram_err,
                                 cfg.tol_or("gram", 1e-8)));
    rep.add(CaseResult::boolean("phi_0 window not dominated", !orth.window_dominated));

    auto ll = model.phi0_apply(model.l0p() * model.l0p().star());
    rep.add(CaseResult::check("phi_0(L L^*) = 1", ll.value.real(), 1.0, cfg.tol_or("ll_weight", 1e-10),
                              ll.boundary_mass));

    // column unitarity on the window
    {
        const int pad = 20;
        std::vector<int> rows, cols;
        for (int i = 0; i <= w + pad; ++i) rows.push_back(i);
        for (int i = 0; i <= w; ++i) cols.push_back(i);
        Corep g(model.ambient(), rows, cols);
        for (int k : rows)
            for (int i : cols) g.set(k, i, model.g_coeff(0, k, i));
        auto un = check_unitary(g, model.one_m(), model.phi_plus(), cfg.tol_or("unitarity", 1e-6));
        rep.add(CaseResult::residual("column unitarity", un.residual, un.tol,
                                     std::pow(cfg.q, 2 * (pad + 1))));
    }

    if (cfg.corrupt) {
        // negative control: a corrupted coefficient must violate orthogonality
        Element bad = model.g_coeff(0, 0, 1) + 0.2 * model.g_coeff(0, 1, 1);
        double off = std::abs(gns_inner(bad, model.g_coeff(0, 1, 1), model.phi_plus()));
        rep.add(CaseResult::residual("corrupted coefficient stays orthogonal", off,
                                     cfg.tol_or("plus_offdiag", 1e-8), 0.0,
                                     "deliberate corruption; this case is expected to fail"));
    }
    return rep;
}

inline Report suite_suq2_fusion(const SuiteConfig& cfg) {
    Report rep;
    rep.suite = "suq2-fusion";
    rep.notes.push_back(haar_weight_note());
    SUq2Model model(cfg.q, cfg.truncation());
    const int w = cfg.coeff_window;
    const int nlo = std::max(cfg.nmin, -2), nhi = std::min(cfg.nmax, 2);

    for (int two_r : {1, 2}) {
        for (int n = nlo; n <= nhi; ++n) {
            auto fc = fusion_case(model, n, two_r, w, 8, cfg.seed, cfg.tol_or("signal", 1e-4),
                                  cfg.tol_or("noise", 1e-8));
            std::string name = "G^(" + std::to_string(n) + ") x U_{" + std::to_string(two_r) + "/2}";
            std::string got = "detected {";
            for (std::size_t i = 0; i < fc.detected.size(); ++i)
                got += (i ? "," : "") + std::to_string(fc.detected[static_cast<std::size_t>(i)]);
            got += "}, noise " + std::to_string(fc.max_noise);
            rep.add(CaseResult::boolean(name, fc.pass, got));
        }
    }
    return rep;
}

inline Report suite_suq2_modular(const SuiteConfig& cfg) {
    Report rep;
    rep.suite = "suq2-modular";
    rep.notes.push_back(haar_weight_note());
    SUq2Model model(cfg.q, cfg.truncation());
    auto mr = modular_element_check(model, cfg.coeff_window, cfg.nmin, cfg.nmax);
    rep.add(CaseResult::residual("phi_0 diag * q^{2n+4j} / T constant (relative spread)",
                                 mr.ratio_spread_rel, cfg.tol_or("ratio", 1e-5)));
    rep.add(CaseResult::residual("d_n proportional to q^n (relative)", mr.dn_fit_rel_err,
                                 cfg.tol_or("dn", 1e-5)));
    rep.add(CaseResult::residual("A/T^2 constant in j (relative spread)", mr.aj_tj_spread_rel,
                                 cfg.tol_or("at2", 1e-5)));
    return rep;
}

inline Report suite_suq2_coobject_axioms(const SuiteConfig& cfg) {
    Report rep;
    rep.suite = "suq2-coobject-axioms";
    rep.notes.push_back(haar_weight_note());
    SUq2Model model(cfg.q, cfg.truncation());
    auto ax = suq2_coobject_axioms(model, cfg.nmin, cfg.nmax, cfg.coeff_window, 28);
    const double tols[7] = {0.5,
                            cfg.tol_or("module", 1e-12),
                            cfg.tol_or("corner", 1e-12),
                            cfg.tol_or("module_coproduct", 1e-8),
                            cfg.tol_or("isometry", 1e-8),
                            cfg.tol_or("coassoc", 1e-7),
                            0.5};
    for (int i = 0; i < 7; ++i) {
        rep.add(CaseResult::residual("condition " + std::to_string(i + 1) + ": " + ax[static_cast<std::size_t>(i)].name,
                                     ax[static_cast<std::size_t>(i)].residual, tols[i],
                                     model.series_tail(cfg.series_order)));
    }
    return rep;
}

inline Report suite_suq2_reconstruct(const SuiteConfig& cfg) {
    Report rep;
    rep.suite = "suq2-reconstruct";
    rep.notes.push_back(haar_weight_note());
    SUq2Model model(cfg.q, cfg.truncation());
    const int dim = cfg.coeff_window + 14;

    auto pc = podles_coaction(model, dim, cfg.seed);
    rep.add(CaseResult::residual("coaction matches the transported comultiplication",
                                 pc.transport_residual, cfg.tol_or("transport", 1e-8)));
    rep.add(CaseResult::residual("invariant state matches delta_ij (1-q^2) q^{2i}",
                                 pc.invariant_state_residual, cfg.tol_or("invariant", 1e-8)));
    rep.add(CaseResult::boolean("coaction is ergodic on the window", pc.fixed_point_dim == 1));

    auto rc = suq2_reconstruct_check(model, pc, cfg.coeff_window);
    rep.add(CaseResult::residual("implementing identity", rc.implementing_residual,
                                 cfg.tol_or("implementing", 1e-4), std::pow(cfg.q, 2 * (dim - cfg.coeff_window))));
    rep.add(CaseResult::residual("coefficients match the closed form (up to phase)",
                                 rc.coeff_residual, cfg.tol_or("coeff", 1e-6)));
    rep.add(CaseResult::residual("global phase deviation", std::abs(rc.phase - cplx(1.0)),
                                 cfg.tol_or("phase", 1e-6)));
    return rep;
}

inline Report suite_finite_classify(const SuiteConfig& cfg) {
    Report rep;
    rep.suite = "finite-classify";
    static const std::map<std::string, int> expected = {
        {"Z1", 1}, {"Z2", 1}, {"Z3", 1}, {"Z4", 1}, {"Z5", 1},   {"Z2xZ2", 2},
        {"Z3xZ3", 3}, {"S3", 1}, {"Z2xZ2xZ2", 8}, {"D4", 3}, {"Q8", 1}};

    std::vector<std::string> groups;
    if (cfg.group == "catalog" && cfg.group_file.empty())
        groups = {"Z4", "Z5", "S3", "Z2xZ2"};
    else
        groups = {cfg.group};

    for (const auto& gname : groups) {
        FiniteGroup g = cfg.group_file.empty() ? group_preset(gname)
                                               : group_from_json_text(read_file(cfg.group_file));
        auto classes = classify_coobjects(g);
        int nontrivial = 0, trivial = 0, user = 0;
        for (const auto& c : classes) {
            if (c.trivial) ++trivial;
            else if (c.needs_user_cocycle) ++user;
            else ++nontrivial;
        }
        std::string detail = "trivial " + std::to_string(trivial) + ", bicharacter classes " +
                             std::to_string(nontrivial) +
                             (user ? ", needing user cocycles " + std::to_string(user) : "");
        auto it = expected.find(g.name());
        if (it != expected.end()) {
            rep.add(CaseResult::check("classes of " + g.name(), static_cast<double>(classes.size()),
                                      static_cast<double>(it->second), 0.0, 0.0, detail));
        } else {
            rep.add(CaseResult::boolean("classes of " + g.name() + " enumerated", true, detail));
        }
    }
    return rep;
}

namespace detail {

struct FiniteCase {
    std::string name;
    std::string gamma;
    std::string hsub_of; // base group A with H = A x A^ Heisenberg; "trivial" for Omega = 1
    std::vector<int> hsub;
};

inline std::vector<FiniteCase> finite_catalog() {
    return {
        {"Z2xZ2 Pauli", "Z2xZ2", "Z2", {0, 1, 2, 3}},
        {"Z2xZ2xZ2 Pauli on a Klein subgroup", "Z2xZ2xZ2", "Z2", {0, 1, 2, 3}},
        {"Z3xZ3 Heisenberg", "Z3xZ3", "Z3", {0, 1, 2, 3, 4, 5, 6, 7, 8}},
        {"Z3 trivial", "Z3", "trivial", {0}},
    };
}

struct PreparedCase {
    std::unique_ptr<GroupModel> gamma;
    std::unique_ptr<GroupModel> hmodel;
    std::vector<int> hsub;
    Element omega_h;  // over the H model
    Element omega_g;  // lifted to Gamma
    std::string name;
};

inline PreparedCase prepare_case(const FiniteCase& fc) {
    PreparedCase pc;
    pc.name = fc.name;
    pc.gamma = std::make_unique<GroupModel>(group_preset(fc.gamma));
    pc.hsub = fc.hsub;
    if (fc.hsub_of == "trivial") {
        pc.hmodel = std::make_unique<GroupModel>(group_preset("Z1"));
        pc.omega_h = Element::unit(pc.hmodel->mm());
    } else {
        auto [h, table] = heisenberg_cocycle_data(group_preset(fc.hsub_of));
        pc.hmodel = std::make_unique<GroupModel>(std::move(h));
        CharacterTable chars(pc.hmodel->group());
        pc.omega_h = cocycle_from_table(*pc.hmodel, chars, table).omega;
    }
    pc.omega_g = lift_cocycle(*pc.gamma, pc.hsub, pc.omega_h);
    return pc;
}

} // namespace detail

inline Report suite_finite_cocycle(const SuiteConfig& cfg) {
    Report rep;
    rep.suite = "finite-cocycle";

    // target cocycle: user table, or the Heisenberg cocycle on A x A^
    std::unique_ptr<GroupModel> hm;
    Element omega;
    if (!cfg.cocycle_file.empty()) {
        FiniteGroup g = resolve_group(cfg);
        hm = std::make_unique<GroupModel>(std::move(g));
        CharacterTable chars(hm->group());
        omega = cocycle_from_table(*hm, chars, cocycle_from_json_text(read_file(cfg.cocycle_file))).omega;
    } else {
        auto [h, table] = heisenberg_cocycle_data(
            cfg.group == "catalog" ? group_preset("Z2") : group_preset(cfg.group));
        hm = std::make_unique<GroupModel>(std::move(h));
        CharacterTable chars(hm->group());
        omega = cocycle_from_table(*hm, chars, table).omega;
    }

    rep.add(CaseResult::residual("unitarity", cocycle_unitarity_residual(*hm, omega),
                                 cfg.tol_or("unitarity", 1e-12)));
    rep.add(CaseResult::residual("cocycle identity", check_cocycle(*hm, omega),
                                 cfg.tol_or("identity", 1e-12)));
    auto nd = is_nondegenerate(*hm, omega);
    rep.add(CaseResult::boolean("non-degeneracy decision",
                                nd.algebra_dim == hm->group().order() ? nd.nondegenerate : true,
                                "algebra dim " + std::to_string(nd.algebra_dim) + ", center " +
                                    std::to_string(nd.center_dim)));

    // coboundary invariance over random unitaries
    {
        std::mt19937_64 rng(cfg.seed);
        double worst_id = 0.0;
        bool stable = true;
        for (int t = 0; t < 20; ++t) {
            Element u = random_group_unitary(*hm, rng);
            Element tw = coboundary_twist(*hm, omega, u);
            worst_id = std::max(worst_id, check_cocycle(*hm, tw));
            if (is_nondegenerate(*hm, tw).nondegenerate != nd.nondegenerate) stable = false;
        }
        rep.add(CaseResult::residual("coboundary twists satisfy the identity", worst_id,
                                     cfg.tol_or("identity", 1e-12)));
        rep.add(CaseResult::boolean("non-degeneracy is coboundary invariant", stable));
    }

    // round trip through an implemented coaction (abelian case)
    if (hm->group().abelian() && is_nondegenerate(*hm, omega).nondegenerate) {
        CharacterTable chars(hm->group());
        auto cls0 = cohomology_class_abelian(*hm, omega, chars);
        std::vector<int> hsub;
        for (int i = 0; i < hm->group().order(); ++i) hsub.push_back(i);
        GroupModel hcopy(hm->group());
        Element omega_copy(hcopy.mm());
        for (const auto& [l, c] : omega.terms()) omega_copy.add(l, c);
        auto fam = induce_irreducibles(*hm, hsub, hcopy, omega_copy, cfg.seed);
        const Corep& g = fam.base;
        const int d = static_cast<int>(g.cols().size());

        CoactionData cd;
        cd.mdesc = hm->m();
        const auto* bd = hm->pool().make<MatrixUnitDescriptor>(0, d, "B(H)");
        cd.mb = hm->pool().tensor(hm->m(), bd);
        cd.dim = d;
        const Corep* gp = &g;
        const TensorDescriptor* mb = cd.mb;
        cd.alpha = [gp, mb, d](int u, int v) {
            Element e(mb);
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    Element m = gp->entry(u, k).star() * gp->entry(v, l);
                    for (const auto& [lab, c] : m.terms()) e.add(lab + Label{k, l}, c);
                }
            return e;
        };
        std::vector<Element> gens;
        for (int x = 0; x < hm->group().order(); ++x) gens.push_back(hm->lambda(x));
        auto rc = reconstruct_coobject(hm->pool(), cd, hm->tau(), gens);
        auto ext = extract_cleft_cocycle(*hm, rc, cfg.seed + 1);
        auto cls1 = cohomology_class_abelian(*hm, ext.cocycle.omega, chars);
        rep.add(CaseResult::boolean("reconstruction round trip preserves the class", cls0 == cls1));
        rep.add(CaseResult::residual("reconstructed implementing identity", rc.implementing_residual,
                                     cfg.tol_or("implementing", 1e-10)));
    }
    return rep;
}

inline Report suite_finite_induce(const SuiteConfig& cfg) {
    Report rep;
    rep.suite = "finite-induce";
    const double tol_t = cfg.tol_or("t_matrix", 1e-10);

    for (const auto& fc : detail::finite_catalog()) {
        auto pc = detail::prepare_case(fc);
        auto fam = induce_irreducibles(*pc.gamma, pc.hsub, *pc.hmodel, pc.omega_h, cfg.seed);
        const int index = pc.gamma->group().order() / static_cast<int>(pc.hsub.size());
        rep.add(CaseResult::check(pc.name + ": class count = index of H", fam.coreps.size(), index, 0.0));
        rep.add(CaseResult::residual(pc.name + ": regular block corep identity",
                                     fam.corep_identity_residual, 1e-10));
        rep.add(CaseResult::residual(pc.name + ": regular block unitarity", fam.unitarity_residual, 1e-10));

        std::vector<CoefficientFamily> fams;
        for (std::size_t f = 0; f < fam.coreps.size(); ++f) {
            const Corep* c = &fam.coreps[f];
            fams.push_back({"G" + std::to_string(f), c->cols(),
                            [c](int i, int j) { return c->entry(i, j); }});
        }
        auto table = orthogonality_table(fams, pc.gamma->tau());
        rep.add(CaseResult::residual(pc.name + ": off-diagonal pairings",
                                     std::max(table.offdiag_max, table.cross_family_max), tol_t));

        double tdev = 0.0, sumdev = 0.0;
        for (const auto& row : table.t_eigen) {
            double sum = 0.0;
            for (double t : row) {
                tdev = std::max(tdev, std::abs(t - 1.0 / static_cast<double>(row.size())));
                sum += t;
            }
            sumdev = std::max(sumdev, std::abs(sum - 1.0));
        }
        rep.add(CaseResult::residual(pc.name + ": T = 1/n_r", tdev, tol_t));
        rep.add(CaseResult::residual(pc.name + ": sum_j T_j = 1", sumdev, tol_t));
        rep.add(CaseResult::residual(pc.name + ": diagonal independent of the column index",
                                     table.diag_j_dependence, cfg.tol_or("diag_indep", 1e-9)));

        // invariant states of the implemented ergodic coactions are tracial
        double trac = 0.0;
        bool ergodic = true, order_law = true;
        for (const auto& g : fam.coreps) {
            const int d = static_cast<int>(g.cols().size());
            CoactionData cd;
            cd.mdesc = pc.gamma->m();
            const auto* bd = pc.gamma->pool().make<MatrixUnitDescriptor>(0, d, "B(H)");
            cd.mb = pc.gamma->pool().tensor(pc.gamma->m(), bd);
            cd.dim = d;
            const Corep* gp = &g;
            const TensorDescriptor* mb = cd.mb;
            cd.alpha = [gp, mb, d](int u, int v) {
                Element e(mb);
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) {
                        Element m = gp->entry(u, k).star() * gp->entry(v, l);
                        for (const auto& [lab, c] : m.terms()) e.add(lab + Label{k, l}, c);
                    }
                return e;
            };
            auto inv = invariant_state_check(*pc.gamma, cd);
            trac = std::max(trac, inv.traciality_residual);
            ergodic = ergodic && inv.ergodic && inv.support_is_subgroup;
            order_law = order_law && inv.galois_order_law;
        }
        rep.add(CaseResult::residual(pc.name + ": ergodic invariant states tracial", trac,
                                     cfg.tol_or("tracial", 1e-10)));
        rep.add(CaseResult::boolean(pc.name + ": ergodic with subgroup support", ergodic));
        rep.add(CaseResult::boolean(pc.name + ": |H| = dim^2", order_law));
    }
    return rep;
}

inline Report suite_reflection_weights(const SuiteConfig& cfg) {
    Report rep;
    rep.suite = "reflection-weights";

    for (const auto& fc : detail::finite_catalog()) {
        auto pc = detail::prepare_case(fc);
        auto rb = build_reflection(*pc.gamma, pc.omega_g);
        rep.add(CaseResult::residual(pc.name + ": Delta_P coassociative", rb.coassociativity_residual,
                                     cfg.tol_or("coassoc", 1e-10)));
        rep.add(CaseResult::residual(pc.name + ": left invariance", rb.left_invariance_residual,
                                     cfg.tol_or("invariance", 1e-9)));
        rep.add(CaseResult::residual(pc.name + ": right invariance", rb.right_invariance_residual,
                                     cfg.tol_or("invariance", 1e-9)));
        rep.add(CaseResult::residual(pc.name + ": invariant state tracial", rb.traciality_residual,
                                     cfg.tol_or("tracial", 1e-10)));

        auto fam = induce_irreducibles(*pc.gamma, pc.hsub, *pc.hmodel, pc.omega_h, cfg.seed);
        std::vector<std::vector<double>> t_eigen;
        for (const auto& c : fam.coreps)
            t_eigen.push_back(std::vector<double>(c.cols().size(), 1.0 / static_cast<double>(c.cols().size())));
        auto wt = weight_formula_check(rb, fam.coreps, t_eigen);
        rep.add(CaseResult::residual(pc.name + ": phi_P off-diagonal", wt.offdiag_max,
                                     cfg.tol_or("weights", 1e-9)));
        rep.add(CaseResult::residual(pc.name + ": phi_P diagonal = T/A up to one scalar",
                                     wt.diag_rel_residual, cfg.tol_or("weights", 1e-9)));
        rep.add(CaseResult::residual(pc.name + ": A = 1 (Kac degeneration)", wt.a_dev_from_one,
                                     cfg.tol_or("kac_a", 1e-10)));
    }
    return rep;
}

inline Report suite_dual_weights(const SuiteConfig& cfg) {
    Report rep;
    rep.suite = "dual-weights";

    // Pauli co-object
    {
        GroupModel gm(group_preset("Z2xZ2"));
        auto [h, table] = heisenberg_cocycle_data(group_preset("Z2"));
        CharacterTable chars(gm.group());
        Element omega = cocycle_from_table(gm, chars, table).omega;
        auto dw = dual_weight_check(gm, omega);
        rep.add(CaseResult::check("Pauli: dim of the dual algebra", dw.nhat_dim, 4, 0.0));
        rep.add(CaseResult::check("Pauli: center dimension (single factor)", dw.center_dim, 1, 0.0));
        rep.add(CaseResult::residual("Pauli: adjoint coaction range", dw.range_residual, 1e-10));
        rep.add(CaseResult::residual("Pauli: dual weight invariance (phi_Nhat(e_ii) = n_r)",
                                     dw.invariance_residual, cfg.tol_or("invariance", 1e-9)));
    }
    // trivial co-object of Z3: blocks are scalars, D = 1, c_r = 1
    {
        GroupModel gm(group_preset("Z3"));
        auto dw = dual_weight_check(gm, Element::unit(gm.mm()));
        rep.add(CaseResult::check("trivial Z3: dim of the dual algebra", dw.nhat_dim, 3, 0.0));
        rep.add(CaseResult::check("trivial Z3: center dimension", dw.center_dim, 3, 0.0));
        rep.add(CaseResult::residual("trivial Z3: counting weight invariance", dw.invariance_residual,
                                     cfg.tol_or("invariance", 1e-12)));
    }
    return rep;
}

inline Report suite_dichotomy(const SuiteConfig& cfg) {
    Report rep;
    rep.suite = "dichotomy";
    rep.notes.push_back(haar_weight_note());

    // finite side: sum_j T_{r,j} = 1 from the measured tables
    for (const auto& fc : detail::finite_catalog()) {
        auto pc = detail::prepare_case(fc);
        auto fam = induce_irreducibles(*pc.gamma, pc.hsub, *pc.hmodel, pc.omega_h, cfg.seed);
        std::vector<CoefficientFamily> fams;
        for (std::size_t f = 0; f < fam.coreps.size(); ++f) {
            const Corep* c = &fam.coreps[f];
            fams.push_back({"G" + std::to_string(f), c->cols(),
                            [c](int i, int j) { return c->entry(i, j); }});
        }
        auto table = orthogonality_table(fams, pc.gamma->tau());
        auto dich = dichotomy_finite(table.t_eigen);
        rep.add(CaseResult::residual(pc.name + ": sum_j T_j = 1 (compact reflection)", dich.t_sum_dev,
                                     cfg.tol_or("t_sum", 1e-10)));
    }

    // infinite side: partial sums of 1/T grow by q^{-2}
    {
        SUq2Model model(cfg.q, cfg.truncation());
        std::vector<double> tdiag;
        for (int j = 0; j <= cfg.coeff_window; ++j) {
            Element g = model.g_coeff(0, j, 0);
            tdiag.push_back(gns_inner(g, g, model.phi_plus()).real());
        }
        auto dich = dichotomy_infinite(tdiag, cfg.q);
        rep.add(CaseResult::residual(
            "sum_j 1/T divergence: increment ratio = q^{-2} (relative)", dich.growth_dev,
            cfg.tol_or("growth", 1e-2), 0.0,
            "certifies the non-compact reflected side: an infinite-dimensional irreducible"));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

using SuiteFn = std::function<Report(const SuiteConfig&)>;

inline const std::vector<std::pair<std::string, SuiteFn>>& suite_registry() {
    static const std::vector<std::pair<std::string, SuiteFn>> reg = {
        {"qcalc-identities", suite_qcalc_identities},
        {"suq2-orthogonality", suite_suq2_orthogonality},
        {"suq2-fusion", suite_suq2_fusion},
        {"suq2-modular", suite_suq2_modular},
        {"suq2-coobject-axioms", suite_suq2_coobject_axioms},
        {"suq2-reconstruct", suite_suq2_reconstruct},
        {"finite-classify", suite_finite_classify},
        {"finite-cocycle", suite_finite_cocycle},
        {"finite-induce", suite_finite_induce},
        {"reflection-weights", suite_reflection_weights},
        {"dual-weights", suite_dual_weights},
        {"dichotomy", suite_dichotomy},
    };
    return reg;
}

inline Report run_suite(const SuiteConfig& cfg) {
    cfg.validate();
    for (const auto& [name, fn] : suite_registry()) {
        if (name == cfg.suite) {
            Report rep = fn(cfg);
            rep.params = cfg.params_json();
            rep.seed = cfg.seed;
            return rep;
        }
    }
    throw ConfigError("unknown suite '" + cfg.suite + "'");
}

} // namespace qgal
