#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "qgal/errors.hpp"
#include "qgal/scalar.hpp"

namespace qgal {

// Finite group given by its full multiplication table. Identity is element 0.
class FiniteGroup {
public:
    FiniteGroup() = default;
    FiniteGroup(std::string name, std::vector<std::string> elems, std::vector<std::vector<int>> table)
        : name_(std::move(name)), elems_(std::move(elems)), mult_(std::move(table)) {
        validate();
    }

    const std::string& name() const { return name_; }
    int order() const { return static_cast<int>(mult_.size()); }
    int identity() const { return 0; }
    int mul(int g, int h) const { return mult_[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)]; }
    int inv(int g) const { return inv_[static_cast<std::size_t>(g)]; }
    const std::string& elem_name(int g) const { return elems_[static_cast<std::size_t>(g)]; }

    int pow(int g, int k) const {
        int r = 0;
        if (k < 0) {
            g = inv(g);
            k = -k;
        }
        for (int i = 0; i < k; ++i) r = mul(r, g);
        return r;
    }

    int element_order(int g) const {
        int x = g, n = 1;
        while (x != 0) {
            x = mul(x, g);
            ++n;
        }
        return n;
    }

    bool abelian() const {
        for (int g = 0; g < order(); ++g)
            for (int h = 0; h < g; ++h)
                if (mul(g, h) != mul(h, g)) return false;
        return true;
    }

    int exponent() const {
        int e = 1;
        for (int g = 0; g < order(); ++g) e = std::lcm(e, element_order(g));
        return e;
    }

    // Subgroup generated by a set of elements.
    std::vector<int> generated(std::vector<int> gens) const {
        std::set<int> s{0};
        for (int g : gens) s.insert(g);
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<int> cur(s.begin(), s.end());
            for (int g : cur)
                for (int h : cur)
                    if (s.insert(mul(g, h)).second) grew = true;
        }
        return {s.begin(), s.end()};
    }

    // All subgroups, each as a sorted element list (identity-first order).
    std::vector<std::vector<int>> subgroups() const {
        std::set<std::vector<int>> found;
        found.insert({0});
        bool grew = true;
        while (grew) {
            grew = false;
            auto snapshot = found;
            for (const auto& h : snapshot) {
                for (int g = 1; g < order(); ++g) {
                    if (std::binary_search(h.begin(), h.end(), g)) continue;
                    auto gens = h;
                    gens.push_back(g);
                    auto k = generated(gens);
                    if (found.insert(k).second) grew = true;
                }
            }
        }
        return {found.begin(), found.end()};
    }

    bool subgroups_conjugate(const std::vector<int>& h, const std::vector<int>& k) const {
        if (h.size() != k.size()) return false;
        for (int g = 0; g < order(); ++g) {
            std::vector<int> conj;
            conj.reserve(h.size());
            for (int x : h) conj.push_back(mul(mul(g, x), inv(g)));
            std::sort(conj.begin(), conj.end());
            if (conj == k) return true;
        }
        return false;
    }

private:
    void validate() {
        const int n = order();
        if (n <= 0 || static_cast<int>(elems_.size()) != n)
            throw ConfigError("group table: empty or element/table size mismatch");
        for (const auto& row : mult_)
            if (static_cast<int>(row.size()) != n) throw ConfigError("group table: ragged rows");
        for (int g = 0; g < n; ++g)
            if (mult_[0][static_cast<std::size_t>(g)] != g || mult_[static_cast<std::size_t>(g)][0] != g)
                throw ConfigError("group table: element 0 is not an identity");
        for (int g = 0; g < n; ++g)
            for (int h = 0; h < n; ++h)
                for (int k = 0; k < n; ++k)
                    if (mul(mul(g, h), k) != mul(g, mul(h, k)))
                        throw ConfigError("group table: not associative");
        inv_.assign(static_cast<std::size_t>(n), -1);
        for (int g = 0; g < n; ++g) {
            for (int h = 0; h < n; ++h)
                if (mul(g, h) == 0 && mul(h, g) == 0) {
                    inv_[static_cast<std::size_t>(g)] = h;
                    break;
                }
            if (inv_[static_cast<std::size_t>(g)] < 0) throw ConfigError("group table: missing inverse");
        }
    }

    std::string name_;
    std::vector<std::string> elems_;
    std::vector<std::vector<int>> mult_;
    std::vector<int> inv_;
};

// Right cosets Hg with a fixed section; the coset of the identity is
// represented by the identity.
struct CosetDecomposition {
    std::vector<std::vector<int>> cosets;
    std::vector<int> section; // one representative per coset
};

inline CosetDecomposition right_cosets(const FiniteGroup& g, const std::vector<int>& h) {
    CosetDecomposition cd;
    std::vector<bool> seen(static_cast<std::size_t>(g.order()), false);
    for (int x = 0; x < g.order(); ++x) {
        if (seen[static_cast<std::size_t>(x)]) continue;
        std::vector<int> coset;
        for (int s : h) {
            int y = g.mul(s, x);
            seen[static_cast<std::size_t>(y)] = true;
            coset.push_back(y);
        }
        std::sort(coset.begin(), coset.end());
        cd.cosets.push_back(coset);
        cd.section.push_back(coset.front()); // identity lands in coset 0 as element 0
    }
    return cd;
}

// Exact character table of a finite abelian group: chi[c](g) =
// exp(2*pi*i*turn[c][g]/den) with den the group exponent. Characters are
// found by enumerating root-of-unity assignments on a generating set and
// keeping the multiplicative ones; the integer arithmetic keeps later
// cocycle identities exact at the source.
class CharacterTable {
public:
    explicit CharacterTable(const FiniteGroup& g) : group_(&g), den_(g.exponent()) {
        if (!g.abelian()) throw NotAbelian("character table requires an abelian group");
        const int n = g.order();

        std::vector<int> gens;
        {
            std::vector<int> span = g.generated({});
            while (static_cast<int>(span.size()) < n) {
                int best = -1, bestord = 0;
                for (int x = 1; x < n; ++x) {
                    if (std::binary_search(span.begin(), span.end(), x)) continue;
                    int o = g.element_order(x);
                    if (o > bestord) {
                        bestord = o;
                        best = x;
                    }
                }
                gens.push_back(best);
                auto withx = span;
                withx.push_back(best);
                span = g.generated(withx);
            }
        }
        gens_ = gens;

        std::vector<int> choice(gens.size(), 0);
        std::vector<std::vector<int>> rows;
        enumerate(choice, 0, rows);
        if (static_cast<int>(rows.size()) != n)
            throw Error("character enumeration failed: got " + std::to_string(rows.size()) +
                        " of " + std::to_string(n));
        std::sort(rows.begin(), rows.end());
        turn_ = rows;
    }

    const FiniteGroup& group() const { return *group_; }
    int count() const { return static_cast<int>(turn_.size()); }
    int den() const { return den_; }
    int turn(int chi, int g) const { return turn_[static_cast<std::size_t>(chi)][static_cast<std::size_t>(g)]; }

    cplx value(int chi, int g) const {
        double t = 2.0 * M_PI * turn(chi, g) / den_;
        return {std::cos(t), std::sin(t)};
    }

    // Index of the trivial character.
    int trivial() const {
        for (int c = 0; c < count(); ++c)
            if (std::all_of(turn_[static_cast<std::size_t>(c)].begin(), turn_[static_cast<std::size_t>(c)].end(),
                            [](int t) { return t == 0; }))
                return c;
        throw Error("no trivial character");
    }

    // Pointwise product and inverse make the characters a group (the dual).
    int product(int c1, int c2) const {
        std::vector<int> row(static_cast<std::size_t>(group_->order()));
        for (int g = 0; g < group_->order(); ++g)
            row[static_cast<std::size_t>(g)] = (turn(c1, g) + turn(c2, g)) % den_;
        return index_of(row);
    }

    int inverse(int c) const {
        std::vector<int> row(static_cast<std::size_t>(group_->order()));
        for (int g = 0; g < group_->order(); ++g)
            row[static_cast<std::size_t>(g)] = (den_ - turn(c, g)) % den_;
        return index_of(row);
    }

private:
    int index_of(const std::vector<int>& row) const {
        auto it = std::lower_bound(turn_.begin(), turn_.end(), row);
        if (it == turn_.end() || *it != row) throw Error("character lookup failed");
        return static_cast<int>(it - turn_.begin());
    }

    void enumerate(std::vector<int>& choice, std::size_t pos, std::vector<std::vector<int>>& out) const {
        if (pos == gens_.size()) {
            // turn(gen_i) = den/ord * choice_i; extend multiplicatively by BFS.
            const int n = group_->order();
            std::vector<int> row(static_cast<std::size_t>(n), -1);
            row[0] = 0;
            for (std::size_t i = 0; i < gens_.size(); ++i) {
                int o = group_->element_order(gens_[i]);
                int t = (den_ / o) * choice[i] % den_;
                std::vector<int> cur;
                for (int g = 0; g < n; ++g)
                    if (row[static_cast<std::size_t>(g)] >= 0) cur.push_back(g);
                for (int g : cur) {
                    int x = g, tx = row[static_cast<std::size_t>(g)];
                    for (int k = 1; k < o; ++k) {
                        x = group_->mul(x, gens_[i]);
                        tx = (tx + t) % den_;
                        if (row[static_cast<std::size_t>(x)] < 0) row[static_cast<std::size_t>(x)] = tx;
                        else if (row[static_cast<std::size_t>(x)] != tx) return; // inconsistent
                    }
                }
            }
            for (int v : row)
                if (v < 0) return;
            out.push_back(row);
            return;
        }
        int o = group_->element_order(gens_[pos]);
        for (int c = 0; c < o; ++c) {
            choice[pos] = c;
            enumerate(choice, pos + 1, out);
        }
    }

    const FiniteGroup* group_;
    int den_;
    std::vector<int> gens_;
    std::vector<std::vector<int>> turn_;
};

inline FiniteGroup dual_group(const FiniteGroup& a, const CharacterTable& chars) {
    const int n = a.order();
    std::vector<std::string> names;
    std::vector<std::vector<int>> table(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    // character 'trivial' must sit at index 0
    std::vector<int> perm(static_cast<std::size_t>(n));
    int triv = chars.trivial();
    perm[0] = triv;
    int next = 1;
    for (int c = 0; c < n; ++c)
        if (c != triv) perm[static_cast<std::size_t>(next++)] = c;
    std::vector<int> inv_perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) inv_perm[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i;
    for (int i = 0; i < n; ++i) {
        names.push_back("chi" + std::to_string(i));
        for (int j = 0; j < n; ++j)
            table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                inv_perm[static_cast<std::size_t>(chars.product(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]))];
    }
    return FiniteGroup(a.name() + "^", names, table);
}


// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

inline FiniteGroup cyclic_group(int n, const std::string& nm = "") {
    std::vector<std::string> elems;
    std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
        elems.push_back("g" + std::to_string(i));
        for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (i + j) % n;
    }
    return FiniteGroup(nm.empty() ? "Z" + std::to_string(n) : nm, elems, t);
}

inline FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b, const std::string& nm = "") {
    const int na = a.order(), nb = b.order();
    std::vector<std::string> elems;
    std::vector<std::vector<int>> t(static_cast<std::size_t>(na * nb),
                                    std::vector<int>(static_cast<std::size_t>(na * nb)));
    auto id = [nb](int x, int y) { return x * nb + y; };
    for (int x1 = 0; x1 < na; ++x1)
        for (int y1 = 0; y1 < nb; ++y1) {
            elems.push_back("(" + a.elem_name(x1) + "," + b.elem_name(y1) + ")");
            for (int x2 = 0; x2 < na; ++x2)
                for (int y2 = 0; y2 < nb; ++y2)
                    t[static_cast<std::size_t>(id(x1, y1))][static_cast<std::size_t>(id(x2, y2))] =
                        id(a.mul(x1, x2), b.mul(y1, y2));
        }
    return FiniteGroup(nm.empty() ? a.name() + "x" + b.name() : nm, elems, t);
}

inline FiniteGroup symmetric_group_3() {
    // Permutations of {0,1,2}, identity first.
    std::vector<std::array<int, 3>> perms = {
        {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
    auto compose = [](const std::array<int, 3>& p, const std::array<int, 3>& q) {
        return std::array<int, 3>{p[q[0]], p[q[1]], p[q[2]]};
    };
    std::vector<std::string> elems;
    std::vector<std::vector<int>> t(6, std::vector<int>(6));
    for (int i = 0; i < 6; ++i) {
        elems.push_back("p" + std::to_string(i));
        for (int j = 0; j < 6; ++j) {
            auto r = compose(perms[static_cast<std::size_t>(i)], perms[static_cast<std::size_t>(j)]);
            t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                static_cast<int>(std::find(perms.begin(), perms.end(), r) - perms.begin());
        }
    }
    return FiniteGroup("S3", elems, t);
}

inline FiniteGroup dihedral_group_4() {
    // r^4 = s^2 = e, s r s = r^{-1}; elements r^a s^b with (a,b) -> 2 indexing.
    auto id = [](int a, int b) { return a * 2 + b; };
    std::vector<std::string> elems;
    std::vector<std::vector<int>> t(8, std::vector<int>(8));
    for (int a1 = 0; a1 < 4; ++a1)
        for (int b1 = 0; b1 < 2; ++b1) {
            elems.push_back("r" + std::to_string(a1) + (b1 ? "s" : ""));
            for (int a2 = 0; a2 < 4; ++a2)
                for (int b2 = 0; b2 < 2; ++b2) {
                    // (r^{a1} s^{b1})(r^{a2} s^{b2}) = r^{a1 + (-1)^{b1} a2} s^{b1+b2}
                    int a = ((a1 + (b1 ? -a2 : a2)) % 4 + 4) % 4;
                    int b = (b1 + b2) % 2;
                    t[static_cast<std::size_t>(id(a1, b1))][static_cast<std::size_t>(id(a2, b2))] = id(a, b);
                }
        }
    return FiniteGroup("D4", elems, t);
}

inline FiniteGroup quaternion_group_8() {
    // {1,-1,i,-i,j,-j,k,-k}: sign s in {0,1}, basis u in {1,i,j,k}.
    // u*v table with result sign.
    static const int mul_base[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int mul_sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    // mul_sign[u][v]: extra -1 when (i*i=j*j=k*k=-1), (i*j=k, j*i=-k), ...
    auto id = [](int u, int s) { return u * 2 + s; };
    std::vector<std::string> names = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
    std::vector<std::vector<int>> t(8, std::vector<int>(8));
    for (int u = 0; u < 4; ++u)
        for (int su = 0; su < 2; ++su)
            for (int v = 0; v < 4; ++v)
                for (int sv = 0; sv < 2; ++sv) {
                    int w = mul_base[u][v];
                    int s = (su + sv + mul_sign[u][v]) % 2;
                    t[static_cast<std::size_t>(id(u, su))][static_cast<std::size_t>(id(v, sv))] = id(w, s);
                }
    return FiniteGroup("Q8", names, t);
}

inline FiniteGroup group_preset(const std::string& name) {
    if (name == "Z1") return cyclic_group(1);
    if (name == "Z2") return cyclic_group(2);
    if (name == "Z3") return cyclic_group(3);
    if (name == "Z4") return cyclic_group(4);
    if (name == "Z5") return cyclic_group(5);
    if (name == "Z2xZ2") return direct_product(cyclic_group(2), cyclic_group(2), "Z2xZ2");
    if (name == "Z3xZ3") return direct_product(cyclic_group(3), cyclic_group(3), "Z3xZ3");
    if (name == "Z2xZ2xZ2")
        return direct_product(direct_product(cyclic_group(2), cyclic_group(2)), cyclic_group(2), "Z2xZ2xZ2");
    if (name == "S3") return symmetric_group_3();
    if (name == "D4") return dihedral_group_4();
    if (name == "Q8") return quaternion_group_8();
    throw ConfigError("unknown group preset '" + name + "'");
}

} // namespace qgal
