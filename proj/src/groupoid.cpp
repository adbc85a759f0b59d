#include "opalg/groupoid.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace opalg {

namespace {

std::string arrow_tuple(const FiniteGroupoid& g, std::initializer_list<int> ids) {
    std::ostringstream os;
    os << "(";
    bool first = true;
    for (int a : ids) {
        if (!first) os << ", ";
        os << g.arrows[a].id;
        first = false;
    }
    os << ")";
    return os.str();
}

} // namespace

int FiniteGroupoid::arrow_index(const std::string& id) const {
    for (int i = 0; i < num_arrows(); ++i)
        if (arrows[i].id == id) return i;
    return -1;
}

int FiniteGroupoid::unit_index(const std::string& id) const {
    for (int i = 0; i < num_units(); ++i)
        if (units[i] == id) return i;
    return -1;
}

void FiniteGroupoid::finalize() {
    const int m = num_arrows();
    const int nu = num_units();
    if (nu == 0) throw invalid_input("groupoid: no units");
    if (m == 0) throw invalid_input("groupoid: no arrows");
    {
        std::set<std::string> seen;
        for (const Arrow& a : arrows)
            if (!seen.insert(a.id).second)
                throw invalid_input("groupoid: duplicate arrow id '" + a.id + "'");
        std::set<std::string> u(units.begin(), units.end());
        if (static_cast<int>(u.size()) != nu) throw invalid_input("groupoid: duplicate unit id");
    }
    for (const Arrow& a : arrows)
        if (a.src < 0 || a.src >= nu || a.rng < 0 || a.rng >= nu)
            throw invalid_input("groupoid: arrow '" + a.id + "' has unknown src/rng");
    if (static_cast<int>(inv.size()) != m) throw invalid_input("groupoid: inv map not total");
    for (int v : inv)
        if (v < 0 || v >= m) throw invalid_input("groupoid: inv target out of range");
    if (static_cast<int>(unit_arrow.size()) != nu)
        throw invalid_input("groupoid: unit_arrow map not total");
    for (int v : unit_arrow)
        if (v < 0 || v >= m) throw invalid_input("groupoid: unit_arrow target out of range");
    if (static_cast<int>(comp.size()) != m)
        throw invalid_input("groupoid: comp table has wrong shape");
    for (int g = 0; g < m; ++g) {
        if (static_cast<int>(comp[g].size()) != m)
            throw invalid_input("groupoid: comp table has wrong shape");
        for (int h = 0; h < m; ++h) {
            const bool defined = comp[g][h] >= 0;
            if (defined && comp[g][h] >= m)
                throw invalid_input("groupoid: comp target out of range");
            if (defined != composable(g, h))
                throw invalid_input("groupoid: comp defined on " +
                                    std::string(defined ? "a non-composable" : "no value for a composable") +
                                    " pair " + arrow_tuple(*this, {g, h}));
        }
    }
    range_fiber.assign(nu, {});
    source_fiber.assign(nu, {});
    for (int g = 0; g < m; ++g) {
        range_fiber[arrows[g].rng].push_back(g);
        source_fiber[arrows[g].src].push_back(g);
    }
}

ValidationReport validate_groupoid(const FiniteGroupoid& g) {
    ValidationReport rep;
    const int m = g.num_arrows();

    for (int u = 0; u < g.num_units(); ++u) {
        const int e = g.unit_arrow[u];
        if (g.arrows[e].src != u || g.arrows[e].rng != u)
            rep.push_back({"unit-arrow-endpoints", g.units[u] + " -> " + g.arrows[e].id, 1.0});
    }
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const int ab = g.comp[a][b];
            if (ab < 0) continue;
            if (g.arrows[ab].rng != g.arrows[a].rng || g.arrows[ab].src != g.arrows[b].src)
                rep.push_back({"composition-endpoints", arrow_tuple(g, {a, b, ab}), 1.0});
        }
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const int ab = g.comp[a][b];
            if (ab < 0) continue;
            for (int c = 0; c < m; ++c) {
                const int bc = g.comp[b][c];
                if (bc < 0) continue;
                const int left = g.comp[ab][c];
                const int right = g.comp[a][bc];
                if (left != right)
                    rep.push_back({"associativity", arrow_tuple(g, {a, b, c}), 1.0});
            }
        }
    for (int a = 0; a < m; ++a) {
        const int el = g.unit_arrow[g.arrows[a].rng];
        const int er = g.unit_arrow[g.arrows[a].src];
        if (g.comp[el][a] != a)
            rep.push_back({"left-unit-law", arrow_tuple(g, {a}), 1.0});
        if (g.comp[a][er] != a)
            rep.push_back({"right-unit-law", arrow_tuple(g, {a}), 1.0});
    }
    for (int a = 0; a < m; ++a) {
        const int ia = g.inv[a];
        if (g.arrows[ia].src != g.arrows[a].rng || g.arrows[ia].rng != g.arrows[a].src) {
            rep.push_back({"inverse-endpoints", arrow_tuple(g, {a, ia}), 1.0});
            continue;
        }
        if (g.comp[a][ia] != g.unit_arrow[g.arrows[a].rng])
            rep.push_back({"right-inverse-law", arrow_tuple(g, {a}), 1.0});
        if (g.comp[ia][a] != g.unit_arrow[g.arrows[a].src])
            rep.push_back({"left-inverse-law", arrow_tuple(g, {a}), 1.0});
        if (g.inv[ia] != a)
            rep.push_back({"inverse-involution", arrow_tuple(g, {a}), 1.0});
    }
    return rep;
}

FiniteGroupoid pair_groupoid(int n) {
    if (n < 1) throw invalid_input("pair_groupoid: n must be >= 1");
    FiniteGroupoid g;
    for (int i = 0; i < n; ++i) g.units.push_back(std::to_string(i + 1));
    auto idx = [n](int i, int j) { return i * n + j; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g.arrows.push_back({"(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")", j, i});
    const int m = n * n;
    g.inv.resize(m);
    g.comp.assign(m, std::vector<int>(m, -1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            g.inv[idx(i, j)] = idx(j, i);
            for (int k = 0; k < n; ++k) g.comp[idx(i, j)][idx(j, k)] = idx(i, k);
        }
    g.unit_arrow.resize(n);
    for (int i = 0; i < n; ++i) g.unit_arrow[i] = idx(i, i);
    g.finalize();
    return g;
}

FiniteGroupoid group_groupoid(const std::vector<std::string>& elements,
                              const std::vector<std::vector<int>>& table) {
    const int n = static_cast<int>(elements.size());
    if (n == 0) throw invalid_input("group_groupoid: empty element list");
    if (static_cast<int>(table.size()) != n)
        throw invalid_input("group_groupoid: table has wrong shape");
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != n)
            throw invalid_input("group_groupoid: table has wrong shape");
        for (int v : row)
            if (v < 0 || v >= n) throw invalid_input("group_groupoid: table entry out of range");
    }
    // identity
    int e = -1;
    for (int i = 0; i < n; ++i) {
        bool ok = true;
        for (int j = 0; j < n; ++j) ok = ok && table[i][j] == j && table[j][i] == j;
        if (ok) { e = i; break; }
    }
    if (e < 0) throw invalid_input("group_groupoid: table has no identity element");
    // associativity
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (table[table[a][b]][c] != table[a][table[b][c]])
                    throw invalid_input("group_groupoid: non-associative triple (" + elements[a] +
                                        ", " + elements[b] + ", " + elements[c] + ")");
    // inverses
    std::vector<int> invv(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            if (table[a][b] == e && table[b][a] == e) { invv[a] = b; break; }
        if (invv[a] < 0)
            throw invalid_input("group_groupoid: element '" + elements[a] + "' has no inverse");
    }

    FiniteGroupoid g;
    g.units = {"*"};
    for (int i = 0; i < n; ++i) g.arrows.push_back({elements[i], 0, 0});
    g.inv = invv;
    g.comp.assign(n, std::vector<int>(n, -1));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) g.comp[a][b] = table[a][b];
    g.unit_arrow = {e};
    g.finalize();
    return g;
}

FiniteGroupoid cyclic_group(int n) {
    if (n < 1) throw invalid_input("cyclic_group: n must be >= 1");
    std::vector<std::string> el;
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i) el.push_back("g" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) table[i][j] = (i + j) % n;
    return group_groupoid(el, table);
}

FiniteGroupoid klein_four_group() {
    // (Z/2)^2 with elements indexed by bit pairs
    std::vector<std::string> el = {"e", "a", "b", "ab"};
    std::vector<std::vector<int>> table(4, std::vector<int>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) table[i][j] = i ^ j;
    return group_groupoid(el, table);
}

FiniteGroupoid action_groupoid(const FiniteGroupoid& group,
                               const std::vector<std::string>& points,
                               const std::vector<std::vector<int>>& act) {
    if (group.num_units() != 1) throw invalid_input("action_groupoid: group must have one unit");
    const int n = group.num_arrows();
    const int np = static_cast<int>(points.size());
    if (np == 0) throw invalid_input("action_groupoid: empty point set");
    if (static_cast<int>(act.size()) != n)
        throw invalid_input("action_groupoid: act table has wrong shape");
    for (const auto& row : act) {
        if (static_cast<int>(row.size()) != np)
            throw invalid_input("action_groupoid: act table has wrong shape");
        for (int v : row)
            if (v < 0 || v >= np) throw invalid_input("action_groupoid: act target out of range");
    }
    const int e = group.unit_arrow[0];
    for (int x = 0; x < np; ++x)
        if (act[e][x] != x)
            throw invalid_input("action_groupoid: identity does not act trivially at point " + points[x]);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int x = 0; x < np; ++x)
                if (act[group.comp[a][b]][x] != act[a][act[b][x]])
                    throw invalid_input("action_groupoid: compatibility fails at (" +
                                        group.arrows[a].id + ", " + group.arrows[b].id + ", " +
                                        points[x] + ")");

    FiniteGroupoid g;
    g.units = points;
    auto idx = [np](int a, int x) { return a * np + x; };
    for (int a = 0; a < n; ++a)
        for (int x = 0; x < np; ++x)
            g.arrows.push_back({"(" + group.arrows[a].id + "," + points[x] + ")", x, act[a][x]});
    const int m = n * np;
    g.inv.resize(m);
    g.comp.assign(m, std::vector<int>(m, -1));
    for (int a = 0; a < n; ++a)
        for (int x = 0; x < np; ++x) {
            g.inv[idx(a, x)] = idx(group.inv[a], act[a][x]);
            // (a, act[b][x]) composed with (b, x) = (ab, x)
            for (int b = 0; b < n; ++b) g.comp[idx(a, act[b][x])][idx(b, x)] = idx(group.comp[a][b], x);
        }
    g.unit_arrow.resize(np);
    for (int x = 0; x < np; ++x) g.unit_arrow[x] = idx(e, x);
    g.finalize();
    return g;
}

FiniteGroupoid product_groupoid(const FiniteGroupoid& a, const FiniteGroupoid& b) {
    FiniteGroupoid g;
    const int ma = a.num_arrows(), mb = b.num_arrows();
    for (const auto& ua : a.units)
        for (const auto& ub : b.units) g.units.push_back(ua + "#" + ub);
    auto uidx = [&](int x, int y) { return x * b.num_units() + y; };
    auto idx = [mb](int x, int y) { return x * mb + y; };
    for (int x = 0; x < ma; ++x)
        for (int y = 0; y < mb; ++y)
            g.arrows.push_back({a.arrows[x].id + "#" + b.arrows[y].id,
                                uidx(a.arrows[x].src, b.arrows[y].src),
                                uidx(a.arrows[x].rng, b.arrows[y].rng)});
    const int m = ma * mb;
    g.inv.resize(m);
    g.comp.assign(m, std::vector<int>(m, -1));
    for (int x = 0; x < ma; ++x)
        for (int y = 0; y < mb; ++y) {
            g.inv[idx(x, y)] = idx(a.inv[x], b.inv[y]);
            for (int x2 = 0; x2 < ma; ++x2)
                for (int y2 = 0; y2 < mb; ++y2) {
                    const int cx = a.comp[x][x2], cy = b.comp[y][y2];
                    if (cx >= 0 && cy >= 0) g.comp[idx(x, y)][idx(x2, y2)] = idx(cx, cy);
                }
        }
    g.unit_arrow.resize(g.num_units());
    for (int x = 0; x < a.num_units(); ++x)
        for (int y = 0; y < b.num_units(); ++y)
            g.unit_arrow[uidx(x, y)] = idx(a.unit_arrow[x], b.unit_arrow[y]);
    g.finalize();
    return g;
}

FiniteGroupoid opposite_groupoid(const FiniteGroupoid& g) {
    FiniteGroupoid o;
    o.units = g.units;
    o.arrows = g.arrows;
    for (Arrow& a : o.arrows) std::swap(a.src, a.rng);
    o.inv = g.inv;
    o.unit_arrow = g.unit_arrow;
    const int m = g.num_arrows();
    o.comp.assign(m, std::vector<int>(m, -1));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (g.comp[b][a] >= 0) o.comp[a][b] = g.comp[b][a];
    o.finalize();
    return o;
}

ValidationReport validate_haar(const FiniteGroupoid& g, const HaarSystem& h) {
    ValidationReport rep;
    if (h.weights.size() != static_cast<size_t>(g.num_arrows()))
        throw invalid_input("haar: weight map not total");
    for (int a = 0; a < g.num_arrows(); ++a)
        if (!(h.weights[a] > 0.0) || !std::isfinite(h.weights[a]))
            throw invalid_input("haar: weight of arrow '" + g.arrows[a].id + "' not strictly positive");
    for (int a = 0; a < g.num_arrows(); ++a)
        for (int b = 0; b < g.num_arrows(); ++b) {
            const int ab = g.comp[a][b];
            if (ab < 0) continue;
            const double dev = std::abs(h.weights[ab] - h.weights[b]);
            if (dev > 0.0)
                rep.push_back({"left-invariance", arrow_tuple(g, {a, b}), dev});
        }
    return rep;
}

HaarSystem counting_haar(const FiniteGroupoid& g) {
    return HaarSystem{std::vector<double>(g.num_arrows(), 1.0)};
}

HaarSystem unit_weight_haar(const FiniteGroupoid& g, const std::vector<double>& unit_weights) {
    if (unit_weights.size() != static_cast<size_t>(g.num_units()))
        throw invalid_input("unit_weight_haar: one weight per unit required");
    for (double w : unit_weights)
        if (!(w > 0.0) || !std::isfinite(w))
            throw invalid_input("unit_weight_haar: weights must be strictly positive");
    HaarSystem h;
    h.weights.resize(g.num_arrows());
    for (int a = 0; a < g.num_arrows(); ++a) h.weights[a] = unit_weights[g.arrows[a].src];
    return h;
}

HaarSystem opposite_haar(const FiniteGroupoid& g, const HaarSystem& h) {
    HaarSystem o;
    o.weights.resize(g.num_arrows());
    for (int a = 0; a < g.num_arrows(); ++a) o.weights[a] = h.weights[g.inv[a]];
    return o;
}

HaarSystem product_haar(const FiniteGroupoid& a, const HaarSystem& ha,
                        const FiniteGroupoid& b, const HaarSystem& hb) {
    HaarSystem h;
    h.weights.resize(static_cast<size_t>(a.num_arrows()) * b.num_arrows());
    for (int x = 0; x < a.num_arrows(); ++x)
        for (int y = 0; y < b.num_arrows(); ++y)
            h.weights[static_cast<size_t>(x) * b.num_arrows() + y] = ha.weights[x] * hb.weights[y];
    return h;
}

} // namespace opalg
