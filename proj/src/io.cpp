#include "opalg/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace opalg {

namespace {

cplx complex_from_json(const ojson& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw invalid_input(where + ": complex values must be [re, im] pairs");
    return {v[0].get<double>(), v[1].get<double>()};
}

ojson complex_to_json(const cplx& z) { return ojson::array({z.real(), z.imag()}); }

int required_arrow(const FiniteGroupoid& g, const std::string& id, const std::string& where) {
    const int a = g.arrow_index(id);
    if (a < 0) throw invalid_input(where + ": unknown arrow id '" + id + "'");
    return a;
}

std::pair<int, int> parse_pair_key(const FiniteGroupoid& g, const std::string& key,
                                   const std::string& where) {
    // arrow ids may contain '|' only if unambiguous; split at each '|' and
    // take the first split where both halves are arrow ids
    for (size_t p = key.find('|'); p != std::string::npos; p = key.find('|', p + 1)) {
        const int a = g.arrow_index(key.substr(0, p));
        const int b = g.arrow_index(key.substr(p + 1));
        if (a >= 0 && b >= 0) return {a, b};
    }
    throw invalid_input(where + ": key '" + key + "' is not a pair of arrow ids");
}

} // namespace

ojson groupoid_to_json(const FiniteGroupoid& g, const HaarSystem* haar) {
    ojson j;
    j["units"] = g.units;
    ojson arrows = ojson::array();
    for (const Arrow& a : g.arrows) {
        ojson ja;
        ja["id"] = a.id;
        ja["src"] = g.units[a.src];
        ja["rng"] = g.units[a.rng];
        arrows.push_back(std::move(ja));
    }
    j["arrows"] = std::move(arrows);
    ojson inv;
    for (int a = 0; a < g.num_arrows(); ++a) inv[g.arrows[a].id] = g.arrows[g.inv[a]].id;
    j["inv"] = std::move(inv);
    ojson comp = ojson::array();
    for (int a = 0; a < g.num_arrows(); ++a)
        for (int b = 0; b < g.num_arrows(); ++b)
            if (g.comp[a][b] >= 0)
                comp.push_back(ojson::array(
                    {g.arrows[a].id, g.arrows[b].id, g.arrows[g.comp[a][b]].id}));
    j["comp"] = std::move(comp);
    if (haar != nullptr) {
        ojson h;
        for (int a = 0; a < g.num_arrows(); ++a) h[g.arrows[a].id] = haar->weights[a];
        j["haar"] = std::move(h);
    }
    return j;
}

GroupoidInput groupoid_from_json(const ojson& j) {
    if (!j.is_object()) throw invalid_input("groupoid file: not a JSON object");
    if (!j.contains("units") || !j.contains("arrows") || !j.contains("inv") || !j.contains("comp"))
        throw invalid_input("groupoid file: units, arrows, inv and comp are required");
    FiniteGroupoid g;
    for (const ojson& u : j.at("units")) g.units.push_back(u.get<std::string>());
    for (const ojson& ja : j.at("arrows")) {
        if (!ja.contains("id") || !ja.contains("src") || !ja.contains("rng"))
            throw invalid_input("groupoid file: arrows need id, src and rng");
        Arrow a;
        a.id = ja.at("id").get<std::string>();
        a.src = g.unit_index(ja.at("src").get<std::string>());
        a.rng = g.unit_index(ja.at("rng").get<std::string>());
        if (a.src < 0 || a.rng < 0)
            throw invalid_input("groupoid file: arrow '" + a.id + "' references unknown unit");
        g.arrows.push_back(std::move(a));
    }
    const int m = g.num_arrows();
    g.inv.assign(m, -1);
    for (const auto& [key, val] : j.at("inv").items()) {
        const int a = required_arrow(g, key, "groupoid file inv");
        g.inv[a] = required_arrow(g, val.get<std::string>(), "groupoid file inv");
    }
    for (int a = 0; a < m; ++a)
        if (g.inv[a] < 0)
            throw invalid_input("groupoid file: inv missing for arrow '" + g.arrows[a].id + "'");
    g.comp.assign(m, std::vector<int>(m, -1));
    for (const ojson& triple : j.at("comp")) {
        if (!triple.is_array() || triple.size() != 3)
            throw invalid_input("groupoid file: comp entries must be [g, h, gh] triples");
        const int a = required_arrow(g, triple[0].get<std::string>(), "groupoid file comp");
        const int b = required_arrow(g, triple[1].get<std::string>(), "groupoid file comp");
        const int c = required_arrow(g, triple[2].get<std::string>(), "groupoid file comp");
        g.comp[a][b] = c;
    }
    // units as designated identity arrows: r(e)=s(e)=x and e*e=e
    g.unit_arrow.assign(g.num_units(), -1);
    for (int a = 0; a < m; ++a)
        if (g.arrows[a].src == g.arrows[a].rng && g.comp[a][a] == a) {
            if (g.unit_arrow[g.arrows[a].src] < 0) g.unit_arrow[g.arrows[a].src] = a;
        }
    for (int u = 0; u < g.num_units(); ++u)
        if (g.unit_arrow[u] < 0)
            throw invalid_input("groupoid file: unit '" + g.units[u] + "' has no identity arrow");
    g.finalize();

    GroupoidInput in;
    HaarSystem h = counting_haar(g);
    if (j.contains("haar")) {
        in.haar_explicit = true;
        for (const auto& [key, val] : j.at("haar").items()) {
            const int a = required_arrow(g, key, "groupoid file haar");
            if (!val.is_number()) throw invalid_input("groupoid file: haar weights must be numbers");
            h.weights[a] = val.get<double>();
        }
        for (double w : h.weights)
            if (!(w > 0.0)) throw invalid_input("groupoid file: haar weights must be positive");
    }
    in.g = share(std::move(g));
    in.haar = std::move(h);
    return in;
}

ojson function_to_json(const GroupoidFunction& f) {
    ojson j;
    ojson vals;
    for (int a = 0; a < f.g->num_arrows(); ++a)
        if (f.values[a] != 0.0) vals[f.g->arrows[a].id] = complex_to_json(f.values[a]);
    j["values"] = std::move(vals);
    return j;
}

GroupoidFunction function_from_json(const ojson& j, const GroupoidPtr& g) {
    if (!j.is_object() || !j.contains("values"))
        throw invalid_input("function file: object with a values map required");
    GroupoidFunction f(g);
    for (const auto& [key, val] : j.at("values").items()) {
        const int a = required_arrow(*g, key, "function file");
        f.values[a] = complex_from_json(val, "function file");
    }
    return f;
}

ojson cocycle_to_json(const TCocycle& s) {
    ojson j;
    j["N"] = s.n_roots;
    ojson vals;
    const FiniteGroupoid& g = *s.g;
    for (size_t p = 0; p < s.pairs.size(); ++p)
        if (s.vals[p] != 0)
            vals[g.arrows[s.pairs[p].first].id + "|" + g.arrows[s.pairs[p].second].id] = s.vals[p];
    j["vals"] = std::move(vals);
    return j;
}

TCocycle cocycle_from_json(const ojson& j, const GroupoidPtr& g) {
    if (!j.is_object() || !j.contains("N"))
        throw invalid_input("cocycle file: object with N required");
    const int n = j.at("N").get<int>();
    std::vector<std::pair<std::pair<int, int>, int>> entries;
    if (j.contains("vals"))
        for (const auto& [key, val] : j.at("vals").items()) {
            const auto pr = parse_pair_key(*g, key, "cocycle file");
            if (!g->composable(pr.first, pr.second))
                throw invalid_input("cocycle file: pair '" + key + "' is not composable");
            if (!val.is_number_integer())
                throw invalid_input("cocycle file: values must be integers");
            entries.push_back({pr, val.get<int>()});
        }
    return make_cocycle(g, n, entries);
}

ojson bundle_to_json(const FellBundle& b) {
    const FiniteGroupoid& g = *b.g;
    ojson j;
    ojson dims;
    for (int a = 0; a < g.num_arrows(); ++a) dims[g.arrows[a].id] = b.dims[a];
    j["dims"] = std::move(dims);
    ojson mult;
    for (size_t p = 0; p < b.pairs.size(); ++p) {
        const Tensor3& t = b.mult[p];
        ojson to = ojson::array();
        for (int o = 0; o < t.d_out; ++o) {
            ojson ti = ojson::array();
            for (int i = 0; i < t.d_left; ++i) {
                ojson tj = ojson::array();
                for (int k = 0; k < t.d_right; ++k) tj.push_back(complex_to_json(t.at(o, i, k)));
                ti.push_back(std::move(tj));
            }
            to.push_back(std::move(ti));
        }
        mult[g.arrows[b.pairs[p].first].id + "|" + g.arrows[b.pairs[p].second].id] = std::move(to);
    }
    j["mult"] = std::move(mult);
    ojson invol;
    for (int a = 0; a < g.num_arrows(); ++a) {
        ojson rows = ojson::array();
        for (int r = 0; r < b.invol[a].rows; ++r) {
            ojson cols = ojson::array();
            for (int c = 0; c < b.invol[a].cols; ++c)
                cols.push_back(complex_to_json(b.invol[a](r, c)));
            rows.push_back(std::move(cols));
        }
        invol[g.arrows[a].id] = std::move(rows);
    }
    j["invol"] = std::move(invol);
    return j;
}

FellBundle bundle_from_json(const ojson& j, const GroupoidPtr& g) {
    if (!j.is_object() || !j.contains("dims") || !j.contains("mult") || !j.contains("invol"))
        throw invalid_input("bundle file: dims, mult and invol are required");
    std::vector<int> dims(g->num_arrows(), -1);
    for (const auto& [key, val] : j.at("dims").items()) {
        const int a = required_arrow(*g, key, "bundle file dims");
        if (!val.is_number_integer() || val.get<int>() < 1)
            throw invalid_input("bundle file: dims must be positive integers");
        dims[a] = val.get<int>();
    }
    for (int a = 0; a < g->num_arrows(); ++a)
        if (dims[a] < 0)
            throw invalid_input("bundle file: missing dimension for arrow '" + g->arrows[a].id + "'");
    FellBundle b = bundle_skeleton(g, dims);
    std::vector<bool> got(b.pairs.size(), false);
    for (const auto& [key, val] : j.at("mult").items()) {
        const auto pr = parse_pair_key(*g, key, "bundle file mult");
        const int p = b.pair_pos[pr.first][pr.second];
        if (p < 0) throw invalid_input("bundle file: pair '" + key + "' is not composable");
        Tensor3& t = b.mult[p];
        if (!val.is_array() || static_cast<int>(val.size()) != t.d_out)
            throw invalid_input("bundle file: tensor at '" + key + "' has wrong outer size");
        for (int o = 0; o < t.d_out; ++o) {
            if (!val[o].is_array() || static_cast<int>(val[o].size()) != t.d_left)
                throw invalid_input("bundle file: tensor at '" + key + "' has wrong left size");
            for (int i = 0; i < t.d_left; ++i) {
                if (!val[o][i].is_array() || static_cast<int>(val[o][i].size()) != t.d_right)
                    throw invalid_input("bundle file: tensor at '" + key + "' has wrong right size");
                for (int k = 0; k < t.d_right; ++k)
                    t.at(o, i, k) = complex_from_json(val[o][i][k], "bundle file mult");
            }
        }
        got[p] = true;
    }
    for (size_t p = 0; p < b.pairs.size(); ++p)
        if (!got[p])
            throw invalid_input("bundle file: missing multiplication tensor for pair (" +
                                g->arrows[b.pairs[p].first].id + ", " +
                                g->arrows[b.pairs[p].second].id + ")");
    std::vector<bool> got_inv(g->num_arrows(), false);
    for (const auto& [key, val] : j.at("invol").items()) {
        const int a = required_arrow(*g, key, "bundle file invol");
        CMatrix& m = b.invol[a];
        if (!val.is_array() || static_cast<int>(val.size()) != m.rows)
            throw invalid_input("bundle file: involution at '" + key + "' has wrong row count");
        for (int r = 0; r < m.rows; ++r) {
            if (!val[r].is_array() || static_cast<int>(val[r].size()) != m.cols)
                throw invalid_input("bundle file: involution at '" + key + "' has wrong column count");
            for (int c = 0; c < m.cols; ++c)
                m(r, c) = complex_from_json(val[r][c], "bundle file invol");
        }
        got_inv[a] = true;
    }
    for (int a = 0; a < g->num_arrows(); ++a)
        if (!got_inv[a])
            throw invalid_input("bundle file: missing involution for arrow '" + g->arrows[a].id + "'");
    b.finalize();
    return b;
}

ojson section_to_json(const Section& s) {
    const FiniteGroupoid& g = *s.bundle->g;
    ojson j;
    ojson vals;
    for (int a = 0; a < g.num_arrows(); ++a) {
        ojson v = ojson::array();
        for (const cplx& z : s.values[a]) v.push_back(complex_to_json(z));
        vals[g.arrows[a].id] = std::move(v);
    }
    j["values"] = std::move(vals);
    return j;
}

Section section_from_json(const ojson& j, const FellBundlePtr& b) {
    if (!j.is_object() || !j.contains("values"))
        throw invalid_input("section file: object with a values map required");
    Section s(b);
    for (const auto& [key, val] : j.at("values").items()) {
        const int a = required_arrow(*b->g, key, "section file");
        if (!val.is_array() || static_cast<int>(val.size()) != b->dims[a])
            throw invalid_input("section file: value at '" + key + "' has wrong length");
        for (int i = 0; i < b->dims[a]; ++i)
            s.values[a][i] = complex_from_json(val[i], "section file");
    }
    return s;
}

ojson load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open file '" + path + "'");
    ojson j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw invalid_input("file '" + path + "' is not valid JSON: " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const ojson& j) {
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot write file '" + path + "'");
    out << j.dump(2) << "\n";
}

GroupoidInput resolve_groupoid_ref(const ojson& j, const std::string& base_dir) {
    if (!j.contains("groupoid"))
        throw invalid_input("file does not carry a groupoid reference");
    const ojson& ref = j.at("groupoid");
    if (ref.is_object()) return groupoid_from_json(ref);
    if (ref.is_string()) {
        std::filesystem::path p(ref.get<std::string>());
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        return groupoid_from_json(load_json_file(p.string()));
    }
    throw invalid_input("groupoid reference must be a path or an inline object");
}

std::string content_digest(const ojson& j) {
    const std::string s = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    for (int i = 15; i >= 0; --i) os << ((h >> (i * 4)) & 0xF);
    return os.str();
}

} // namespace opalg
