#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "opalg/verify.hpp"

using namespace opalg;

namespace {

// exit codes: 0 pass, 1 suite failure, 2 invalid input, 3 internal inconsistency
constexpr int kExitPass = 0;
constexpr int kExitSuiteFail = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitInconsistent = 3;

struct GlobalOpts {
    NumericPolicy policy;
    bool quiet = false;
    std::string out;

    // --tol-exact rescales the bundle identity tolerance with it
    NumericPolicy effective() const {
        NumericPolicy p = policy;
        if (p.exact_tol != NumericPolicy{}.exact_tol) p.exact_tol_bundle = 10.0 * p.exact_tol;
        return p;
    }
};

void emit(const GlobalOpts& opts, const ojson& j) {
    if (!opts.out.empty())
        write_json_file(opts.out, j);
    else if (!opts.quiet)
        std::cout << j.dump(2) << "\n";
}

std::string base_dir(const std::string& path) {
    return std::filesystem::path(path).parent_path().string();
}

GroupoidInput load_groupoid_arg(const std::string& path) {
    return groupoid_from_json(load_json_file(path));
}

// cocycle from its file; the groupoid comes from --groupoid when given, else
// from the file's own "groupoid" reference
std::pair<TCocycle, GroupoidInput> load_cocycle_arg(const std::string& path,
                                                    const std::string& groupoid_path) {
    const ojson j = load_json_file(path);
    GroupoidInput gi = groupoid_path.empty() ? resolve_groupoid_ref(j, base_dir(path))
                                             : load_groupoid_arg(groupoid_path);
    return {cocycle_from_json(j, gi.g), gi};
}

std::pair<FellBundlePtr, GroupoidInput> load_bundle_arg(const std::string& path,
                                                        const std::string& groupoid_path) {
    const ojson j = load_json_file(path);
    GroupoidInput gi = groupoid_path.empty() ? resolve_groupoid_ref(j, base_dir(path))
                                             : load_groupoid_arg(groupoid_path);
    return {share(bundle_from_json(j, gi.g)), gi};
}

ojson validation_to_json(const ValidationReport& rep) {
    ojson out = ojson::array();
    for (const Violation& v : rep) {
        ojson jv;
        jv["law"] = v.law;
        jv["witness"] = v.witness;
        out.push_back(std::move(jv));
    }
    return out;
}

ojson with_groupoid(const GroupoidInput& gi, ojson payload) {
    ojson out;
    out["groupoid"] = groupoid_to_json(*gi.g, &gi.haar);
    for (auto& [k, v] : payload.items()) out[k] = v;
    return out;
}

int report_exit(const GlobalOpts& opts, const Report& rep) {
    emit(opts, report_to_json(rep));
    if (!opts.quiet && opts.out.empty()) {
        // JSON already on stdout
    } else if (!opts.quiet) {
        for (const Check& c : rep.checks)
            std::cout << (c.pass ? "pass " : "FAIL ") << c.name << " (deviation " << c.deviation
                      << ")\n";
        std::cout << (rep.overall ? "overall: pass" : "overall: FAIL") << "\n";
    }
    return rep.overall ? kExitPass : kExitSuiteFail;
}

std::vector<std::vector<int>> table_from_json(const ojson& j, const std::vector<std::string>& ids,
                                              const std::string& what) {
    std::vector<std::vector<int>> table;
    auto index_of = [&](const std::string& s) {
        for (size_t i = 0; i < ids.size(); ++i)
            if (ids[i] == s) return static_cast<int>(i);
        throw invalid_input(what + ": unknown element '" + s + "'");
    };
    for (const ojson& row : j) {
        std::vector<int> r;
        for (const ojson& cell : row) r.push_back(index_of(cell.get<std::string>()));
        table.push_back(std::move(r));
    }
    return table;
}

int run(int argc, char** argv) {
    CLI::App app{"finite groupoid and Fell bundle algebra toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOpts opts;
    app.add_option("--tol-exact", opts.policy.exact_tol, "absolute tolerance for exact identities");
    app.add_option("--tol-norm", opts.policy.norm_tol, "relative tolerance for norm equalities");
    app.add_option("--seed", opts.policy.seed, "master seed for sampled checks");
    app.add_option("--samples", opts.policy.samples, "random samples per check");
    app.add_flag("--quiet", opts.quiet, "suppress stdout output");

    int exit_code = kExitPass;

    // ---- groupoid ----
    auto* gcmd = app.add_subcommand("groupoid", "build and validate groupoids");
    gcmd->require_subcommand(1);
    {
        auto* v = gcmd->add_subcommand("validate", "check the groupoid axioms");
        auto file = std::make_shared<std::string>();
        v->add_option("file", *file)->required();
        v->callback([&, file] {
            const GroupoidInput gi = load_groupoid_arg(*file);
            ValidationReport rep = validate_groupoid(*gi.g);
            const ValidationReport hr = validate_haar(*gi.g, gi.haar);
            rep.insert(rep.end(), hr.begin(), hr.end());
            emit(opts, validation_to_json(rep));
            if (!rep.empty()) {
                std::cerr << "groupoid axioms violated (" << rep.size() << " findings)\n";
                exit_code = kExitInvalid;
            }
        });

        auto* b = gcmd->add_subcommand("build", "construct a groupoid");
        b->require_subcommand(1);
        auto n = std::make_shared<int>(1);
        auto* bp = b->add_subcommand("pair", "pair groupoid on n units");
        bp->add_option("--n", *n)->required();
        bp->callback([&, n] {
            const FiniteGroupoid g = pair_groupoid(*n);
            const HaarSystem h = counting_haar(g);
            emit(opts, groupoid_to_json(g, &h));
        });
        auto nc = std::make_shared<int>(1);
        auto* bc = b->add_subcommand("cyclic", "cyclic group of order n");
        bc->add_option("--n", *nc)->required();
        bc->callback([&, nc] {
            const FiniteGroupoid g = cyclic_group(*nc);
            const HaarSystem h = counting_haar(g);
            emit(opts, groupoid_to_json(g, &h));
        });
        auto table_file = std::make_shared<std::string>();
        auto* bg = b->add_subcommand("group", "one-unit groupoid from a Cayley table");
        bg->add_option("--table", *table_file)->required();
        bg->callback([&, table_file] {
            const ojson j = load_json_file(*table_file);
            if (!j.contains("elements") || !j.contains("table"))
                throw invalid_input("group table file: elements and table required");
            std::vector<std::string> els;
            for (const ojson& e : j.at("elements")) els.push_back(e.get<std::string>());
            const FiniteGroupoid g =
                group_groupoid(els, table_from_json(j.at("table"), els, "group table file"));
            const HaarSystem h = counting_haar(g);
            emit(opts, groupoid_to_json(g, &h));
        });
        auto group_file = std::make_shared<std::string>();
        auto set_file = std::make_shared<std::string>();
        auto act_file = std::make_shared<std::string>();
        auto* ba = b->add_subcommand("action", "transformation groupoid of a group action");
        ba->add_option("--group", *group_file)->required();
        ba->add_option("--set", *set_file)->required();
        ba->add_option("--act", *act_file)->required();
        ba->callback([&, group_file, set_file, act_file] {
            const GroupoidInput gi = load_groupoid_arg(*group_file);
            const ojson sj = load_json_file(*set_file);
            if (!sj.contains("points")) throw invalid_input("set file: points required");
            std::vector<std::string> points;
            for (const ojson& p : sj.at("points")) points.push_back(p.get<std::string>());
            const ojson aj = load_json_file(*act_file);
            if (!aj.contains("action")) throw invalid_input("act file: action map required");
            auto pidx = [&](const std::string& s) {
                for (size_t i = 0; i < points.size(); ++i)
                    if (points[i] == s) return static_cast<int>(i);
                throw invalid_input("act file: unknown point '" + s + "'");
            };
            std::vector<std::vector<int>> act(gi.g->num_arrows(),
                                              std::vector<int>(points.size(), -1));
            for (int a = 0; a < gi.g->num_arrows(); ++a)
                for (size_t x = 0; x < points.size(); ++x) act[a][x] = static_cast<int>(x);
            for (const auto& [arrow_id, mapping] : aj.at("action").items()) {
                const int a = gi.g->arrow_index(arrow_id);
                if (a < 0) throw invalid_input("act file: unknown group element '" + arrow_id + "'");
                for (const auto& [from, to] : mapping.items())
                    act[a][pidx(from)] = pidx(to.get<std::string>());
            }
            const FiniteGroupoid g = action_groupoid(*gi.g, points, act);
            const HaarSystem h = counting_haar(g);
            emit(opts, groupoid_to_json(g, &h));
        });

        auto pa = std::make_shared<std::string>();
        auto pb = std::make_shared<std::string>();
        auto* pr = gcmd->add_subcommand("product", "product groupoid");
        pr->add_option("a", *pa)->required();
        pr->add_option("b", *pb)->required();
        pr->callback([&, pa, pb] {
            const GroupoidInput ga = load_groupoid_arg(*pa);
            const GroupoidInput gb = load_groupoid_arg(*pb);
            const FiniteGroupoid g = product_groupoid(*ga.g, *gb.g);
            const HaarSystem h = product_haar(*ga.g, ga.haar, *gb.g, gb.haar);
            emit(opts, groupoid_to_json(g, &h));
        });
        auto of = std::make_shared<std::string>();
        auto* op = gcmd->add_subcommand("opposite", "opposite groupoid with transported weights");
        op->add_option("file", *of)->required();
        op->callback([&, of] {
            const GroupoidInput gi = load_groupoid_arg(*of);
            const FiniteGroupoid g = opposite_groupoid(*gi.g);
            const HaarSystem h = opposite_haar(*gi.g, gi.haar);
            emit(opts, groupoid_to_json(g, &h));
        });
    }

    // ---- haar ----
    auto* hcmd = app.add_subcommand("haar", "attach and validate Haar systems");
    hcmd->require_subcommand(1);
    {
        auto f1 = std::make_shared<std::string>();
        auto* hc = hcmd->add_subcommand("counting", "all weights 1");
        hc->add_option("groupoid", *f1)->required();
        hc->callback([&, f1] {
            const GroupoidInput gi = load_groupoid_arg(*f1);
            const HaarSystem h = counting_haar(*gi.g);
            emit(opts, groupoid_to_json(*gi.g, &h));
        });
        auto f2 = std::make_shared<std::string>();
        auto uf = std::make_shared<std::string>();
        auto* hu = hcmd->add_subcommand("unit-weights", "weights from a map unit -> weight");
        hu->add_option("groupoid", *f2)->required();
        hu->add_option("--u", *uf)->required();
        hu->callback([&, f2, uf] {
            const GroupoidInput gi = load_groupoid_arg(*f2);
            const ojson j = load_json_file(*uf);
            std::vector<double> u(gi.g->num_units(), -1.0);
            for (const auto& [unit, w] : j.items()) {
                const int x = gi.g->unit_index(unit);
                if (x < 0) throw invalid_input("unit weight file: unknown unit '" + unit + "'");
                u[x] = w.get<double>();
            }
            for (double w : u)
                if (w < 0.0) throw invalid_input("unit weight file: one weight per unit required");
            const HaarSystem h = unit_weight_haar(*gi.g, u);
            emit(opts, groupoid_to_json(*gi.g, &h));
        });
        auto f3 = std::make_shared<std::string>();
        auto* hv = hcmd->add_subcommand("validate", "check left invariance");
        hv->add_option("groupoid", *f3)->required();
        hv->callback([&, f3] {
            const GroupoidInput gi = load_groupoid_arg(*f3);
            const ValidationReport rep = validate_haar(*gi.g, gi.haar);
            emit(opts, validation_to_json(rep));
            if (!rep.empty()) {
                std::cerr << "haar system not left invariant (" << rep.size() << " findings)\n";
                exit_code = kExitInvalid;
            }
        });
    }

    // ---- algebra ----
    auto* acmd = app.add_subcommand("algebra", "norms, representations, structure");
    acmd->require_subcommand(1);
    {
        auto gf = std::make_shared<std::string>();
        auto ff = std::make_shared<std::string>();
        auto* an = acmd->add_subcommand("norms", "I-norm, reduced norm and universal norm");
        an->add_option("--groupoid", *gf)->required();
        an->add_option("--function", *ff)->required();
        an->callback([&, gf, ff] {
            const GroupoidInput gi = load_groupoid_arg(*gf);
            const GroupoidFunction f = function_from_json(load_json_file(*ff), gi.g);
            ojson j;
            j["i_norm"] = i_norm(f, gi.haar);
            j["reduced_norm"] = reduced_norm(f, gi.haar);
            const TaggedNorm full = full_norm(f, gi.haar);
            j["full_norm"] = full.value;
            j["full_norm_note"] = full.note;
            emit(opts, j);
        });

        auto gf2 = std::make_shared<std::string>();
        auto ff2 = std::make_shared<std::string>();
        auto unit = std::make_shared<std::string>();
        auto* ar = acmd->add_subcommand("rep", "regular representation matrix at a unit");
        ar->add_option("--groupoid", *gf2)->required();
        ar->add_option("--function", *ff2)->required();
        ar->add_option("--unit", *unit)->required();
        ar->callback([&, gf2, ff2, unit] {
            const GroupoidInput gi = load_groupoid_arg(*gf2);
            const GroupoidFunction f = function_from_json(load_json_file(*ff2), gi.g);
            const int x = gi.g->unit_index(*unit);
            if (x < 0) throw invalid_input("unknown unit '" + *unit + "'");
            const CMatrix m = regular_rep(f, gi.haar, x);
            ojson j;
            j["unit"] = *unit;
            ojson basis = ojson::array();
            for (int a : gi.g->source_fiber[x]) basis.push_back(gi.g->arrows[a].id);
            j["basis"] = std::move(basis);
            ojson rows = ojson::array();
            for (int r = 0; r < m.rows; ++r) {
                ojson row = ojson::array();
                for (int c = 0; c < m.cols; ++c)
                    row.push_back(ojson::array({m(r, c).real(), m(r, c).imag()}));
                rows.push_back(std::move(row));
            }
            j["matrix"] = std::move(rows);
            emit(opts, j);
        });

        auto gf3 = std::make_shared<std::string>();
        auto cf3 = std::make_shared<std::string>();
        auto bf3 = std::make_shared<std::string>();
        auto* aw = acmd->add_subcommand("wedderburn", "block dimensions of the algebra");
        aw->add_option("--groupoid", *gf3)->required();
        aw->add_option("--cocycle", *cf3);
        aw->add_option("--bundle", *bf3);
        aw->callback([&, gf3, cf3, bf3] {
            const GroupoidInput gi = load_groupoid_arg(*gf3);
            std::vector<int> blocks;
            if (!bf3->empty()) {
                const auto [bundle, gi2] = load_bundle_arg(*bf3, *gf3);
                blocks = block_dims(algebra_model_bundle(bundle, gi2.haar, opts.effective()), opts.effective());
            } else if (!cf3->empty()) {
                const TCocycle s = cocycle_from_json(load_json_file(*cf3), gi.g);
                if (!validate_cocycle(s).empty())
                    throw invalid_input("cocycle does not satisfy the cocycle identity");
                blocks = block_dims(algebra_model_bundle(share(line_bundle(s)), gi.haar, opts.effective()),
                                    opts.effective());
            } else {
                blocks = block_dims(algebra_model(gi.g, gi.haar, opts.effective()), opts.effective());
            }
            ojson j;
            j["blocks"] = blocks;
            emit(opts, j);
        });
    }

    // ---- cocycle ----
    auto* ccmd = app.add_subcommand("cocycle", "2-cocycle operations");
    ccmd->require_subcommand(1);
    {
        auto cg = std::make_shared<std::string>();
        ccmd->add_option("--groupoid", *cg, "groupoid file overriding in-file references");

        auto vf = std::make_shared<std::string>();
        auto* cv = ccmd->add_subcommand("validate", "normalization and cocycle identity");
        cv->add_option("file", *vf)->required();
        cv->callback([&, vf, cg] {
            const auto [s, gi] = load_cocycle_arg(*vf, *cg);
            const ValidationReport rep = validate_cocycle(s);
            emit(opts, validation_to_json(rep));
            if (!rep.empty()) {
                std::cerr << "cocycle invalid (" << rep.size() << " findings)\n";
                exit_code = kExitInvalid;
            }
        });
        auto cf = std::make_shared<std::string>();
        auto* cc = ccmd->add_subcommand("conjugate", "negate all values mod N");
        cc->add_option("file", *cf)->required();
        cc->callback([&, cf, cg] {
            const auto [s, gi] = load_cocycle_arg(*cf, *cg);
            emit(opts, with_groupoid(gi, cocycle_to_json(conjugate_cocycle(s))));
        });
        auto of = std::make_shared<std::string>();
        auto* co = ccmd->add_subcommand("oo", "opposite cocycle sigma(h^-1, g^-1)");
        co->add_option("file", *of)->required();
        co->callback([&, of, cg] {
            const auto [s, gi] = load_cocycle_arg(*of, *cg);
            emit(opts, with_groupoid(gi, cocycle_to_json(oo_cocycle(s))));
        });
        auto f1 = std::make_shared<std::string>();
        auto f2 = std::make_shared<std::string>();
        auto* ch = ccmd->add_subcommand("cohomologous", "decide sigma1 ~ sigma2 and give a witness");
        ch->add_option("first", *f1)->required();
        ch->add_option("second", *f2)->required();
        ch->callback([&, f1, f2, cg] {
            const auto [s1, gi] = load_cocycle_arg(*f1, *cg);
            const TCocycle s2 = cocycle_from_json(load_json_file(*f2), gi.g);
            const CohomologyResult res = cohomologous(s1, s2);
            ojson j;
            j["cohomologous"] = res.cohomologous;
            if (res.cohomologous) {
                ojson w;
                for (int a = 0; a < gi.g->num_arrows(); ++a)
                    if (res.witness[a] != 0) w[gi.g->arrows[a].id] = res.witness[a];
                j["witness"] = std::move(w);
            }
            emit(opts, j);
            if (!res.cohomologous) exit_code = kExitSuiteFail;
        });
    }

    // ---- bundle ----
    auto* bcmd = app.add_subcommand("bundle", "Fell bundle operations");
    bcmd->require_subcommand(1);
    {
        auto bg = std::make_shared<std::string>();
        bcmd->add_option("--groupoid", *bg, "groupoid file overriding in-file references");

        auto vf = std::make_shared<std::string>();
        auto* bv = bcmd->add_subcommand("validate", "Fell bundle axioms");
        bv->add_option("file", *vf)->required();
        bv->callback([&, vf, bg] {
            const auto [bundle, gi] = load_bundle_arg(*vf, *bg);
            const BundleValidation rep = validate_bundle(*bundle, opts.effective());
            ojson j = ojson::array();
            for (const AxiomCheck& ax : rep.axioms) {
                ojson ja;
                ja["axiom"] = ax.axiom;
                ja["deviation"] = ax.deviation;
                ja["threshold"] = ax.threshold;
                ja["pass"] = ax.pass;
                if (!ax.witness.empty()) ja["witness"] = ax.witness;
                j.push_back(std::move(ja));
            }
            emit(opts, j);
            if (!rep.ok()) {
                std::cerr << "bundle axioms violated: " << rep.first_failure() << "\n";
                exit_code = kExitInvalid;
            }
        });

        auto* bb = bcmd->add_subcommand("build", "construct a bundle");
        bb->require_subcommand(1);
        auto lc = std::make_shared<std::string>();
        auto* bl = bb->add_subcommand("line", "line bundle of a cocycle");
        bl->add_option("--cocycle", *lc)->required();
        bl->callback([&, lc, bg] {
            const auto [s, gi] = load_cocycle_arg(*lc, *bg);
            emit(opts, with_groupoid(gi, bundle_to_json(line_bundle(s))));
        });
        auto agf = std::make_shared<std::string>();
        auto aff = std::make_shared<std::string>();
        auto aaf = std::make_shared<std::string>();
        auto* bact = bb->add_subcommand("action", "bundle of a group action on a C*-algebra");
        bact->add_option("--group", *agf)->required();
        bact->add_option("--fiber", *aff)->required();
        bact->add_option("--alpha", *aaf)->required();
        bact->callback([&, agf, aff, aaf] {
            const GroupoidInput gi = load_groupoid_arg(*agf);
            const ojson fj = load_json_file(*aff);
            if (!fj.contains("dim") || !fj.contains("mult") || !fj.contains("invol"))
                throw invalid_input("fiber file: dim, mult and invol required");
            UnitFiberAlgebra fiber;
            fiber.dim = fj.at("dim").get<int>();
            if (fiber.dim < 1) throw invalid_input("fiber file: dim must be positive");
            fiber.mult = Tensor3(fiber.dim, fiber.dim, fiber.dim);
            const ojson& mj = fj.at("mult");
            for (int o = 0; o < fiber.dim; ++o)
                for (int i = 0; i < fiber.dim; ++i)
                    for (int k = 0; k < fiber.dim; ++k) {
                        const ojson& cell = mj.at(o).at(i).at(k);
                        fiber.mult.at(o, i, k) = {cell.at(0).get<double>(),
                                                  cell.at(1).get<double>()};
                    }
            fiber.invol = CMatrix(fiber.dim, fiber.dim);
            const ojson& ij = fj.at("invol");
            for (int r = 0; r < fiber.dim; ++r)
                for (int c = 0; c < fiber.dim; ++c)
                    fiber.invol(r, c) = {ij.at(r).at(c).at(0).get<double>(),
                                         ij.at(r).at(c).at(1).get<double>()};
            const ojson aj = load_json_file(*aaf);
            if (!aj.contains("maps")) throw invalid_input("alpha file: maps required");
            std::vector<CMatrix> alpha(gi.g->num_arrows());
            for (int a = 0; a < gi.g->num_arrows(); ++a) {
                const std::string& id = gi.g->arrows[a].id;
                if (!aj.at("maps").contains(id))
                    throw invalid_input("alpha file: missing map for element '" + id + "'");
                const ojson& mjj = aj.at("maps").at(id);
                alpha[a] = CMatrix(fiber.dim, fiber.dim);
                for (int r = 0; r < fiber.dim; ++r)
                    for (int c = 0; c < fiber.dim; ++c)
                        alpha[a](r, c) = {mjj.at(r).at(c).at(0).get<double>(),
                                          mjj.at(r).at(c).at(1).get<double>()};
            }
            const FellBundle bundle = action_bundle(gi.g, fiber, alpha, opts.effective());
            emit(opts, with_groupoid(gi, bundle_to_json(bundle)));
        });

        auto oof = std::make_shared<std::string>();
        auto* boo = bcmd->add_subcommand("oo", "opposite bundle over the same groupoid");
        boo->add_option("file", *oof)->required();
        boo->callback([&, oof, bg] {
            const auto [bundle, gi] = load_bundle_arg(*oof, *bg);
            emit(opts, with_groupoid(gi, bundle_to_json(oo_bundle(*bundle))));
        });
        auto cjf = std::make_shared<std::string>();
        auto* bcj = bcmd->add_subcommand("conjugate", "conjugate bundle");
        bcj->add_option("file", *cjf)->required();
        bcj->callback([&, cjf, bg] {
            const auto [bundle, gi] = load_bundle_arg(*cjf, *bg);
            emit(opts, with_groupoid(gi, bundle_to_json(conjugate_bundle(*bundle))));
        });
        auto opf = std::make_shared<std::string>();
        auto* bop = bcmd->add_subcommand("opposite", "opposite bundle over the opposite groupoid");
        bop->add_option("file", *opf)->required();
        bop->callback([&, opf, bg] {
            const auto [bundle, gi] = load_bundle_arg(*opf, *bg);
            const FellBundle ob = opposite_bundle_over_op(*bundle);
            GroupoidInput ogi;
            ogi.g = ob.g;
            ogi.haar = opposite_haar(*gi.g, gi.haar);
            emit(opts, with_groupoid(ogi, bundle_to_json(ob)));
        });
    }

    // ---- verify ----
    auto* vcmd = app.add_subcommand("verify", "run a certification suite");
    vcmd->require_subcommand(1);
    {
        auto gf = std::make_shared<std::string>();
        auto bf = std::make_shared<std::string>();
        auto cf = std::make_shared<std::string>();
        auto n = std::make_shared<int>(2);
        for (const std::string name : {"t21", "t3", "twist", "stab"}) {
            auto* sc = vcmd->add_subcommand(name, "certification suite " + name);
            sc->add_option("--groupoid", *gf)->required();
            if (name == "t3") sc->add_option("--bundle", *bf);
            if (name == "t3" || name == "twist" || name == "stab")
                sc->add_option("--cocycle", *cf);
            if (name == "stab") sc->add_option("--n", *n);
            sc->callback([&, gf, bf, cf, n, name] {
                const GroupoidInput gi = load_groupoid_arg(*gf);
                Report rep;
                if (name == "t21") {
                    rep = suite_opposite_algebra(gi.g, gi.haar, opts.effective());
                } else if (name == "t3") {
                    FellBundlePtr bundle;
                    if (!bf->empty()) {
                        bundle = load_bundle_arg(*bf, *gf).first;
                    } else if (!cf->empty()) {
                        const TCocycle s = cocycle_from_json(load_json_file(*cf), gi.g);
                        if (!validate_cocycle(s).empty())
                            throw invalid_input("cocycle does not satisfy the cocycle identity");
                        bundle = share(line_bundle(s));
                    } else {
                        throw invalid_input("verify t3 needs --bundle or --cocycle");
                    }
                    rep = suite_opposite_bundle(bundle, gi.haar, opts.effective());
                } else if (name == "twist") {
                    if (cf->empty()) throw invalid_input("verify twist needs --cocycle");
                    const TCocycle s = cocycle_from_json(load_json_file(*cf), gi.g);
                    rep = suite_twist(s, gi.haar, opts.effective());
                } else {
                    if (!cf->empty()) {
                        const TCocycle s = cocycle_from_json(load_json_file(*cf), gi.g);
                        rep = suite_stabilization(gi.g, gi.haar, *n, &s, opts.effective());
                    } else {
                        rep = suite_stabilization(gi.g, gi.haar, *n, nullptr, opts.effective());
                    }
                }
                exit_code = report_exit(opts, rep);
            });
        }
    }

    // --out lives on every subcommand that emits
    app.add_option("--out", opts.out, "write the JSON output to this file");

    CLI11_PARSE(app, argc, argv);
    return exit_code;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const inconsistency& e) {
        std::cerr << "inconsistency: " << e.what() << "\n";
        return kExitInconsistent;
    } catch (const invalid_input& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const nlohmann::json::exception& e) { // wrong field types count as bad input
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInconsistent;
    }
}
