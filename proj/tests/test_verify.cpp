#include <doctest.h>

#include "opalg/verify.hpp"
#include "support.hpp"

using namespace opalg;
using namespace opalg::testsupport;

namespace {

const Check* find_check(const Report& r, const std::string& name) {
    for (const Check& c : r.checks)
        if (c.name == name) return &c;
    return nullptr;
}

} // namespace

TEST_CASE("opposite-algebra suite passes on standard inputs") {
    NumericPolicy pol;
    pol.samples = 10;
    {
        const GroupoidPtr g = share(pair_groupoid(3));
        const Report r = suite_opposite_algebra(g, counting_haar(*g), pol);
        CHECK(r.overall);
        for (const Check& c : r.checks) CHECK(c.pass);
        CHECK(find_check(r, "op-reverses-products")->deviation <= 1e-12);
        CHECK(find_check(r, "op-preserves-involution")->deviation <= 1e-12);
        CHECK(find_check(r, "op-i-norm-isometry")->deviation == 0.0);
    }
    {
        Rng rng(70);
        const GroupoidPtr g = share(cyclic_group(4));
        const Report r = suite_opposite_algebra(g, random_unit_haar(*g, rng), pol);
        CHECK(r.overall);
    }
    {
        Rng rng(71);
        const GroupoidPtr g = share(swap_action_groupoid());
        const Report r = suite_opposite_algebra(g, random_unit_haar(*g, rng), pol);
        CHECK(r.overall);
    }
}

TEST_CASE("opposite-algebra suite fails with a witness under comp corruption") {
    NumericPolicy pol;
    pol.samples = 3;
    FiniteGroupoid g = pair_groupoid(3);
    g.comp[g.arrow_index("(1,2)")][g.arrow_index("(2,3)")] = g.arrow_index("(2,1)");
    const GroupoidPtr gp = share(std::move(g));
    const Report r = suite_opposite_algebra(gp, counting_haar(*gp), pol);
    CHECK(!r.overall);
    const Check* ax = find_check(r, "groupoid-axioms");
    REQUIRE(ax != nullptr);
    CHECK(!ax->pass);
    CHECK(!ax->witness.empty());
}

TEST_CASE("opposite-bundle suite passes on the standard bundles") {
    NumericPolicy pol;
    pol.samples = 8;
    Rng rng(4);
    const GroupoidPtr k4 = share(klein_four_group());
    {
        const Report r =
            suite_opposite_bundle(share(line_bundle(pauli_cocycle(k4))), counting_haar(*k4), pol);
        CHECK(r.overall);
        CHECK(find_check(r, "oo-conj-fiber-isomorphism")->deviation <= 1e-12);
    }
    {
        const GroupoidPtr z2 = share(cyclic_group(2));
        const Report r = suite_opposite_bundle(share(swap_bundle(z2)), counting_haar(*z2), pol);
        CHECK(r.overall);
    }
    {
        const GroupoidPtr r2 = share(pair_groupoid(2));
        const Report r = suite_opposite_bundle(share(random_matrix_bundle(r2, {1, 2}, rng)),
                                               random_unit_haar(*r2, rng), pol);
        CHECK(r.overall);
    }
}

TEST_CASE("trivial line bundle suite mirrors the scalar suite") {
    NumericPolicy pol;
    pol.samples = 6;
    const GroupoidPtr g = share(pair_groupoid(2));
    const HaarSystem h = counting_haar(*g);
    const Report rb = suite_opposite_bundle(share(line_bundle(trivial_cocycle(g, 1))), h, pol);
    const Report ra = suite_opposite_algebra(g, h, pol);
    CHECK(rb.overall);
    CHECK(ra.overall);
    CHECK(std::abs(find_check(rb, "oo-reverses-products")->deviation -
                   find_check(ra, "op-reverses-products")->deviation) <= 1e-12);
}

TEST_CASE("opposite-bundle suite fails with a witness under tensor corruption") {
    NumericPolicy pol;
    pol.samples = 3;
    const GroupoidPtr k4 = share(klein_four_group());
    FellBundle lb = line_bundle(pauli_cocycle(k4));
    lb.mult[lb.pair_pos[1][2]].at(0, 0, 0) += 0.5;
    const Report r = suite_opposite_bundle(share(std::move(lb)), counting_haar(*k4), pol);
    CHECK(!r.overall);
    bool witnessed = false;
    for (const Check& c : r.checks)
        if (!c.pass && !c.witness.empty()) witnessed = true;
    CHECK(witnessed);
}

TEST_CASE("twist suite") {
    NumericPolicy pol;
    pol.samples = 6;
    const GroupoidPtr k4 = share(klein_four_group());
    {
        const Report r = suite_twist(pauli_cocycle(k4), counting_haar(*k4), pol);
        CHECK(r.overall);
        const Check* blocks = find_check(r, "twisted-block-dims-conjugation-invariant");
        REQUIRE(blocks != nullptr);
        CHECK(blocks->witness.find("2") != std::string::npos);
    }
    {
        const Report r = suite_twist(trivial_cocycle(k4, 2), counting_haar(*k4), pol);
        CHECK(r.overall);
    }
    {
        Rng rng(12);
        const GroupoidPtr z4 = share(cyclic_group(4));
        TCocycle cb = random_coboundary(z4, 4, rng);
        while (std::all_of(cb.vals.begin(), cb.vals.end(), [](int v) { return v == 0; }))
            cb = random_coboundary(z4, 4, rng);
        const Report r = suite_twist(cb, counting_haar(*z4), pol);
        CHECK(r.overall);
        const Check* coh = find_check(r, "oo-cocycle-cohomologous-conjugate");
        REQUIRE(coh != nullptr);
        CHECK(coh->pass);
    }
    // corrupted cocycle: suite fails with a witness instead of throwing
    {
        TCocycle broken = pauli_cocycle(k4);
        broken.vals[broken.pair_pos[1][2]] ^= 1;
        const Report r = suite_twist(broken, counting_haar(*k4), pol);
        CHECK(!r.overall);
        const Check* c = find_check(r, "cocycle-identity");
        REQUIRE(c != nullptr);
        CHECK(!c->pass);
        CHECK(!c->witness.empty());
    }
}

TEST_CASE("stabilization suite") {
    NumericPolicy pol;
    pol.samples = 4;
    {
        const GroupoidPtr g = share(cyclic_group(3));
        const Report r = suite_stabilization(g, counting_haar(*g), 2, nullptr, pol);
        CHECK(r.overall);
    }
    {
        const GroupoidPtr k4 = share(klein_four_group());
        const TCocycle pauli = pauli_cocycle(k4);
        const Report r = suite_stabilization(k4, counting_haar(*k4), 2, &pauli, pol);
        CHECK(r.overall);
    }
    // fault injection: corrupted comp entry fails instead of throwing
    {
        FiniteGroupoid g = cyclic_group(3);
        g.comp[1][1] = 1;
        const GroupoidPtr gp = share(std::move(g));
        const Report r = suite_stabilization(gp, counting_haar(*gp), 2, nullptr, pol);
        CHECK(!r.overall);
        const Check* ax = find_check(r, "input-axioms");
        REQUIRE(ax != nullptr);
        CHECK(!ax->witness.empty());
    }
}

TEST_CASE("reports are reproducible and carry anchors") {
    NumericPolicy pol;
    pol.samples = 5;
    pol.seed = 99;
    const GroupoidPtr g = share(pair_groupoid(2));
    const Report r1 = suite_opposite_algebra(g, counting_haar(*g), pol);
    const Report r2 = suite_opposite_algebra(g, counting_haar(*g), pol);
    CHECK(report_to_json(r1).dump() == report_to_json(r2).dump());
    CHECK(!r1.checks.empty());
    for (const Check& c : r1.checks) CHECK(!c.statement.empty());
    for (const auto& [key, digest] : r1.input_digests) CHECK(digest.size() == 16);
    CHECK(!r1.notes.empty());
}
