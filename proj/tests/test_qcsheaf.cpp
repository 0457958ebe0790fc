#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qcs/error.hpp"
#include "qcs/qcsheaf.hpp"
#include "suite.hpp"

using namespace qcs;
using testsupport::identity_model;
using testsupport::mat;
using testsupport::model;

namespace {

// a(x, y) = x_0 * y_1 / 2 on the square of Z/2: a bilinear 2-cocycle whose
// class is the nontrivial alternating pairing. Valid as is only when the
// Frobenius preserves a entrywise (identity model).
QCSheafModel alternating_sheaf(const EtaleGroupModel& e) {
    SheafOps ops(e);
    size_t n = ops.size();
    QCSheafModel q{e, std::vector<QZ>(n * n), std::vector<QZ>(n)};
    for (size_t x = 0; x < n; ++x)
        for (size_t y = 0; y < n; ++y) {
            Int v = ops.idx.at(x)[0] * ops.idx.at(y)[1];
            q.a[x * n + y] = QZ(v, 2);
        }
    return q;
}

// The same multiplicative table over the coordinate-swap model, with the
// Frobenius table b(x) = x_0 * x_1 / 2 that repairs the compatibility law.
QCSheafModel swapped_pair_sheaf(const EtaleGroupModel& e) {
    QCSheafModel q = alternating_sheaf(e);
    SheafOps ops(e);
    for (size_t x = 0; x < ops.size(); ++x) {
        std::vector<Int> v = ops.idx.at(x);
        q.b[x] = QZ(v[0] * v[1], 2);
    }
    return q;
}

QCSheafModel additive_b_sheaf(const EtaleGroupModel& e, const Character& full) {
    SheafOps ops(e);
    size_t n = ops.size();
    QCSheafModel q{e, std::vector<QZ>(n * n), std::vector<QZ>(n)};
    for (size_t i = 0; i < n; ++i) q.b[i] = full.eval(ops.idx.at(i));
    return q;
}

bool has_kind(const SheafDiagnostics& d, const std::string& kind) {
    for (const auto& v : d.violations)
        if (v.kind == kind) return true;
    return false;
}

} // namespace

TEST_CASE("unit sheaf is valid with trivial trace") {
    EtaleGroupModel e = model({4}, {3});
    QCSheafModel u = unit_sheaf(e);
    CHECK(validate(u).ok());
    Character t = trace(u);
    for (const QZ& v : t.values) CHECK(v.is_zero());
}

TEST_CASE("validation catches each kind of table corruption") {
    EtaleGroupModel e = identity_model({4});
    SheafOps ops(e);
    QCSheafModel u = unit_sheaf(e);

    SUBCASE("clean table has no violations") { CHECK(validate(u, ops).ok()); }
    SUBCASE("a cocycle break is reported") {
        QCSheafModel bad = u;
        bad.a[1 * 4 + 2] = QZ(1, 4);
        SheafDiagnostics d = validate(bad, ops);
        CHECK_FALSE(d.ok());
        CHECK(has_kind(d, "cocycle"));
    }
    SUBCASE("a Frobenius table break is reported") {
        QCSheafModel bad = u;
        bad.b[1] = QZ(1, 4); // not additive, a eq stays symmetric
        SheafDiagnostics d = validate(bad, ops);
        CHECK(has_kind(d, "frobenius"));
    }
    SUBCASE("identity normalization is enforced") {
        QCSheafModel bad = u;
        bad.a[0 * 4 + 1] = QZ(1, 2);
        CHECK(has_kind(validate(bad, ops), "normalization"));
        QCSheafModel bad2 = u;
        bad2.b[0] = QZ(1, 2);
        CHECK(has_kind(validate(bad2, ops), "normalization"));
    }
    SUBCASE("wrong table sizes are a shape error") {
        QCSheafModel bad = u;
        bad.b.pop_back();
        SheafDiagnostics d = validate(bad, ops);
        CHECK(has_kind(d, "shape"));
    }
}

TEST_CASE("trace restricts the Frobenius table to the rational points") {
    EtaleGroupModel e = identity_model({4});
    Character full{e.points, {QZ(1, 4)}};
    QCSheafModel q = additive_b_sheaf(e, full);
    REQUIRE(validate(q).ok());
    FixedPoints fp = fixed_points(e);
    Character t = trace(q, fp);
    SheafOps ops(e);
    for (const auto& x : fp.group.elements()) {
        size_t i = ops.idx.index(e.points.reduce(fp.inclusion.apply(x)));
        CHECK(t.eval(x) == q.b[i]);
    }
    // the trace of a faithful additive table is itself faithful on Z/4
    bool faithful = false;
    for (const auto& x : fp.group.elements())
        if (t.eval(x).order() == 4) faithful = true;
    CHECK(faithful);
}

TEST_CASE("character to sheaf and back is the identity") {
    std::vector<EtaleGroupModel> bases = {
        model({4}, {3}), model({2, 2}, {0, 1, 1, 0}), identity_model({6}), model({5}, {2})};
    for (const EtaleGroupModel& e : bases) {
        FixedPoints fp = fixed_points(e);
        for (const Character& chi : all_characters(fp.group)) {
            QCSheafModel q = sheaf_from_character(e, chi);
            CHECK(validate(q).ok());
            Character t = trace(q);
            CHECK(t.values == chi.values);
        }
    }
    SUBCASE("wrong domain is rejected") {
        CHECK_THROWS_AS(sheaf_from_character(model({4}, {3}), Character{FgAbGroup{{4}}, {QZ(1, 4)}}),
                        domain_error);
    }
}

TEST_CASE("tensor and dual act on traces additively") {
    EtaleGroupModel e = model({2, 2}, {0, 1, 1, 0});
    FixedPoints fp = fixed_points(e);
    std::vector<Character> chars = all_characters(fp.group);
    REQUIRE(chars.size() == 2);
    QCSheafModel q1 = sheaf_from_character(e, chars[1]);
    QCSheafModel q2 = swapped_pair_sheaf(e);
    REQUIRE(validate(q2).ok());

    QCSheafModel t = tensor(q1, q2);
    CHECK(validate(t).ok());
    for (const auto& x : fp.group.elements())
        CHECK(trace(t).eval(x) == trace(q1).eval(x) + trace(q2).eval(x));

    QCSheafModel d = dual(q1);
    CHECK(validate(d).ok());
    for (const auto& x : fp.group.elements()) CHECK(trace(d).eval(x) == -trace(q1).eval(x));

    // tensoring with the dual cancels the tables outright
    QCSheafModel c = tensor(q1, dual(q1));
    CHECK(c.a == unit_sheaf(e).a);
    CHECK(c.b == unit_sheaf(e).b);
}

TEST_CASE("twisting by a coboundary preserves validity and class") {
    EtaleGroupModel e = model({2, 2}, {0, 1, 1, 0});
    QCSheafModel q = swapped_pair_sheaf(e);
    SheafOps ops(e);
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<QZ> delta(ops.size());
        for (size_t i = 1; i < delta.size(); ++i) delta[i] = QZ(Int(long(rng() % 8)), 8);
        QCSheafModel tw = twist(q, delta);
        CHECK(validate(tw).ok());
        IsoResult iso = is_isomorphic(q, tw);
        REQUIRE(iso.isomorphic());
        // the witness genuinely carries q onto the twist
        QCSheafModel back = twist(q, *iso.witness);
        CHECK(back.a == tw.a);
        CHECK(back.b == tw.b);
    }
    SUBCASE("a nonzero value at the identity is rejected") {
        std::vector<QZ> delta(ops.size());
        delta[0] = QZ(1, 2);
        CHECK_THROWS_AS(twist(q, delta), domain_error);
    }
}

TEST_CASE("isomorphism testing separates distinct classes") {
    EtaleGroupModel e = identity_model({2, 2});
    QCSheafModel q = alternating_sheaf(e);
    REQUIRE(validate(q).ok());
    IsoResult iso = is_isomorphic(q, unit_sheaf(e));
    CHECK_FALSE(iso.isomorphic());
    CHECK(iso.obstruction_row >= 0);

    SUBCASE("hom sets are coinvariant torsors or empty") {
        HomSetDescription none = hom_set(q, unit_sheaf(e));
        CHECK(none.empty);
        CHECK(none.torsor_size == 0);
        HomSetDescription self = hom_set(q, q);
        CHECK_FALSE(self.empty);
        CHECK(self.torsor_size == 4); // coinvariants of the identity on (Z/2)^2
        REQUIRE(self.witness.has_value());
    }
    SUBCASE("mismatched bases are rejected") {
        CHECK_THROWS_AS(is_isomorphic(q, unit_sheaf(model({4}, {3}))), domain_error);
    }
}

TEST_CASE("automorphisms are the characters of the coinvariants") {
    SUBCASE("fixed point free base has only the identity") {
        QCSheafModel q = unit_sheaf(model({5}, {2}));
        AutomorphismGroup a = automorphisms(q);
        CHECK(a.group.is_trivial());
        CHECK(a.deltas.size() == 1);
    }
    SUBCASE("identity Frobenius gives the full character group") {
        EtaleGroupModel e = identity_model({4});
        QCSheafModel q = unit_sheaf(e);
        AutomorphismGroup a = automorphisms(q);
        CHECK(a.group == FgAbGroup{{4}});
        REQUIRE(a.deltas.size() == 4);
        for (const auto& delta : a.deltas) {
            QCSheafModel tw = twist(q, delta);
            CHECK(tw.a == q.a);
            CHECK(tw.b == q.b);
        }
    }
    SUBCASE("automorphism twists fix an arbitrary sheaf tablewise") {
        EtaleGroupModel e = model({2, 2}, {0, 1, 1, 0});
        QCSheafModel q = swapped_pair_sheaf(e);
        REQUIRE(validate(q).ok());
        AutomorphismGroup a = automorphisms(q);
        CHECK(a.group.order() == coinvariants(e.module()).group.order());
        for (const auto& delta : a.deltas) {
            QCSheafModel tw = twist(q, delta);
            CHECK(tw.a == q.a);
            CHECK(tw.b == q.b);
        }
    }
}

TEST_CASE("pullback along equivariant maps") {
    EtaleGroupModel z4 = identity_model({4});
    EtaleGroupModel z2 = identity_model({2});
    Character full{z4.points, {QZ(1, 4)}};
    QCSheafModel q = additive_b_sheaf(z4, full);
    GroupHom f{z2.points, z4.points, mat(1, 1, {2})};
    REQUIRE(f.well_defined());

    QCSheafModel p = pullback(q, f, z2);
    CHECK(validate(p).ok());
    CHECK(p.b[1] == QZ(1, 2)); // b'(1) = b(2) = 2/4

    SUBCASE("trace commutes with pullback on rational points") {
        FixedPoints fs = fixed_points(z2);
        Character tp = trace(p);
        Character tq = trace(q);
        FixedPoints ft = fixed_points(z4);
        for (const auto& x : fs.group.elements()) {
            // push x into the target fixed points through f
            std::vector<Int> amb = z4.points.reduce(f.apply(fs.inclusion.apply(x)));
            // locate amb in the target fixed point group
            bool found = false;
            for (const auto& y : ft.group.elements())
                if (z4.points.reduce(ft.inclusion.apply(y)) == amb) {
                    CHECK(tp.eval(x) == tq.eval(y));
                    found = true;
                }
            CHECK(found);
        }
    }
    SUBCASE("non-equivariant maps are rejected") {
        EtaleGroupModel tw = model({4}, {3});
        GroupHom g{z2.points, tw.points, mat(1, 1, {2})};
        // g is equivariant here since 3*2 = 6 = 2 mod 4; build a genuinely bad one
        EtaleGroupModel z5 = model({5}, {2});
        EtaleGroupModel z5id = identity_model({5});
        GroupHom h{z5id.points, z5.points, mat(1, 1, {1})};
        CHECK_THROWS_AS(pullback(unit_sheaf(z5), h, z5id), domain_error);
        (void)g;
    }
}

TEST_CASE("external products restrict to their factors") {
    EtaleGroupModel e1 = model({4}, {3});
    FixedPoints fp1 = fixed_points(e1);
    QCSheafModel q1 = sheaf_from_character(e1, all_characters(fp1.group)[1]);
    EtaleGroupModel e2 = model({2, 2}, {0, 1, 1, 0});
    QCSheafModel q2 = swapped_pair_sheaf(e2);
    REQUIRE(validate(q2).ok());

    ExternalProduct ext = external_product(q1, q2);
    CHECK(validate(ext.sheaf).ok());
    CHECK(ext.prod.model.points.order() == 16);

    QCSheafModel r1 = pullback(ext.sheaf, ext.prod.embed1, e1);
    CHECK(r1.a == q1.a);
    CHECK(r1.b == q1.b);
    QCSheafModel r2 = pullback(ext.sheaf, ext.prod.embed2, e2);
    CHECK(r2.a == q2.a);
    CHECK(r2.b == q2.b);
}

TEST_CASE("norm functor sums the Frobenius table along orbits") {
    SUBCASE("identity base doubles the table") {
        EtaleGroupModel e = identity_model({4});
        Character full{e.points, {QZ(1, 4)}};
        QCSheafModel q = additive_b_sheaf(e, full);
        QCSheafModel nm = norm_functor(q, 2);
        CHECK(validate(nm).ok());
        CHECK(nm.base.same_model(e)); // identity Frobenius squared
        for (size_t i = 0; i < q.b.size(); ++i) CHECK(nm.b[i] == q.b[i] + q.b[i]);
    }
    SUBCASE("full orbit sum on a fixed point free base vanishes") {
        EtaleGroupModel e = model({5}, {2});
        Character full{e.points, {QZ(1, 5)}};
        QCSheafModel q = additive_b_sheaf(e, full);
        REQUIRE(validate(q).ok());
        QCSheafModel nm = norm_functor(q, 4); // 1 + 2 + 4 + 3 = 10 = 0 mod 5
        CHECK(validate(nm).ok());
        CHECK(nm.base.frob.equals(GroupHom::identity(e.points)));
        for (const QZ& v : nm.b) CHECK(v.is_zero());
    }
}

TEST_CASE("commutator pairing") {
    EtaleGroupModel e = identity_model({2, 2});
    QCSheafModel q = alternating_sheaf(e);
    SheafOps ops(e);
    size_t n = ops.size();
    std::vector<QZ> p = commutator_pairing(q);

    SUBCASE("alternating and bilinear") {
        bool nonzero = false;
        for (size_t x = 0; x < n; ++x)
            for (size_t y = 0; y < n; ++y) {
                CHECK(p[x * n + y] + p[y * n + x] == QZ());
                if (!p[x * n + y].is_zero()) nonzero = true;
                for (size_t z = 0; z < n; ++z)
                    CHECK(p[ops.add(x, y) * n + z] == p[x * n + z] + p[y * n + z]);
            }
        CHECK(nonzero);
    }
    SUBCASE("invariant under coboundary twists") {
        std::mt19937_64 rng(17);
        std::vector<QZ> delta(n);
        for (size_t i = 1; i < n; ++i) delta[i] = QZ(Int(long(rng() % 4)), 4);
        CHECK(commutator_pairing(twist(q, delta)) == p);
    }
}
