#include <catch2/catch_amalgamated.hpp>

#include <solv/crystal.hpp>

#include <random>

using namespace solv;

namespace {

const Rat H = Rat(1, 2);
const Vec2Q kZero{Rat(0), Rat(0)};

const Relation& rel(const std::vector<Relation>& rels, const std::string& name) {
    for (const Relation& r : rels)
        if (r.name == name) return r;
    throw std::logic_error("missing relation " + name);
}

std::vector<Rat> menu_values(const std::vector<MenuEntry>& m) {
    std::vector<Rat> out;
    for (const MenuEntry& e : m) out.push_back(e.value);
    return out;
}

CrystGroupSpec make_spec(const HolonomySpec& h, const CocycleClass& cls, long long q,
                         const Vec2Q& m, const MenuEntry& a4, const MenuEntry& b4,
                         const Rat& c3) {
    CrystGroupSpec spec;
    spec.lattice = make_lattice_spec(h.S, q, m, c3);
    spec.holonomy = h;
    spec.cls = cls;
    spec.a4 = a4.value;
    spec.a4_index = a4.index;
    spec.b4 = b4.value;
    spec.b4_index = b4.index;
    return spec;
}

}  // namespace

TEST_CASE("rotation type on S=[[1,2],[2,5]], trivial class") {
    auto h = *compatible(TypeTag::T4, {1, 2, 2, 5});
    CocycleClass cls{kZero, std::nullopt};
    CHECK(minimal_q_for_class(h, cls, kZero, 1) == 1);
    CentralMenus menus = central_menus(h, cls, 1, kZero);
    CHECK(menu_values(menus.a4) == std::vector<Rat>{0, Rat(1, 4), H, Rat(3, 4)});
    CHECK(menu_values(menus.c3) == std::vector<Rat>{0, H});
    CHECK(menus.a4[1].index == 1);
    CHECK(menus.a4[3].index == 3);

    auto groups = enumerate_class(h, cls, 1, kZero);
    REQUIRE(groups.size() == 8);
    SECTION("presentation matches the displayed conjugation exponents") {
        auto rels = presentation(groups[0]);
        const Relation& r1 = rel(rels, "a t1 a^-1");
        CHECK((r1.rhs.n1 == 0 && r1.rhs.n2 == -1 && r1.rhs.n3 == 0 && r1.rhs.n4 == -2));
        const Relation& r2 = rel(rels, "a t2 a^-1");
        CHECK((r2.rhs.n1 == 1 && r2.rhs.n2 == 0 && r2.rhs.n3 == 0 && r2.rhs.n4 == 1));
        const Relation& r4 = rel(rels, "a t4 a^-1");
        CHECK(r4.rhs.n4 == 1);
        for (const CrystGroupSpec& g : groups) CHECK(verify_presentation(g).all_ok);
    }
    SECTION("torsion: a nonzero fourth power is necessary but not sufficient") {
        // a t2 a^-1 = t2 t4 has an odd central exponent here, so a translated
        // square of a^2 folds for every a4: all eight groups have torsion.
        for (const CrystGroupSpec& g : groups) {
            TorsionReport rep = is_torsion_free(g);
            CHECK_FALSE(rep.torsion_free);
            CHECK(rep.witness.has_value());
            CHECK_FALSE(quotient_is_torsion_free(g).torsion_free);
            CHECK_THROWS_AS(classify_sol3_group(g), HasTorsion);
        }
    }
}

TEST_CASE("rotation type on S=[[1,2],[2,5]], class (1/2,0) needs q=2") {
    auto h = *compatible(TypeTag::T4, {1, 2, 2, 5});
    CocycleClass cls{{H, Rat(0)}, std::nullopt};
    REQUIRE(is_cocycle(h, cls));
    CHECK(minimal_q_for_class(h, cls, kZero, 1) == 2);
    CHECK_THROWS_AS(enumerate_class(h, cls, 1, kZero), InflationRequired);
    try {
        enumerate_class(h, cls, 1, kZero);
    } catch (const InflationRequired& e) {
        CHECK(e.min_q == 2);
    }

    CentralMenus menus = central_menus(h, cls, 2, kZero);
    CHECK(menu_values(menus.a4) ==
          std::vector<Rat>{Rat(1, 16), Rat(3, 16), Rat(5, 16), Rat(7, 16)});
    CHECK(menu_values(menus.c3) == std::vector<Rat>{Rat(1, 8), Rat(3, 8)});
    // Fourth-power indices along the sorted menu.
    CHECK(menus.a4[0].index == 2);
    CHECK(menus.a4[1].index == 3);
    CHECK(menus.a4[2].index == 0);
    CHECK(menus.a4[3].index == 1);

    auto groups = enumerate_class(h, cls, 2, kZero);
    REQUIRE(groups.size() == 8);
    SECTION("displayed exponents at (1/2,0), m=(0,0)") {
        for (const CrystGroupSpec& g : groups) {
            auto rels = presentation(g);
            const Relation& r1 = rel(rels, "a t1 a^-1");
            CHECK((r1.rhs.n1 == 0 && r1.rhs.n2 == -1 && r1.rhs.n4 == Rat(-5, 2)));
            const Relation& r3 = rel(rels, "a t3 a^-1");
            CHECK((r3.rhs.n1 == -2 && r3.rhs.n2 == 1 && r3.rhs.n3 == -1));
            CHECK(r3.rhs.n4 == Rat(-5, 4) + 2 * g.lattice.c3);
            CHECK(verify_presentation(g).all_ok);
        }
    }
    SECTION("corrupting a4 by 1/(4q) breaks the fourth-power relation") {
        CrystGroupSpec bad = groups[0];
        bad.a4 += Rat(1, 4 * bad.lattice.q);
        VerifyReport rep = verify_presentation(bad);
        CHECK_FALSE(rep.all_ok);
        for (const auto& item : rep.items)
            if (item.name == "a^4") CHECK_FALSE(item.ok);
            else CHECK(item.ok);
    }
}

TEST_CASE("full enumeration over S=[[1,2],[2,5]] with auto-inflation") {
    Mat2Z S{1, 2, 2, 5};
    CHECK_THROWS_AS(enumerate_groups(S, TypeTag::T4, 1, kZero), InflationRequired);
    auto groups = enumerate_groups(S, TypeTag::T4, 1, kZero, /*auto_inflate=*/true);
    CHECK(groups.size() == 16);
    long long q1 = 0, q2 = 0;
    for (const CrystGroupSpec& g : groups) (g.lattice.q == 1 ? q1 : q2)++;
    CHECK(q1 == 8);
    CHECK(q2 == 8);
    CHECK_THROWS_AS(enumerate_groups(S, TypeTag::T3, 1, kZero), IncompatibleType);
}

TEST_CASE("type 6bi on S=[[17,12],[24,17]]") {
    Mat2Z S{17, 12, 24, 17};
    auto h = *compatible(TypeTag::T6bi, S);
    auto classes = h1_classes(h);
    REQUIRE(classes.size() == 4);
    // Only the trivial class closes at q=1; the half classes force a finer
    // center, so the 4 x 2 = 8 groups need per-class inflation.
    CHECK_THROWS_AS(enumerate_groups(S, TypeTag::T6bi, 1, kZero), InflationRequired);
    CHECK(minimal_q_for_class(h, classes[0], kZero, 1) == 1);
    auto groups = enumerate_groups(S, TypeTag::T6bi, 1, kZero, /*auto_inflate=*/true);
    REQUIRE(groups.size() == 8);

    SECTION("b4 menu and the beta-square relation") {
        CentralMenus menus = central_menus(h, classes[0], 1, kZero);
        CHECK(menu_values(menus.b4) == std::vector<Rat>{0, H});
        for (const CrystGroupSpec& g : groups) {
            auto rels = presentation(g);
            const Relation& b2 = rel(rels, "b^2");
            CHECK(b2.rhs.n3 == 1);
            CHECK(b2.rhs.n4 == 2 * g.b4);
            CHECK(verify_presentation(g).all_ok);
        }
    }
    SECTION("torsion: exactly the (1/2,0) class, independent of b4") {
        int tf = 0;
        for (const CrystGroupSpec& g : groups) {
            TorsionReport rep = is_torsion_free(g);
            bool expect = g.cls.a == Vec2Q{H, Rat(0)};
            CHECK(rep.torsion_free == expect);
            CHECK(quotient_is_torsion_free(g).torsion_free == expect);
            if (rep.torsion_free) ++tf;
        }
        CHECK(tf == 2);
    }
    SECTION("topology of the torsion-free projections") {
        for (const CrystGroupSpec& g : groups) {
            if (!quotient_is_torsion_free(g).torsion_free) continue;
            TopologyDescriptor t = topology(g);
            CHECK(t.kind == TopologyDescriptor::Kind::TwistedIBundleUnion);
            CHECK_FALSE(t.orientable);
            CHECK(t.invol1.matrix == kDiagFlip);
            CHECK(t.invol2.matrix == Mat2Z{17, -12, 24, -17});
            CHECK(t.invol1.translation == Vec2Q{H, Rat(0)});
        }
    }
}

TEST_CASE("type 7i on S=[[3,4],[2,3]]") {
    Mat2Z S{3, 4, 2, 3};
    auto h = *compatible(TypeTag::T7i, S);
    auto classes = h1_classes(h);
    REQUIRE(classes.size() == 4);
    CocycleClass half0{{H, Rat(0)}, std::nullopt};
    CHECK(minimal_q_for_class(h, half0, kZero, 1) == 4);

    auto groups = enumerate_groups(S, TypeTag::T7i, 4, kZero);
    REQUIRE(groups.size() == 16);
    SECTION("b4 menu is j/16 and (ba)^4 is a pure center") {
        CentralMenus menus = central_menus(h, half0, 4, kZero);
        CHECK(menu_values(menus.b4) ==
              std::vector<Rat>{0, Rat(1, 16), Rat(1, 8), Rat(3, 16)});
        for (const CrystGroupSpec& g : groups) {
            auto rels = presentation(g);
            const Relation& p4 = rel(rels, "(ba)^4");
            CHECK((p4.rhs.n1 == 0 && p4.rhs.n2 == 0 && p4.rhs.n3 == 0));
            CHECK(verify_presentation(g).all_ok);
        }
    }
    SECTION("displayed alpha and beta squares at (1/2,0), m=(0,0)") {
        for (const CrystGroupSpec& g : groups) {
            if (!(g.cls == half0 && g.b4 == 0)) continue;
            auto rels = presentation(g);
            const Relation& a2 = rel(rels, "a^2");
            CHECK((a2.rhs.n1 == 1 && a2.rhs.n2 == 0 && a2.rhs.n3 == 0));
            CHECK(a2.rhs.n4 == Rat(3, 2));
            const Relation& b2 = rel(rels, "b^2");
            CHECK((b2.rhs.n1 == 0 && b2.rhs.n2 == 0 && b2.rhs.n3 == 1 && b2.rhs.n4 == 0));
        }
    }
    SECTION("torsion free exactly at (1/2,0) with an even power index") {
        int tf = 0;
        for (const CrystGroupSpec& g : groups) {
            TorsionReport rep = is_torsion_free(g);
            // Only the (1/2,0) class can be torsion free; within it the
            // (ab)^2-type squares fold for the odd b4 menu entries.
            bool expect = g.cls == half0 && (g.b4 == 0 || g.b4 == Rat(1, 8));
            CHECK(rep.torsion_free == expect);
            CHECK_FALSE(quotient_is_torsion_free(g).torsion_free);
            if (rep.torsion_free) ++tf;
        }
        CHECK(tf == 2);
    }
}

TEST_CASE("central inversion type on S=[[2,1],[5,3]]") {
    Mat2Z S{2, 1, 5, 3};
    // At m=(0,0) the conjugation exponents land in (1/3)Z, so the order-3
    // cokernel forces a central inflation.
    try {
        enumerate_groups(S, TypeTag::T2a, 1, kZero);
        FAIL("expected InflationRequired");
    } catch (const InflationRequired& e) {
        CHECK(e.min_q == 3);
    }
    auto groups = enumerate_groups(S, TypeTag::T2a, 3, kZero);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].a4 == 0);
    CHECK(groups[1].a4 == Rat(1, 6));
    for (const CrystGroupSpec& g : groups) {
        CHECK(verify_presentation(g).all_ok);
        CHECK_FALSE(quotient_is_torsion_free(g).torsion_free);
        // With q odd the translated squares reach both central parities, so
        // both a4 choices leave torsion.
        CHECK_FALSE(is_torsion_free(g).torsion_free);
    }
}

TEST_CASE("single-group types and mapping tori") {
    SECTION("type 0: mapping torus of S") {
        auto groups = enumerate_groups({2, 1, 5, 3}, TypeTag::T0, 1, kZero);
        REQUIRE(groups.size() == 1);
        CHECK(is_torsion_free(groups[0]).torsion_free);
        Sol3Classification c = classify_sol3_group(groups[0]);
        CHECK(c.kind == Sol3Classification::Kind::CaseA);
        CHECK(c.monodromy == Mat2Z{2, 1, 5, 3});
        TopologyDescriptor t = topology(groups[0]);
        CHECK(t.kind == TopologyDescriptor::Kind::MappingTorus);
        CHECK(t.orientable);
    }
    SECTION("type 1 on S=[[1,2],[2,5]]: mapping torus of -K") {
        auto groups = enumerate_groups({1, 2, 2, 5}, TypeTag::T1, 1, kZero);
        REQUIRE(groups.size() == 1);
        CHECK(verify_presentation(groups[0]).all_ok);
        CHECK(is_torsion_free(groups[0]).torsion_free);
        CHECK(quotient_is_torsion_free(groups[0]).torsion_free);
        Sol3Classification c = classify_sol3_group(groups[0]);
        CHECK(c.kind == Sol3Classification::Kind::CaseA);
        CHECK(c.monodromy == Mat2Z{0, -1, -1, -2});
        // Diagonal holonomy: the orbifold stays orientable.
        CHECK(topology(groups[0]).orientable);
    }
}

TEST_CASE("presentations verify across a random sweep") {
    std::mt19937 rng(79);
    std::uniform_int_distribution<int> e(-5, 5);
    int tested = 0;
    while (tested < 12) {
        Mat2Z s{e(rng), e(rng), e(rng), e(rng)};
        if (!(s.det() == 1 && s.tr() > 2 && s.tr() <= 14)) continue;
        for (const HolonomySpec& h : compatible_types(s)) {
            auto classes = h1_classes(h);
            auto groups = enumerate_groups(s, h.tag, 1, kZero, /*auto_inflate=*/true);
            // Group count factors through classes times menu sizes.
            std::size_t expect = 0;
            for (const CocycleClass& cls : classes) {
                long long q = minimal_q_for_class(h, cls, kZero, 1);
                CentralMenus m = central_menus(h, cls, q, kZero);
                expect += m.a4.size() * m.b4.size() * m.c3.size();
            }
            CHECK(groups.size() == expect);
            for (const CrystGroupSpec& g : groups) {
                VerifyReport rep = verify_presentation(g);
                CHECK(rep.all_ok);
                if (!rep.all_ok)
                    for (const auto& item : rep.items)
                        if (!item.ok) UNSCOPED_INFO(item.name + ": " + item.note);
            }
        }
        ++tested;
    }
}
