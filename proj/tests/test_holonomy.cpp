#include <catch2/catch_amalgamated.hpp>

#include <solv/holonomy.hpp>

#include <random>

using namespace solv;

TEST_CASE("bar and hat characters") {
    CHECK(bar_hat(kDiagFlip) == std::pair{1, -1});
    CHECK(bar_hat(kRot4) == std::pair{-1, 1});
    CHECK(bar_hat(kIdentity) == std::pair{1, 1});
    CHECK(bar_hat(kOffSwap) == std::pair{-1, -1});
    for (const Mat2Z& m : {kIdentity, kMinusI, kDiagFlip, Mat2Z{-1, 0, 0, 1}, kOffSwap,
                           kRot4, Mat2Z{0, -1, 1, 0}, Mat2Z{0, -1, -1, 0}})
        CHECK(is_d4_element(m));
    CHECK_FALSE(is_d4_element(kR));
}

TEST_CASE("type name round trip") {
    for (TypeTag t : kAllTypes) {
        auto p = parse_type(type_name(t));
        REQUIRE(p.has_value());
        CHECK(*p == t);
    }
    CHECK_FALSE(parse_type("8").has_value());
}

TEST_CASE("compatibility golden cases") {
    const Mat2Z sA{1, 2, 2, 5}, sB{17, 12, 24, 17}, sC{3, 4, 2, 3};
    SECTION("type 4 on the symmetric matrix [[1,2],[2,5]]") {
        auto h = compatible(TypeTag::T4, sA);
        REQUIRE(h.has_value());
        CHECK(h->alpha->phi == kRot4);
        CHECK(h->alpha->bar == -1);
        CHECK(h->alpha->hat == 1);
    }
    SECTION("type 6bi on [[17,12],[24,17]]") {
        auto h = compatible(TypeTag::T6bi, sB);
        REQUIRE(h.has_value());
        REQUIRE(h->K_data.has_value());
        CHECK(h->K_data->n == 6);
        CHECK(h->K_data->K == Mat2Z{3, 2, 4, 3});
        CHECK(h->alpha->phi == kDiagFlip);
        CHECK(h->beta->phi == -h->K_data->K);
        CHECK(h->beta->a3 == Rat(1, 2));
    }
    SECTION("type 7i on [[3,4],[2,3]]") {
        auto h = compatible(TypeTag::T7i, sC);
        REQUIRE(h.has_value());
        CHECK(h->K_data->n == 2);
        CHECK(h->K_data->K == Mat2Z{1, 2, 1, 1});
        CHECK(h->alpha->phi == kDiagFlip);
        CHECK(h->beta->phi == Mat2Z{-1, -2, -1, -1});
        CHECK(h->beta->hat == -1);
    }
    SECTION("type 3 conditions") {
        CHECK_FALSE(compatible(TypeTag::T3, {2, 1, 5, 3}).has_value());
        auto h = compatible(TypeTag::T3, {-1, 3, -3, 8});
        REQUIRE(h.has_value());
        CHECK(h->alpha->phi == kOffSwap);
    }
    SECTION("type 1 and 2b square-root obstructions") {
        auto h1 = compatible(TypeTag::T1, sA);
        REQUIRE(h1.has_value());
        CHECK(h1->K_data->K == Mat2Z{0, 1, 1, 2});
        CHECK(h1->alpha->phi * h1->alpha->phi == sA);
        CHECK_FALSE(compatible(TypeTag::T2b, sA).has_value());
        CHECK_FALSE(compatible(TypeTag::T1, {2, 1, 5, 3}).has_value());
    }
    SECTION("type 0 accepts any admissible matrix") {
        CHECK(compatible(TypeTag::T0, {2, 1, 5, 3}).has_value());
        CHECK_THROWS_AS(compatible(TypeTag::T0, {1, 1, 0, 1}), NotAdmissible);
    }
    SECTION("type 6b boundary case k11 == 0 is flagged") {
        auto h = compatible(TypeTag::T6b, {-1, 3, -3, 8});
        REQUIRE(h.has_value());
        CHECK(h->K_data->K == Mat2Z{0, 1, -1, 3});
        CHECK(h->boundary_case);
    }
}

TEST_CASE("full type lists for the worked matrices") {
    auto tags = [](const Mat2Z& s) {
        std::vector<TypeTag> out;
        for (const auto& h : compatible_types(s)) out.push_back(h.tag);
        return out;
    };
    CHECK(tags({1, 2, 2, 5}) == std::vector<TypeTag>{TypeTag::T0, TypeTag::T1, TypeTag::T2a,
                                                     TypeTag::T4, TypeTag::T5});
    CHECK(tags({3, 4, 2, 3}) == std::vector<TypeTag>{TypeTag::T0, TypeTag::T1, TypeTag::T2a,
                                                     TypeTag::T3i, TypeTag::T5, TypeTag::T6ai,
                                                     TypeTag::T7i});
    CHECK(tags({2, 1, 5, 3}) == std::vector<TypeTag>{TypeTag::T0, TypeTag::T2a});
}

namespace {

std::vector<Mat2Z> random_admissible(int count, int max_tr, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> e(-9, 9);
    std::vector<Mat2Z> out;
    while (static_cast<int>(out.size()) < count) {
        Mat2Z s{e(rng), e(rng), e(rng), e(rng)};
        if (s.det() == 1 && s.tr() > 2 && s.tr() <= max_tr) out.push_back(s);
    }
    return out;
}

}  // namespace

TEST_CASE("homomorphism identity across a random sweep") {
    for (const Mat2Z& s : random_admissible(400, 30, 41)) {
        for (const auto& h : compatible_types(s)) {
            for (const auto& g : {h.alpha, h.beta}) {
                if (!g) continue;
                CHECK(g->phi * s * g->phi.inverse() == s.pow(g->bar));
                CHECK(g->hat == g->phi.det());
                if (g->a3 == Rat(1, 2)) CHECK(g->phi * g->phi == s);
            }
            if (h.K_data) {
                Mat2Z mk = -h.K_data->K;
                CHECK(mk * mk == s);
            }
        }
    }
}

TEST_CASE("type 7 and 7i inclusions") {
    // 7i-compatible always implies 6ai-compatible. 7-compatible implies
    // 6a-compatible except on the trace-3 boundary family S = K + I with
    // k11 = -1, where sigma_11 = 0 just misses the strict sigma_11 < 0.
    int seen7 = 0, seen7i = 0;
    for (const Mat2Z& s : random_admissible(3000, 40, 43)) {
        if (compatible(TypeTag::T7i, s)) {
            CHECK(compatible(TypeTag::T6ai, s).has_value());
            ++seen7i;
        }
        if (compatible(TypeTag::T7, s)) {
            if (s.tr() > 3) CHECK(compatible(TypeTag::T6a, s).has_value());
            ++seen7;
        }
    }
    CHECK(seen7 > 0);
    CHECK(seen7i > 0);
    // The boundary family itself.
    Mat2Z s{0, 1, -1, 3};
    REQUIRE(compatible(TypeTag::T7, s).has_value());
    CHECK_FALSE(compatible(TypeTag::T6a, s).has_value());
}

TEST_CASE("subgroup catalogue and liftability barrier") {
    auto subs = list_subgroups();
    REQUIRE(subs.size() == 8);
    int non_liftable = 0, rows = 0;
    for (const auto& sub : subs)
        for (const auto& row : sub.rows) {
            ++rows;
            if (!row.liftable) {
                ++non_liftable;
                CHECK(row.types.empty());
            }
        }
    CHECK(rows == 13);
    CHECK(non_liftable == 3);
    // <-I> carries exactly the 2a and 2b rows.
    const auto& minus = subs[2];
    REQUIRE(minus.rows.size() == 2);
    CHECK(minus.rows[0].types == std::vector<TypeTag>{TypeTag::T2a});
    CHECK(minus.rows[1].types == std::vector<TypeTag>{TypeTag::T2b});
    // D4 realizes only the (0, 1/2) row.
    const auto& d4 = subs[7];
    CHECK_FALSE(d4.rows[0].liftable);
    CHECK(d4.rows[1].types == std::vector<TypeTag>{TypeTag::T7, TypeTag::T7i});

    // tr^2 - 4 lies strictly between (tr-1)^2 and tr^2 for tr > 2, so the
    // zero-offset reflection never lifts.
    for (long long t = 3; t <= 50; ++t) CHECK_FALSE(reflection_liftable(t));
}

TEST_CASE("orientability from the D4 parts") {
    CHECK(compatible(TypeTag::T0, {2, 1, 5, 3})->orientable());
    CHECK(compatible(TypeTag::T1, {1, 2, 2, 5})->orientable());
    CHECK(compatible(TypeTag::T2a, {2, 1, 5, 3})->orientable());
    CHECK(compatible(TypeTag::T5, {1, 2, 2, 5})->orientable());
    CHECK_FALSE(compatible(TypeTag::T4, {1, 2, 2, 5})->orientable());
    CHECK_FALSE(compatible(TypeTag::T3i, {3, 4, 2, 3})->orientable());
    CHECK_FALSE(compatible(TypeTag::T7i, {3, 4, 2, 3})->orientable());
    CHECK_FALSE(compatible(TypeTag::T6bi, {17, 12, 24, 17})->orientable());
}
