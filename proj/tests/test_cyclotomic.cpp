#include <catch2/catch_amalgamated.hpp>

#include "unramlab/cyclotomic.hpp"

using namespace unram;

namespace {

// deterministic generator for property tests
struct SplitMix {
    uint64_t s;
    explicit SplitMix(uint64_t seed) : s(seed) {}
    uint64_t next() {
        s += 0x9e3779b97f4a7c15ULL;
        uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    long range(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<uint64_t>(hi - lo + 1)); }
};

Cyc random_cyc(SplitMix& rng, long n, int nterms) {
    Cyc x;
    for (int t = 0; t < nterms; ++t) {
        long k = rng.range(0, n - 1);
        long num = rng.range(-4, 4);
        long den = rng.range(1, 3);
        x += Rat(num, den) * Cyc::root_of_unity(n, k);
    }
    return x;
}

} // namespace

TEST_CASE("root_of_unity basics") {
    CHECK(Cyc::root_of_unity(1, 0) == Cyc(1));
    CHECK(Cyc::root_of_unity(4, 2) == Cyc(-1));
    // conductor is not minimized
    CHECK(Cyc::root_of_unity(4, 2).conductor() == 4);

    // zeta_3^2 = -1 - zeta_3 after reduction by Phi_3 = x^2+x+1
    Cyc z32 = Cyc::root_of_unity(3, 2);
    auto coeffs = z32.dense_coeffs();
    REQUIRE(coeffs.size() == 2);
    CHECK(coeffs[0] == Rat(-1));
    CHECK(coeffs[1] == Rat(-1));
    CHECK(z32 == Cyc(-1) - Cyc::root_of_unity(3, 1));

    CHECK(Cyc::root_of_unity(8, 9) == Cyc::root_of_unity(8, 1));
    CHECK(Cyc::root_of_unity(8, -1) == Cyc::root_of_unity(8, 7));
    CHECK_THROWS_AS(Cyc::root_of_unity(0, 1), UnramError);
}

TEST_CASE("field arithmetic") {
    Cyc z3 = Cyc::root_of_unity(3, 1);
    CHECK(z3 + Cyc::root_of_unity(3, 2) == Cyc(-1));
    CHECK(Cyc::root_of_unity(8, 1) * Cyc::root_of_unity(8, 1) == Cyc::root_of_unity(4, 1));
    CHECK(Cyc(2) - Cyc(-1) == Cyc(3));
    CHECK((Rat(3, 2) * Cyc(2)).rational_value() == Rat(3));

    // zeta_6 = -zeta_3^2
    CHECK(Cyc::root_of_unity(6, 1) == -Cyc::root_of_unity(3, 2));
}

TEST_CASE("ring axioms on pseudo-random elements") {
    SplitMix rng(20260809);
    for (int it = 0; it < 40; ++it) {
        long n = std::vector<long>{1, 3, 4, 6, 8, 9, 12}[static_cast<size_t>(rng.range(0, 6))];
        Cyc a = random_cyc(rng, n, 2);
        Cyc b = random_cyc(rng, n, 2);
        Cyc c = random_cyc(rng, 12, 2);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK(a - a == Cyc());
    }
}

TEST_CASE("galois action") {
    Cyc z3 = Cyc::root_of_unity(3, 1);
    CHECK(galois_apply(z3, 2) == Cyc(-1) - z3);
    CHECK(galois_apply(Cyc(5), 7) == Cyc(5));

    Cyc w = Cyc::root_of_unity(8, 1) + Cyc::root_of_unity(8, 7);
    CHECK(galois_apply(w, 3) == -w);

    CHECK_THROWS_AS(galois_apply(Cyc::root_of_unity(8, 1), 2), NotCoprime);

    // ring homomorphism + composition law
    SplitMix rng(99);
    for (int it = 0; it < 25; ++it) {
        long n = 15;
        Cyc a = random_cyc(rng, n, 2), b = random_cyc(rng, n, 2);
        long s = std::vector<long>{1, 2, 4, 7, 8, 11, 13, 14}[static_cast<size_t>(rng.range(0, 7))];
        long t = std::vector<long>{1, 2, 4, 7, 8, 11, 13, 14}[static_cast<size_t>(rng.range(0, 7))];
        CHECK(galois_apply(a + b, s) == galois_apply(a, s) + galois_apply(b, s));
        CHECK(galois_apply(a * b, s) == galois_apply(a, s) * galois_apply(b, s));
        CHECK(galois_apply(galois_apply(a, s), t) == galois_apply(a, (s * t) % n));
    }
    // conjugation fixes rationals, inverts roots
    CHECK(conjugate(Cyc::root_of_unity(5, 2)) == Cyc::root_of_unity(5, 3));
}

TEST_CASE("descend") {
    // zeta_4 + zeta_4^3 = 0
    Cyc zsum = Cyc::root_of_unity(4, 1) + Cyc::root_of_unity(4, 3);
    CHECK(descend(zsum, 1) == Cyc());

    // zeta_6 lifted to conductor 6 descends to -zeta_3^2
    Cyc z6 = Cyc::root_of_unity(6, 1);
    Cyc d = descend(z6, 3);
    CHECK(d.conductor() == 3);
    CHECK(d == -Cyc::root_of_unity(3, 2));

    CHECK_THROWS_AS(descend(Cyc::root_of_unity(8, 1), 4), NotInSubfield);
    CHECK_THROWS_AS(descend(Cyc::root_of_unity(8, 1), 3), UnramError);

    // descend(lift(x, N), r) = x
    SplitMix rng(7);
    for (int it = 0; it < 30; ++it) {
        long r = std::vector<long>{1, 2, 3, 4, 6}[static_cast<size_t>(rng.range(0, 4))];
        long mult = std::vector<long>{2, 3, 4}[static_cast<size_t>(rng.range(0, 2))];
        Cyc x = random_cyc(rng, r, 2);
        CHECK(descend(x.lifted(r * mult), r) == x);
    }
}

TEST_CASE("congruence valuation") {
    CHECK(congruence_valuation(Cyc(5), Cyc(1), 2) == 2);
    // the C_9 pair at p = 3: values p-1 and -1
    CHECK(congruence_valuation(Cyc(2), Cyc(-1), 3) == 1);
    Cyc x = Cyc::root_of_unity(12, 5) + Cyc(3);
    CHECK(!congruence_valuation(x, x, 2).has_value());

    // difference with a p-part conductor that descends: zeta_12 - zeta_12 = 0 handled above;
    // p^m scaling shifts valuation by m
    Cyc a = Cyc::root_of_unity(3, 1), b = Cyc::root_of_unity(3, 2);
    auto v0 = congruence_valuation(a, b, 2);
    auto v1 = congruence_valuation(Rat(2) * a, Rat(2) * b, 2);
    REQUIRE(v0.has_value());
    REQUIRE(v1.has_value());
    CHECK(*v1 == *v0 + 1);

    // symmetry and translation invariance
    SplitMix rng(123);
    for (int it = 0; it < 25; ++it) {
        Cyc u = Rat(rng.range(-9, 9)) * Cyc::root_of_unity(3, rng.range(0, 2));
        Cyc v = Rat(rng.range(-9, 9)) * Cyc::root_of_unity(3, rng.range(0, 2));
        Cyc w = Rat(rng.range(-9, 9)) * Cyc::root_of_unity(3, rng.range(0, 2));
        auto xy = congruence_valuation(u, v, 2);
        auto yx = congruence_valuation(v, u, 2);
        auto tr = congruence_valuation(u + w, v + w, 2);
        CHECK(xy == yx);
        CHECK(xy == tr);
    }

    // non-integral difference
    CHECK_THROWS_AS(congruence_valuation(Cyc(Rat(1, 2)), Cyc(0), 2), NotIntegral);
}

TEST_CASE("rendering") {
    CHECK(to_string(Cyc()) == "0");
    CHECK(to_string(Cyc(-3)) == "-3");
    CHECK(to_string(Cyc(Rat(5, 2))) == "5/2");
    CHECK(to_string(Cyc::root_of_unity(8, 1)) == "z8");
    CHECK(to_string(Cyc::root_of_unity(8, 3) + Cyc::root_of_unity(8, 1)) == "z8^3+z8");
    CHECK(to_string(Cyc::root_of_unity(3, 2)) == "-z3-1");
    CHECK(to_string(Rat(1, 2) * Cyc::root_of_unity(4, 1) + Cyc(2)) == "1/2*z4+2");
}

TEST_CASE("json round trip") {
    SplitMix rng(5);
    for (int it = 0; it < 20; ++it) {
        Cyc x = random_cyc(rng, 12, 3);
        CHECK(cyc_from_json(cyc_to_json(x)) == x);
    }
    // bare integers accepted
    auto j = nlohmann::json::parse(R"({"conductor": 4, "coeffs": [2, [1, 2]]})");
    CHECK(cyc_from_json(j) == Cyc(2) + Rat(1, 2) * Cyc::root_of_unity(4, 1));
    CHECK_THROWS_AS(cyc_from_json(nlohmann::json::parse(R"({"conductor": 4, "coeffs": [1]})")), SchemaError);
    CHECK_THROWS_AS(cyc_from_json(nlohmann::json::parse(R"({"conductor": 0, "coeffs": []})")), SchemaError);
}
