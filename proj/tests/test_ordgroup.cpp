#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "keyforge/ordgroup.hpp"
#include "keyforge/errors.hpp"

using namespace keyforge;

namespace {

ExtValue v2(long a, long b) { return ExtValue::of({Rat(a), Rat(b)}); }
ExtValue v2(const Rat& a, const Rat& b) { return ExtValue::of({a, b}); }

ExtValue random_value(std::mt19937_64& rng, int rank) {
    std::uniform_int_distribution<long> num(-12, 12);
    std::uniform_int_distribution<long> den(1, 6);
    std::vector<Rat> c;
    for (int i = 0; i < rank; ++i) c.push_back(rat_of(num(rng), den(rng)));
    return ExtValue::of(std::move(c));
}

} // namespace

TEST_CASE("lex_compare decides by the leading coordinate") {
    CHECK(lex_compare(v2(0, 1), v2(1, 0)) == Ordering::LT);
    CHECK(lex_compare(ExtValue::infinity(2), v2(1000000, 0)) == Ordering::GT);
    CHECK(lex_compare(v2(rat_of(1, 2), Rat(-3)), v2(rat_of(1, 2), Rat(-3))) == Ordering::EQ);
    CHECK_THROWS_AS(lex_compare(v2(0, 1), ExtValue::rank1(Rat(0))), DescriptorError);
}

TEST_CASE("lex_compare is a total order on random triples") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        ExtValue a = random_value(rng, 3), b = random_value(rng, 3), c = random_value(rng, 3);
        // antisymmetry
        if (a <= b && b <= a) CHECK(a == b);
        // transitivity
        if (a <= b && b <= c) CHECK(a <= c);
        // totality
        CHECK((a <= b || b <= a));
    }
}

TEST_CASE("infinity is absorbing for addition") {
    ExtValue inf = ExtValue::infinity(2);
    CHECK((inf + v2(3, 4)).is_infinity());
    CHECK((v2(3, 4) + inf).is_infinity());
    CHECK(inf.scaled(rat_of(7, 2)).is_infinity());
    CHECK_THROWS_AS(inf.scaled(Rat(-1)), DomainError);
}

TEST_CASE("rational scaling realizes the divisible hull") {
    ExtValue a = v2(1, -3);
    CHECK(a.scaled(rat_of(1, 2)) == v2(rat_of(1, 2), rat_of(-3, 2)));
    CHECK(a.scaled(rat_of(1, 2)).scaled(Rat(2)) == a);
}

TEST_CASE("principal_convex_index finds the leading nonzero coordinate") {
    CHECK(principal_convex_index(v2(0, 5)) == 2);
    CHECK(principal_convex_index(v2(1, -7)) == 1);
    CHECK(principal_convex_index(ExtValue::of({Rat(0), Rat(0), rat_of(7, 3)})) == 3);
    CHECK_THROWS_AS(principal_convex_index(v2(0, 0)), DomainError);
    CHECK_THROWS_AS(principal_convex_index(ExtValue::infinity(2)), DomainError);
}

TEST_CASE("principal_convex_index is invariant under positive scaling") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> num(1, 9);
    for (int i = 0; i < 200; ++i) {
        ExtValue g = random_value(rng, 3);
        if (g.is_zero()) continue;
        Rat q = rat_of(num(rng), num(rng));
        CHECK(principal_convex_index(g.scaled(q)) == principal_convex_index(g));
    }
}

TEST_CASE("classification reproduces the rank-2 table") {
    GroupDescriptor g{2};

    SUBCASE("(0, 1 - 1/n) is VB inside {0} x Q") {
        SequenceDescriptor s;
        s.group = g;
        s.prefix = {v2(Rat(0), rat_of(1, 2)), v2(Rat(0), rat_of(2, 3)), v2(Rat(0), rat_of(3, 4))};
        s.tail = SequenceDescriptor::AssertedSupremum{v2(0, 1)};
        auto c = classify_sequence(s);
        CHECK(c.cls == Boundedness::VB);
        CHECK(c.hs_index == 2);
    }
    SUBCASE("(1, n) is VB in the whole group") {
        SequenceDescriptor s;
        s.group = g;
        s.tail = SequenceDescriptor::AffineTail{v2(1, 0), v2(0, 1)};
        auto c = classify_sequence(s);
        CHECK(c.cls == Boundedness::VB);
        CHECK(c.hs_index == 1);
    }
    SUBCASE("(0, n) is HB") {
        SequenceDescriptor s;
        s.group = g;
        s.tail = SequenceDescriptor::AffineTail{v2(0, 0), v2(0, 1)};
        auto c = classify_sequence(s);
        CHECK(c.cls == Boundedness::HB);
        CHECK(c.hs_index == 2);
    }
    SUBCASE("(n, 0) is UB") {
        SequenceDescriptor s;
        s.group = g;
        s.tail = SequenceDescriptor::AffineTail{v2(0, 0), v2(1, 0)};
        auto c = classify_sequence(s);
        CHECK(c.cls == Boundedness::UB);
        CHECK(c.hs_index == 1);
    }
}

TEST_CASE("classification refusals and domain errors") {
    GroupDescriptor g{2};
    SequenceDescriptor s;
    s.group = g;
    s.prefix = {v2(0, 1), v2(0, 2)};
    s.tail = SequenceDescriptor::ExplicitOnly{};
    CHECK_THROWS_AS(classify_sequence(s), NotClassifiable);

    s.prefix = {v2(0, 2), v2(0, 1)};
    s.tail = SequenceDescriptor::AssertedSupremum{std::nullopt};
    CHECK_THROWS_AS(classify_sequence(s), DomainError);

    s.prefix = {v2(0, -1)};
    CHECK_THROWS_AS(classify_sequence(s), DomainError);

    // a slope that decreases lexicographically is rejected
    s.prefix.clear();
    s.tail = SequenceDescriptor::AffineTail{v2(1, 0), v2(0, -1)};
    CHECK_THROWS_AS(classify_sequence(s), DomainError);
}

TEST_CASE("VB sequences satisfy the multiplicative bound property") {
    // For VB, every q > 1 admits n with q*gamma_n above the whole sequence.
    GroupDescriptor g{2};
    auto gamma = [&](long n) { return v2(Rat(1), Rat(n)); }; // row (1, n)
    SequenceDescriptor s;
    s.group = g;
    s.tail = SequenceDescriptor::AffineTail{v2(1, 0), v2(0, 1)};
    REQUIRE(classify_sequence(s).cls == Boundedness::VB);
    for (Rat q : {rat_of(2, 1), rat_of(3, 2), rat_of(9, 8)}) {
        bool found = false;
        for (long n = 1; n <= 64 && !found; ++n) {
            ExtValue qg = gamma(n).scaled(q);
            bool dominates = true;
            for (long k = 1; k <= 200; ++k)
                if (!(qg > gamma(k))) {
                    dominates = false;
                    break;
                }
            found = dominates;
        }
        CHECK(found);
    }
}

TEST_CASE("value text forms round-trip") {
    CHECK(v2(rat_of(1, 2), Rat(-3)).to_string() == "(1/2,-3)");
    CHECK(ExtValue::rank1(rat_of(3, 2)).to_string() == "3/2");
    CHECK(ExtValue::infinity(1).to_string() == "inf");
}
