#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "keyforge/lattice.hpp"
#include "oracles.hpp"

using namespace keyforge;
using kft::fixture_f3t;
using kft::fixture_mu2;
using kft::fixture_nu2;
using kft::random_poly;

TEST_CASE("degree-one valuations evaluate by the min-formula") {
    auto mu = fixture_mu2();
    auto F = mu.field();
    CHECK(mu.evaluate(Poly::from_ints(F, {2, 0, 1})) == ExtValue::rank1(Rat(1)));

    auto F3t = Field::rational_functions_f(RFCtx::prime_field(3));
    auto vt = BaseValuation::tadic(F3t, GroupDescriptor{1});
    auto mut = make_degree_one(vt, Poly::x(F3t), ExtValue::rank1(Rat(1)));
    Poly xpt(F3t, {F3t->t(), F3t->one()});
    CHECK(mut.evaluate(xpt) == ExtValue::rank1(Rat(1)));

    CHECK_THROWS_AS(make_degree_one(vt, Poly::from_ints(F3t, {0, 0, 1}), ExtValue::rank1(Rat(1))),
                    DomainError);
}

TEST_CASE("infinite root value realizes nonzero support") {
    auto F = Field::rationals();
    auto v2 = BaseValuation::padic(F, 2, GroupDescriptor{1});
    auto mu = make_degree_one(v2, Poly::x(F), ExtValue::infinity(1));
    CHECK(mu.has_infinite_support());
    CHECK(mu.evaluate(Poly::from_ints(F, {0, 1, 1})).is_infinity()); // x^2 + x, a_0 = 0
    CHECK(mu.evaluate(Poly::from_ints(F, {4, 1})) == ExtValue::rank1(Rat(2)));
}

TEST_CASE("degree-one evaluation matches the Taylor-shift oracle") {
    std::mt19937_64 rng(23);
    auto F = Field::rationals();
    auto v3 = BaseValuation::padic(F, 3, GroupDescriptor{1});
    for (long c : {0L, 1L, -2L, 6L}) {
        Poly phi0(F, {F->from_int(-c), F->one()});
        auto mu = make_degree_one(v3, phi0, ExtValue::rank1(rat_of(2, 3)));
        for (int i = 0; i < 50; ++i) {
            Poly f = random_poly(F, 6, rng);
            CHECK(mu.evaluate(f) ==
                  kft::degree_one_oracle(v3, F->from_int(c), ExtValue::rank1(rat_of(2, 3)), f));
        }
    }
}

TEST_CASE("augment: examples and failure modes") {
    auto mu = fixture_mu2();
    auto F = mu.field();
    Poly phi = Poly::from_ints(F, {2, 0, 1});

    auto nu = augment(mu, phi, ExtValue::rank1(rat_of(3, 2)));
    CHECK(nu.evaluate(Poly::from_ints(F, {0, 0, 0, 1})) == ExtValue::rank1(rat_of(3, 2)));

    // gamma must strictly exceed nu(phi)
    CHECK_THROWS_AS(augment(mu, phi, ExtValue::rank1(Rat(1))), MonotonicityViolation);
    // x^2 is not a key for mu (residual degree 0)
    CHECK_THROWS_AS(augment(mu, Poly::from_ints(F, {0, 0, 1}), ExtValue::rank1(Rat(2))),
                    KeyRequired);
}

TEST_CASE("valuation axioms hold exactly on random pairs") {
    std::mt19937_64 rng(29);
    for (const auto& nu : {fixture_nu2(), fixture_f3t()}) {
        const FieldPtr& F = nu.field();
        for (int i = 0; i < 200; ++i) {
            Poly f = random_poly(F, 6, rng);
            Poly g = random_poly(F, 6, rng);
            CHECK(nu.evaluate(f * g) == nu.evaluate(f) + nu.evaluate(g));
            Poly sum = f + g;
            ExtValue lhs = nu.evaluate(sum);
            CHECK(lhs >= std::min(nu.evaluate(f), nu.evaluate(g)));
        }
    }
}

TEST_CASE("restriction to the base field is the base valuation") {
    auto nu = fixture_nu2();
    auto F = nu.field();
    CHECK(nu.evaluate(Poly::from_ints(F, {17})) == ExtValue::rank1(Rat(0)));
    CHECK(nu.evaluate(Poly::from_ints(F, {24})) == ExtValue::rank1(Rat(3)));
}

TEST_CASE("truncations") {
    auto nu = fixture_nu2();
    auto F = nu.field();
    Poly phi = Poly::from_ints(F, {2, 0, 1});

    auto [v1, s1] = nu.truncate_eval(Poly::x(F), phi);
    CHECK(v1 == ExtValue::rank1(Rat(1)));
    CHECK(s1 == std::set<long>({0, 2}));

    auto [v2, s2] = nu.truncate_eval(phi, phi);
    CHECK(v2 == nu.evaluate(phi));
    CHECK(s2 == std::set<long>({1}));

    // x^3 = x*(x^2+2) - 2x: term values 2 and 3/2, so the minimum is attained
    // only at the constant digit.
    auto [v3, s3] = nu.truncate_eval(phi, Poly::from_ints(F, {0, 0, 0, 1}));
    CHECK(v3 == ExtValue::rank1(rat_of(3, 2)));
    CHECK(s3 == std::set<long>({0}));

    CHECK_THROWS_AS(nu.truncate_eval(Poly::from_ints(F, {1, 2}), phi), DomainError);
}

TEST_CASE("truncation by the last key is the valuation itself") {
    std::mt19937_64 rng(31);
    for (const auto& nu : {fixture_nu2(), fixture_f3t()}) {
        const FieldPtr& F = nu.field();
        for (int i = 0; i < 80; ++i) {
            Poly f = random_poly(F, 7, rng);
            auto [v, s] = nu.truncate_eval(nu.key_poly(), f);
            CHECK(v == nu.evaluate(f));
            CHECK(!s.empty());
        }
    }
}

TEST_CASE("truncation never exceeds the valuation") {
    std::mt19937_64 rng(37);
    auto nu = fixture_nu2();
    auto F = nu.field();
    for (const Poly& Q : {Poly::x(F), Poly::from_ints(F, {1, 1}), Poly::from_ints(F, {0, 0, 0, 1})}) {
        for (int i = 0; i < 60; ++i) {
            Poly f = random_poly(F, 6, rng);
            auto [v, s] = nu.truncate_eval(Q, f);
            CHECK(v <= nu.evaluate(f));
        }
    }
}

TEST_CASE("initial-term equivalence") {
    auto mu = fixture_mu2();
    auto F = mu.field();
    Poly f = Poly::from_ints(F, {2, 2, 1});
    Poly g = Poly::from_ints(F, {2, 0, 1});
    CHECK(mu.equivalent_in(f, g));       // mu(f-g) = mu(2x) = 3/2 > 1
    CHECK(mu.equivalent_in(f, f));
    CHECK_FALSE(mu.equivalent_in(f, Poly::x(F))); // values differ
    CHECK_THROWS_AS(mu.equivalent_in(f, Poly(F)), DomainError);
}

TEST_CASE("phi_class on nested chains") {
    auto mu = fixture_mu2();
    auto nu = fixture_nu2();
    auto [rep, deg] = phi_class(mu, nu);
    CHECK(rep == Poly::from_ints(mu.field(), {2, 0, 1}));
    CHECK(deg == 2);
    CHECK_THROWS_AS(phi_class(nu, nu), NotComparable);
    CHECK_THROWS_AS(phi_class(nu, mu), NotComparable);

    // two steps: the earlier step's phi represents the class
    auto F = mu.field();
    Poly phi2 = Poly::from_ints(F, {2, 2, 1}); // x^2+2x+2, a key equivalent to x^2+2
    auto eta = augment(nu, phi2, ExtValue::rank1(Rat(2)));
    auto [rep2, deg2] = phi_class(mu, eta);
    CHECK(rep2 == Poly::from_ints(F, {2, 0, 1}));
    CHECK(deg2 == 2);

    // value agreement transfers through intermediate chain valuations
    std::mt19937_64 rng(41);
    for (int i = 0; i < 80; ++i) {
        Poly f = random_poly(F, 6, rng);
        bool stable_to_top = mu.evaluate(f) == eta.evaluate(f);
        bool stable_to_mid = mu.evaluate(f) == nu.evaluate(f);
        CHECK(stable_to_top == stable_to_mid);
    }
}

TEST_CASE("chain monotonicity with equality below the class degree") {
    std::mt19937_64 rng(43);
    auto mu = fixture_mu2();
    auto nu = fixture_nu2();
    auto F = mu.field();
    for (int i = 0; i < 120; ++i) {
        Poly f = random_poly(F, 6, rng);
        CHECK(mu.evaluate(f) <= nu.evaluate(f));
        if (f.deg() < 2) CHECK(mu.evaluate(f) == nu.evaluate(f));
    }
}

TEST_CASE("value-group data") {
    auto mu = fixture_mu2();
    auto vg = mu.value_group_data();
    CHECK(vg.e_rel == 2);
    REQUIRE(vg.gens_small.size() == 1);
    CHECK(vg.gens_small[0] == ExtValue::rank1(Rat(1)));
    REQUIRE(vg.gens_full.size() == 2);
    CHECK(vg.gens_full[1] == ExtValue::rank1(rat_of(1, 2)));

    auto nu = fixture_nu2();
    CHECK(nu.value_group_data().e_rel == 1);

    // Gauss root: e_rel = 1
    auto F = mu.field();
    auto v2 = BaseValuation::padic(F, 2, GroupDescriptor{1});
    auto gauss = make_degree_one(v2, Poly::x(F), ExtValue::rank1(Rat(0)));
    CHECK(gauss.value_group_data().e_rel == 1);
}

TEST_CASE("equal-degree steps can drop earlier generators from the group") {
    // root x -> 1/3, then the equivalent key x-2 -> 1/2: the value group is
    // <1, 1/2>, and 1/3 is no longer in it.
    auto F = Field::rationals();
    auto v2 = BaseValuation::padic(F, 2, GroupDescriptor{1});
    auto mu = make_degree_one(v2, Poly::x(F), ExtValue::rank1(rat_of(1, 3)));
    auto nu = augment(mu, Poly::from_ints(F, {-2, 1}), ExtValue::rank1(rat_of(1, 2)));
    auto vg = nu.value_group_data();
    CHECK(vg.e_rel == 2);

    std::vector<std::vector<Rat>> gens;
    for (const auto& g : vg.gens_full) gens.push_back(g.coords());
    auto in_group = [&gens](const Rat& q) {
        auto r = lattice_order(gens, {q});
        return r.has_value() && r->order == 1;
    };
    CHECK(in_group(rat_of(1, 2)));
    CHECK_FALSE(in_group(rat_of(1, 3)));

    // sampled values of nu really land in the reported group
    std::mt19937_64 rng(47);
    for (int i = 0; i < 60; ++i) {
        Poly f = random_poly(F, 5, rng);
        ExtValue v = nu.evaluate(f);
        if (v.is_infinity()) continue;
        CHECK(in_group(v.coords()[0]));
    }
}

TEST_CASE("incommensurable values occupy a fresh lex coordinate") {
    auto F = Field::rationals();
    auto v2 = BaseValuation::padic(F, 2, GroupDescriptor{2});
    auto mu = make_degree_one(v2, Poly::x(F), ExtValue::of({Rat(0), Rat(1)}));
    CHECK(mu.evaluate(Poly::from_ints(F, {2, 1})) == ExtValue::of({Rat(0), Rat(1)}));
    CHECK(mu.evaluate(Poly::from_ints(F, {1, 1})) == ExtValue::zero(2));
    CHECK_FALSE(mu.commensurable_top());
    CHECK_THROWS_AS(mu.value_group_data(), DomainError);

    // case-1 augmentation on top of an incommensurable root still works
    auto nu = augment(mu, Poly::from_ints(F, {-2, 1}), ExtValue::of({Rat(1), Rat(0)}));
    CHECK(nu.evaluate(Poly::x(F)) == ExtValue::of({Rat(1), Rat(0)}));
}

TEST_CASE("truncation by an over-degree key is not a valuation") {
    // x^4 + 2x^2 + 4 is an MLV key for mu whose degree exceeds the class
    // degree of (mu, nu); its truncation under nu must break multiplicativity
    // on some concrete pair.
    auto mu = fixture_mu2();
    auto nu = fixture_nu2();
    auto F = mu.field();
    Poly chi = Poly::from_ints(F, {4, 0, 2, 0, 1});
    bool found = false;
    std::vector<Poly> grid;
    for (long c0 = -2; c0 <= 2; ++c0)
        for (long c1 = 0; c1 <= 2; ++c1)
            for (long c2 = 0; c2 <= 1; ++c2) {
                Poly f = Poly::from_ints(F, {c0, c1, c2});
                if (!f.is_zero()) grid.push_back(f);
            }
    for (size_t i = 0; i < grid.size() && !found; ++i)
        for (size_t j = i; j < grid.size() && !found; ++j) {
            ExtValue lhs = nu.truncate_eval(chi, grid[i] * grid[j]).first;
            ExtValue rhs = nu.truncate_eval(chi, grid[i]).first + nu.truncate_eval(chi, grid[j]).first;
            if (lhs != rhs) found = true;
        }
    CHECK(found);
}

TEST_CASE("lattice orders behind the value groups") {
    // order of 1/2 modulo <1> is 2, with 2*(1/2) = 1*(1)
    auto r = lattice_order({{Rat(1)}}, {rat_of(1, 2)});
    REQUIRE(r.has_value());
    CHECK(r->order == 2);
    CHECK(r->coeffs == std::vector<Int>{Int(1)});
    // dependent generators are handled
    auto r2 = lattice_order({{Rat(2)}, {Rat(3)}}, {rat_of(1, 6)});
    REQUIRE(r2.has_value());
    CHECK(r2->order == 6); // <2,3> = Z, 6*(1/6) = 1
    // outside the rational span
    auto r3 = lattice_order({{Rat(1), Rat(0)}}, {Rat(0), Rat(1)});
    CHECK_FALSE(r3.has_value());
    // rank-2 membership
    auto r4 = lattice_order({{Rat(1), Rat(0)}, {Rat(0), rat_of(1, 2)}}, {Rat(3), Rat(2)});
    REQUIRE(r4.has_value());
    CHECK(r4->order == 1);
}

TEST_CASE("augmentation over Q(t): equivalence route only") {
    auto F = Field::rational_functions_q();
    auto vt = BaseValuation::tadic(F, GroupDescriptor{1});
    auto mu = make_degree_one(vt, Poly::x(F), ExtValue::rank1(Rat(1)));
    // evaluation and epsilon work over the infinite residue field
    Poly f(F, {F->t(), F->from_int(2), F->one()}); // x^2 + 2x + t
    CHECK(mu.evaluate(f) == ExtValue::rank1(Rat(1)));
    CHECK(epsilon(mu, f).epsilon == ExtValue::rank1(Rat(1)));
    CHECK(epsilon(mu, f).i_set == std::set<long>({1}));
    // an equivalent key can still augment (case 1 needs no residues)
    Poly xt(F, {-F->t() * F->t(), F->one()}); // x - t^2 ~ x
    auto nu = augment(mu, xt, ExtValue::rank1(Rat(2)));
    CHECK(nu.evaluate(Poly::x(F)) == ExtValue::rank1(Rat(2)));
    // a case-2 candidate needs the residual machinery
    Poly quad(F, {-F->t(), F->zero(), F->one()}); // x^2 - t
    CHECK_THROWS_AS(augment(mu, quad, ExtValue::rank1(Rat(2))), ResidualUnavailable);
}

TEST_CASE("no further augmentation past an infinite support step") {
    auto nu = fixture_nu2();
    auto F = nu.field();
    auto supp = augment(nu, Poly::from_ints(F, {2, 0, 1}), ExtValue::infinity(1));
    CHECK(supp.has_infinite_support());
    CHECK_THROWS_AS(augment(supp, Poly::from_ints(F, {2, 2, 1}), ExtValue::infinity(1)),
                    KeyRequired);
    CHECK_THROWS_AS(supp.value_group_data(), DomainError);
}

TEST_CASE("prefixes and structural extension") {
    auto nu = fixture_nu2();
    auto mu = nu.prefix(0);
    CHECK(mu.depth() == 0);
    CHECK(nu.extends(mu));
    CHECK_FALSE(mu.extends(nu));
    CHECK(nu.prefix(1).same_chain(nu));
}
