#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

using namespace keyforge;
using kft::fixture_f2t;
using kft::fixture_f3t;
using kft::fixture_mu2;
using kft::fixture_nu2;
using kft::random_poly;

TEST_CASE("epsilon reports") {
    auto nu = fixture_nu2();
    auto F = nu.field();
    Poly phi = Poly::from_ints(F, {2, 0, 1});

    auto r1 = epsilon(nu, phi);
    CHECK(r1.epsilon == ExtValue::rank1(rat_of(3, 4)));
    CHECK(r1.i_set == std::set<long>({2}));
    CHECK(r1.table.at(1).derivative_value == ExtValue::rank1(rat_of(3, 2)));

    auto r2 = epsilon(nu, Poly::x(F));
    CHECK(r2.epsilon == nu.evaluate(Poly::x(F)));
    CHECK(r2.i_set == std::set<long>({1}));

    auto r3 = epsilon(nu, Poly::from_ints(F, {2, 2, 1}));
    CHECK(r3.epsilon == ExtValue::rank1(rat_of(3, 4)));
    CHECK(r3.i_set == std::set<long>({2}));

    CHECK_THROWS_AS(epsilon(nu, Poly::from_ints(F, {3})), DomainError);
}

TEST_CASE("epsilon is scaling-invariant and bounded below by nu(f)/deg(f)") {
    std::mt19937_64 rng(51);
    auto nu = fixture_nu2();
    auto F = nu.field();
    for (int i = 0; i < 60; ++i) {
        Poly f = random_poly(F, 5, rng);
        if (f.deg() < 1) continue;
        auto rep = epsilon(nu, f);
        auto scaled = epsilon(nu, f.scaled(F->from_int(3)));
        CHECK(rep.epsilon == scaled.epsilon);
        CHECK(rep.i_set == scaled.i_set);
        if (f.is_monic())
            CHECK(rep.epsilon >= nu.evaluate(f).scaled(rat_of(1, f.deg())));
        // I(f) lies in [mult(f), deg(f)]
        CHECK(*rep.i_set.begin() >= multiplicity(f));
        CHECK(*rep.i_set.rbegin() <= f.deg());
    }
}

TEST_CASE("epsilon of (x-a)^n and its argmax set") {
    // The argmax rule depends on the residue characteristic: over (Q, v_2)
    // the indices with even C(n,b) drop out of I((x-a)^n).
    auto mu = fixture_mu2();
    auto F = mu.field();
    Poly xm2 = Poly::from_ints(F, {-2, 1});
    for (int n = 1; n <= 5; ++n) {
        auto rep = epsilon(mu, xm2.pow(n));
        CHECK(rep.epsilon == mu.evaluate(xm2));
        std::set<long> expect;
        for (long b = 1; b <= n; ++b)
            if (kft::binom(n, b) % 2 != 0) expect.insert(b);
        CHECK(rep.i_set == expect);
    }
    // residue characteristic zero (trivial valuation on Q): I = [1, n]
    auto triv = BaseValuation::trivial(F, GroupDescriptor{1});
    auto gauss = make_degree_one(triv, Poly::x(F), ExtValue::rank1(Rat(1)));
    for (int n = 1; n <= 4; ++n) {
        auto rep = epsilon(gauss, xm2.pow(n));
        CHECK(rep.epsilon == gauss.evaluate(xm2));
        std::set<long> expect;
        for (long b = 1; b <= n; ++b) expect.insert(b);
        CHECK(rep.i_set == expect);
    }
    // residue characteristic 3 over F_3(t)
    auto nut = fixture_f3t();
    auto Ft = nut.field();
    Poly xmt(Ft, {-Ft->t(), Ft->one()});
    auto rep = epsilon(nut, xmt.pow(3));
    CHECK(rep.epsilon == nut.evaluate(xmt));
    CHECK(rep.i_set == std::set<long>({3})); // C(3,1) = C(3,2) = 0 mod 3
}

TEST_CASE("epsilon(fg) = max and I(fg) = I(g) when epsilon(f) < epsilon(g)") {
    std::mt19937_64 rng(53);
    for (const auto& nu : {fixture_nu2(), fixture_f3t()}) {
        const FieldPtr& F = nu.field();
        int checked_i = 0;
        for (int i = 0; i < 120; ++i) {
            Poly f = random_poly(F, 4, rng);
            Poly g = random_poly(F, 4, rng);
            if (f.deg() < 1 || g.deg() < 1) continue;
            auto rf = epsilon(nu, f), rg = epsilon(nu, g), rfg = epsilon(nu, f * g);
            CHECK(rfg.epsilon == std::max(rf.epsilon, rg.epsilon));
            if (rf.epsilon < rg.epsilon) {
                CHECK(rfg.i_set == rg.i_set);
                ++checked_i;
            }
        }
        CHECK(checked_i > 0);
    }
}

TEST_CASE("residues of units") {
    auto mu = fixture_mu2();
    auto F = mu.field();
    CHECK(residue_of_unit(mu, Poly::from_ints(F, {2}), Poly::from_ints(F, {2})).is_one());
    CHECK(residue_of_unit(mu, Poly::from_ints(F, {6}), Poly::from_ints(F, {2})).is_one()); // 3 mod 2
    CHECK(residue_of_unit(mu, Poly::from_ints(F, {0, 2}), Poly::from_ints(F, {0, 2})).is_one());
    CHECK_THROWS_AS(residue_of_unit(mu, Poly::from_ints(F, {2}), Poly::from_ints(F, {1})),
                    NotDegreeZero);

    // nontrivial residue in F_3
    auto v3 = BaseValuation::padic(F, 3, GroupDescriptor{1});
    auto mu3 = make_degree_one(v3, Poly::x(F), ExtValue::rank1(rat_of(1, 2)));
    RElem r = residue_of_unit(mu3, Poly::from_ints(F, {6}), Poly::from_ints(F, {3}));
    CHECK(r == mu3.kappa_top()->from_int(2));

    // ratio involving the key polynomial is not a unit
    CHECK_THROWS_AS(residue_of_unit(mu, Poly::from_ints(F, {0, 0, 1}), Poly::from_ints(F, {2})),
                    NotAUnit);
}

TEST_CASE("residual polynomials: normalization anchors") {
    auto mu = fixture_mu2();
    auto F = mu.field();
    Poly u0 = Poly::from_ints(F, {2});

    auto R = residual_polynomial(mu, Poly::x(F), u0, Poly::from_ints(F, {2, 0, 1}));
    CHECK(R.to_string() == "y + 1");

    // R(phi) = 1 for the expansion base itself
    auto Rself = residual_polynomial(mu, Poly::x(F), u0, Poly::x(F));
    CHECK(Rself.deg() == 0);
    CHECK(Rself.coeffs[0].is_one());

    // small-degree polynomials map to 1
    auto Rsmall = residual_polynomial(mu, Poly::x(F), u0, Poly::from_ints(F, {6}));
    CHECK(Rsmall.deg() == 0);

    // distinct residues over F_3
    auto v3 = BaseValuation::padic(F, 3, GroupDescriptor{1});
    auto mu3 = make_degree_one(v3, Poly::x(F), ExtValue::rank1(rat_of(1, 2)));
    Poly u3 = Poly::from_ints(F, {3});
    auto R1 = residual_polynomial(mu3, Poly::x(F), u3, Poly::from_ints(F, {3, 0, 1}));
    auto R2 = residual_polynomial(mu3, Poly::x(F), u3, Poly::from_ints(F, {6, 0, 1}));
    CHECK(R1.to_string() == "y + 1");
    CHECK(R2.to_string() == "y + 2");
    CHECK(R1 != R2);

    // bad normalizer value
    CHECK_THROWS_AS(residual_polynomial(mu, Poly::x(F), Poly::from_ints(F, {3}),
                                        Poly::from_ints(F, {2, 0, 1})),
                    BadNormalizer);
    // expansion base must be a minimal-degree key
    CHECK_THROWS_AS(residual_polynomial(mu, Poly::from_ints(F, {0, 0, 1}), u0, Poly::x(F)),
                    KeyRequired);
}

TEST_CASE("residual operator is multiplicative") {
    std::mt19937_64 rng(59);
    auto mu = fixture_mu2();
    auto F = mu.field();
    Poly u0 = Poly::from_ints(F, {2});
    auto nut = fixture_f3t();
    Poly ut = nut.normalizer_top();
    struct Case {
        ValuationHandle nu;
        Poly u;
    };
    std::vector<Case> cases = {{mu, u0}, {nut, ut}};
    for (auto& [nu, u] : cases) {
        const FieldPtr& Fc = nu.field();
        const Poly& key = nu.key_poly();
        for (int i = 0; i < 50; ++i) {
            Poly f = random_poly(Fc, 4, rng);
            Poly g = random_poly(Fc, 4, rng);
            auto Rf = nu.residual_coeffs(key, u, f);
            auto Rg = nu.residual_coeffs(key, u, g);
            auto Rfg = nu.residual_coeffs(key, u, f * g);
            RFPtr kap = nu.kappa_top();
            CHECK(rp_make(kap, Rfg) == rp_mul(rp_make(kap, Rf), rp_make(kap, Rg)));
        }
    }
}

TEST_CASE("MLV key decision") {
    auto mu = fixture_mu2();
    auto F = mu.field();

    auto k1 = is_mlv_key(mu, Poly::from_ints(F, {2, 0, 1}));
    CHECK(k1.yes);
    CHECK(k1.case_id == 2);
    REQUIRE(k1.residual.size() == 2);

    auto k2 = is_mlv_key(mu, Poly::x(F));
    CHECK(k2.yes);
    CHECK(k2.case_id == 1);

    CHECK_FALSE(is_mlv_key(mu, Poly::from_ints(F, {0, 0, 1})).yes); // residual degree 0
    CHECK_FALSE(is_mlv_key(mu, Poly::from_ints(F, {1, 0, 0, 1})).yes); // wrong degree vs m*e

    // equivalent degree-one keys: x - 2 ~ x under mu
    auto k3 = is_mlv_key(mu, Poly::from_ints(F, {-2, 1}));
    CHECK(k3.yes);
    CHECK(k3.case_id == 1);
    // x - 3 is not equivalent and not a case-2 key since e_rel = 2
    CHECK_FALSE(is_mlv_key(mu, Poly::from_ints(F, {-3, 1})).yes);

    CHECK_THROWS_AS(is_mlv_key(mu, Poly::from_ints(F, {1, 2})), DomainError); // non-monic

    // equal-degree case-2 keys for the augmented valuation
    auto nu = fixture_nu2();
    auto k4 = is_mlv_key(nu, Poly::from_ints(F, {2, 2, 1}));
    CHECK(k4.yes);
    CHECK(k4.case_id == 2);
}

TEST_CASE("deg-4 MLV keys of mu exist with quadratic residual polynomials") {
    auto mu = fixture_mu2();
    auto F = mu.field();
    // x^4 + 2x^2 + 4 has residual y^2 + y + 1 over F_2
    Poly chi = Poly::from_ints(F, {4, 0, 2, 0, 1});
    auto k = is_mlv_key(mu, chi);
    CHECK(k.yes);
    CHECK(k.case_id == 2);
    CHECK(rp_make(mu.kappa_top(), k.residual).to_string("y") == "y^2 + y + 1");
}

TEST_CASE("residue-field extension along a degree-4 augmentation") {
    // Augmenting mu by x^4+2x^2+4 (residual y^2+y+1) extends kappa to F_4;
    // the degree-zero residues then genuinely leave the prime field.
    std::mt19937_64 rng(97);
    auto mu = fixture_mu2();
    auto F = mu.field();
    Poly chi = Poly::from_ints(F, {4, 0, 2, 0, 1});
    REQUIRE(mu.evaluate(chi) == ExtValue::rank1(Rat(2)));
    auto nu4 = augment(mu, chi, ExtValue::rank1(rat_of(5, 2)));
    CHECK(nu4.degree() == 4);
    CHECK(nu4.e_rel_top() == 1);
    RFPtr kappa = nu4.kappa_top();
    CHECK(kappa->size() == 4);

    // in(x^2)/in(2) maps to the residual generator: a primitive cube root
    RElem r = residue_of_unit(nu4, Poly::from_ints(F, {0, 0, 1}), Poly::from_ints(F, {2}));
    CHECK_FALSE(r.is_zero());
    CHECK_FALSE(r.is_one());
    CHECK((r * r + r + kappa->one()).is_zero());

    // residual operator over F_4 is monic, y-coprime and multiplicative
    const Poly& key = nu4.key_poly();
    Poly u = nu4.normalizer_top();
    for (int i = 0; i < 25; ++i) {
        Poly f = random_poly(F, 6, rng);
        Poly g = random_poly(F, 6, rng);
        auto Rf = rp_make(kappa, nu4.residual_coeffs(key, u, f));
        auto Rg = rp_make(kappa, nu4.residual_coeffs(key, u, g));
        auto Rfg = rp_make(kappa, nu4.residual_coeffs(key, u, f * g));
        CHECK(Rfg == rp_mul(Rf, Rg));
    }

    // one more equal-degree step on top of the extension
    Poly chi2 = chi + Poly::from_ints(F, {0, 4});
    auto k2 = is_mlv_key(nu4, chi2);
    REQUIRE(k2.yes);
    CHECK(k2.case_id == 2);
    auto nu5 = augment(nu4, chi2, ExtValue::rank1(Rat(3)));
    for (int i = 0; i < 60; ++i) {
        Poly f = random_poly(F, 8, rng);
        Poly g = random_poly(F, 8, rng);
        CHECK(nu5.evaluate(f * g) == nu5.evaluate(f) + nu5.evaluate(g));
    }
    // the tower is preserved and the residues still compose
    CHECK(nu5.kappa_top()->size() == 4);
    CHECK(residue_of_unit(nu5, Poly::from_ints(F, {6}), Poly::from_ints(F, {2})).is_one());
}

TEST_CASE("abstract-key certificates on the bundled chain") {
    auto nu = fixture_nu2();
    auto F = nu.field();

    auto c1 = is_abstract_key(nu, Poly::x(F));
    CHECK(c1.yes());
    CHECK(c1.route == KeyCertificate::Route::PrefixKey);
    CHECK_FALSE(c1.maximal);

    auto c2 = is_abstract_key(nu, Poly::from_ints(F, {2, 2, 1}));
    CHECK(c2.yes());
    CHECK(c2.route == KeyCertificate::Route::AugmentationClass);
    CHECK(c2.maximal);

    auto c3 = is_abstract_key(nu, Poly::from_ints(F, {2, 0, 1}));
    CHECK(c3.yes());
    CHECK(c3.maximal);

    // reducible: x * (x^2+2); the falsifier finds the factor
    auto c4 = is_abstract_key(nu, Poly::from_ints(F, {0, 2, 0, 1}));
    CHECK(c4.no());
    CHECK(c4.route == KeyCertificate::Route::Falsified);
    REQUIRE(c4.counterexample.has_value());
    CHECK(epsilon(nu, *c4.counterexample).epsilon >= epsilon(nu, Poly::from_ints(F, {0, 2, 0, 1})).epsilon);

    // degree-one polynomials are always keys
    auto c5 = is_abstract_key(nu, Poly::from_ints(F, {-3, 1}));
    CHECK(c5.yes());

    // degree above deg(nu): refuted by the maximal key's epsilon
    auto c6 = is_abstract_key(nu, Poly::from_ints(F, {1, 1, 0, 0, 1}));
    CHECK(c6.no());
    CHECK(c6.route == KeyCertificate::Route::Falsified);

    // a deg-4 MLV key of mu outside the class of x^2+2 is refuted structurally
    auto mu = fixture_mu2();
    Poly chi4 = Poly::from_ints(F, {4, 0, 2, 0, 1});
    REQUIRE(is_mlv_key(mu, chi4).yes);
    auto c7 = is_abstract_key(nu, chi4);
    CHECK(c7.no());
    CHECK(c7.route == KeyCertificate::Route::OverdegreePrefixKey);
}

TEST_CASE("support-generator route") {
    auto nu = fixture_nu2();
    auto F = nu.field();
    Poly phi = Poly::from_ints(F, {2, 0, 1});
    auto supp = augment(nu, Poly::from_ints(F, {2, 2, 1}), ExtValue::infinity(1));
    CHECK(supp.has_infinite_support());
    // on the support, epsilon is infinite with I pinned at the multiplicity
    auto er = epsilon(supp, Poly::from_ints(F, {2, 2, 1}));
    CHECK(er.epsilon.is_infinity());
    CHECK(er.i_set == std::set<long>({1}));
    auto c = is_abstract_key(supp, Poly::from_ints(F, {2, 2, 1}));
    CHECK(c.yes());
    CHECK(c.route == KeyCertificate::Route::SupportGenerator);
    CHECK(c.maximal);
    // a multiple of the support generator is refuted via epsilon = inf
    auto cm = is_abstract_key(supp, Poly::from_ints(F, {2, 2, 1}) * Poly::x(F));
    CHECK(cm.no());
    // degree-one keys survive
    CHECK(is_abstract_key(supp, Poly::x(F)).yes());
    (void)phi;
}

TEST_CASE("truncated derivative inequality for verified keys") {
    std::mt19937_64 rng(61);
    auto nu = fixture_nu2();
    auto F = nu.field();
    for (const Poly& Q : {Poly::x(F), Poly::from_ints(F, {2, 0, 1})}) {
        ExtValue eq = epsilon(nu, Q).epsilon;
        for (int i = 0; i < 60; ++i) {
            Poly f = random_poly(F, 6, rng);
            auto [vf, sf] = nu.truncate_eval(Q, f);
            if (vf.is_infinity()) continue;
            for (long b = 1; b <= f.deg(); ++b) {
                Poly df = hasse_derivative(f, b);
                if (df.is_zero()) continue;
                auto [vd, sd] = nu.truncate_eval(Q, df);
                CHECK(vd >= vf - eq.scaled(Rat(b)));
            }
        }
    }
}

TEST_CASE("division by a key puts the value on the remainder") {
    std::mt19937_64 rng(67);
    auto nu = fixture_nu2();
    auto F = nu.field();
    Poly Q = Poly::from_ints(F, {2, 0, 1});
    ExtValue eQ = epsilon(nu, Q).epsilon;
    int ran = 0;
    for (int i = 0; i < 120; ++i) {
        Poly f = random_poly(F, 6, rng);
        if (f.deg() < 1) continue;
        if (!(epsilon(nu, f).epsilon < eQ)) continue;
        Poly q, a;
        divrem(f, Q, q, a);
        if (q.is_zero()) continue;
        CHECK(nu.evaluate(f) == nu.evaluate(a));
        CHECK(nu.evaluate(a) < nu.evaluate(q * Q));
        ++ran;
    }
    CHECK(ran > 10);
}

TEST_CASE("epsilon order matches truncation order") {
    std::mt19937_64 rng(71);
    auto nu = fixture_nu2();
    auto F = nu.field();
    Poly Q = Poly::x(F);
    Poly Qp = Poly::from_ints(F, {2, 0, 1});
    ExtValue e1 = epsilon(nu, Q).epsilon, e2 = epsilon(nu, Qp).epsilon;
    REQUIRE(e1 < e2);
    // nu_Q <= nu_{Q'} on samples
    for (int i = 0; i < 80; ++i) {
        Poly f = random_poly(F, 6, rng);
        CHECK(nu.truncate_eval(Q, f).first <= nu.truncate_eval(Qp, f).first);
    }
    // strict inequality iff nu_Q(Q') < nu(Q')
    CHECK(nu.truncate_eval(Q, Qp).first < nu.evaluate(Qp));
    // and nu_{Q'}(Q) = nu(Q)
    CHECK(nu.truncate_eval(Qp, Q).first == nu.evaluate(Q));
}

TEST_CASE("the minimal key's epsilon dominates") {
    std::mt19937_64 rng(73);
    auto nu = fixture_nu2();
    auto F = nu.field();
    ExtValue emax = epsilon(nu, nu.key_poly()).epsilon;
    for (int i = 0; i < 100; ++i) {
        Poly f = random_poly(F, 6, rng);
        if (f.deg() < 1) continue;
        CHECK(epsilon(nu, f).epsilon <= emax);
    }
}

TEST_CASE("I(Q) of verified keys consists of p-powers") {
    auto nu = fixture_f2t();
    auto F = nu.field();
    Poly key(F, {F->t(), F->zero(), F->one()});
    auto rep = epsilon(nu, key);
    for (long b : rep.i_set) {
        while (b % 2 == 0) b /= 2;
        CHECK(b == 1);
    }
    auto nq = fixture_nu2();
    for (long b : epsilon(nq, nq.key_poly()).i_set) {
        while (b % 2 == 0) b /= 2;
        CHECK(b == 1);
    }
}

TEST_CASE("undetermined verdicts surface the exhausted budget") {
    auto nu = fixture_nu2();
    auto F = nu.field();
    // not structurally certified either way; a zero budget leaves it open
    Poly Q = Poly::from_ints(F, {4, 2, 1});
    auto cert = is_abstract_key(nu, Q, 0);
    CHECK(cert.verdict == KeyCertificate::Verdict::Undetermined);
    CHECK(cert.route == KeyCertificate::Route::SampledOnly);
    // with an honest budget the falsifier settles it
    auto cert2 = is_abstract_key(nu, Q, 200);
    CHECK(cert2.no());
}

TEST_CASE("structural verdicts agree with the falsifier on a small grid") {
    auto nu = fixture_nu2();
    auto F = nu.field();
    for (long c0 = -2; c0 <= 2; ++c0)
        for (long c1 = -2; c1 <= 2; ++c1) {
            Poly Q = Poly::from_ints(F, {c0, c1, 1});
            auto cert = is_abstract_key(nu, Q, 400);
            auto witness = epsilon_falsifier(nu, Q, 400);
            if (cert.yes()) CHECK_FALSE(witness.has_value());
            if (witness.has_value()) CHECK_FALSE(cert.yes());
        }
}
