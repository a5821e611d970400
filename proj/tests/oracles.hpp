// Shared test fixtures and independent oracles. Everything here recomputes
// expected values by routes that do not share code with the library paths
// they check (identity-based division checks, big-integer binomials, direct
// min-formulas).
#ifndef KEYFORGE_TESTS_ORACLES_HPP
#define KEYFORGE_TESTS_ORACLES_HPP

#include <random>
#include <vector>

#include "keyforge/keypoly.hpp"
#include "keyforge/valuation.hpp"

namespace kft {

using namespace keyforge;

// ---- fixtures --------------------------------------------------------------

// mu: (Q, v_2), x -> 1/2
inline ValuationHandle fixture_mu2() {
    auto F = Field::rationals();
    auto v2 = BaseValuation::padic(F, 2, GroupDescriptor{1});
    return make_degree_one(v2, Poly::x(F), ExtValue::rank1(rat_of(1, 2)));
}

// nu = [mu; x^2+2, 3/2]
inline ValuationHandle fixture_nu2() {
    auto mu = fixture_mu2();
    auto F = mu.field();
    return augment(mu, Poly::from_ints(F, {2, 0, 1}), ExtValue::rank1(rat_of(3, 2)));
}

// F_3(t), t-adic, [x -> 1/2; x^2 - t -> 3/2]
inline ValuationHandle fixture_f3t() {
    auto F = Field::rational_functions_f(RFCtx::prime_field(3));
    auto vt = BaseValuation::tadic(F, GroupDescriptor{1});
    auto mu = make_degree_one(vt, Poly::x(F), ExtValue::rank1(rat_of(1, 2)));
    Poly phi(F, {-F->t(), F->zero(), F->one()});
    return augment(mu, phi, ExtValue::rank1(rat_of(3, 2)));
}

// F_2(t), t-adic, [x -> 1/2; x^2 + t -> 3/2]
inline ValuationHandle fixture_f2t() {
    auto F = Field::rational_functions_f(RFCtx::prime_field(2));
    auto vt = BaseValuation::tadic(F, GroupDescriptor{1});
    auto mu = make_degree_one(vt, Poly::x(F), ExtValue::rank1(rat_of(1, 2)));
    Poly phi(F, {F->t(), F->zero(), F->one()});
    return augment(mu, phi, ExtValue::rank1(rat_of(3, 2)));
}

// ---- random generation ------------------------------------------------------

inline Poly random_poly(const FieldPtr& F, int maxdeg, std::mt19937_64& rng, bool nonzero = true) {
    std::uniform_int_distribution<int> ddist(0, maxdeg);
    std::uniform_int_distribution<long> cdist(-9, 9);
    std::uniform_int_distribution<int> tdist(0, 2);
    for (;;) {
        int d = ddist(rng);
        std::vector<Elem> coeffs;
        for (int i = 0; i <= d; ++i) {
            Elem c = F->from_int(cdist(rng));
            if (F->kind == Field::Kind::RatFuncQ || F->kind == Field::Kind::RatFuncF)
                c = c + F->from_int(cdist(rng)) * F->t().pow(tdist(rng));
            coeffs.push_back(c);
        }
        Poly p(F, std::move(coeffs));
        if (!nonzero || !p.is_zero()) return p;
    }
}

// ---- independent oracles ----------------------------------------------------

// Binomial coefficient as a big integer (independent of the Pascal-in-field
// route used by hasse_derivative).
inline Int binom(long n, long b) {
    if (b < 0 || b > n) return Int(0);
    Int out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(b));
    return out;
}

// Degree-one evaluation by the raw min-formula, written directly against the
// base valuation (independent of ValuationHandle's expansion recursion).
inline ExtValue degree_one_oracle(const BaseValuation& v, const Elem& root_c,
                                  const ExtValue& gamma0, const Poly& f) {
    // f(x) = sum a_i (x - c)^i via Taylor shift computed with binomials
    const FieldPtr& F = f.field();
    int d = f.deg();
    ExtValue best = ExtValue::infinity(v.group.rank);
    for (int i = 0; i <= d; ++i) {
        // a_i = sum_{n>=i} C(n,i) f_n c^{n-i}
        Elem ai = F->zero();
        for (int n = i; n <= d; ++n)
            ai = ai + F->from_bigint(binom(n, i)) * f.at(n) * root_c.pow(n - i);
        if (ai.is_zero()) continue;
        ExtValue term = v.value(ai);
        if (i > 0) {
            if (gamma0.is_infinity()) continue;
            term = term + gamma0.scaled(Rat(i));
        }
        if (term < best) best = term;
    }
    return best;
}

} // namespace kft

#endif
