#include "keyforge/keypoly.hpp"

#include <algorithm>

namespace keyforge {

RElem residue_of_unit(const ValuationHandle& nu, const Poly& g, const Poly& h) {
    return nu.unit_ratio(g, h);
}

ResidualPoly residual_polynomial(const ValuationHandle& nu, const Poly& phi, const Poly& u_rep,
                                 const Poly& f) {
    MlvKeyResult key = is_mlv_key(nu, phi);
    if (!key.yes || phi.deg() != nu.degree())
        throw KeyRequired("expansion base must be an MLV key of minimal degree");
    ResidualPoly out;
    out.kappa = nu.kappa_top();
    out.coeffs = nu.residual_coeffs(phi, u_rep, f);
    return out;
}

MlvKeyResult is_mlv_key(const ValuationHandle& nu, const Poly& chi) {
    if (!chi.valid() || !chi.is_monic()) throw DomainError("MLV key test needs a monic polynomial");
    if (chi.deg() < 1) throw DomainError("MLV key test needs positive degree");
    if (!nu.finite_values())
        throw DomainError("a valuation with nonzero support has no MLV key polynomials");

    const int m = nu.degree();
    if (chi.deg() < m) return {};

    // Case 1: same degree and nu-equivalent to the distinguished minimal key.
    if (chi.deg() == m) {
        if (chi == nu.key_poly() || nu.equivalent_in(chi, nu.key_poly()))
            return {true, 1, {}};
    }

    // Case 2 requires a commensurable chain; over an incommensurable top
    // level the key polynomials form the single equivalence class above.
    if (!nu.commensurable_top()) return {};
    const long e = nu.e_rel_top();
    if (chi.deg() % (static_cast<long>(m) * e) != 0) return {};
    if (!nu.residual_available())
        throw ResidualUnavailable(
            "case-2 key test needs a finite residue field (base " + nu.base().describe() + ")");

    std::vector<RElem> R = nu.residual_coeffs(nu.key_poly(), nu.normalizer_top(), chi);
    const long dR = static_cast<long>(R.size()) - 1;
    if (dR < 1) return {};
    if (chi.deg() != static_cast<long>(m) * e * dR) return {};
    if (!rp_irreducible(rp_make(nu.kappa_top(), R))) return {};
    return {true, 2, std::move(R)};
}

std::string KeyCertificate::route_name() const {
    switch (route) {
        case Route::DegreeOne: return "degree-one";
        case Route::SupportGenerator: return "support-generator";
        case Route::AugmentationClass: return "augmentation class";
        case Route::PrefixKey: return "equal-degree prefix key";
        case Route::MinimalKey: return "minimal-degree key";
        case Route::OverdegreePrefixKey: return "prefix key outside its class";
        case Route::Falsified: return "falsified";
        default: return "sampled-only";
    }
}

// Coefficient pool for budgeted grid searches, by base-field kind.
std::vector<Elem> small_coefficient_pool(const ValuationHandle& nu) {
    const FieldPtr& F = nu.field();
    std::vector<Elem> pool;
    auto push_unique = [&pool](const Elem& e) {
        for (const auto& x : pool)
            if (x == e) return;
        pool.push_back(e);
    };
    switch (F->kind) {
        case Field::Kind::Rationals: {
            for (long n = 0; n <= 4; ++n) {
                push_unique(F->from_int(n));
                push_unique(F->from_int(-n));
            }
            if (nu.base().kind == BaseValuation::Kind::PAdic) {
                long p = nu.base().p;
                push_unique(F->from_int(p));
                push_unique(F->from_int(-p));
                push_unique(F->from_int(2 * p));
                push_unique(F->from_int(p * p));
                push_unique(F->from_int(-p * p));
            }
            break;
        }
        case Field::Kind::Finite: {
            for (const auto& a : all_elements(F->fq)) push_unique(F->from_ff(a));
            break;
        }
        case Field::Kind::RatFuncF: {
            std::vector<RElem> coeffs = all_elements(F->fq);
            Elem t = F->t();
            // all t-polynomials of t-degree <= 2
            for (const auto& c0 : coeffs)
                for (const auto& c1 : coeffs)
                    for (const auto& c2 : coeffs) {
                        Elem v = F->from_ff(c0) + F->from_ff(c1) * t + F->from_ff(c2) * t * t;
                        push_unique(v);
                    }
            break;
        }
        default: { // RatFuncQ
            Elem t = F->t();
            for (long a = -2; a <= 2; ++a)
                for (long b = -2; b <= 2; ++b)
                    push_unique(F->from_int(a) + F->from_int(b) * t);
            break;
        }
    }
    return pool;
}

std::optional<Poly> epsilon_falsifier(const ValuationHandle& nu, const Poly& Q, long budget,
                                      long* used) {
    if (Q.deg() < 1) throw DomainError("falsifier needs positive degree");
    long spent = 0;
    auto charge = [&]() {
        ++spent;
        if (used) *used = spent;
        return spent <= budget;
    };
    ExtValue eq = epsilon(nu, Q).epsilon;

    auto beats = [&](const Poly& f) {
        if (f.deg() < 1 || f.deg() >= Q.deg()) return false;
        ExtValue ef = epsilon(nu, f).epsilon;
        return ef >= eq;
    };

    // Seed: the chain's own key polynomials of smaller degree.
    std::vector<Poly> seeds;
    seeds.push_back(nu.root_phi());
    for (int i = 0; i < nu.depth(); ++i) seeds.push_back(nu.step(i).phi);
    for (const auto& f : seeds) {
        if (f.deg() < 1 || f.deg() >= Q.deg()) continue;
        if (!charge()) return std::nullopt;
        if (beats(f)) return f;
    }

    // Grid: monic polynomials, degree ascending, coefficient tuples in
    // mixed-radix order over the pool (smallest counterexample wins).
    std::vector<Elem> pool = small_coefficient_pool(nu);
    const FieldPtr& F = nu.field();
    for (int d = 1; d < Q.deg(); ++d) {
        std::vector<size_t> idx(static_cast<size_t>(d), 0);
        while (true) {
            std::vector<Elem> coeffs;
            coeffs.reserve(static_cast<size_t>(d) + 1);
            for (int i = 0; i < d; ++i) coeffs.push_back(pool[idx[static_cast<size_t>(i)]]);
            coeffs.push_back(F->one());
            Poly f(F, std::move(coeffs));
            if (!charge()) return std::nullopt;
            if (beats(f)) return f;
            // advance mixed radix
            int pos = 0;
            while (pos < d) {
                if (++idx[static_cast<size_t>(pos)] < pool.size()) break;
                idx[static_cast<size_t>(pos)] = 0;
                ++pos;
            }
            if (pos == d) break;
        }
    }
    return std::nullopt;
}

KeyCertificate is_abstract_key(const ValuationHandle& nu, const Poly& Q, long budget) {
    if (!Q.valid() || !Q.is_monic() || Q.deg() < 1)
        throw DomainError("abstract-key test needs a monic polynomial of positive degree");
    KeyCertificate cert;

    auto checked_mlv = [](const ValuationHandle& v, const Poly& f) -> std::optional<MlvKeyResult> {
        try {
            return is_mlv_key(v, f);
        } catch (const ResidualUnavailable&) {
            return std::nullopt;
        }
    };

    auto fill_maximal = [&](KeyCertificate& c) {
        if (c.route == KeyCertificate::Route::SupportGenerator) {
            c.maximal = true;
            return;
        }
        if (nu.has_infinite_support() || Q.deg() != nu.degree()) return;
        auto r = checked_mlv(nu, Q);
        c.maximal = r.has_value() && r->yes;
    };

    // Support generator.
    if (nu.has_infinite_support() && Q == nu.key_poly()) {
        cert.verdict = KeyCertificate::Verdict::Yes;
        cert.route = KeyCertificate::Route::SupportGenerator;
        cert.prefix_level = nu.depth();
        fill_maximal(cert);
        return cert;
    }

    // Structural scan, augmentation-class route first.
    for (int i = 0; i < nu.depth(); ++i) {
        ValuationHandle mu = nu.prefix(i);
        const Poly& next = nu.step(i).phi;
        if (Q.deg() != next.deg()) continue;
        if (Q == next || mu.equivalent_in(Q, next)) {
            cert.verdict = KeyCertificate::Verdict::Yes;
            cert.route = KeyCertificate::Route::AugmentationClass;
            cert.prefix_level = i;
            cert.detail = "Q lies in the augmentation class at chain level " + std::to_string(i);
            fill_maximal(cert);
            return cert;
        }
    }
    // Equal-degree routes (a key for a prefix of its own degree), deepest first.
    for (int i = nu.depth(); i >= 0; --i) {
        ValuationHandle mu = nu.prefix(i);
        if (!mu.finite_values() || Q.deg() != mu.degree()) continue;
        auto r = checked_mlv(mu, Q);
        if (r && r->yes) {
            cert.verdict = KeyCertificate::Verdict::Yes;
            cert.route = (i == nu.depth()) ? KeyCertificate::Route::MinimalKey
                                           : KeyCertificate::Route::PrefixKey;
            cert.prefix_level = i;
            fill_maximal(cert);
            return cert;
        }
    }

    // Degree-one polynomials are always abstract keys.
    if (Q.deg() == 1) {
        cert.verdict = KeyCertificate::Verdict::Yes;
        cert.route = KeyCertificate::Route::DegreeOne;
        fill_maximal(cert);
        return cert;
    }

    // Refutation route: an MLV key for a strict prefix, of larger degree than
    // the prefix, lying outside the augmentation class, is never a key above.
    for (int i = 0; i < nu.depth(); ++i) {
        ValuationHandle mu = nu.prefix(i);
        if (Q.deg() <= mu.degree()) continue;
        auto r = checked_mlv(mu, Q);
        if (!r || !r->yes) continue;
        const Poly& next = nu.step(i).phi;
        bool in_class = Q.deg() == next.deg() && (Q == next || mu.equivalent_in(Q, next));
        if (!in_class) {
            cert.verdict = KeyCertificate::Verdict::No;
            cert.route = KeyCertificate::Route::OverdegreePrefixKey;
            cert.prefix_level = i;
            cert.detail = "MLV key for the level-" + std::to_string(i) +
                          " prefix, outside its augmentation class";
            return cert;
        }
    }

    // Degrees above deg(nu) cannot beat the maximal key's epsilon.
    if (nu.finite_values() && Q.deg() > nu.degree()) {
        const Poly& phimin = nu.key_poly();
        ExtValue ef = epsilon(nu, phimin).epsilon;
        ExtValue eq = epsilon(nu, Q).epsilon;
        if (ef >= eq) {
            cert.verdict = KeyCertificate::Verdict::No;
            cert.route = KeyCertificate::Route::Falsified;
            cert.counterexample = phimin;
            cert.detail = "epsilon(" + phimin.to_string() + ") >= epsilon(Q)";
            return cert;
        }
    }

    // Budgeted epsilon falsifier.
    long used = 0;
    std::optional<Poly> witness = epsilon_falsifier(nu, Q, budget, &used);
    cert.budget_used = used;
    if (witness) {
        cert.verdict = KeyCertificate::Verdict::No;
        cert.route = KeyCertificate::Route::Falsified;
        cert.counterexample = witness;
        cert.detail = "epsilon(" + witness->to_string() + ") >= epsilon(Q)";
        return cert;
    }
    cert.verdict = KeyCertificate::Verdict::Undetermined;
    cert.route = KeyCertificate::Route::SampledOnly;
    cert.detail = "no counterexample within budget " + std::to_string(budget);
    return cert;
}

} // namespace keyforge
