#ifndef KEYFORGE_KEYPOLY_HPP
#define KEYFORGE_KEYPOLY_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "keyforge/valuation.hpp"

namespace keyforge {

// epsilon(f) = max_b (nu(f) - nu(d_b f))/b together with the argmax set I(f)
// and the per-b table. When nu(f) = inf, epsilon = inf and I = {mult(f)}.
struct EpsilonReport {
    ExtValue epsilon;
    std::set<long> i_set;
    struct Row {
        ExtValue derivative_value;
        std::optional<ExtValue> quotient; // absent when the derivative value is inf
    };
    std::map<long, Row> table;
};

// Works for any valuation-like object exposing evaluate(Poly) -> ExtValue.
template <class V>
EpsilonReport epsilon(const V& nu, const Poly& f) {
    if (f.deg() < 1) throw DomainError("epsilon of a constant");
    EpsilonReport rep;
    ExtValue vf = nu.evaluate(f);
    if (vf.is_infinity()) {
        rep.epsilon = vf;
        rep.i_set = {multiplicity(f)};
        return rep;
    }
    bool have = false;
    for (long b = 1; b <= f.deg(); ++b) {
        Poly df = hasse_derivative(f, b);
        if (df.is_zero()) continue;
        ExtValue dv = nu.evaluate(df);
        EpsilonReport::Row row;
        row.derivative_value = dv;
        if (!dv.is_infinity()) {
            ExtValue q = (vf - dv).scaled(Rat(1, b));
            row.quotient = q;
            if (!have || q > rep.epsilon) {
                rep.epsilon = q;
                rep.i_set = {b};
                have = true;
            } else if (q == rep.epsilon) {
                rep.i_set.insert(b);
            }
        }
        rep.table.emplace(b, std::move(row));
    }
    if (!have) throw Error("internal: no finite Hasse-derivative value");
    return rep;
}

// Monic residual polynomial over the residue field kappa, in y, with a
// nonzero constant term.
struct ResidualPoly {
    RFPtr kappa;
    std::vector<RElem> coeffs; // low first
    int deg() const { return static_cast<int>(coeffs.size()) - 1; }
    std::string to_string() const { return rp_make(kappa, coeffs).to_string("y"); }
    bool operator==(const ResidualPoly& o) const {
        return rp_make(kappa, coeffs) == rp_make(o.kappa, o.coeffs);
    }
    bool operator!=(const ResidualPoly& o) const { return !(*this == o); }
};

// Image of in(g)/in(h) in kappa(nu); requires nu(g) = nu(h) finite and the
// ratio to be a unit of the graded algebra.
RElem residue_of_unit(const ValuationHandle& nu, const Poly& g, const Poly& h);

// R_{nu,phi,u_rep}(f): phi must be an MLV key of minimal degree for nu, and
// u_rep a polynomial of degree < deg(phi) with nu(u_rep) = e_rel(nu)*nu(phi).
ResidualPoly residual_polynomial(const ValuationHandle& nu, const Poly& phi, const Poly& u_rep,
                                 const Poly& f);

// MLV key decision: case 1 (equivalent to a minimal key) or case 2
// (deg chi = deg(nu) * e_rel * deg R(chi) with R(chi) irreducible).
struct MlvKeyResult {
    bool yes = false;
    int case_id = 0;             // 1 or 2 when yes
    std::vector<RElem> residual; // case 2: R(chi) over kappa(nu)
};
MlvKeyResult is_mlv_key(const ValuationHandle& nu, const Poly& chi);

// Abstract-key certificate.
struct KeyCertificate {
    enum class Verdict { Yes, No, Undetermined };
    enum class Route {
        DegreeOne,
        SupportGenerator,
        AugmentationClass,
        PrefixKey,
        MinimalKey,
        OverdegreePrefixKey,
        Falsified,
        SampledOnly
    };
    Verdict verdict = Verdict::Undetermined;
    Route route = Route::SampledOnly;
    bool maximal = false;
    int prefix_level = -1;            // chain prefix that certified the verdict
    std::optional<Poly> counterexample; // Falsified: f with epsilon(f) >= epsilon(Q)
    long budget_used = 0;
    std::string detail;

    bool yes() const { return verdict == Verdict::Yes; }
    bool no() const { return verdict == Verdict::No; }
    std::string route_name() const;
};

// Small deterministic coefficient pool for grid searches, chosen by the
// base-field kind (integers and p-powers over Q, whole fields over F_q,
// bounded t-polynomials over rational-function fields).
std::vector<Elem> small_coefficient_pool(const ValuationHandle& nu);

// Deterministic budgeted search for f with 0 < deg f < deg Q and
// epsilon(f) >= epsilon(Q). The candidate pool is seeded with the chain's
// key polynomials and continues over a small coefficient grid.
std::optional<Poly> epsilon_falsifier(const ValuationHandle& nu, const Poly& Q, long budget,
                                      long* used = nullptr);

KeyCertificate is_abstract_key(const ValuationHandle& nu, const Poly& Q, long budget = 2000);

} // namespace keyforge

#endif
