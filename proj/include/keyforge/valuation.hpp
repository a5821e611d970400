#ifndef KEYFORGE_VALUATION_HPP
#define KEYFORGE_VALUATION_HPP

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "keyforge/algebra.hpp"
#include "keyforge/finite_field.hpp"
#include "keyforge/ordgroup.hpp"

namespace keyforge {

// One ordinary augmentation [mu; phi, gamma] on top of the previous level.
struct AugmentationStep {
    Poly phi;        // monic MLV key polynomial for the previous valuation
    ExtValue gamma;  // new value, > previous(phi); infinity only at the last step
    int mlv_case = 0;            // certificate: key-test case 1 or 2
    std::vector<RElem> residual; // case 2: R(phi) over the previous kappa
};

// A valuation on K[x] represented as a finite MacLane chain: a degree-one
// root nu0(sum a_i phi0^i) = min_i (v(a_i) + i*gamma0) followed by ordinary
// augmentations. Handles are immutable and cheap to copy.
class ValuationHandle {
public:
    ValuationHandle() = default;

    static ValuationHandle degree_one(const BaseValuation& v, const Poly& phi0,
                                      const ExtValue& gamma0);

    // --- chain structure -------------------------------------------------
    const BaseValuation& base() const { return base_; }
    const GroupDescriptor& group() const { return base_.group; }
    const FieldPtr& field() const { return base_.field; }
    int depth() const { return static_cast<int>(steps_.size()); }
    const Poly& root_phi() const { return levels_[0].phi; }
    const ExtValue& root_gamma() const { return levels_[0].gamma; }
    const AugmentationStep& step(int i) const { return steps_[static_cast<size_t>(i)]; }
    int degree() const;              // deg(nu) = degree of the last key
    const Poly& key_poly() const;    // phi of the last level
    const ExtValue& key_gamma() const;
    bool finite_values() const;      // no infinite gamma anywhere
    bool has_infinite_support() const;
    ValuationHandle prefix(int steps_kept) const;
    bool extends(const ValuationHandle& mu) const; // structural prefix relation
    bool same_chain(const ValuationHandle& o) const;

    // --- evaluation -------------------------------------------------------
    ExtValue evaluate(const Poly& f) const;

    // nu_Q(f) = min nu(a_s Q^s) over the Q-expansion, with the argmin set S.
    std::pair<ExtValue, std::set<long>> truncate_eval(const Poly& Q, const Poly& f) const;

    // in_nu f == in_nu g, decided as nu(f-g) > nu(f) = nu(g).
    bool equivalent_in(const Poly& f, const Poly& g) const;

    // --- value groups ------------------------------------------------------
    struct ValueGroupData {
        std::vector<ExtValue> gens_full;  // generators of Gamma_nu
        std::vector<ExtValue> gens_small; // generators of Gamma_{nu, deg nu}
        long e_rel = 1;
    };
    ValueGroupData value_group_data() const;

    // --- residual machinery -------------------------------------------------
    // e_rel and a stored normalizer u (deg u < deg nu, nu(u) = e_rel*nu(key)).
    bool commensurable_top() const;
    long e_rel_top() const;
    bool residual_available() const; // finite residue field and commensurable chain
    const Poly& normalizer_top() const;
    RFPtr kappa_top() const;

    // Image of in(g)/in(h) in kappa_top; requires nu(g) = nu(h) finite.
    RElem unit_ratio(const Poly& g, const Poly& h) const;

    // Residual polynomial operator R_{nu,phi,u}(f) as coefficients over
    // kappa_top (low first). phi must be an MLV key of minimal degree.
    std::vector<RElem> residual_coeffs(const Poly& phi, const Poly& u_rep, const Poly& f) const;

    std::string describe() const;

    // Internal: append a validated step (augment() performs the checks).
    ValuationHandle with_step_unchecked(const Poly& phi, const ExtValue& gamma, int mlv_case,
                                        const std::vector<RElem>& residual) const;

private:
    struct Level {
        Poly phi;
        ExtValue gamma;
        // Generators (with polynomial witnesses) of {nu(a) : deg a < deg phi}.
        std::vector<ExtValue> small_gens;
        std::vector<Poly> small_wits;
        std::optional<long> e;  // order of gamma modulo the small lattice
        std::optional<Poly> u;  // normalizer with nu(u) = e*gamma
        RFPtr kappa;            // residue field kappa(nu_level); null if unavailable
        RElem xi_image;         // image of the previous level's xi in kappa
        bool xi_defined = false;
        bool xi_zero = false;   // equal-class step: previous xi collapses to 0
    };

    struct RatioData {
        long k = 0;  // exponent of xi_level
        RElem C;     // unit constant in kappa_level
        std::vector<RElem> rg, rh; // normalized digit polynomials over kappa_level
    };

    ExtValue eval_level(int level, const Poly& f) const;
    RatioData ratio_data(int level, const Poly& G, const Poly& H) const;
    RElem small_ratio(int level, const Poly& G, const Poly& H) const;
    RElem eval_ratio_at(int level, const RatioData& d) const;
    void build_level_tail(Level& lv, int level_index, int mlv_case,
                          const std::vector<RElem>& residual);
    Poly realize_small_value(const Level& lv, const ExtValue& target, long order,
                             const std::vector<Int>& coeffs) const;

    BaseValuation base_;
    std::vector<AugmentationStep> steps_;
    std::vector<Level> levels_; // [0] root, [i] = step i
};

ValuationHandle make_degree_one(const BaseValuation& v, const Poly& phi0, const ExtValue& gamma0);

// Ordinary augmentation [nu; phi, gamma]. Validates that phi is an MLV key
// polynomial for nu and that gamma > nu(phi).
ValuationHandle augment(const ValuationHandle& nu, const Poly& phi, const ExtValue& gamma);

// Representative and degree of Phi_{mu,nu} for structurally nested chains.
std::pair<Poly, int> phi_class(const ValuationHandle& mu, const ValuationHandle& nu);

} // namespace keyforge

#endif
