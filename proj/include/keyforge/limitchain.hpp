#ifndef KEYFORGE_LIMITCHAIN_HPP
#define KEYFORGE_LIMITCHAIN_HPP

#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "keyforge/keypoly.hpp"
#include "keyforge/valuation.hpp"

namespace keyforge {

// Generator of a continuous MacLane chain rho_0 -> rho_1 -> ... of constant
// stable degree m: rho_i = [rho_{i-1}; chi_i, beta_i].
struct ChainSpec {
    ValuationHandle base; // rho_0
    int stable_degree = 1;

    struct Explicit {
        std::vector<std::pair<Poly, ExtValue>> steps; // (chi_i, beta_i), i >= 1
    };
    // chi_i = x - a_i with a_i the Newton/Hensel lift of sqrt(d) in Z_p,
    // beta_i = v_p(a_i^2 - d) - v_p(2).
    struct HenselSqrt {
        long p = 2;
        Int d = 17;
        Int seed = 1;
    };
    // chi_i = x - (t + t^2 + ... + t^i) over F_q(t), beta_i = i + 1; the
    // partial sums converge to t/(1-t), so the chain is inessential.
    struct Geometric {};
    std::variant<Explicit, HenselSqrt, Geometric> rule = Explicit{};

    std::optional<Poly> declared_witness;
    std::optional<Poly> second_witness;

    // Tail behaviour of (beta_i) for the boundedness classification.
    struct TailNone {};
    struct TailUnbounded {};
    struct TailSup {
        ExtValue sup;
    };
    struct TailAffine {
        ExtValue base, slope; // beta_i = base + i*slope
    };
    std::variant<TailNone, TailUnbounded, TailSup, TailAffine> tail = TailNone{};
};

// Materialization front-end with an internally synchronized memo table.
class LimitChain {
public:
    explicit LimitChain(ChainSpec spec);
    LimitChain(const LimitChain&) = delete;
    LimitChain& operator=(const LimitChain&) = delete;

    const ChainSpec& spec() const { return spec_; }
    int stable_degree() const { return spec_.stable_degree; }
    const FieldPtr& field() const { return spec_.base.field(); }
    const GroupDescriptor& group() const { return spec_.base.group(); }
    int max_depth() const;

    std::pair<Poly, ExtValue> element(int i) const; // (chi_i, beta_i), i >= 1
    ValuationHandle materialize(int i) const;       // rho_i, validated and cached

private:
    std::pair<Poly, ExtValue> produce_locked(int i) const;
    ChainSpec spec_;
    mutable std::mutex mu_;
    mutable std::vector<ValuationHandle> cache_;
    mutable std::vector<std::pair<Poly, ExtValue>> elems_;
    mutable std::vector<Int> hensel_a_;
};

struct StabilityReport {
    bool stable = false;
    ExtValue value;
    int at_index = -1; // index certifying the stable value
    int budget = 0;    // probed depth when not stabilized
    std::string describe() const;
};

// rho_inf(f) when it stabilizes within budget. Degrees below the stable
// degree are structurally stable; otherwise two consecutive equal values
// are conclusive for chain-nested valuations.
StabilityReport stable_value(const LimitChain& chain, const Poly& f, int budget);

// Limit augmentation mu_{phi,gamma} as a truncation view: evaluation by
// phi-expansion with stable digit values. Not augmentable further.
class LimitValuation {
public:
    LimitValuation(const LimitChain& chain, Poly phi, ExtValue gamma, int budget);
    ExtValue evaluate(const Poly& f) const;

private:
    const LimitChain* chain_;
    Poly phi_;
    ExtValue gamma_;
    int budget_;
};

struct NonstableSearch {
    enum class Status { DeclaredVerified, CandidateFound, AllStableWithin };
    Status status = Status::AllStableWithin;
    int m_inf = -1;
    std::optional<Poly> witness;
    bool essential = false; // m_inf > m
    bool exact = false;     // true only with a declared witness
    std::string detail;
};

NonstableSearch find_nonstable_degree(const LimitChain& chain, int budget, int degree_bound);

struct ChainInvariants {
    std::vector<ExtValue> beta;             // beta_1..beta_depth
    std::vector<long> t_sequence;           // t_i(phi)
    long t_inf = 0;
    int i0 = 0;                             // first index stabilizing t_inf
    ExtValue alpha_inf;
    std::vector<std::set<long>> i_sets;     // I(chi_i) under a limit view
    long b_inf = 0;
    int j0 = 0;                             // first index with I(chi_i) = {b_inf} onward
    ExtValue delta_inf;
    std::vector<ExtValue> epsilon_sequence; // epsilon(chi_i)
    int m_inf = 0;
    bool classified = false;
    SeqClassification classification{Boundedness::UB, 1, ""};
    std::string classify_error;
};

ChainInvariants chain_invariants(const LimitChain& chain, const Poly& phi, int budget);

struct TheoremCheck {
    enum class Status { Pass, Fail, Skip };
    std::string name;
    Status status = Status::Skip;
    std::string detail;
};

struct TheoremReport {
    std::vector<TheoremCheck> lines;
    bool all_passed() const {
        for (const auto& l : lines)
            if (l.status == TheoremCheck::Status::Fail) return false;
        return true;
    }
};

TheoremReport check_limit_theorems(const LimitChain& chain, const Poly& phi, int budget);

} // namespace keyforge

#endif
