#ifndef KEYFORGE_ORDGROUP_HPP
#define KEYFORGE_ORDGROUP_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "keyforge/rational.hpp"

namespace keyforge {

// Index set of a finite-rank lexicographically ordered QQ^r with infinity.
struct GroupDescriptor {
    int rank = 1;
    bool operator==(const GroupDescriptor& o) const { return rank == o.rank; }
};

enum class Ordering { LT, EQ, GT };

// Element of QQ^r_lex or the formal maximum `inf`. Addition, negation and
// rational scaling are coordinatewise; scaling realizes the divisible hull.
class ExtValue {
public:
    ExtValue() : inf_(false), c_(1, Rat(0)) {}
    static ExtValue infinity(int rank);
    static ExtValue zero(int rank);
    static ExtValue of(std::vector<Rat> coords);
    static ExtValue rank1(const Rat& v) { return of({v}); }
    // value v placed at 1-based coordinate `coord` of a rank-r group
    static ExtValue at_coord(int rank, int coord, const Rat& v);

    bool is_infinity() const { return inf_; }
    int rank() const { return static_cast<int>(c_.size()); }
    const std::vector<Rat>& coords() const;
    bool is_zero() const;

    ExtValue operator+(const ExtValue& o) const;
    ExtValue operator-(const ExtValue& o) const; // finite operands only
    ExtValue operator-() const;                  // finite only
    ExtValue scaled(const Rat& q) const;         // q > 0 for infinity

    bool operator==(const ExtValue& o) const;
    bool operator!=(const ExtValue& o) const { return !(*this == o); }
    bool operator<(const ExtValue& o) const;
    bool operator<=(const ExtValue& o) const;
    bool operator>(const ExtValue& o) const { return o < *this; }
    bool operator>=(const ExtValue& o) const { return o <= *this; }

    std::string to_string() const;

private:
    bool inf_;
    std::vector<Rat> c_;
};

// Total lexicographic order; infinity is the unique maximum.
Ordering lex_compare(const ExtValue& a, const ExtValue& b);

// 1-based position of the leading nonzero coordinate; identifies the
// principal convex subgroup H_gamma. Requires gamma finite and nonzero.
int principal_convex_index(const ExtValue& gamma);

// A strictly increasing sequence of positive values, given by a finite
// prefix plus a tail description.
struct SequenceDescriptor {
    struct ExplicitOnly {};
    struct AffineTail {
        ExtValue base, slope; // gamma(n) = base + n*slope for n > prefix size
    };
    struct AssertedSupremum {
        std::optional<ExtValue> sup; // nullopt: asserted to admit no bound
    };

    GroupDescriptor group;
    std::vector<ExtValue> prefix;
    std::variant<ExplicitOnly, AffineTail, AssertedSupremum> tail = ExplicitOnly{};
};

enum class Boundedness { VB, HB, UB };

std::string to_string(Boundedness b);

struct SeqClassification {
    Boundedness cls;
    int hs_index = 1; // 1-based position of H_S in the index set
    std::string witness;
};

// Trichotomy of Definition VB/HB/UB. ExplicitOnly tails are refused
// (NotClassifiable); non-increasing or non-positive data is a DomainError.
SeqClassification classify_sequence(const SequenceDescriptor& s);

} // namespace keyforge

#endif
