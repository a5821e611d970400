#include "keyforge/ordgroup.hpp"

#include <algorithm>

#include "keyforge/errors.hpp"

namespace keyforge {

ExtValue ExtValue::infinity(int rank) {
    ExtValue v;
    v.inf_ = true;
    v.c_.assign(static_cast<size_t>(rank), Rat(0));
    return v;
}

ExtValue ExtValue::zero(int rank) {
    ExtValue v;
    v.c_.assign(static_cast<size_t>(rank), Rat(0));
    return v;
}

ExtValue ExtValue::of(std::vector<Rat> coords) {
    if (coords.empty()) throw DomainError("ExtValue needs rank >= 1");
    ExtValue v;
    v.c_ = std::move(coords);
    for (auto& x : v.c_) x.canonicalize();
    return v;
}

ExtValue ExtValue::at_coord(int rank, int coord, const Rat& v) {
    if (coord < 1 || coord > rank) throw DescriptorError("embedding coordinate out of range");
    std::vector<Rat> c(static_cast<size_t>(rank), Rat(0));
    c[static_cast<size_t>(coord - 1)] = v;
    return of(std::move(c));
}

const std::vector<Rat>& ExtValue::coords() const {
    if (inf_) throw DomainError("coordinates of infinity");
    return c_;
}

bool ExtValue::is_zero() const {
    if (inf_) return false;
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

namespace {
void require_rank(const ExtValue& a, const ExtValue& b) {
    if (a.rank() != b.rank()) throw DescriptorError("ExtValue rank mismatch");
}
} // namespace

ExtValue ExtValue::operator+(const ExtValue& o) const {
    require_rank(*this, o);
    if (inf_ || o.inf_) return infinity(rank());
    std::vector<Rat> c(c_);
    for (size_t i = 0; i < c.size(); ++i) {
        c[i] += o.c_[i];
        c[i].canonicalize();
    }
    return of(std::move(c));
}

ExtValue ExtValue::operator-() const {
    if (inf_) throw DomainError("negation of infinity");
    std::vector<Rat> c;
    c.reserve(c_.size());
    for (const auto& x : c_) c.push_back(-x);
    return of(std::move(c));
}

ExtValue ExtValue::operator-(const ExtValue& o) const {
    require_rank(*this, o);
    if (o.inf_) throw DomainError("subtraction of infinity");
    if (inf_) return infinity(rank());
    return *this + (-o);
}

ExtValue ExtValue::scaled(const Rat& q) const {
    if (inf_) {
        if (q <= 0) throw DomainError("nonpositive scaling of infinity");
        return *this;
    }
    std::vector<Rat> c(c_);
    for (auto& x : c) {
        x *= q;
        x.canonicalize();
    }
    return of(std::move(c));
}

bool ExtValue::operator==(const ExtValue& o) const { return lex_compare(*this, o) == Ordering::EQ; }
bool ExtValue::operator<(const ExtValue& o) const { return lex_compare(*this, o) == Ordering::LT; }
bool ExtValue::operator<=(const ExtValue& o) const { return lex_compare(*this, o) != Ordering::GT; }

std::string ExtValue::to_string() const {
    if (inf_) return "inf";
    if (c_.size() == 1) return rat_str(c_[0]);
    std::string s = "(";
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i) s += ",";
        s += rat_str(c_[i]);
    }
    return s + ")";
}

Ordering lex_compare(const ExtValue& a, const ExtValue& b) {
    require_rank(a, b);
    if (a.is_infinity() && b.is_infinity()) return Ordering::EQ;
    if (a.is_infinity()) return Ordering::GT;
    if (b.is_infinity()) return Ordering::LT;
    for (int i = 0; i < a.rank(); ++i) {
        int c = cmp(a.coords()[i], b.coords()[i]);
        if (c < 0) return Ordering::LT;
        if (c > 0) return Ordering::GT;
    }
    return Ordering::EQ;
}

int principal_convex_index(const ExtValue& gamma) {
    if (gamma.is_infinity()) throw DomainError("principal_convex_index of infinity");
    const auto& c = gamma.coords();
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0) return static_cast<int>(i) + 1;
    throw DomainError("principal_convex_index of zero");
}

std::string to_string(Boundedness b) {
    switch (b) {
        case Boundedness::VB: return "VB";
        case Boundedness::HB: return "HB";
        default: return "UB";
    }
}

SeqClassification classify_sequence(const SequenceDescriptor& s) {
    const int r = s.group.rank;
    for (const auto& v : s.prefix) {
        if (v.is_infinity()) throw DomainError("sequence elements must be finite");
        if (v.rank() != r) throw DescriptorError("sequence element rank mismatch");
        if (!(v > ExtValue::zero(r))) throw DomainError("sequence elements must be positive");
    }
    for (size_t i = 0; i + 1 < s.prefix.size(); ++i)
        if (!(s.prefix[i] < s.prefix[i + 1])) throw DomainError("sequence prefix not strictly increasing");

    int hs = r + 1; // min over leading indices, computed below
    for (const auto& v : s.prefix) hs = std::min(hs, principal_convex_index(v));

    if (std::holds_alternative<SequenceDescriptor::ExplicitOnly>(s.tail))
        throw NotClassifiable("finite data cannot decide boundedness");

    if (const auto* aff = std::get_if<SequenceDescriptor::AffineTail>(&s.tail)) {
        if (aff->base.is_infinity() || aff->slope.is_infinity())
            throw DomainError("affine tail must be finite");
        if (aff->base.rank() != r || aff->slope.rank() != r)
            throw DescriptorError("affine tail rank mismatch");
        if (aff->slope.is_zero() || !(aff->slope > ExtValue::zero(r)))
            throw DomainError("affine tail does not increase strictly");
        const long n0 = static_cast<long>(s.prefix.size()) + 1;
        ExtValue first = aff->base + aff->slope.scaled(Rat(n0));
        if (!(first > ExtValue::zero(r))) throw DomainError("affine tail not positive");
        if (!s.prefix.empty() && !(first > s.prefix.back()))
            throw DomainError("affine tail does not continue the prefix increase");

        const int j = principal_convex_index(aff->slope);
        // eventual leading index of tail elements
        int tail_lead = j;
        for (int i = 0; i < j - 1; ++i)
            if (aff->base.coords()[i] != 0) {
                tail_lead = i + 1;
                break;
            }
        hs = std::min(hs, tail_lead);

        if (j == 1)
            return {Boundedness::UB, hs, "coordinate 1 grows without bound"};
        if (hs == j)
            return {Boundedness::HB, hs,
                    "bounded only outside H_S: coordinate " + std::to_string(j) + " grows"};
        // hs < j: a bound exists inside H_S
        std::vector<Rat> bound(static_cast<size_t>(r), Rat(0));
        for (int i = hs - 1; i < j - 1; ++i) bound[static_cast<size_t>(i)] = aff->base.coords()[i];
        bound[static_cast<size_t>(j - 2)] += 1;
        return {Boundedness::VB, hs, "bound " + ExtValue::of(bound).to_string() + " in H_S"};
    }

    const auto& a = std::get<SequenceDescriptor::AssertedSupremum>(s.tail);
    if (s.prefix.empty()) throw DomainError("asserted tail needs a nonempty prefix");
    if (!a.sup.has_value())
        return {Boundedness::UB, hs, "asserted: no upper bound"};
    const ExtValue& sup = *a.sup;
    if (sup.is_infinity()) return {Boundedness::UB, hs, "asserted supremum inf"};
    if (sup.rank() != r) throw DescriptorError("supremum rank mismatch");
    if (!(sup > s.prefix.back())) throw DomainError("asserted supremum does not bound the prefix");
    if (principal_convex_index(sup) >= hs)
        return {Boundedness::VB, hs, "supremum " + sup.to_string() + " lies in H_S"};
    return {Boundedness::HB, hs, "supremum " + sup.to_string() + " lies outside H_S"};
}

} // namespace keyforge
