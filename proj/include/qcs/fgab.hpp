#pragma once

#include <vector>

#include "qcs/int_matrix.hpp"

namespace qcs {

// Finitely generated abelian group in invariant-factor form:
// factors d_1 | d_2 | ... with 0 encoding a free summand (zeros trail) and
// no factor equal to 1. Elements are coordinate vectors, coordinate i
// reduced mod d_i (free coordinates unreduced).
struct FgAbGroup {
    std::vector<Int> factors;

    static FgAbGroup trivial() { return FgAbGroup{}; }
    static FgAbGroup free_of_rank(int n) { return FgAbGroup{std::vector<Int>(n, Int(0))}; }

    int rank() const { return int(factors.size()); } // number of generators
    bool is_finite() const;
    bool is_trivial() const { return factors.empty(); }
    Int order() const;    // finite groups only
    Int exponent() const; // finite groups only; 1 for the trivial group
    bool valid() const;   // divisibility chain, zeros trailing, no unit factors

    std::vector<Int> reduce(std::vector<Int> x) const;
    bool is_zero(const std::vector<Int>& x) const;
    std::vector<Int> zero() const { return std::vector<Int>(factors.size(), Int(0)); }

    std::vector<std::vector<Int>> elements() const; // finite groups, lexicographic

    bool operator==(const FgAbGroup& o) const { return factors == o.factors; }
    bool operator!=(const FgAbGroup& o) const { return !(*this == o); }
};

// Homomorphism given on generators; column j of `matrix` is the image of
// the j-th source generator.
struct GroupHom {
    FgAbGroup source, target;
    IntMatrix matrix;

    static GroupHom identity(const FgAbGroup& g);

    bool well_defined() const;
    std::vector<Int> apply(const std::vector<Int>& x) const;
    GroupHom compose(const GroupHom& inner) const; // (*this) after inner
    bool equals(const GroupHom& o) const;          // same map, compared in the target
};

struct FrobModule {
    FgAbGroup group;
    GroupHom frob; // automorphism of `group`
    bool valid() const;
};

// Reduce every column of m as an element vector of g.
IntMatrix reduce_columns(IntMatrix m, const FgAbGroup& g);

// Presentation of a quotient Z^rows / column-span(relations):
// proj maps ambient coordinates to normal-form coordinates, sect is a
// right inverse (proj * sect = I), used to transport endomorphisms.
struct Presentation {
    FgAbGroup group;
    IntMatrix proj, sect;
};
Presentation from_presentation(const IntMatrix& relations);

struct Subgroup {
    FgAbGroup group;
    GroupHom inclusion;
};
struct Quotient {
    FgAbGroup group;
    GroupHom projection;
    IntMatrix sect; // lift of generators, projection-section identity holds
};

Subgroup hom_kernel(const GroupHom& f);
Quotient hom_cokernel(const GroupHom& f);

bool is_automorphism(const GroupHom& f);
GroupHom hom_inverse(const GroupHom& f);

GroupHom frob_minus_id(const FrobModule& m);

Subgroup invariants(const FrobModule& m);    // ker(F - 1)
Quotient coinvariants(const FrobModule& m);  // coker(F - 1)

// Exterior square with the induced automorphism: generators e_i ^ e_j
// (i < j, lexicographic), orders gcd(d_i, d_j); the map takes 2x2 minors.
FrobModule exterior_square(const FrobModule& m);

// Shape of the character group: dual of Z^r + sum Z/n_i is r divisible
// copies plus the same torsion.
struct DualStructure {
    int divisible_rank = 0;
    std::vector<Int> torsion;
    bool is_trivial() const { return divisible_rank == 0 && torsion.empty(); }
    Int torsion_order() const;
    bool operator==(const DualStructure& o) const {
        return divisible_rank == o.divisible_rank && torsion == o.torsion;
    }
};
DualStructure dual_structure(const FgAbGroup& g);
DualStructure dual_of_coinvariants(const FrobModule& m);

// Q/Z-valued character given by generator values.
struct Character {
    FgAbGroup domain;
    std::vector<QZ> values;

    bool well_defined() const;
    QZ eval(const std::vector<Int>& x) const;
    bool operator==(const Character& o) const { return domain == o.domain && values == o.values; }
};

// All characters of a finite group, lexicographic in the value tuples.
std::vector<Character> all_characters(const FgAbGroup& g);

// Extension of chi along an injective inclusion, exact; exists by
// divisibility of Q/Z.
Character extend_character(const GroupHom& inclusion, const Character& chi);

// Index scheme for the elements of a finite group: mixed radix,
// coordinate 0 most significant.
class ElementIndex {
public:
    explicit ElementIndex(FgAbGroup g, unsigned long max_size = 4'000'000UL);

    const FgAbGroup& group() const { return g_; }
    size_t size() const { return n_; }
    std::vector<Int> at(size_t i) const;
    size_t index(const std::vector<Int>& x) const;
    size_t add(size_t i, size_t j) const;
    size_t neg(size_t i) const;
    size_t zero() const { return 0; }

    // f's action as an index map; f must land in the group indexed by `target`.
    std::vector<size_t> hom_table(const GroupHom& f, const ElementIndex& target) const;

private:
    FgAbGroup g_;
    size_t n_;
    std::vector<unsigned long> dims_;
};

} // namespace qcs
