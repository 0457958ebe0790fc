#pragma once
// Tori over local fields through their cocharacter lattices: component
// groups of the integral model from Galois data, and quasicharacter counts
// at finite level through truncated unit groups of the base ring.

#include <string>
#include <vector>

#include "qcs/fgab.hpp"
#include "qcs/int_matrix.hpp"

namespace qcs {

// Cocharacter lattice with the action of inertia generators and Frobenius.
// All matrices act on column vectors of length `rank` and must be
// invertible over the integers; the group generated by the inertia
// matrices must be finite (explored up to closure_bound elements) and
// Frobenius must normalize it.
struct GaloisLattice {
    int rank = 0;
    std::vector<IntMatrix> inertia;
    IntMatrix frob;
    unsigned long closure_bound = 1024;
};

// Every element of the group generated by the inertia matrices, identity
// first; validates shapes, unimodularity and finiteness.
std::vector<IntMatrix> inertia_closure(const GaloisLattice& l);

// Component group of the integral model: lattice coinvariants under
// inertia, with the automorphism induced by Frobenius.
FrobModule component_group(const GaloisLattice& l);

// Structure of the trace-trivial layer over the component group.
DualStructure torus_kernel(const GaloisLattice& l);

// Dual of the lattice coinvariants under the full group generated by
// inertia and Frobenius.
DualStructure torus_aut(const GaloisLattice& l);

// Base ring truncated at a finite level: residue characteristic p, residue
// field of size p^f, truncation level n (so p-adic means Z/p^(n+1), laurent
// means F_q[t]/(t^(n+1)) with q = p^f).
struct RingSpec {
    std::string kind;    // "p-adic" or "laurent"
    unsigned long p = 0; // prime
    unsigned long f = 1; // residue degree; 1 for p-adic
    int level = 0;
    Int q() const;
    bool valid() const;
};

// Unit group of the truncated ring, computed by exhaustive element-order
// statistics rather than a closed formula; `bound` caps the unit count.
FgAbGroup truncated_units(const RingSpec& r, unsigned long bound = 1'000'000UL);

// Quasicharacters of a split torus at finite level: order and invariant
// factors of (units)^rank. Requires empty inertia and identity Frobenius.
struct QuasicharCount {
    Int order;
    std::vector<Int> factors;
};
QuasicharCount quasicharacter_count(const GaloisLattice& l, const RingSpec& r,
                                    unsigned long bound = 1'000'000UL);

// Compatibility of two levels n <= m of the same ring: the truncation map
// on units must be surjective with kernel of the predicted order, so the
// dual tower embeds.
struct LevelCheck {
    Int low_order, high_order;
    bool surjective = false;
    Int kernel_order;
    Int expected_kernel;
    bool dual_embeds = false;
    bool ok() const {
        return surjective && kernel_order == expected_kernel && dual_embeds;
    }
};
LevelCheck level_system_check(const RingSpec& low, int high_level,
                              unsigned long bound = 1'000'000UL);

} // namespace qcs
