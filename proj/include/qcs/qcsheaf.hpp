#pragma once

#include <optional>
#include <string>

#include "qcs/etale.hpp"
#include "qcs/qz.hpp"

namespace qcs {

// Quasicharacter sheaf on a finite etale group model, stored as explicit
// cocycle tables with values in Q/Z:
//   a : A x A -> Q/Z   (multiplicative structure, row-major over the element
//                       enumeration of the base model)
//   b : A -> Q/Z       (Frobenius structure)
// subject to: a is a 2-cocycle, a(Fx,Fy) - a(x,y) = b(x+y) - b(x) - b(y),
// and the normalizations a(0,-) = a(-,0) = 0, b(0) = 0.
struct QCSheafModel {
    EtaleGroupModel base;
    std::vector<QZ> a; // size N*N, index (ix, iy) -> ix*N + iy
    std::vector<QZ> b; // size N

    const QZ& aa(size_t ix, size_t iy, size_t n) const { return a[ix * n + iy]; }
};

// Precomputed element tables for one base model.
struct SheafOps {
    explicit SheafOps(const EtaleGroupModel& e);
    size_t size() const { return idx.size(); }
    size_t add(size_t i, size_t j) const { return addt[i * n + j]; }
    size_t frob(size_t i) const { return frobt[i]; }
    size_t neg(size_t i) const { return negt[i]; }

    ElementIndex idx;
    size_t n;
    std::vector<size_t> addt, frobt, negt;
};

struct SheafViolation {
    std::string kind;           // "cocycle", "frobenius", "normalization", "shape"
    std::vector<size_t> where;  // offending element indices
};

struct SheafDiagnostics {
    std::vector<SheafViolation> violations;
    bool ok() const { return violations.empty(); }
};

SheafDiagnostics validate(const QCSheafModel& q);
SheafDiagnostics validate(const QCSheafModel& q, const SheafOps& ops);

QCSheafModel unit_sheaf(const EtaleGroupModel& e);
QCSheafModel tensor(const QCSheafModel& q1, const QCSheafModel& q2);
QCSheafModel dual(const QCSheafModel& q);

// Function-sheaf dictionary, one direction: the trace of Frobenius, a
// character of the group of rational points.
Character trace(const QCSheafModel& q);
Character trace(const QCSheafModel& q, const FixedPoints& fp);

// The other direction: the sheaf with trivial multiplicative twist whose
// trace is the given character of the rational points.
QCSheafModel sheaf_from_character(const EtaleGroupModel& e, const Character& chi);

// Shift (a, b) by the coboundary of delta : A -> Q/Z; yields an isomorphic
// sheaf. delta is indexed by the element enumeration.
QCSheafModel twist(const QCSheafModel& q, const std::vector<QZ>& delta);

struct IsoResult {
    // delta realizing the isomorphism, when one exists
    std::optional<std::vector<QZ>> witness;
    // otherwise, a row of the linear system that cannot be satisfied
    int obstruction_row = -1;
    bool isomorphic() const { return witness.has_value(); }
};
IsoResult is_isomorphic(const QCSheafModel& q1, const QCSheafModel& q2);

struct HomSetDescription {
    bool empty;                                // no nonzero morphisms at all
    std::optional<std::vector<QZ>> witness;    // some isomorphism, when nonempty
    Int torsor_size;                           // number of isomorphisms (0 if empty)
};
HomSetDescription hom_set(const QCSheafModel& q1, const QCSheafModel& q2);

// Automorphisms of a sheaf = characters of the Frobenius coinvariants of the
// base, listed as the twist functions delta that realize them.
struct AutomorphismGroup {
    FgAbGroup group;                       // isomorphism type (coinvariants)
    std::vector<Character> characters;     // characters of that group
    std::vector<std::vector<QZ>> deltas;   // matching twist tables on the base
};
AutomorphismGroup automorphisms(const QCSheafModel& q);

// Pull back along a Frobenius-equivariant homomorphism f : src -> base(q).
QCSheafModel pullback(const QCSheafModel& q, const GroupHom& f, const EtaleGroupModel& src);

struct ExternalProduct {
    ProductModel prod;
    QCSheafModel sheaf;
};
ExternalProduct external_product(const QCSheafModel& q1, const QCSheafModel& q2);

// Norm along a degree-n base extension: same tables for a, the Frobenius
// table summed along the Frobenius orbit of length n.
QCSheafModel norm_functor(const QCSheafModel& q, int n);

// e(x, y) = a(x, y) - a(y, x); a well-defined invariant of the class.
std::vector<QZ> commutator_pairing(const QCSheafModel& q);

// Coboundary matrix of the base model: maps delta (N unknowns) to the pair
// of table shifts (N*N rows for a, then N rows for b). Shared by the
// isomorphism test and the cohomology enumeration.
IntMatrix coboundary_matrix(const SheafOps& ops);

} // namespace qcs
