#pragma once

#include "qcs/fgab.hpp"

namespace qcs {

// Finite etale commutative group scheme over a finite field, presented by
// its geometric points plus the Frobenius automorphism.
struct EtaleGroupModel {
    FgAbGroup points;
    GroupHom frob;

    bool valid() const;
    FrobModule module() const { return FrobModule{points, frob}; }
    bool same_model(const EtaleGroupModel& o) const;
};

struct FixedPoints {
    FgAbGroup group;
    GroupHom inclusion; // into the ambient points
};
FixedPoints fixed_points(const EtaleGroupModel& e);

// Invariant-factor renormalization of a raw direct-sum presentation, with
// the change of coordinates needed to transport endomorphisms.
struct NormalizedModel {
    EtaleGroupModel model;
    IntMatrix proj, sect; // between raw coordinates and normal-form coordinates
};
NormalizedModel normalize_model(const std::vector<Int>& raw_factors, const IntMatrix& raw_frob);

struct ProductModel {
    EtaleGroupModel model;
    GroupHom embed1, embed2; // factor -> product, Frobenius-equivariant
    GroupHom split1, split2; // product -> factor, split the embeddings
};
ProductModel product(const EtaleGroupModel& e1, const EtaleGroupModel& e2);

// Same points, Frobenius replaced by its n-th power (ground field extension).
EtaleGroupModel base_change(const EtaleGroupModel& e, int n);

// Restriction of scalars along a degree-n extension: points are n-tuples,
// Frobenius shifts the tuple and applies the inner Frobenius to the wrapped
// coordinate.
struct WeilRestriction {
    EtaleGroupModel model;
    IntMatrix proj, sect; // tuple coordinates <-> normal form
    int copies = 0;
};
WeilRestriction weil_restriction(const EtaleGroupModel& inner, int n);

// x -> (x, Fx, ..., F^{n-1}x) into the restriction of the base change;
// equivariant, and an isomorphism onto the fixed locus data it models.
struct CanonicalInclusion {
    GroupHom hom;
    WeilRestriction restriction;
};
CanonicalInclusion canonical_inclusion(const EtaleGroupModel& e, int n);

} // namespace qcs
