#include "qcs/etale.hpp"

#include "qcs/error.hpp"

namespace qcs {

bool EtaleGroupModel::valid() const {
    if (!points.valid() || !points.is_finite()) return false;
    return module().valid();
}

bool EtaleGroupModel::same_model(const EtaleGroupModel& o) const {
    return points == o.points && frob.equals(o.frob);
}

FixedPoints fixed_points(const EtaleGroupModel& e) {
    Subgroup s = invariants(e.module());
    return FixedPoints{s.group, s.inclusion};
}

NormalizedModel normalize_model(const std::vector<Int>& raw_factors, const IntMatrix& raw_frob) {
    size_t m = raw_factors.size();
    if (raw_frob.rows() != int(m) || raw_frob.cols() != int(m))
        throw domain_error("etale.shape", "Frobenius matrix does not match the factor list");
    Presentation pres = from_presentation(IntMatrix::diagonal(raw_factors));
    IntMatrix f = reduce_columns(pres.proj * raw_frob * pres.sect, pres.group);
    GroupHom frob{pres.group, pres.group, f};
    if (!frob.well_defined())
        throw domain_error("etale.frobenius", "endomorphism does not descend to the normalized group");
    if (!is_automorphism(frob))
        throw domain_error("etale.frobenius", "Frobenius must be an automorphism");
    return NormalizedModel{EtaleGroupModel{pres.group, frob}, pres.proj, pres.sect};
}

ProductModel product(const EtaleGroupModel& e1, const EtaleGroupModel& e2) {
    int n1 = e1.points.rank(), n2 = e2.points.rank();
    std::vector<Int> raw = e1.points.factors;
    raw.insert(raw.end(), e2.points.factors.begin(), e2.points.factors.end());
    IntMatrix bd(n1 + n2, n1 + n2);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j) bd.at(i, j) = e1.frob.matrix.at(i, j);
    for (int i = 0; i < n2; ++i)
        for (int j = 0; j < n2; ++j) bd.at(n1 + i, n1 + j) = e2.frob.matrix.at(i, j);
    NormalizedModel nm = normalize_model(raw, bd);

    const FgAbGroup& prod = nm.model.points;
    // embeddings: include a factor into the tuple, then renormalize
    IntMatrix inc1(n1 + n2, n1), inc2(n1 + n2, n2);
    for (int j = 0; j < n1; ++j) inc1.at(j, j) = 1;
    for (int j = 0; j < n2; ++j) inc2.at(n1 + j, j) = 1;
    GroupHom embed1{e1.points, prod, reduce_columns(nm.proj * inc1, prod)};
    GroupHom embed2{e2.points, prod, reduce_columns(nm.proj * inc2, prod)};
    // splittings: lift to tuple coordinates, keep one block
    IntMatrix top(n1, nm.sect.cols()), bot(n2, nm.sect.cols());
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < nm.sect.cols(); ++j) top.at(i, j) = nm.sect.at(i, j);
    for (int i = 0; i < n2; ++i)
        for (int j = 0; j < nm.sect.cols(); ++j) bot.at(i, j) = nm.sect.at(n1 + i, j);
    GroupHom split1{prod, e1.points, reduce_columns(top, e1.points)};
    GroupHom split2{prod, e2.points, reduce_columns(bot, e2.points)};

    if (!embed1.well_defined() || !embed2.well_defined() || !split1.well_defined() ||
        !split2.well_defined())
        throw domain_error("etale.product", "product structure maps failed to descend");
    return ProductModel{nm.model, embed1, embed2, split1, split2};
}

EtaleGroupModel base_change(const EtaleGroupModel& e, int n) {
    if (n < 1) throw domain_error("etale.degree", "extension degree must be positive");
    IntMatrix p = IntMatrix::identity(e.points.rank());
    for (int i = 0; i < n; ++i) p = reduce_columns(p * e.frob.matrix, e.points);
    return EtaleGroupModel{e.points, GroupHom{e.points, e.points, p}};
}

WeilRestriction weil_restriction(const EtaleGroupModel& inner, int n) {
    if (n < 1) throw domain_error("etale.degree", "extension degree must be positive");
    int m = inner.points.rank();
    std::vector<Int> raw;
    raw.reserve(size_t(n) * size_t(m));
    for (int c = 0; c < n; ++c)
        raw.insert(raw.end(), inner.points.factors.begin(), inner.points.factors.end());
    // (x_0, ..., x_{n-1}) -> (x_1, ..., x_{n-1}, phi(x_0))
    IntMatrix f(n * m, n * m);
    for (int c = 0; c + 1 < n; ++c)
        for (int i = 0; i < m; ++i) f.at(c * m + i, (c + 1) * m + i) = 1;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) f.at((n - 1) * m + i, j) = inner.frob.matrix.at(i, j);
    NormalizedModel nm = normalize_model(raw, f);
    return WeilRestriction{nm.model, nm.proj, nm.sect, n};
}

CanonicalInclusion canonical_inclusion(const EtaleGroupModel& e, int n) {
    EtaleGroupModel ext = base_change(e, n);
    WeilRestriction wr = weil_restriction(ext, n);
    int m = e.points.rank();
    IntMatrix stack(n * m, m);
    IntMatrix pw = IntMatrix::identity(m);
    for (int c = 0; c < n; ++c) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) stack.at(c * m + i, j) = pw.at(i, j);
        pw = reduce_columns(pw * e.frob.matrix, e.points);
    }
    GroupHom inc{e.points, wr.model.points, reduce_columns(wr.proj * stack, wr.model.points)};
    if (!inc.well_defined())
        throw domain_error("etale.inclusion", "canonical inclusion failed to descend");
    // equivariance: inc . frob == restriction frobenius . inc
    GroupHom lhs = inc.compose(e.frob);
    GroupHom rhs = wr.model.frob.compose(inc);
    if (!lhs.equals(rhs))
        throw domain_error("etale.inclusion", "canonical inclusion is not Frobenius-equivariant");
    return CanonicalInclusion{inc, wr};
}

} // namespace qcs
