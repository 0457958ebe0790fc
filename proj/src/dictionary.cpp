#include "qcs/dictionary.hpp"

#include <cstddef>

#include "qcs/error.hpp"

namespace qcs {

DualStructure kernel_structure(const FrobModule& m) {
    if (!m.valid()) throw domain_error("dictionary.module", "invalid module");
    return dual_of_coinvariants(exterior_square(m));
}

DualStructure kernel_structure(const EtaleGroupModel& e) {
    return kernel_structure(e.module());
}

ClassifyReport classify(const EtaleGroupModel& e, unsigned long enumeration_bound) {
    if (!e.valid()) throw domain_error("dictionary.model", "invalid model");
    ClassifyReport r;
    FixedPoints fp = fixed_points(e);
    r.char_count = fp.group.order();
    r.kernel = kernel_structure(e);
    r.kernel_count = r.kernel.torsion_order();
    r.total = r.char_count * r.kernel_count;
    r.characters = all_characters(fp.group);
    for (const Character& chi : r.characters) r.sections.push_back(sheaf_from_character(e, chi));

    if (e.points.order() <= Int(enumeration_bound)) {
        TotalH2Report th = total_h2(e);
        r.enumerated_checked = true;
        r.enumerated = th.enumerated;
        r.counts_agree = (r.enumerated == r.total);

        // the canonical section is a homomorphism up to isomorphism: the
        // tensor of two section sheaves rejoins the section of the sum
        r.sections_multiplicative = true;
        const size_t m = r.characters.size();
        for (size_t i = 0; i < m && r.sections_multiplicative; ++i)
            for (size_t j = 0; j < m; ++j) {
                std::vector<QZ> sum(r.characters[i].values.size());
                for (size_t t = 0; t < sum.size(); ++t)
                    sum[t] = r.characters[i].values[t] + r.characters[j].values[t];
                int k = -1;
                for (size_t t = 0; t < m; ++t)
                    if (r.characters[t].values == sum) {
                        k = int(t);
                        break;
                    }
                if (k < 0) {
                    r.sections_multiplicative = false;
                    break;
                }
                QCSheafModel prod = tensor(r.sections[i], r.sections[j]);
                if (!is_isomorphic(prod, r.sections[size_t(k)]).isomorphic()) {
                    r.sections_multiplicative = false;
                    break;
                }
            }
    }
    return r;
}

SmoothReport smooth_model_report(const SmoothModel& m, unsigned long enumeration_bound) {
    if (!m.identity_component_points.valid() || !m.identity_component_points.is_finite())
        throw domain_error("dictionary.smooth", "identity component points must form a finite group");
    if (!m.components.valid()) throw domain_error("dictionary.smooth", "invalid component model");

    SmoothReport r;
    FixedPoints fp = fixed_points(m.components);
    r.identity_order = m.identity_component_points.order();
    r.component_fixed = fp.group.order();

    if (m.rational) {
        const SmoothRationalData& rd = *m.rational;
        if (!rd.points.valid() || !rd.points.is_finite())
            throw domain_error("dictionary.smooth", "rational points must form a finite group");
        if (!(rd.from_identity.source == m.identity_component_points) ||
            !(rd.from_identity.target == rd.points) || !rd.from_identity.well_defined())
            throw domain_error("dictionary.smooth", "identity-component map has wrong shape");
        if (!(rd.to_components.source == rd.points) || !(rd.to_components.target == fp.group) ||
            !rd.to_components.well_defined())
            throw domain_error("dictionary.smooth", "component map has wrong shape");
        if (!hom_kernel(rd.from_identity).group.is_trivial())
            throw domain_error("dictionary.smooth", "identity-component map is not injective");
        if (!hom_cokernel(rd.to_components).group.is_trivial())
            throw domain_error("dictionary.smooth", "component map is not surjective");
        GroupHom composite = rd.to_components.compose(rd.from_identity);
        GroupHom zero{m.identity_component_points, fp.group,
                      IntMatrix(fp.group.rank(), m.identity_component_points.rank())};
        if (!composite.equals(zero))
            throw domain_error("dictionary.smooth", "composite of the sequence maps is nonzero");
        if (!(hom_kernel(rd.to_components).group.order() == r.identity_order) ||
            !(rd.points.order() == r.identity_order * r.component_fixed))
            throw domain_error("dictionary.smooth", "rational-point sequence is not exact");
        r.rational_order = rd.points.order();
        r.sequence_checked = true;
    } else {
        // counting consequence of the vanishing of higher cohomology of a
        // connected group over a finite field
        r.rational_order = r.identity_order * r.component_fixed;
    }

    r.kernel = kernel_structure(m.components);
    r.aut = dual_of_coinvariants(m.components.module());
    r.kernel_order = r.kernel.torsion_order();
    r.class_count = r.kernel_order * r.rational_order;

    if (m.components.points.order() <= Int(enumeration_bound)) {
        TotalH2Report th = total_h2(m.components);
        r.enumerated_checked = true;
        r.enumerated_components = th.enumerated;
        r.counts_agree = (r.class_count == r.enumerated_components * r.identity_order);
    }
    return r;
}

} // namespace qcs
