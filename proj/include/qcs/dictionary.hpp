#pragma once
// Classification layer: counts and structure of sheaf classes attached to a
// finite etale model, and the bookkeeping for a smooth commutative group
// presented by its identity-component points plus a component model.

#include <optional>
#include <vector>

#include "qcs/cohomology.hpp"
#include "qcs/etale.hpp"
#include "qcs/fgab.hpp"
#include "qcs/qcsheaf.hpp"

namespace qcs {

// Structure of the trace-trivial layer: dual of the Frobenius coinvariants
// of the alternating square. Defined for any finitely generated module, so
// it also serves component groups with free part.
DualStructure kernel_structure(const FrobModule& m);
DualStructure kernel_structure(const EtaleGroupModel& e);

struct ClassifyReport {
    Int char_count;    // characters of the fixed points
    Int kernel_count;  // trace-trivial classes
    Int total;         // char_count * kernel_count
    DualStructure kernel;
    std::vector<Character> characters;     // all characters of the fixed points
    std::vector<QCSheafModel> sections;    // canonical sheaf per character, in order
    bool enumerated_checked = false;       // exact enumeration ran
    Int enumerated = 0;                    // its class count when it ran
    bool counts_agree = false;             // enumeration matched the structural total
    bool sections_multiplicative = false;  // tensor of sections isomorphic to section of sum
};

// Classification over one model. When the point count is at most
// `enumeration_bound` the exact class enumeration and the pairwise
// section-tensor checks also run; otherwise only structural counts are
// produced and the check flags stay false.
ClassifyReport classify(const EtaleGroupModel& e, unsigned long enumeration_bound = 12);

// Rational-point data for a smooth group: the full point group together
// with the comparison maps of the sequence
//   0 -> G0(k) -> G(k) -> (components)^F -> 0
struct SmoothRationalData {
    FgAbGroup points;        // G(k)
    GroupHom from_identity;  // G0(k) -> G(k)
    GroupHom to_components;  // G(k) -> fixed points of the component model
};

struct SmoothModel {
    FgAbGroup identity_component_points;  // finite
    EtaleGroupModel components;
    std::optional<SmoothRationalData> rational;
};

struct SmoothReport {
    Int identity_order;    // |G0(k)|
    Int component_fixed;   // fixed points of the component model
    Int rational_order;    // |G(k)|; the product of the two when not supplied
    DualStructure kernel;  // kernel_structure of the component model
    DualStructure aut;     // dual of the component coinvariants
    Int kernel_order;
    Int class_count;                 // kernel_order * rational_order
    bool sequence_checked = false;   // rational data supplied and verified exactly
    bool enumerated_checked = false; // component enumeration ran
    Int enumerated_components = 0;   // exact class count on the component model
    bool counts_agree = false;       // class_count == enumerated * identity_order
};

// Verifies the model invariants (throws on violation, including a broken
// rational-point sequence) and assembles the counts. The component-model
// enumeration cross-check runs when the component point count is at most
// `enumeration_bound`.
SmoothReport smooth_model_report(const SmoothModel& m, unsigned long enumeration_bound = 12);

} // namespace qcs
