#include "qcs/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qcs/cohomology.hpp"
#include "qcs/dictionary.hpp"
#include "qcs/error.hpp"
#include "qcs/json_io.hpp"
#include "qcs/neron.hpp"

namespace qcs {

namespace {

struct Flags {
    std::string input = "-";
    bool text = false;
    bool json = false; // accepted for symmetry; JSON is the default
    std::uint64_t seed = 0;
    unsigned long bound = 0; // 0 means the per-operation default
};

void add_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--input", f.input, "input file, - for stdin");
    CLI::Option* t = cmd->add_flag("--text", f.text, "plain key: value output");
    cmd->add_flag("--json", f.json, "JSON output (default)")->excludes(t);
    cmd->add_option("--seed", f.seed, "seed for randomized checks");
    cmd->add_option("--bound", f.bound, "override the operation's size bound");
}

Json read_input(const std::string& path) {
    std::string text;
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream in(path);
        if (!in) throw domain_error("cli.input", "cannot open input file " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw domain_error("cli.input", "input is not valid JSON");
    return j;
}

void print_text(const Json& j, const std::string& prefix) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            print_text(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
    } else {
        std::cout << prefix << ": " << j.dump() << "\n";
    }
}

void emit(Json out, const Flags& f) {
    out["schema_version"] = 1;
    if (f.text)
        print_text(out, "");
    else
        std::cout << dump_json(out);
}

std::string coords_key(const SheafOps& ops, size_t i) {
    std::vector<Int> v = ops.idx.at(i);
    std::string s;
    for (size_t t = 0; t < v.size(); ++t) {
        if (t) s += ",";
        s += v[t].get_str();
    }
    return s;
}

Json delta_to_json(const QCSheafModel& q, const std::vector<QZ>& delta) {
    SheafOps ops(q.base);
    Json out = Json::object();
    for (size_t i = 0; i < ops.size(); ++i) out[coords_key(ops, i)] = qz_to_json(delta[i]);
    return out;
}

Json factors_json(const FgAbGroup& g) { return group_to_json(g)["factors"]; }

Json cmd_qc_validate(const Json& in) {
    QCSheafModel q = sheaf_from_json(in);
    SheafDiagnostics d = validate(q);
    Json viol = Json::array();
    for (const SheafViolation& v : d.violations) {
        Json w = Json::array();
        for (size_t i : v.where) w.push_back(i);
        viol.push_back(Json{{"kind", v.kind}, {"where", std::move(w)}});
    }
    return Json{{"valid", d.ok()}, {"violations", std::move(viol)}};
}

Json cmd_qc_trace(const Json& in) {
    QCSheafModel q = sheaf_from_json(in);
    return character_to_json(trace(q));
}

Json cmd_qc_tensor(const Json& in) {
    if (!in.contains("first") || !in.contains("second"))
        throw domain_error("cli.input", "expected fields \"first\" and \"second\"");
    QCSheafModel t = tensor(sheaf_from_json(in.at("first")), sheaf_from_json(in.at("second")));
    return sheaf_to_json(t);
}

Json cmd_qc_iso(const Json& in) {
    if (!in.contains("first") || !in.contains("second"))
        throw domain_error("cli.input", "expected fields \"first\" and \"second\"");
    QCSheafModel q1 = sheaf_from_json(in.at("first"));
    QCSheafModel q2 = sheaf_from_json(in.at("second"));
    IsoResult r = is_isomorphic(q1, q2);
    Json out{{"isomorphic", r.isomorphic()}, {"obstruction_row", r.obstruction_row}};
    out["witness"] = r.witness ? delta_to_json(q1, *r.witness) : Json(nullptr);
    return out;
}

Json cmd_qc_auts(const Json& in) {
    QCSheafModel q = sheaf_from_json(in);
    AutomorphismGroup g = automorphisms(q);
    return Json{{"order", int_to_json(g.group.order())}, {"factors", factors_json(g.group)}};
}

Json cmd_qc_classify(const Json& in, const Flags& f) {
    EtaleGroupModel e = model_from_json(in);
    ClassifyReport r = classify(e, f.bound ? f.bound : 12);
    Json out{{"characters", int_to_json(r.char_count)},
             {"kernel", dual_to_json(r.kernel)},
             {"kernel_order", int_to_json(r.kernel_count)},
             {"total", int_to_json(r.total)},
             {"cross_checked", r.enumerated_checked && r.counts_agree},
             {"sections_multiplicative", r.sections_multiplicative}};
    out["enumerated"] = r.enumerated_checked ? int_to_json(r.enumerated) : Json(nullptr);
    return out;
}

Json cmd_coh_h2(const Json& in) {
    ClassList cl = h2_classes(group_from_json(in));
    Json factors = Json::array();
    for (const Int& d : cl.factors) factors.push_back(int_to_json(d));
    return Json{{"classes", int_to_json(cl.count)}, {"factors", std::move(factors)}};
}

Json cmd_coh_total(const Json& in) {
    TotalH2Report r = total_h2(model_from_json(in));
    return Json{{"classes", int_to_json(r.enumerated)},
                {"kernel", int_to_json(r.pairing_term)},
                {"quotient", int_to_json(r.character_term)},
                {"consistent", r.counts_consistent && r.sequence_exact}};
}

Json cmd_coh_verify_s(const Json& in, const Flags& f) {
    SIsoReport r = verify_s_iso(model_from_json(in), f.seed);
    return Json{{"enumerated", int_to_json(r.enumerated)},
                {"structural", int_to_json(r.structural)},
                {"counts_match", r.counts_match},
                {"reps_valid", r.reps_valid},
                {"pairwise_distinct", r.pairwise_distinct},
                {"twists_rejoin", r.twists_rejoin},
                {"ok", r.ok()}};
}

Json cmd_grp_snf(const Json& in) {
    if (!in.contains("matrix")) throw domain_error("cli.input", "expected field \"matrix\"");
    SmithDecomposition s = smith_normal_form(matrix_from_json(in.at("matrix")));
    Json diag = Json::array();
    int rank = 0;
    for (const Int& d : s.diag) {
        diag.push_back(int_to_json(d));
        if (d != 0) rank += 1;
    }
    return Json{{"diag", std::move(diag)},
                {"rank", rank},
                {"U", matrix_to_json(s.U)},
                {"V", matrix_to_json(s.V)}};
}

Json cmd_grp_coinv(const Json& in) {
    EtaleGroupModel e = model_from_json(in);
    Quotient q = coinvariants(e.module());
    return Json{{"factors", factors_json(q.group)}};
}

Json cmd_grp_ext2(const Json& in) {
    EtaleGroupModel e = model_from_json(in);
    FrobModule m = exterior_square(e.module());
    return Json{{"factors", factors_json(m.group)}, {"frobenius", matrix_to_json(m.frob.matrix)}};
}

Json cmd_smooth_report(const Json& in, const Flags& f) {
    if (!in.contains("identity_component") || !in.contains("components"))
        throw domain_error("cli.input", "expected fields \"identity_component\" and \"components\"");
    SmoothModel m;
    m.identity_component_points = group_from_json(in.at("identity_component"));
    m.components = model_from_json(in.at("components"));
    if (in.contains("rational") && !in.at("rational").is_null()) {
        const Json& rj = in.at("rational");
        if (!rj.contains("points") || !rj.contains("from_identity") || !rj.contains("to_components"))
            throw domain_error("cli.input",
                               "\"rational\" needs \"points\", \"from_identity\", \"to_components\"");
        SmoothRationalData rd;
        rd.points = group_from_json(rj.at("points"));
        rd.from_identity = GroupHom{m.identity_component_points, rd.points,
                                    matrix_from_json(rj.at("from_identity"))};
        rd.to_components = GroupHom{rd.points, fixed_points(m.components).group,
                                    matrix_from_json(rj.at("to_components"))};
        m.rational = std::move(rd);
    }
    SmoothReport r = smooth_model_report(m, f.bound ? f.bound : 12);
    return Json{{"qciso_order", int_to_json(r.class_count)},
                {"kernel", dual_to_json(r.kernel)},
                {"aut", dual_to_json(r.aut)},
                {"sequence", Json{{"checked", r.sequence_checked},
                                  {"identity_order", int_to_json(r.identity_order)},
                                  {"component_fixed", int_to_json(r.component_fixed)},
                                  {"rational_order", int_to_json(r.rational_order)}}},
                {"cross_checked", r.enumerated_checked && r.counts_agree}};
}

GaloisLattice lattice_with_bound(const Json& in, const Flags& f) {
    GaloisLattice l = lattice_from_json(in);
    if (f.bound) l.closure_bound = f.bound;
    return l;
}

Json cmd_torus_component(const Json& in, const Flags& f) {
    FrobModule m = component_group(lattice_with_bound(in, f));
    return Json{{"factors", factors_json(m.group)}, {"frob", matrix_to_json(m.frob.matrix)}};
}

Json cmd_torus_kernel(const Json& in, const Flags& f) {
    return dual_to_json(torus_kernel(lattice_with_bound(in, f)));
}

Json cmd_torus_aut(const Json& in, const Flags& f) {
    return dual_to_json(torus_aut(lattice_with_bound(in, f)));
}

Json cmd_torus_count(const Json& in, const Flags& f) {
    if (!in.contains("lattice") || !in.contains("ring"))
        throw domain_error("cli.input", "expected fields \"lattice\" and \"ring\"");
    GaloisLattice l = lattice_from_json(in.at("lattice"));
    RingSpec r = ring_from_json(in.at("ring"));
    QuasicharCount c = quasicharacter_count(l, r, f.bound ? f.bound : 1'000'000UL);
    Json factors = Json::array();
    for (const Int& d : c.factors) factors.push_back(int_to_json(d));
    return Json{{"order", int_to_json(c.order)}, {"factors", std::move(factors)}};
}

Json cmd_torus_levels(const Json& in, const Flags& f) {
    if (!in.contains("ring") || !in.contains("high_level"))
        throw domain_error("cli.input", "expected fields \"ring\" and \"high_level\"");
    RingSpec r = ring_from_json(in.at("ring"));
    LevelCheck c =
        level_system_check(r, in.at("high_level").get<int>(), f.bound ? f.bound : 1'000'000UL);
    return Json{{"low_order", int_to_json(c.low_order)},
                {"high_order", int_to_json(c.high_order)},
                {"surjective", c.surjective},
                {"kernel_order", int_to_json(c.kernel_order)},
                {"expected_kernel", int_to_json(c.expected_kernel)},
                {"dual_embeds", c.dual_embeds},
                {"ok", c.ok()}};
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"exact computations with quasicharacter sheaf models"};
    app.require_subcommand(1);
    Flags f;
    std::function<Json(const Json&)> action;

    auto leaf = [&](CLI::App* parent, const char* name, const char* desc,
                    std::function<Json(const Json&)> fn) {
        CLI::App* c = parent->add_subcommand(name, desc);
        c->parse_complete_callback([&action, fn] { action = fn; });
        add_flags(c, f);
        return c;
    };

    CLI::App* qc = app.add_subcommand("qc", "operations on sheaf models");
    qc->require_subcommand(1);
    leaf(qc, "validate", "check the cocycle and compatibility laws", cmd_qc_validate);
    leaf(qc, "trace", "trace character on the fixed points", cmd_qc_trace);
    leaf(qc, "tensor", "tensor product of two sheaves over one base", cmd_qc_tensor);
    leaf(qc, "iso", "decide isomorphism, with witness or obstruction", cmd_qc_iso);
    leaf(qc, "auts", "automorphism character group", cmd_qc_auts);
    leaf(qc, "classify", "structural classification of a model",
         [&f](const Json& in) { return cmd_qc_classify(in, f); });

    CLI::App* coh = app.add_subcommand("coh", "cohomology of models");
    coh->require_subcommand(1);
    leaf(coh, "h2", "second cohomology classes of a plain group", cmd_coh_h2);
    leaf(coh, "total", "total-complex classes and the two-layer check",
         [](const Json& in) { return cmd_coh_total(in); });
    leaf(coh, "verify-s", "bijection check between classes and sheaves",
         [&f](const Json& in) { return cmd_coh_verify_s(in, f); });

    CLI::App* grp = app.add_subcommand("grp", "integer-lattice utilities");
    grp->require_subcommand(1);
    leaf(grp, "snf", "Smith decomposition of a matrix", cmd_grp_snf);
    leaf(grp, "coinv", "coinvariants of a module", cmd_grp_coinv);
    leaf(grp, "ext2", "alternating square of a module", cmd_grp_ext2);

    CLI::App* smooth = app.add_subcommand("smooth", "smooth-group reports");
    smooth->require_subcommand(1);
    leaf(smooth, "report", "orders, kernel and sequence checks",
         [&f](const Json& in) { return cmd_smooth_report(in, f); });

    CLI::App* torus = app.add_subcommand("torus", "tori via cocharacter lattices");
    torus->require_subcommand(1);
    leaf(torus, "component", "component group of the integral model",
         [&f](const Json& in) { return cmd_torus_component(in, f); });
    leaf(torus, "kernel", "trace-trivial layer over the components",
         [&f](const Json& in) { return cmd_torus_kernel(in, f); });
    leaf(torus, "aut", "dual of the full coinvariants",
         [&f](const Json& in) { return cmd_torus_aut(in, f); });
    leaf(torus, "count", "quasicharacters of a split torus at level",
         [&f](const Json& in) { return cmd_torus_count(in, f); });
    leaf(torus, "levels", "compatibility of two truncation levels",
         [&f](const Json& in) { return cmd_torus_levels(in, f); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        emit(action(read_input(f.input)), f);
        return 0;
    } catch (const domain_error& e) {
        Json err{{"schema_version", 1},
                 {"error", Json{{"code", e.code()}, {"detail", e.what()}}}};
        std::cout << dump_json(err);
        std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace qcs
