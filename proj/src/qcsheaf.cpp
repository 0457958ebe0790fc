#include "qcs/qcsheaf.hpp"

#include "qcs/error.hpp"

namespace qcs {

SheafOps::SheafOps(const EtaleGroupModel& e) : idx(e.points) {
    if (!e.valid()) throw domain_error("qcsheaf.base", "base model is not a valid finite etale group");
    n = idx.size();
    addt.resize(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) addt[i * n + j] = idx.add(i, j);
    frobt = idx.hom_table(e.frob, idx);
    negt.resize(n);
    for (size_t i = 0; i < n; ++i) negt[i] = idx.neg(i);
}

static bool shape_ok(const QCSheafModel& q, const SheafOps& ops, SheafDiagnostics& d) {
    size_t n = ops.size();
    if (q.a.size() != n * n || q.b.size() != n) {
        d.violations.push_back({"shape", {}});
        return false;
    }
    return true;
}

SheafDiagnostics validate(const QCSheafModel& q, const SheafOps& ops) {
    SheafDiagnostics d;
    if (!shape_ok(q, ops, d)) return d;
    size_t n = ops.size();
    auto A = [&](size_t i, size_t j) -> const QZ& { return q.a[i * n + j]; };

    if (!q.b[0].is_zero()) d.violations.push_back({"normalization", {0}});
    for (size_t z = 0; z < n; ++z) {
        if (!A(0, z).is_zero()) d.violations.push_back({"normalization", {0, z}});
        if (z != 0 && !A(z, 0).is_zero()) d.violations.push_back({"normalization", {z, 0}});
    }
    for (size_t x = 0; x < n; ++x)
        for (size_t y = 0; y < n; ++y) {
            for (size_t z = 0; z < n; ++z) {
                // a(x+y, z) + a(x, y) == a(x, y+z) + a(y, z)
                QZ lhs = A(ops.add(x, y), z) + A(x, y);
                QZ rhs = A(x, ops.add(y, z)) + A(y, z);
                if (!(lhs == rhs)) d.violations.push_back({"cocycle", {x, y, z}});
            }
            // a(Fx, Fy) - a(x, y) == b(x+y) - b(x) - b(y)
            QZ lhs = A(ops.frob(x), ops.frob(y)) - A(x, y);
            QZ rhs = q.b[ops.add(x, y)] - q.b[x] - q.b[y];
            if (!(lhs == rhs)) d.violations.push_back({"frobenius", {x, y}});
        }
    return d;
}

SheafDiagnostics validate(const QCSheafModel& q) {
    SheafOps ops(q.base);
    return validate(q, ops);
}

QCSheafModel unit_sheaf(const EtaleGroupModel& e) {
    SheafOps ops(e);
    size_t n = ops.size();
    return QCSheafModel{e, std::vector<QZ>(n * n), std::vector<QZ>(n)};
}

static void require_same_base(const QCSheafModel& q1, const QCSheafModel& q2) {
    if (!q1.base.same_model(q2.base))
        throw domain_error("qcsheaf.base_mismatch", "operands live on different base models");
}

QCSheafModel tensor(const QCSheafModel& q1, const QCSheafModel& q2) {
    require_same_base(q1, q2);
    QCSheafModel out = q1;
    for (size_t i = 0; i < out.a.size(); ++i) out.a[i] = out.a[i] + q2.a[i];
    for (size_t i = 0; i < out.b.size(); ++i) out.b[i] = out.b[i] + q2.b[i];
    return out;
}

QCSheafModel dual(const QCSheafModel& q) {
    QCSheafModel out = q;
    for (auto& v : out.a) v = -v;
    for (auto& v : out.b) v = -v;
    return out;
}

Character trace(const QCSheafModel& q, const FixedPoints& fp) {
    SheafOps ops(q.base);
    if (q.b.size() != ops.size()) throw domain_error("qcsheaf.shape", "Frobenius table has wrong size");
    std::vector<QZ> vals;
    vals.reserve(size_t(fp.inclusion.matrix.cols()));
    for (int j = 0; j < fp.inclusion.matrix.cols(); ++j) {
        std::vector<Int> col(size_t(fp.inclusion.matrix.rows()));
        for (int i = 0; i < fp.inclusion.matrix.rows(); ++i) col[size_t(i)] = fp.inclusion.matrix.at(i, j);
        vals.push_back(q.b[ops.idx.index(col)]);
    }
    Character chi{fp.group, vals};
    if (!chi.well_defined())
        throw domain_error("qcsheaf.trace", "Frobenius table is not additive on the fixed points");
    return chi;
}

Character trace(const QCSheafModel& q) { return trace(q, fixed_points(q.base)); }

QCSheafModel sheaf_from_character(const EtaleGroupModel& e, const Character& chi) {
    FixedPoints fp = fixed_points(e);
    if (!(chi.domain == fp.group))
        throw domain_error("qcsheaf.character", "character domain is not the fixed-point group");
    Character ext = extend_character(fp.inclusion, chi);
    SheafOps ops(e);
    size_t n = ops.size();
    QCSheafModel q{e, std::vector<QZ>(n * n), std::vector<QZ>(n)};
    for (size_t i = 0; i < n; ++i) q.b[i] = ext.eval(ops.idx.at(i));
    return q;
}

QCSheafModel twist(const QCSheafModel& q, const std::vector<QZ>& delta) {
    SheafOps ops(q.base);
    size_t n = ops.size();
    if (delta.size() != n) throw domain_error("qcsheaf.twist", "twist table has wrong size");
    if (!delta[0].is_zero())
        throw domain_error("qcsheaf.twist", "twist must vanish at the identity");
    QCSheafModel out = q;
    for (size_t x = 0; x < n; ++x) {
        for (size_t y = 0; y < n; ++y)
            out.a[x * n + y] = out.a[x * n + y] + delta[x] + delta[y] - delta[ops.add(x, y)];
        out.b[x] = out.b[x] + delta[x] - delta[ops.frob(x)];
    }
    return out;
}

IntMatrix coboundary_matrix(const SheafOps& ops) {
    int n = int(ops.size());
    IntMatrix d(n * n + n, n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            int r = x * n + y;
            d.at(r, x) += 1;
            d.at(r, y) += 1;
            d.at(r, int(ops.add(size_t(x), size_t(y)))) -= 1;
        }
    for (int x = 0; x < n; ++x) {
        int r = n * n + x;
        d.at(r, x) += 1;
        d.at(r, int(ops.frob(size_t(x)))) -= 1;
    }
    return d;
}

IsoResult is_isomorphic(const QCSheafModel& q1, const QCSheafModel& q2) {
    require_same_base(q1, q2);
    SheafOps ops(q1.base);
    size_t n = ops.size();
    if (q1.a.size() != n * n || q2.a.size() != n * n || q1.b.size() != n || q2.b.size() != n)
        throw domain_error("qcsheaf.shape", "sheaf tables have wrong size");
    IntMatrix d = coboundary_matrix(ops);
    std::vector<QZ> rhs(n * n + n);
    for (size_t i = 0; i < n * n; ++i) rhs[i] = q2.a[i] - q1.a[i];
    for (size_t i = 0; i < n; ++i) rhs[n * n + i] = q2.b[i] - q1.b[i];
    QzSolveOutcome sol = solve_qz(d, rhs);
    IsoResult r;
    if (sol.solution) {
        r.witness = *sol.solution;
    } else {
        r.obstruction_row = sol.violated_row;
    }
    return r;
}

AutomorphismGroup automorphisms(const QCSheafModel& q) {
    Quotient co = coinvariants(q.base.module());
    AutomorphismGroup out;
    out.group = co.group;
    out.characters = all_characters(co.group);
    SheafOps ops(q.base);
    size_t n = ops.size();
    for (const Character& chi : out.characters) {
        std::vector<QZ> delta(n);
        for (size_t i = 0; i < n; ++i) delta[i] = chi.eval(co.projection.apply(ops.idx.at(i)));
        out.deltas.push_back(std::move(delta));
    }
    return out;
}

HomSetDescription hom_set(const QCSheafModel& q1, const QCSheafModel& q2) {
    IsoResult iso = is_isomorphic(q1, q2);
    HomSetDescription h;
    h.empty = !iso.isomorphic();
    if (iso.isomorphic()) {
        h.witness = iso.witness;
        h.torsor_size = coinvariants(q1.base.module()).group.order();
    } else {
        h.torsor_size = 0;
    }
    return h;
}

QCSheafModel pullback(const QCSheafModel& q, const GroupHom& f, const EtaleGroupModel& src) {
    if (!(f.source == src.points) || !(f.target == q.base.points))
        throw domain_error("qcsheaf.pullback", "map endpoints do not match the models");
    if (!f.well_defined())
        throw domain_error("qcsheaf.pullback", "map is not a well-defined homomorphism");
    if (!f.compose(src.frob).equals(q.base.frob.compose(f)))
        throw domain_error("qcsheaf.pullback", "map is not Frobenius-equivariant");
    SheafOps so(src), to(q.base);
    size_t ns = so.size(), nt = to.size();
    std::vector<size_t> img(ns);
    for (size_t i = 0; i < ns; ++i) img[i] = to.idx.index(f.apply(so.idx.at(i)));
    QCSheafModel out{src, std::vector<QZ>(ns * ns), std::vector<QZ>(ns)};
    for (size_t x = 0; x < ns; ++x) {
        for (size_t y = 0; y < ns; ++y) out.a[x * ns + y] = q.a[img[x] * nt + img[y]];
        out.b[x] = q.b[img[x]];
    }
    return out;
}

ExternalProduct external_product(const QCSheafModel& q1, const QCSheafModel& q2) {
    ProductModel pm = product(q1.base, q2.base);
    QCSheafModel p1 = pullback(q1, pm.split1, pm.model);
    QCSheafModel p2 = pullback(q2, pm.split2, pm.model);
    return ExternalProduct{pm, tensor(p1, p2)};
}

QCSheafModel norm_functor(const QCSheafModel& q, int n) {
    if (n < 1) throw domain_error("qcsheaf.norm", "extension degree must be positive");
    SheafOps ops(q.base);
    size_t sz = ops.size();
    if (q.a.size() != sz * sz || q.b.size() != sz)
        throw domain_error("qcsheaf.shape", "sheaf tables have wrong size");
    QCSheafModel out{base_change(q.base, n), q.a, std::vector<QZ>(sz)};
    for (size_t x = 0; x < sz; ++x) {
        size_t cur = x;
        QZ acc;
        for (int i = 0; i < n; ++i) {
            acc = acc + q.b[cur];
            cur = ops.frob(cur);
        }
        out.b[x] = acc;
    }
    return out;
}

std::vector<QZ> commutator_pairing(const QCSheafModel& q) {
    SheafOps ops(q.base);
    size_t n = ops.size();
    if (q.a.size() != n * n) throw domain_error("qcsheaf.shape", "sheaf tables have wrong size");
    std::vector<QZ> e(n * n);
    for (size_t x = 0; x < n; ++x)
        for (size_t y = 0; y < n; ++y) e[x * n + y] = q.a[x * n + y] - q.a[y * n + x];
    return e;
}

} // namespace qcs
