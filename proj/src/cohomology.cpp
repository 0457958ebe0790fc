#include "qcs/cohomology.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "qcs/error.hpp"

namespace qcs {

TotalCocycle s_map(const QCSheafModel& q) { return TotalCocycle{q.a, q.b}; }

QCSheafModel sheaf_of(const EtaleGroupModel& e, const TotalCocycle& t) {
    return QCSheafModel{e, t.alpha, t.beta};
}

bool total_cocycle_valid(const EtaleGroupModel& e, const TotalCocycle& t) {
    return validate(sheaf_of(e, t)).ok();
}

namespace {

EtaleGroupModel with_identity_frob(const FgAbGroup& a) {
    return EtaleGroupModel{a, GroupHom::identity(a)};
}

// distinct nonzero rows of the 2-cocycle identity over the N*N table slots
IntMatrix cocycle_rows(const SheafOps& ops) {
    const size_t n = ops.size();
    std::set<std::vector<int>> seen;
    std::vector<int> row(n * n);
    for (size_t x = 0; x < n; ++x)
        for (size_t y = 0; y < n; ++y)
            for (size_t z = 0; z < n; ++z) {
                std::fill(row.begin(), row.end(), 0);
                row[ops.add(x, y) * n + z] += 1;
                row[x * n + y] += 1;
                row[x * n + ops.add(y, z)] -= 1;
                row[y * n + z] -= 1;
                bool nz = false;
                for (int v : row)
                    if (v) {
                        nz = true;
                        break;
                    }
                if (nz) seen.insert(row);
            }
    IntMatrix m(int(seen.size()), int(n * n));
    int r = 0;
    for (const auto& rw : seen) {
        for (size_t j = 0; j < n * n; ++j)
            if (rw[j]) m.at(r, int(j)) = rw[j];
        ++r;
    }
    return m;
}

// delta -> delta(x) + delta(y) - delta(x+y), one row per table slot
IntMatrix group_coboundary_rows(const SheafOps& ops) {
    const size_t n = ops.size();
    IntMatrix d(int(n * n), int(n));
    for (size_t x = 0; x < n; ++x)
        for (size_t y = 0; y < n; ++y) {
            int r = int(x * n + y);
            d.at(r, int(x)) += 1;
            d.at(r, int(y)) += 1;
            d.at(r, int(ops.add(x, y))) -= 1;
        }
    return d;
}

// finite quotient Z^n / (rational column span of relmat  +  L * Z^n)
Presentation ambient_quotient(const IntMatrix& relmat, const Int& L) {
    IntMatrix sat = saturation(relmat);
    IntMatrix li = IntMatrix::diagonal(std::vector<Int>(size_t(relmat.rows()), L));
    return from_presentation(IntMatrix::hstack(sat, li));
}

std::vector<Int> quotient_key(const Presentation& q, const std::vector<Int>& v) {
    return q.group.reduce(q.proj.apply(v));
}

struct EnumeratedClasses {
    Int count;
    std::vector<Int> factors;
    std::vector<std::vector<Int>> reps; // length-n integer vectors, entries in [0, L)
};

// classes of span(columns of K) modulo the relation lattice presented by q
EnumeratedClasses enumerate_classes(const IntMatrix& K, const Presentation& q, const Int& L,
                                    unsigned long cap) {
    IntMatrix pk = reduce_columns(q.proj * K, q.group);
    IntMatrix sys = IntMatrix::hstack(pk, IntMatrix::diagonal(q.group.factors));
    IntMatrix ker = kernel_basis(sys);
    IntMatrix rels(K.cols(), ker.cols());
    for (int i = 0; i < K.cols(); ++i)
        for (int j = 0; j < ker.cols(); ++j) rels.at(i, j) = ker.at(i, j);
    Presentation pres = from_presentation(rels);
    if (!pres.group.is_finite())
        throw domain_error("cohomology.enumeration", "class lattice is not finite");

    EnumeratedClasses out;
    out.count = pres.group.order();
    out.factors = pres.group.factors;
    if (!out.count.fits_ulong_p() || out.count.get_ui() > cap)
        throw domain_error("cohomology.enumeration", "class group exceeds the enumeration cap");

    ElementIndex idx(pres.group, cap);
    out.reps.reserve(idx.size());
    for (size_t t = 0; t < idx.size(); ++t) {
        std::vector<Int> coeff = pres.sect.apply(idx.at(t));
        std::vector<Int> v = K.apply(coeff);
        for (auto& e : v) mpz_mod(e.get_mpz_t(), e.get_mpz_t(), L.get_mpz_t());
        out.reps.push_back(std::move(v));
    }
    return out;
}

bool qz_lex_less(const std::vector<QZ>& a, const std::vector<QZ>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace

H2Workspace::H2Workspace(const FgAbGroup& a, const Int& level)
    : group_(a), level_(level), ops_(with_identity_frob(a)) {
    if (level_ <= 0) throw domain_error("cohomology.level", "level must be positive");
    ka_ = kernel_mod_rows(cocycle_rows(ops_), level_);
    dg_ = group_coboundary_rows(ops_);
    aq_ = ambient_quotient(dg_, level_);
}

H2Workspace::H2Workspace(const FgAbGroup& a) : H2Workspace(a, a.exponent() * a.exponent()) {}

ClassList h2_classes(const H2Workspace& ws, unsigned long rep_cap) {
    const Int& L = ws.level();
    EnumeratedClasses ec = enumerate_classes(ws.alpha_lattice(), ws.alpha_quotient(), L, rep_cap);
    ClassList out;
    out.count = ec.count;
    out.factors = ec.factors;
    const size_t nn = ws.ops().size() * ws.ops().size();
    for (const auto& v : ec.reps) {
        std::vector<QZ> tab(nn);
        QZ c0(v[0], L); // cocycles are constant on the axes; shift to normalize
        for (size_t i = 0; i < nn; ++i) tab[i] = QZ(v[i], L) - c0;
        out.reps.push_back(std::move(tab));
    }
    std::sort(out.reps.begin(), out.reps.end(), qz_lex_less);
    return out;
}

ClassList h2_classes(const FgAbGroup& a, unsigned long rep_cap) {
    return h2_classes(H2Workspace(a), rep_cap);
}

ClassList h2_brute_force(const FgAbGroup& a, unsigned long table_cap) {
    SheafOps ops(with_identity_frob(a));
    const size_t n = ops.size();
    if (!a.exponent().fits_ulong_p())
        throw domain_error("cohomology.brute", "exponent too large");
    const unsigned long e = a.exponent().get_ui();
    const size_t m = (n - 1) * (n - 1);
    Int space = 1;
    for (size_t i = 0; i < m; ++i) {
        space *= e;
        if (space > table_cap)
            throw domain_error("cohomology.brute", "table space exceeds the cap");
    }

    QzSolver solver(group_coboundary_rows(ops));
    std::vector<std::vector<long>> found;
    std::vector<int> digits(m, 0);
    std::vector<long> tab(n * n, 0);
    const long le = long(e);
    while (true) {
        for (size_t x = 1; x < n; ++x)
            for (size_t y = 1; y < n; ++y) tab[x * n + y] = digits[(x - 1) * (n - 1) + (y - 1)];
        bool coc = true;
        for (size_t x = 0; x < n && coc; ++x)
            for (size_t y = 0; y < n && coc; ++y)
                for (size_t z = 0; z < n; ++z) {
                    long v = tab[ops.add(x, y) * n + z] + tab[x * n + y] -
                             tab[x * n + ops.add(y, z)] - tab[y * n + z];
                    if (v % le != 0) {
                        coc = false;
                        break;
                    }
                }
        if (coc) {
            bool fresh = true;
            for (const auto& r : found) {
                std::vector<QZ> diff(n * n);
                for (size_t i = 0; i < n * n; ++i) diff[i] = QZ(tab[i] - r[i], le);
                if (solver.solvable(diff)) {
                    fresh = false;
                    break;
                }
            }
            if (fresh) found.push_back(tab);
        }
        bool done = true;
        for (size_t pos = m; pos-- > 0;) {
            if (++digits[pos] < int(e)) {
                done = false;
                break;
            }
            digits[pos] = 0;
        }
        if (done) break;
    }

    ClassList out;
    out.count = Int(long(found.size()));
    // invariant factors are not recovered on this route; counts and
    // representatives are what the cross-checks use
    for (const auto& r : found) {
        std::vector<QZ> tab2(n * n);
        for (size_t i = 0; i < n * n; ++i) tab2[i] = QZ(r[i], le);
        out.reps.push_back(std::move(tab2));
    }
    std::sort(out.reps.begin(), out.reps.end(), qz_lex_less);
    return out;
}

TotalH2Report total_h2(const EtaleGroupModel& e, const H2Workspace& ws) {
    if (!(ws.group() == e.points))
        throw domain_error("cohomology.workspace", "workspace built for a different group");
    SheafOps ops(e);
    const size_t n = ops.size();
    const Int& L = ws.level();
    const IntMatrix& Ka = ws.alpha_lattice();
    const int ka = Ka.cols();

    // mixed constraint over (u, beta) where alpha = Ka u:
    //   alpha(Fx,Fy) - alpha(x,y) - beta(x+y) + beta(x) + beta(y) = 0 mod L
    IntMatrix m2(int(n * n), ka + int(n));
    for (size_t x = 0; x < n; ++x)
        for (size_t y = 0; y < n; ++y) {
            const int r = int(x * n + y);
            const size_t sr = ops.frob(x) * n + ops.frob(y);
            if (sr != size_t(r))
                for (int j = 0; j < ka; ++j) m2.at(r, j) = Ka.at(int(sr), j) - Ka.at(r, j);
            m2.at(r, ka + int(ops.add(x, y))) -= 1;
            m2.at(r, ka + int(x)) += 1;
            m2.at(r, ka + int(y)) += 1;
        }
    IntMatrix w = kernel_mod_rows(m2, L);

    // back to (alpha, beta) coordinates
    IntMatrix kt(int(n * n + n), w.cols());
    for (int j = 0; j < w.cols(); ++j) {
        for (int i = 0; i < int(n * n); ++i) {
            Int acc = 0;
            for (int c = 0; c < ka; ++c)
                if (Ka.at(i, c) != 0 && w.at(c, j) != 0) acc += Ka.at(i, c) * w.at(c, j);
            mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), L.get_mpz_t());
            kt.at(i, j) = acc;
        }
        for (int i = 0; i < int(n); ++i) {
            Int v = w.at(ka + i, j);
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), L.get_mpz_t());
            kt.at(int(n * n) + i, j) = v;
        }
    }

    IntMatrix dtot = coboundary_matrix(ops);
    Presentation tq = ambient_quotient(dtot, L);
    EnumeratedClasses ec = enumerate_classes(kt, tq, L, 1UL << 20);

    TotalH2Report rep;
    rep.enumerated = ec.count;
    rep.factors = ec.factors;
    FixedPoints fp = fixed_points(e);
    rep.character_term = fp.group.order();
    rep.pairing_term = coinvariants(exterior_square(e.module())).group.order();
    rep.counts_consistent = (rep.enumerated == rep.character_term * rep.pairing_term);

    // normalized representatives, sorted; keep integer forms for class keys
    struct Item {
        TotalCocycle t;
        std::vector<Int> norm; // normalized integer vector, alpha then beta
    };
    std::vector<Item> items;
    items.reserve(ec.reps.size());
    for (const auto& v : ec.reps) {
        Item it;
        it.norm.resize(n * n + n);
        Int c0 = v[0];
        for (size_t i = 0; i < n * n; ++i) {
            Int d = v[i] - c0;
            mpz_mod(d.get_mpz_t(), d.get_mpz_t(), L.get_mpz_t());
            it.norm[i] = d;
        }
        for (size_t i = 0; i < n; ++i) it.norm[n * n + i] = v[n * n + i];
        it.t.alpha.resize(n * n);
        it.t.beta.resize(n);
        for (size_t i = 0; i < n * n; ++i) it.t.alpha[i] = QZ(it.norm[i], L);
        for (size_t i = 0; i < n; ++i) it.t.beta[i] = QZ(it.norm[n * n + i], L);
        items.push_back(std::move(it));
    }
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.t.alpha != b.t.alpha) return qz_lex_less(a.t.alpha, b.t.alpha);
        return qz_lex_less(a.t.beta, b.t.beta);
    });

    // traces (the projection of the sequence) and multiplicative-part class ids
    std::vector<size_t> fixed_idx;
    for (int j = 0; j < fp.inclusion.matrix.cols(); ++j) {
        std::vector<Int> col(size_t(fp.inclusion.matrix.rows()));
        for (int i = 0; i < fp.inclusion.matrix.rows(); ++i) col[size_t(i)] = fp.inclusion.matrix.at(i, j);
        fixed_idx.push_back(ops.idx.index(col));
    }
    std::map<std::vector<Int>, int> class_of_key;
    std::map<std::vector<Int>, Int> alpha_bucket;
    std::map<std::vector<QZ>, Int> trace_bucket;
    std::vector<bool> trace_trivial;
    const std::vector<Int> zero_key =
        quotient_key(ws.alpha_quotient(), std::vector<Int>(n * n, Int(0)));
    rep.trivial_trace_found = 0;
    for (const Item& it : items) {
        std::vector<Int> av(it.norm.begin(), it.norm.begin() + long(n * n));
        std::vector<Int> key = quotient_key(ws.alpha_quotient(), av);
        auto ins = class_of_key.emplace(key, int(class_of_key.size()));
        rep.alpha_class.push_back(ins.first->second);
        alpha_bucket[key] += 1;

        std::vector<QZ> vals;
        for (size_t g : fixed_idx) vals.push_back(it.t.beta[g]);
        Character chi{fp.group, vals};
        if (!chi.well_defined())
            throw domain_error("cohomology.trace", "representative trace is not a character");
        bool triv = true;
        for (const QZ& v : vals)
            if (v.num() != 0) triv = false;
        trace_trivial.push_back(triv);
        if (triv) rep.trivial_trace_found += 1;
        trace_bucket[vals] += 1;
        rep.traces.push_back(std::move(chi));
        rep.reps.push_back(it.t);
    }
    rep.trace_image_size = Int(long(trace_bucket.size()));
    rep.trace_fibers_uniform = (rep.trace_image_size == rep.character_term);
    for (const auto& kv : trace_bucket)
        if (kv.second != rep.pairing_term) rep.trace_fibers_uniform = false;
    rep.alpha_fibers_uniform = true;
    for (const auto& kv : alpha_bucket)
        if (kv.second != rep.character_term) rep.alpha_fibers_uniform = false;

    // the kernel of the trace projection must biject with the base-layer
    // classes under forgetting beta
    rep.alpha_classes_found = Int(long(class_of_key.size()));
    std::set<int> kernel_images;
    for (size_t i = 0; i < items.size(); ++i)
        if (trace_trivial[i]) kernel_images.insert(rep.alpha_class[i]);
    rep.kernel_maps_onto_base = (rep.alpha_classes_found == rep.pairing_term) &&
                                (Int(long(kernel_images.size())) == rep.trivial_trace_found) &&
                                (Int(long(kernel_images.size())) == rep.alpha_classes_found);

    std::vector<std::vector<Int>> total_keys;
    for (const Item& it : items) total_keys.push_back(quotient_key(tq, it.norm));
    const int trivial_class = class_of_key.at(zero_key);
    QzSolver tot_solver(dtot);

    // optional normal form per base class: solve
    //   delta(Fx)+delta(Fy)-delta(F(x+y))-delta(x)-delta(y)+delta(x+y)
    //     = alpha(x,y) - alpha(Fx,Fy)
    // so that alpha0 = alpha + (coboundary of delta) is exactly F-invariant,
    // and try to land (alpha0, 0) on an enumerated trivial-trace class. This
    // can fail honestly: a beta-orbit sum can obstruct the zero-beta form.
    IntMatrix m1(int(n * n), int(n));
    for (size_t x = 0; x < n; ++x)
        for (size_t y = 0; y < n; ++y) {
            const int r = int(x * n + y);
            m1.at(r, int(ops.frob(x))) += 1;
            m1.at(r, int(ops.frob(y))) += 1;
            m1.at(r, int(ops.frob(ops.add(x, y)))) -= 1;
            m1.at(r, int(x)) -= 1;
            m1.at(r, int(y)) -= 1;
            m1.at(r, int(ops.add(x, y))) += 1;
        }
    QzSolver inv_solver(m1);
    std::vector<int> first_of_class(class_of_key.size(), -1);
    for (size_t i = 0; i < items.size(); ++i)
        if (first_of_class[size_t(rep.alpha_class[i])] < 0) first_of_class[size_t(rep.alpha_class[i])] = int(i);
    rep.pairing_layer_realized = true;
    std::set<int> pairing_hits;
    for (size_t cls = 0; cls < first_of_class.size(); ++cls) {
        const Item& it = items[size_t(first_of_class[cls])];
        std::vector<QZ> rhs(n * n);
        for (size_t x = 0; x < n; ++x)
            for (size_t y = 0; y < n; ++y) {
                const size_t r = x * n + y;
                rhs[r] = it.t.alpha[r] - it.t.alpha[ops.frob(x) * n + ops.frob(y)];
            }
        QzSolveOutcome out = inv_solver.solve(rhs);
        TotalCocycle t0;
        t0.alpha.resize(n * n);
        t0.beta.assign(n, QZ());
        int hit = -1;
        if (out.solution) {
            const std::vector<QZ>& d = *out.solution;
            for (size_t x = 0; x < n; ++x)
                for (size_t y = 0; y < n; ++y)
                    t0.alpha[x * n + y] = it.t.alpha[x * n + y] + d[x] + d[y] - d[ops.add(x, y)];
            bool invariant = true;
            for (size_t x = 0; x < n && invariant; ++x)
                for (size_t y = 0; y < n; ++y)
                    if (!(t0.alpha[x * n + y] == t0.alpha[ops.frob(x) * n + ops.frob(y)])) {
                        invariant = false;
                        break;
                    }
            if (invariant)
                for (size_t j = 0; j < items.size(); ++j) {
                    if (size_t(rep.alpha_class[j]) != cls || !trace_trivial[j]) continue;
                    std::vector<QZ> diff(n * n + n);
                    for (size_t i = 0; i < n * n; ++i) diff[i] = items[j].t.alpha[i] - t0.alpha[i];
                    for (size_t i = 0; i < n; ++i) diff[n * n + i] = items[j].t.beta[i];
                    if (tot_solver.solvable(diff)) {
                        hit = int(j);
                        break;
                    }
                }
        }
        rep.pairing_layer.push_back(std::move(t0));
        rep.pairing_layer_match.push_back(hit);
        if (hit < 0 || !pairing_hits.insert(hit).second) rep.pairing_layer_realized = false;
    }

    // complementary inclusion: chi -> class of (0, extension of chi); each
    // image must match a distinct enumerated rep with trivial alpha part
    std::set<int> matched;
    rep.character_layer_ok = true;
    for (const Character& chi : all_characters(fp.group)) {
        Character ext = extend_character(fp.inclusion, chi);
        TotalCocycle tc;
        tc.alpha.assign(n * n, QZ());
        tc.beta.resize(n);
        std::vector<Int> vec(n * n + n, Int(0));
        for (size_t i = 0; i < n; ++i) {
            tc.beta[i] = ext.eval(ops.idx.at(i));
            if (L % tc.beta[i].den() != 0)
                throw domain_error("cohomology.level", "character level exceeds the workspace level");
            vec[n * n + i] = tc.beta[i].num() * (L / tc.beta[i].den());
        }
        std::vector<Int> key = quotient_key(tq, vec);
        int hit = -1;
        for (size_t j = 0; j < total_keys.size(); ++j)
            if (total_keys[j] == key) {
                hit = int(j);
                break;
            }
        rep.character_layer.push_back(std::move(tc));
        rep.character_layer_match.push_back(hit);
        if (hit < 0 || !matched.insert(hit).second || rep.alpha_class[size_t(hit)] != trivial_class)
            rep.character_layer_ok = false;
    }

    rep.sequence_exact = rep.counts_consistent && rep.trace_image_size == rep.character_term &&
                         rep.trivial_trace_found == rep.pairing_term && rep.trace_fibers_uniform &&
                         rep.kernel_maps_onto_base && rep.character_layer_ok &&
                         rep.alpha_fibers_uniform;
    return rep;
}

TotalH2Report total_h2(const EtaleGroupModel& e) { return total_h2(e, H2Workspace(e.points)); }

SIsoReport verify_s_iso(const EtaleGroupModel& e, const H2Workspace& ws, std::uint64_t seed) {
    TotalH2Report th = total_h2(e, ws);
    SIsoReport r;
    r.enumerated = th.enumerated;
    r.structural = th.character_term * th.pairing_term;
    r.counts_match = (r.enumerated == r.structural);

    SheafOps ops(e);
    const size_t n = ops.size();
    const Int& L = ws.level();
    std::vector<QCSheafModel> sheaves;
    r.reps_valid = true;
    for (const TotalCocycle& t : th.reps) {
        QCSheafModel q = sheaf_of(e, t);
        if (!validate(q, ops).ok()) r.reps_valid = false;
        sheaves.push_back(std::move(q));
    }

    // distinct classes: no coboundary connects two representatives
    QzSolver solver(coboundary_matrix(ops));
    std::mt19937_64 rng(seed);
    const size_t cnt = sheaves.size();
    std::vector<std::pair<size_t, size_t>> pairs;
    if (cnt <= 80) {
        for (size_t i = 0; i < cnt; ++i)
            for (size_t j = i + 1; j < cnt; ++j) pairs.emplace_back(i, j);
    } else {
        for (int t = 0; t < 500; ++t) {
            size_t i = rng() % cnt, j = rng() % cnt;
            if (i != j) pairs.emplace_back(std::min(i, j), std::max(i, j));
        }
    }
    r.pairwise_distinct = true;
    std::vector<QZ> rhs(n * n + n);
    for (auto [i, j] : pairs) {
        for (size_t t = 0; t < n * n; ++t) rhs[t] = sheaves[j].a[t] - sheaves[i].a[t];
        for (size_t t = 0; t < n; ++t) rhs[n * n + t] = sheaves[j].b[t] - sheaves[i].b[t];
        if (solver.solvable(rhs)) r.pairwise_distinct = false;
    }

    // random coboundary twists must rejoin their class with a checkable witness
    r.twists_rejoin = !sheaves.empty();
    if (!L.fits_ulong_p())
        throw domain_error("cohomology.level", "level too large for twist sampling");
    unsigned long lm = L.get_ui();
    for (const QCSheafModel& q : sheaves) {
        std::vector<QZ> delta(n);
        for (size_t i = 1; i < n; ++i) delta[i] = QZ(Int(rng() % lm), L);
        QCSheafModel tw = twist(q, delta);
        if (!validate(tw, ops).ok()) {
            r.twists_rejoin = false;
            continue;
        }
        IsoResult iso = is_isomorphic(q, tw);
        if (!iso.isomorphic()) {
            r.twists_rejoin = false;
            continue;
        }
        QCSheafModel back = twist(q, *iso.witness);
        if (!(back.a == tw.a && back.b == tw.b)) r.twists_rejoin = false;
    }
    return r;
}

SIsoReport verify_s_iso(const EtaleGroupModel& e, std::uint64_t seed) {
    return verify_s_iso(e, H2Workspace(e.points), seed);
}

} // namespace qcs
