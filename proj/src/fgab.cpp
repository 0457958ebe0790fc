#include "qcs/fgab.hpp"

#include <algorithm>

#include "qcs/error.hpp"

namespace qcs {

bool FgAbGroup::is_finite() const {
    for (const Int& d : factors)
        if (d == 0) return false;
    return true;
}

Int FgAbGroup::order() const {
    if (!is_finite()) throw domain_error("group.infinite", "order of an infinite group");
    Int n = 1;
    for (const Int& d : factors) n *= d;
    return n;
}

Int FgAbGroup::exponent() const {
    if (!is_finite()) throw domain_error("group.infinite", "exponent of an infinite group");
    return factors.empty() ? Int(1) : factors.back();
}

bool FgAbGroup::valid() const {
    for (size_t i = 0; i < factors.size(); ++i) {
        if (factors[i] < 0 || factors[i] == 1) return false;
        if (i + 1 < factors.size()) {
            const Int &a = factors[i], &b = factors[i + 1];
            if (a == 0 && b != 0) return false; // zeros must trail
            if (a != 0 && b != 0 && b % a != 0) return false;
        }
    }
    return true;
}

std::vector<Int> FgAbGroup::reduce(std::vector<Int> x) const {
    if (x.size() != factors.size())
        throw domain_error("group.coords", "coordinate count mismatch");
    for (size_t i = 0; i < x.size(); ++i)
        if (factors[i] != 0)
            mpz_mod(x[i].get_mpz_t(), x[i].get_mpz_t(), factors[i].get_mpz_t());
    return x;
}

bool FgAbGroup::is_zero(const std::vector<Int>& x) const {
    std::vector<Int> r = reduce(x);
    return std::all_of(r.begin(), r.end(), [](const Int& v) { return v == 0; });
}

std::vector<std::vector<Int>> FgAbGroup::elements() const {
    ElementIndex idx(*this);
    std::vector<std::vector<Int>> out;
    out.reserve(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) out.push_back(idx.at(i));
    return out;
}

GroupHom GroupHom::identity(const FgAbGroup& g) {
    return GroupHom{g, g, IntMatrix::identity(g.rank())};
}

bool GroupHom::well_defined() const {
    if (matrix.rows() != target.rank() || matrix.cols() != source.rank()) return false;
    for (int j = 0; j < source.rank(); ++j) {
        if (source.factors[j] == 0) continue;
        std::vector<Int> img(target.rank());
        for (int i = 0; i < target.rank(); ++i) img[i] = source.factors[j] * matrix.at(i, j);
        if (!target.is_zero(img)) return false;
    }
    return true;
}

std::vector<Int> GroupHom::apply(const std::vector<Int>& x) const {
    return target.reduce(matrix.apply(source.reduce(x)));
}

GroupHom GroupHom::compose(const GroupHom& inner) const {
    if (inner.target != source)
        throw domain_error("hom.compose", "composition domain mismatch");
    return GroupHom{inner.source, target, matrix * inner.matrix};
}

bool GroupHom::equals(const GroupHom& o) const {
    if (source != o.source || target != o.target) return false;
    for (int j = 0; j < source.rank(); ++j) {
        std::vector<Int> d(target.rank());
        for (int i = 0; i < target.rank(); ++i) d[i] = matrix.at(i, j) - o.matrix.at(i, j);
        if (!target.is_zero(d)) return false;
    }
    return true;
}

bool FrobModule::valid() const {
    return frob.source == group && frob.target == group && frob.well_defined() &&
           is_automorphism(frob);
}

Presentation from_presentation(const IntMatrix& relations) {
    const int ambient = relations.rows();
    SnfOptions o;
    o.want_V = false;
    o.want_U_inv = true;
    SnfResult r = smith_engine(relations, o);

    std::vector<int> keep;
    std::vector<Int> factors;
    const int n = int(r.diag.size());
    for (int i = 0; i < ambient; ++i) {
        Int s = (i < n) ? r.diag[i] : Int(0);
        if (s == 1) continue;
        keep.push_back(i);
        factors.push_back(s);
    }

    Presentation out;
    out.group = FgAbGroup{std::move(factors)};
    out.proj = IntMatrix(int(keep.size()), ambient);
    out.sect = IntMatrix(ambient, int(keep.size()));
    for (size_t k = 0; k < keep.size(); ++k) {
        for (int j = 0; j < ambient; ++j) out.proj.at(int(k), j) = r.U.at(keep[k], j);
        for (int i = 0; i < ambient; ++i) out.sect.at(i, int(k)) = r.U_inv.at(i, keep[k]);
    }
    return out;
}

namespace {

IntMatrix top_rows(const IntMatrix& m, int k) {
    IntMatrix r(k, m.cols());
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < m.cols(); ++j) r.at(i, j) = m.at(i, j);
    return r;
}

} // namespace

IntMatrix reduce_columns(IntMatrix m, const FgAbGroup& g) {
    for (int i = 0; i < m.rows(); ++i) {
        if (g.factors[i] == 0) continue;
        for (int j = 0; j < m.cols(); ++j)
            mpz_mod(m.at(i, j).get_mpz_t(), m.at(i, j).get_mpz_t(), g.factors[i].get_mpz_t());
    }
    return m;
}

Subgroup hom_kernel(const GroupHom& f) {
    const int n = f.source.rank();
    // x with f(x) = 0 in the target: F x lands in the target's relation lattice
    IntMatrix sys = IntMatrix::hstack(f.matrix, IntMatrix::diagonal(f.target.factors));
    IntMatrix gens = top_rows(kernel_basis(sys), n); // generating set of the kernel lattice

    // present those generators modulo the source's relations
    IntMatrix rel_sys = IntMatrix::hstack(gens, IntMatrix::diagonal(f.source.factors));
    IntMatrix rels = top_rows(kernel_basis(rel_sys), gens.cols());
    Presentation pres = from_presentation(rels);

    GroupHom incl{pres.group, f.source, reduce_columns(gens * pres.sect, f.source)};
    return Subgroup{pres.group, std::move(incl)};
}

Quotient hom_cokernel(const GroupHom& f) {
    IntMatrix rels = IntMatrix::hstack(f.matrix, IntMatrix::diagonal(f.target.factors));
    Presentation pres = from_presentation(rels);
    GroupHom proj{f.target, pres.group, reduce_columns(pres.proj, pres.group)};
    return Quotient{pres.group, std::move(proj), pres.sect};
}

bool is_automorphism(const GroupHom& f) {
    if (f.source != f.target || !f.well_defined()) return false;
    return hom_kernel(f).group.is_trivial() && hom_cokernel(f).group.is_trivial();
}

GroupHom hom_inverse(const GroupHom& f) {
    if (!is_automorphism(f)) throw domain_error("hom.not_automorphism", "inverse of a non-automorphism");
    const int n = f.source.rank();
    IntMatrix sys = IntMatrix::hstack(f.matrix, IntMatrix::diagonal(f.source.factors));
    IntMatrix inv(n, n);
    for (int j = 0; j < n; ++j) {
        std::vector<Int> e(n, Int(0));
        e[j] = 1;
        auto sol = solve_integer(sys, e);
        if (!sol) throw domain_error("hom.not_automorphism", "generator has no preimage");
        for (int i = 0; i < n; ++i) inv.at(i, j) = (*sol)[i];
    }
    return GroupHom{f.source, f.source, reduce_columns(std::move(inv), f.source)};
}

GroupHom frob_minus_id(const FrobModule& m) {
    return GroupHom{m.group, m.group, m.frob.matrix - IntMatrix::identity(m.group.rank())};
}

Subgroup invariants(const FrobModule& m) { return hom_kernel(frob_minus_id(m)); }

Quotient coinvariants(const FrobModule& m) { return hom_cokernel(frob_minus_id(m)); }

FrobModule exterior_square(const FrobModule& m) {
    const int n = m.group.rank();
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

    std::vector<Int> factors;
    factors.reserve(pairs.size());
    for (auto& [i, j] : pairs) factors.push_back(gcd(m.group.factors[i], m.group.factors[j]));
    FgAbGroup wedge{factors};
    if (!wedge.valid())
        throw domain_error("fgab.exterior", "exterior square factors fell out of chain form");

    const IntMatrix& F = m.frob.matrix;
    IntMatrix W(int(pairs.size()), int(pairs.size()));
    for (size_t col = 0; col < pairs.size(); ++col) {
        auto [i, j] = pairs[col];
        for (size_t row = 0; row < pairs.size(); ++row) {
            auto [k, l] = pairs[row];
            W.at(int(row), int(col)) = F.at(k, i) * F.at(l, j) - F.at(l, i) * F.at(k, j);
        }
    }
    GroupHom wf{wedge, wedge, reduce_columns(std::move(W), wedge)};
    return FrobModule{std::move(wedge), std::move(wf)};
}

Int DualStructure::torsion_order() const {
    Int n = 1;
    for (const Int& d : torsion) n *= d;
    return n;
}

DualStructure dual_structure(const FgAbGroup& g) {
    DualStructure d;
    for (const Int& f : g.factors) {
        if (f == 0)
            ++d.divisible_rank;
        else
            d.torsion.push_back(f);
    }
    return d;
}

DualStructure dual_of_coinvariants(const FrobModule& m) {
    return dual_structure(coinvariants(m).group);
}

bool Character::well_defined() const {
    if (values.size() != domain.factors.size()) return false;
    for (size_t i = 0; i < values.size(); ++i) {
        if (domain.factors[i] == 0) continue;
        if (!values[i].scaled(domain.factors[i]).is_zero()) return false;
    }
    return true;
}

QZ Character::eval(const std::vector<Int>& x) const {
    std::vector<Int> r = domain.reduce(x);
    QZ acc;
    for (size_t i = 0; i < r.size(); ++i)
        if (r[i] != 0) acc = acc + values[i].scaled(r[i]);
    return acc;
}

std::vector<Character> all_characters(const FgAbGroup& g) {
    if (!g.is_finite()) throw domain_error("group.infinite", "character enumeration needs a finite group");
    std::vector<Character> out;
    std::vector<Int> k(g.factors.size(), Int(0));
    for (;;) {
        std::vector<QZ> vals;
        vals.reserve(k.size());
        for (size_t i = 0; i < k.size(); ++i) vals.emplace_back(k[i], g.factors[i]);
        out.push_back(Character{g, std::move(vals)});
        int pos = int(k.size()) - 1;
        while (pos >= 0) {
            k[pos] += 1;
            if (k[pos] < g.factors[pos]) break;
            k[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return out;
}

Character extend_character(const GroupHom& inclusion, const Character& chi) {
    if (chi.domain != inclusion.source)
        throw domain_error("character.domain", "character domain does not match the inclusion source");
    if (!chi.well_defined())
        throw domain_error("character.ill_defined", "character values incompatible with generator orders");
    if (!hom_kernel(inclusion).group.is_trivial())
        throw domain_error("character.not_injective", "extension requires an injective inclusion");

    const int nt = inclusion.target.rank();
    IntMatrix sys = IntMatrix::vstack(inclusion.matrix.transposed(),
                                      IntMatrix::diagonal(inclusion.target.factors));
    std::vector<QZ> rhs(chi.values);
    rhs.resize(size_t(sys.rows()));
    QzSolveOutcome sol = solve_qz(sys, rhs);
    if (!sol.solution)
        throw domain_error("character.extension", "no extension found; inclusion data inconsistent");
    sol.solution->resize(size_t(nt));
    return Character{inclusion.target, std::move(*sol.solution)};
}

ElementIndex::ElementIndex(FgAbGroup g, unsigned long max_size) : g_(std::move(g)) {
    if (!g_.is_finite()) throw domain_error("group.infinite", "element index needs a finite group");
    Int n = g_.order();
    if (!n.fits_ulong_p() || n.get_ui() > max_size)
        throw domain_error("group.too_large", "group order exceeds the enumeration bound");
    n_ = n.get_ui();
    dims_.reserve(g_.factors.size());
    for (const Int& d : g_.factors) dims_.push_back(d.get_ui());
}

std::vector<Int> ElementIndex::at(size_t i) const {
    std::vector<Int> x(dims_.size());
    for (int k = int(dims_.size()) - 1; k >= 0; --k) {
        x[k] = Int(static_cast<unsigned long>(i % dims_[k]));
        i /= dims_[k];
    }
    return x;
}

size_t ElementIndex::index(const std::vector<Int>& x) const {
    std::vector<Int> r = g_.reduce(x);
    size_t i = 0;
    for (size_t k = 0; k < dims_.size(); ++k) i = i * dims_[k] + r[k].get_ui();
    return i;
}

size_t ElementIndex::add(size_t i, size_t j) const {
    std::vector<Int> a = at(i), b = at(j);
    for (size_t k = 0; k < a.size(); ++k) a[k] += b[k];
    return index(a);
}

size_t ElementIndex::neg(size_t i) const {
    std::vector<Int> a = at(i);
    for (Int& v : a) v = -v;
    return index(a);
}

std::vector<size_t> ElementIndex::hom_table(const GroupHom& f, const ElementIndex& target) const {
    std::vector<size_t> t(n_);
    for (size_t i = 0; i < n_; ++i) t[i] = target.index(f.apply(at(i)));
    return t;
}

} // namespace qcs
