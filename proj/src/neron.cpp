#include "qcs/neron.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "qcs/error.hpp"

namespace qcs {

namespace {

bool unimodular(const IntMatrix& m) {
    if (m.rows() != m.cols()) return false;
    SnfOptions o;
    o.want_U = o.want_V = o.want_U_inv = false;
    SnfResult s = smith_engine(m, o);
    if (s.rank != m.rows()) return false;
    for (const Int& d : s.diag)
        if (d != 1) return false;
    return true;
}

std::vector<Int> flat(const IntMatrix& m) {
    std::vector<Int> v;
    v.reserve(size_t(m.rows()) * size_t(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) v.push_back(m.at(i, j));
    return v;
}

void check_shapes(const GaloisLattice& l) {
    if (l.rank < 0) throw domain_error("neron.matrix", "negative rank");
    if (l.frob.rows() != l.rank || l.frob.cols() != l.rank)
        throw domain_error("neron.matrix", "frobenius matrix has wrong shape");
    if (!unimodular(l.frob))
        throw domain_error("neron.matrix", "frobenius matrix is not invertible over the integers");
    for (const IntMatrix& g : l.inertia) {
        if (g.rows() != l.rank || g.cols() != l.rank)
            throw domain_error("neron.matrix", "inertia matrix has wrong shape");
        if (!unimodular(g))
            throw domain_error("neron.matrix", "inertia matrix is not invertible over the integers");
    }
}

} // namespace

std::vector<IntMatrix> inertia_closure(const GaloisLattice& l) {
    check_shapes(l);
    std::vector<IntMatrix> closure;
    std::set<std::vector<Int>> seen;
    IntMatrix id = IntMatrix::identity(l.rank);
    closure.push_back(id);
    seen.insert(flat(id));
    // a finite group is the monoid its generators produce, so plain products
    // of generators exhaust it; an infinite group overruns the bound instead
    std::vector<IntMatrix> frontier{id};
    while (!frontier.empty()) {
        std::vector<IntMatrix> next;
        for (const IntMatrix& g : frontier)
            for (const IntMatrix& s : l.inertia) {
                IntMatrix h = s * g;
                if (!seen.insert(flat(h)).second) continue;
                if (closure.size() >= l.closure_bound)
                    throw domain_error("neron.closure",
                                       "inertia group exceeds the closure bound");
                closure.push_back(h);
                next.push_back(h);
            }
        frontier = std::move(next);
    }
    return closure;
}

FrobModule component_group(const GaloisLattice& l) {
    std::vector<IntMatrix> closure = inertia_closure(l);
    // Frobenius must permute the inertia group by conjugation, checked
    // without inverting: F*g has to match some h*F
    for (const IntMatrix& g : closure) {
        IntMatrix fg = l.frob * g;
        bool found = false;
        for (const IntMatrix& h : closure)
            if (h * l.frob == fg) {
                found = true;
                break;
            }
        if (!found)
            throw domain_error("neron.frobenius", "frobenius does not normalize inertia");
    }

    IntMatrix rel(l.rank, 0);
    IntMatrix id = IntMatrix::identity(l.rank);
    for (const IntMatrix& g : closure) {
        if (g == id) continue;
        rel = IntMatrix::hstack(rel, g - id);
    }
    Presentation pres = from_presentation(rel);
    IntMatrix fm = reduce_columns(pres.proj * l.frob * pres.sect, pres.group);
    GroupHom fr{pres.group, pres.group, fm};
    if (!fr.well_defined() || !is_automorphism(fr))
        throw domain_error("neron.frobenius", "frobenius does not descend to the components");
    return FrobModule{pres.group, fr};
}

DualStructure torus_kernel(const GaloisLattice& l) {
    return dual_of_coinvariants(exterior_square(component_group(l)));
}

DualStructure torus_aut(const GaloisLattice& l) {
    std::vector<IntMatrix> closure = inertia_closure(l);
    IntMatrix id = IntMatrix::identity(l.rank);
    IntMatrix rel(l.rank, 0);
    for (const IntMatrix& g : closure) {
        if (g == id) continue;
        rel = IntMatrix::hstack(rel, g - id);
    }
    rel = IntMatrix::hstack(rel, l.frob - id);
    return dual_structure(from_presentation(rel).group);
}

Int RingSpec::q() const {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, f);
    return r;
}

bool RingSpec::valid() const {
    if (kind != "p-adic" && kind != "laurent") return false;
    if (level < 0 || f < 1) return false;
    if (kind == "p-adic" && f != 1) return false;
    if (p < 2) return false;
    for (unsigned long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

namespace {

// Arithmetic in the field of p^f elements; elements are encoded as
// 0..q-1, base-p digits giving the coefficients over the prime field.
struct FieldArith {
    unsigned long p = 2, f = 1, q = 2;
    std::vector<unsigned long> irred; // low coefficients of the monic modulus

    std::vector<unsigned long> digits(unsigned long a) const {
        std::vector<unsigned long> d(f);
        for (size_t i = 0; i < f; ++i) {
            d[i] = a % p;
            a /= p;
        }
        return d;
    }
    unsigned long encode(const std::vector<unsigned long>& d) const {
        unsigned long a = 0;
        for (size_t i = f; i-- > 0;) a = a * p + d[i] % p;
        return a;
    }
    unsigned long add(unsigned long a, unsigned long b) const {
        if (f == 1) return (a + b) % p;
        std::vector<unsigned long> da = digits(a), db = digits(b);
        for (size_t i = 0; i < f; ++i) da[i] = (da[i] + db[i]) % p;
        return encode(da);
    }
    unsigned long mul(unsigned long a, unsigned long b) const {
        if (f == 1) return (a * b) % p;
        std::vector<unsigned long> da = digits(a), db = digits(b);
        std::vector<unsigned long> t(2 * f - 1, 0);
        for (size_t i = 0; i < f; ++i)
            for (size_t j = 0; j < f; ++j) t[i + j] = (t[i + j] + da[i] * db[j]) % p;
        for (size_t i = 2 * f - 2; i >= f; --i) {
            unsigned long c = t[i];
            if (c) {
                t[i] = 0;
                for (size_t j = 0; j < f; ++j)
                    t[i - f + j] = (t[i - f + j] + (p - irred[j] % p) % p * c) % p;
            }
            if (i == f) break;
        }
        t.resize(f);
        return encode(t);
    }
};

// remainder of the monic polynomial `poly` (low-to-high, top coefficient 1)
// by the monic divisor `div` over F_p; true when the remainder vanishes
bool monic_divides(const std::vector<unsigned long>& div, std::vector<unsigned long> poly,
                   unsigned long p) {
    const size_t k = div.size() - 1;
    for (size_t deg = poly.size() - 1; deg >= k; --deg) {
        unsigned long c = poly[deg];
        if (c) {
            poly[deg] = 0;
            for (size_t j = 0; j < k; ++j)
                poly[deg - k + j] = (poly[deg - k + j] + (p - div[j] % p) % p * c) % p;
        }
        if (deg == k) break;
    }
    for (size_t j = 0; j < k; ++j)
        if (poly[j] % p != 0) return false;
    return true;
}

FieldArith make_field(unsigned long p, unsigned long f) {
    FieldArith gf;
    gf.p = p;
    gf.f = f;
    unsigned long q = 1;
    for (unsigned long i = 0; i < f; ++i) q *= p;
    gf.q = q;
    if (f == 1) return gf;
    // smallest monic irreducible of degree f by trial division
    for (unsigned long code = 0; code < q; ++code) {
        std::vector<unsigned long> low(f);
        unsigned long c = code;
        for (size_t i = 0; i < f; ++i) {
            low[i] = c % p;
            c /= p;
        }
        std::vector<unsigned long> poly = low;
        poly.push_back(1);
        bool reducible = false;
        for (unsigned long k = 1; 2 * k <= f && !reducible; ++k) {
            unsigned long dk = 1;
            for (unsigned long i = 0; i < k; ++i) dk *= p;
            for (unsigned long dc = 0; dc < dk; ++dc) {
                std::vector<unsigned long> div(k + 1);
                unsigned long cc = dc;
                for (size_t i = 0; i < k; ++i) {
                    div[i] = cc % p;
                    cc /= p;
                }
                div[k] = 1;
                if (monic_divides(div, poly, p)) {
                    reducible = true;
                    break;
                }
            }
        }
        if (!reducible) {
            gf.irred = low;
            return gf;
        }
    }
    throw domain_error("neron.field", "no irreducible modulus found");
}

// truncated unit group with explicit element encodings and multiplication
struct UnitTable {
    bool padic = true;
    unsigned long pmod = 0;  // p-adic modulus p^(level+1)
    FieldArith gf;           // laurent coefficient field
    size_t slots = 1;        // level+1 coefficients
    std::vector<unsigned long> elems;
    unsigned long one = 1;

    unsigned long mul(unsigned long a, unsigned long b) const {
        if (padic) return (a * b) % pmod;
        std::vector<unsigned long> da(slots), db(slots), t(slots, 0);
        unsigned long x = a, y = b;
        for (size_t i = 0; i < slots; ++i) {
            da[i] = x % gf.q;
            x /= gf.q;
            db[i] = y % gf.q;
            y /= gf.q;
        }
        for (size_t i = 0; i < slots; ++i)
            for (size_t j = 0; i + j < slots; ++j)
                t[i + j] = gf.add(t[i + j], gf.mul(da[i], db[j]));
        unsigned long enc = 0;
        for (size_t i = slots; i-- > 0;) enc = enc * gf.q + t[i];
        return enc;
    }
    unsigned long pow(unsigned long a, unsigned long e) const {
        unsigned long r = one;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
};

UnitTable build_units(const RingSpec& r, unsigned long bound) {
    if (!r.valid()) throw domain_error("neron.ring", "invalid ring description");
    UnitTable u;
    if (r.kind == "p-adic") {
        u.padic = true;
        Int count = 1;
        for (int i = 0; i < r.level; ++i) count *= r.p;
        count *= r.p - 1;
        if (count > Int(bound))
            throw domain_error("neron.bound", "unit group exceeds the bound");
        u.pmod = 1;
        for (int i = 0; i <= r.level; ++i) u.pmod *= r.p;
        for (unsigned long x = 1; x < u.pmod; ++x)
            if (x % r.p != 0) u.elems.push_back(x);
        u.one = 1;
    } else {
        u.padic = false;
        u.gf = make_field(r.p, r.f);
        Int count = u.gf.q - 1;
        for (int i = 0; i < r.level; ++i) count *= u.gf.q;
        if (count > Int(bound))
            throw domain_error("neron.bound", "unit group exceeds the bound");
        u.slots = size_t(r.level) + 1;
        unsigned long total = 1;
        for (size_t i = 0; i < u.slots; ++i) total *= u.gf.q;
        for (unsigned long v = 0; v < total; ++v)
            if (v % u.gf.q != 0) u.elems.push_back(v);
        u.one = 1;
    }
    return u;
}

std::map<unsigned long, unsigned long> factorize(unsigned long n) {
    std::map<unsigned long, unsigned long> fac;
    for (unsigned long d = 2; d * d <= n; ++d)
        while (n % d == 0) {
            fac[d] += 1;
            n /= d;
        }
    if (n > 1) fac[n] += 1;
    return fac;
}

// invariant factors of a finite abelian group from the multiset of element
// orders: for each prime the counts of elements killed by successive powers
// determine the partition, and the per-prime partitions merge right-aligned
std::vector<Int> factors_from_orders(const UnitTable& u) {
    const unsigned long n = u.elems.size();
    std::map<unsigned long, unsigned long> nfac = factorize(n);

    std::map<unsigned long, std::map<unsigned long, unsigned long>> val_count;
    for (unsigned long x : u.elems) {
        unsigned long ord = n;
        for (const auto& pa : nfac)
            while (ord % pa.first == 0 && u.pow(x, ord / pa.first) == u.one) ord /= pa.first;
        for (const auto& pa : nfac) {
            unsigned long v = 0, o = ord;
            while (o % pa.first == 0) {
                v += 1;
                o /= pa.first;
            }
            val_count[pa.first][v] += 1;
        }
    }

    std::map<unsigned long, std::vector<unsigned long>> parts; // descending exponents
    for (const auto& pa : nfac) {
        const unsigned long P = pa.first;
        // c[j] counts elements whose order has P-valuation at most j; the
        // prime-to-P factor is a constant multiplier that cancels in ratios
        std::vector<unsigned long> c(pa.second + 1, 0);
        unsigned long cum = 0;
        for (unsigned long j = 0; j <= pa.second; ++j) {
            cum += val_count[P][j];
            c[j] = cum;
        }
        std::vector<unsigned long> m(pa.second + 2, 0); // parts with exponent >= j
        for (unsigned long j = 1; j <= pa.second; ++j) {
            if (c[j] % c[j - 1] != 0)
                throw domain_error("neron.units", "inconsistent order statistics");
            unsigned long ratio = c[j] / c[j - 1], e = 0;
            while (ratio % P == 0) {
                e += 1;
                ratio /= P;
            }
            if (ratio != 1) throw domain_error("neron.units", "inconsistent order statistics");
            m[j] = e;
        }
        unsigned long total = 0;
        for (unsigned long j = 1; j <= pa.second; ++j) {
            for (unsigned long t = m[j + 1]; t < m[j]; ++t) parts[P].push_back(j);
            total += m[j];
        }
        if (total != pa.second) throw domain_error("neron.units", "inconsistent order statistics");
        std::sort(parts[P].rbegin(), parts[P].rend());
    }

    size_t width = 0;
    for (const auto& kv : parts) width = std::max(width, kv.second.size());
    std::vector<Int> desc(width, Int(1));
    for (const auto& kv : parts)
        for (size_t i = 0; i < kv.second.size(); ++i) {
            Int pw;
            mpz_ui_pow_ui(pw.get_mpz_t(), kv.first, kv.second[i]);
            desc[i] *= pw;
        }
    std::vector<Int> asc(desc.rbegin(), desc.rend());
    Int prod = 1;
    for (const Int& d : asc) prod *= d;
    if (prod != Int(n)) throw domain_error("neron.units", "inconsistent order statistics");
    return asc;
}

} // namespace

FgAbGroup truncated_units(const RingSpec& r, unsigned long bound) {
    UnitTable u = build_units(r, bound);
    if (u.elems.size() == 1) return FgAbGroup::trivial();
    return FgAbGroup{factors_from_orders(u)};
}

QuasicharCount quasicharacter_count(const GaloisLattice& l, const RingSpec& r,
                                    unsigned long bound) {
    check_shapes(l);
    if (!l.inertia.empty())
        throw domain_error("neron.split", "quasicharacter count requires empty inertia");
    if (!(l.frob == IntMatrix::identity(l.rank)))
        throw domain_error("neron.split", "quasicharacter count requires identity frobenius");
    FgAbGroup units = truncated_units(r, bound);
    QuasicharCount out;
    Int uo = units.order();
    out.order = 1;
    for (int i = 0; i < l.rank; ++i) out.order *= uo;
    for (const Int& d : units.factors)
        for (int i = 0; i < l.rank; ++i) out.factors.push_back(d);
    std::sort(out.factors.begin(), out.factors.end());
    return out;
}

LevelCheck level_system_check(const RingSpec& low, int high_level, unsigned long bound) {
    if (high_level < low.level)
        throw domain_error("neron.level", "higher level below the base level");
    RingSpec high = low;
    high.level = high_level;
    UnitTable ul = build_units(low, bound);
    UnitTable uh = build_units(high, bound);

    LevelCheck out;
    out.low_order = Int(static_cast<unsigned long>(ul.elems.size()));
    out.high_order = Int(static_cast<unsigned long>(uh.elems.size()));

    // truncation on encodings: reduce mod p^(n+1), or drop high coefficients
    unsigned long cutoff = 1;
    if (low.kind == "p-adic")
        cutoff = ul.pmod;
    else
        for (int i = 0; i <= low.level; ++i) cutoff *= ul.gf.q;

    std::set<unsigned long> image;
    unsigned long kernel = 0;
    for (unsigned long x : uh.elems) {
        unsigned long t = x % cutoff;
        image.insert(t);
        if (t == 1) kernel += 1;
    }
    out.surjective = (image.size() == ul.elems.size());
    out.kernel_order = Int(kernel);
    Int base = (low.kind == "p-adic") ? Int(low.p) : low.q();
    Int expect;
    mpz_pow_ui(expect.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(high_level - low.level));
    out.expected_kernel = expect;
    out.dual_embeds = out.surjective && out.high_order % out.low_order == 0;
    return out;
}

} // namespace qcs
