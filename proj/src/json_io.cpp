#include "qcs/json_io.hpp"

#include <cstdint>
#include <sstream>

#include "qcs/error.hpp"

namespace qcs {

namespace {

[[noreturn]] void bad(const std::string& what) { throw domain_error("json", what); }

void need(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
}

std::string join_coords(const std::vector<Int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i].get_str();
    }
    return s;
}

std::vector<Int> split_coords(const std::string& s, size_t expect) {
    std::vector<Int> out;
    if (!s.empty()) {
        std::stringstream ss(s);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (part.empty()) bad("empty coordinate in key \"" + s + "\"");
            try {
                out.emplace_back(part, 10);
            } catch (const std::invalid_argument&) {
                bad("bad coordinate in key \"" + s + "\"");
            }
        }
    }
    if (out.size() != expect) bad("key \"" + s + "\" has the wrong coordinate count");
    return out;
}

} // namespace

Json int_to_json(const Int& v) {
    if (v.fits_slong_p()) return Json(static_cast<std::int64_t>(v.get_si()));
    return Json(v.get_str());
}

Int int_from_json(const Json& j) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_number_unsigned()) return Int(static_cast<unsigned long>(j.get<std::uint64_t>()));
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>(), 10);
        } catch (const std::invalid_argument&) {
            bad("bad integer string \"" + j.get<std::string>() + "\"");
        }
    }
    bad("expected an integer");
}

Json qz_to_json(const QZ& v) { return Json(v.str()); }

QZ qz_from_json(const Json& j) {
    if (!j.is_string()) bad("expected a \"num/den\" string");
    std::string s = j.get<std::string>();
    size_t slash = s.find('/');
    try {
        if (slash == std::string::npos) return QZ(Int(s, 10), 1);
        return QZ(Int(s.substr(0, slash), 10), Int(s.substr(slash + 1), 10));
    } catch (const std::invalid_argument&) {
        bad("bad rational \"" + s + "\"");
    }
}

Json matrix_to_json(const IntMatrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(int_to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

IntMatrix matrix_from_json(const Json& j) {
    if (!j.is_array()) bad("expected a matrix (array of rows)");
    int rows = int(j.size());
    int cols = rows ? int(j.at(0).size()) : 0;
    IntMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!j.at(size_t(i)).is_array() || int(j.at(size_t(i)).size()) != cols)
            bad("ragged matrix rows");
        for (int c = 0; c < cols; ++c) m.at(i, c) = int_from_json(j.at(size_t(i)).at(size_t(c)));
    }
    return m;
}

Json group_to_json(const FgAbGroup& g) {
    Json factors = Json::array();
    for (const Int& d : g.factors) factors.push_back(int_to_json(d));
    return Json{{"factors", std::move(factors)}};
}

FgAbGroup group_from_json(const Json& j) {
    need(j, "factors");
    if (!j.at("factors").is_array()) bad("\"factors\" must be an array");
    std::vector<Int> f;
    for (const Json& e : j.at("factors")) f.push_back(int_from_json(e));
    FgAbGroup g{std::move(f)};
    if (!g.valid()) bad("factors must be a divisibility chain with free parts last");
    return g;
}

Json model_to_json(const EtaleGroupModel& e) {
    Json out = group_to_json(e.points);
    out["frobenius"] = matrix_to_json(e.frob.matrix);
    return out;
}

EtaleGroupModel model_from_json(const Json& j) {
    need(j, "factors");
    need(j, "frobenius");
    std::vector<Int> f;
    for (const Json& x : j.at("factors")) f.push_back(int_from_json(x));
    NormalizedModel nm = normalize_model(f, matrix_from_json(j.at("frobenius")));
    return nm.model;
}

Json sheaf_to_json(const QCSheafModel& q) {
    SheafOps ops(q.base);
    const size_t n = ops.size();
    Json a = Json::object(), b = Json::object();
    for (size_t x = 0; x < n; ++x) {
        std::string kx = join_coords(ops.idx.at(x));
        b[kx] = qz_to_json(q.b[x]);
        for (size_t y = 0; y < n; ++y) {
            std::vector<Int> both = ops.idx.at(x);
            std::vector<Int> ry = ops.idx.at(y);
            both.insert(both.end(), ry.begin(), ry.end());
            a[join_coords(both)] = qz_to_json(q.a[x * n + y]);
        }
    }
    return Json{{"base", model_to_json(q.base)}, {"a", std::move(a)}, {"b", std::move(b)}};
}

QCSheafModel sheaf_from_json(const Json& j) {
    need(j, "base");
    need(j, "a");
    need(j, "b");
    QCSheafModel q;
    q.base = model_from_json(j.at("base"));
    SheafOps ops(q.base);
    const size_t n = ops.size();
    const size_t r = size_t(q.base.points.rank());
    q.a.assign(n * n, QZ());
    q.b.assign(n, QZ());
    std::vector<bool> seen_a(n * n, false), seen_b(n, false);
    if (!j.at("a").is_object() || !j.at("b").is_object()) bad("\"a\" and \"b\" must be objects");
    for (auto it = j.at("a").begin(); it != j.at("a").end(); ++it) {
        std::vector<Int> both = split_coords(it.key(), 2 * r);
        std::vector<Int> x(both.begin(), both.begin() + long(r));
        std::vector<Int> y(both.begin() + long(r), both.end());
        size_t ix = ops.idx.index(q.base.points.reduce(x));
        size_t iy = ops.idx.index(q.base.points.reduce(y));
        if (seen_a[ix * n + iy]) bad("duplicate \"a\" key \"" + it.key() + "\"");
        seen_a[ix * n + iy] = true;
        q.a[ix * n + iy] = qz_from_json(it.value());
    }
    for (auto it = j.at("b").begin(); it != j.at("b").end(); ++it) {
        std::vector<Int> x = split_coords(it.key(), r);
        size_t ix = ops.idx.index(q.base.points.reduce(x));
        if (seen_b[ix]) bad("duplicate \"b\" key \"" + it.key() + "\"");
        seen_b[ix] = true;
        q.b[ix] = qz_from_json(it.value());
    }
    for (size_t i = 0; i < n * n; ++i)
        if (!seen_a[i]) bad("missing \"a\" entries");
    for (size_t i = 0; i < n; ++i)
        if (!seen_b[i]) bad("missing \"b\" entries");
    return q;
}

Json lattice_to_json(const GaloisLattice& l) {
    Json inertia = Json::array();
    for (const IntMatrix& g : l.inertia) inertia.push_back(matrix_to_json(g));
    return Json{{"rank", l.rank},
                {"inertia", std::move(inertia)},
                {"frob", matrix_to_json(l.frob)},
                {"bound", l.closure_bound}};
}

GaloisLattice lattice_from_json(const Json& j) {
    need(j, "rank");
    need(j, "inertia");
    need(j, "frob");
    GaloisLattice l;
    if (!j.at("rank").is_number_integer()) bad("\"rank\" must be an integer");
    l.rank = j.at("rank").get<int>();
    if (!j.at("inertia").is_array()) bad("\"inertia\" must be an array of matrices");
    for (const Json& g : j.at("inertia")) l.inertia.push_back(matrix_from_json(g));
    l.frob = matrix_from_json(j.at("frob"));
    if (j.contains("bound")) l.closure_bound = j.at("bound").get<unsigned long>();
    return l;
}

Json ring_to_json(const RingSpec& r) {
    Json out{{"kind", r.kind}, {"level", r.level}};
    if (r.kind == "p-adic")
        out["p"] = r.p;
    else
        out["q"] = int_to_json(r.q());
    return out;
}

RingSpec ring_from_json(const Json& j) {
    need(j, "kind");
    need(j, "level");
    RingSpec r;
    r.kind = j.at("kind").get<std::string>();
    r.level = j.at("level").get<int>();
    if (r.kind == "p-adic") {
        need(j, "p");
        Int p = int_from_json(j.at("p"));
        if (!p.fits_ulong_p()) bad("residue characteristic too large");
        r.p = p.get_ui();
        r.f = 1;
    } else if (r.kind == "laurent") {
        need(j, "q");
        Int q = int_from_json(j.at("q"));
        if (q < 2 || !q.fits_ulong_p()) bad("\"q\" must be a prime power");
        unsigned long qq = q.get_ui();
        unsigned long p = 0;
        for (unsigned long d = 2; d * d <= qq; ++d)
            if (qq % d == 0) {
                p = d;
                break;
            }
        if (p == 0) p = qq;
        unsigned long f = 0, t = qq;
        while (t % p == 0) {
            t /= p;
            f += 1;
        }
        if (t != 1) bad("\"q\" must be a prime power");
        r.p = p;
        r.f = f;
    } else {
        bad("\"kind\" must be \"p-adic\" or \"laurent\"");
    }
    if (!r.valid()) bad("invalid ring description");
    return r;
}

Json dual_to_json(const DualStructure& d) {
    Json torsion = Json::array();
    for (const Int& t : d.torsion) torsion.push_back(int_to_json(t));
    return Json{{"divisible_rank", d.divisible_rank}, {"torsion", std::move(torsion)}};
}

Json character_to_json(const Character& c) {
    Json values = Json::array();
    for (const QZ& v : c.values) values.push_back(qz_to_json(v));
    Json out = group_to_json(c.domain);
    out["values"] = std::move(values);
    return out;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

} // namespace qcs
