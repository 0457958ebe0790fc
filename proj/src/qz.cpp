#include "qcs/qz.hpp"

#include "qcs/error.hpp"

namespace qcs {

Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Int lcm(const Int& a, const Int& b) {
    if (a == 0 || b == 0) return 0;
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

QZ::QZ(Int num, Int den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw domain_error("qz.zero_denominator", "QZ denominator must be nonzero");
    if (den_ < 0) { den_ = -den_; num_ = -num_; }
    mpz_mod(num_.get_mpz_t(), num_.get_mpz_t(), den_.get_mpz_t()); // canonical nonneg residue
    Int g = gcd(num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
}

QZ QZ::parse(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) {
        // bare integers are admitted and reduce to zero mod 1
        return QZ(Int(text), 1);
    }
    Int n(text.substr(0, slash));
    Int d(text.substr(slash + 1));
    return QZ(n, d);
}

QZ QZ::operator+(const QZ& o) const {
    return QZ(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

QZ QZ::operator-(const QZ& o) const {
    return QZ(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

QZ QZ::operator-() const { return QZ(-num_, den_); }

QZ QZ::scaled(const Int& k) const { return QZ(k * num_, den_); }

QZ operator*(const Int& k, const QZ& q) { return q.scaled(k); }

bool QZ::operator<(const QZ& o) const {
    return num_ * o.den_ < o.num_ * den_;
}

std::string QZ::str() const { return num_.get_str() + "/" + den_.get_str(); }

std::string qz_vector_str(const std::vector<QZ>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += v[i].str();
    }
    return s + "]";
}

} // namespace qcs
