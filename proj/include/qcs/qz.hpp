#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace qcs {

// Exact arbitrary-precision integer. All lattice arithmetic runs on this;
// intermediate Smith-reduction entries can exceed any fixed width.
using Int = mpz_class;

Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);

// An element of Q/Z kept as the reduced fraction num/den with
// 0 <= num < den and gcd(num, den) = 1. Zero is 0/1. This is the additive
// model for the torsion coefficient group: a root of unity is identified
// with its exponent.
class QZ {
public:
    QZ() : num_(0), den_(1) {}
    QZ(Int num, Int den);

    static QZ parse(const std::string& text);

    const Int& num() const { return num_; }
    const Int& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }

    // Order as a group element, i.e. the reduced denominator.
    Int order() const { return den_; }

    QZ operator+(const QZ& o) const;
    QZ operator-(const QZ& o) const;
    QZ operator-() const;
    QZ scaled(const Int& k) const; // k-fold sum

    bool operator==(const QZ& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const QZ& o) const { return !(*this == o); }
    bool operator<(const QZ& o) const; // order by value in [0,1); for canonical sorting

    std::string str() const; // "num/den"

private:
    Int num_, den_;
};

QZ operator*(const Int& k, const QZ& q);

std::string qz_vector_str(const std::vector<QZ>& v);

} // namespace qcs
