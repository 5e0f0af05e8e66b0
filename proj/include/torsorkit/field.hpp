#pragma once

#include <gmpxx.h>

#include <string>

#include "torsorkit/errors.hpp"

namespace torsorkit {

using Scalar = mpq_class;

// Prime field or the rationals. Elements are always mpq_class values; for
// GF(p) they are kept as canonical integers in [0, p).
class Field {
public:
    Field() = default;

    static Field rationals() { return Field(); }
    static Field gf(unsigned long p);
    static Field parse(const std::string& spec); // "Q", "GF101", "GF(101)", "GFp" with p digits

    unsigned long characteristic() const { return p_; }
    bool is_rational() const { return p_ == 0; }
    std::string name() const;

    Scalar reduce(const mpq_class& q) const;
    Scalar from_int(long v) const { return reduce(mpq_class(v)); }
    Scalar parse_scalar(const std::string& s) const;
    std::string format(const Scalar& a) const;

    Scalar add(const Scalar& a, const Scalar& b) const;
    Scalar sub(const Scalar& a, const Scalar& b) const;
    Scalar mul(const Scalar& a, const Scalar& b) const;
    Scalar neg(const Scalar& a) const;
    Scalar inv(const Scalar& a) const;
    Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }
    // acc += a * b
    void fma(Scalar& acc, const Scalar& a, const Scalar& b) const;

    static bool is_zero(const Scalar& a) { return sgn(a) == 0; }

    bool operator==(const Field& o) const { return p_ == o.p_; }
    bool operator!=(const Field& o) const { return p_ != o.p_; }

private:
    explicit Field(unsigned long p) : p_(p) {}
    void mod_inplace(mpz_class& z) const;
    unsigned long p_ = 0;
};

bool is_prime(unsigned long n);

} // namespace torsorkit
