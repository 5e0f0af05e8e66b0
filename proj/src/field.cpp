#include "torsorkit/field.hpp"

#include <cctype>

namespace torsorkit {

bool is_prime(unsigned long n)
{
    if (n < 2) return false;
    for (unsigned long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Field Field::gf(unsigned long p)
{
    if (!is_prime(p)) throw FieldError("GF(p) requires a prime, got " + std::to_string(p));
    if (p > (1UL << 31)) throw FieldError("prime too large: " + std::to_string(p));
    return Field(p);
}

Field Field::parse(const std::string& spec)
{
    if (spec == "Q" || spec == "q") return rationals();
    std::string digits;
    if (spec.rfind("GF", 0) == 0) {
        for (char c : spec.substr(2))
            if (std::isdigit(static_cast<unsigned char>(c))) digits += c;
            else if (c != '(' && c != ')') throw FieldError("bad field spec: " + spec);
    }
    if (digits.empty() || digits.size() > 10) throw FieldError("bad field spec: " + spec);
    return gf(std::stoul(digits));
}

std::string Field::name() const
{
    return p_ == 0 ? "Q" : "GF(" + std::to_string(p_) + ")";
}

void Field::mod_inplace(mpz_class& z) const
{
    mpz_fdiv_r_ui(z.get_mpz_t(), z.get_mpz_t(), p_);
}

Scalar Field::reduce(const mpq_class& q) const
{
    if (p_ == 0) return q;
    mpz_class num = q.get_num();
    mpz_class den = q.get_den();
    mod_inplace(num);
    mod_inplace(den);
    if (den == 0) throw FieldError("denominator vanishes in " + name() + ": " + q.get_str());
    mpz_class di;
    mpz_class pm(p_);
    mpz_invert(di.get_mpz_t(), den.get_mpz_t(), pm.get_mpz_t());
    mpz_class r = num * di;
    mod_inplace(r);
    return mpq_class(r);
}

Scalar Field::parse_scalar(const std::string& s) const
{
    mpq_class q;
    // mpq_set_str accepts "p" and "p/q" with optional sign; it does not throw
    if (s.empty() || s.find_first_of(" \t") != std::string::npos || q.set_str(s, 10) != 0)
        throw FieldError("not a rational literal: '" + s + "'");
    if (q.get_den() == 0) throw FieldError("zero denominator: '" + s + "'");
    q.canonicalize();
    return reduce(q);
}

std::string Field::format(const Scalar& a) const
{
    if (a.get_den() == 1) return a.get_num().get_str() + "/1";
    return a.get_str();
}

Scalar Field::add(const Scalar& a, const Scalar& b) const
{
    if (p_ == 0) return a + b;
    mpz_class r = a.get_num() + b.get_num();
    if (r >= p_) r -= p_;
    return mpq_class(r);
}

Scalar Field::sub(const Scalar& a, const Scalar& b) const
{
    if (p_ == 0) return a - b;
    mpz_class r = a.get_num() - b.get_num();
    if (r < 0) r += p_;
    return mpq_class(r);
}

Scalar Field::mul(const Scalar& a, const Scalar& b) const
{
    if (p_ == 0) return a * b;
    mpz_class r = a.get_num() * b.get_num();
    mod_inplace(r);
    return mpq_class(r);
}

Scalar Field::neg(const Scalar& a) const
{
    if (p_ == 0) return -a;
    if (a == 0) return a;
    return mpq_class(mpz_class(p_) - a.get_num());
}

Scalar Field::inv(const Scalar& a) const
{
    if (is_zero(a)) throw FieldError("division by zero");
    if (p_ == 0) return 1 / a;
    mpz_class r;
    mpz_class pm(p_);
    mpz_invert(r.get_mpz_t(), a.get_num_mpz_t(), pm.get_mpz_t());
    return mpq_class(r);
}

void Field::fma(Scalar& acc, const Scalar& a, const Scalar& b) const
{
    if (p_ == 0) {
        acc += a * b;
        return;
    }
    mpz_class r = acc.get_num() + a.get_num() * b.get_num();
    mod_inplace(r);
    acc = mpq_class(r);
}

} // namespace torsorkit
