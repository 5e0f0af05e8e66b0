#pragma once

// Naive dense rational linear algebra used only to recompute expected values
// in tests. Deliberately shares no code with the library.

#include <gmpxx.h>

#include <functional>
#include <vector>

namespace oracle {

using Q = mpq_class;
using Vec = std::vector<Q>;
using Mat = std::vector<Vec>; // row major

inline Mat zeros(std::size_t r, std::size_t c)
{
    return Mat(r, Vec(c, Q(0)));
}

// plain Gauss-Jordan with first-nonzero pivoting; optionally modulo p
inline std::size_t rank(Mat a, unsigned long p = 0)
{
    auto norm = [p](Q& x) {
        if (p == 0) return;
        mpz_class n = x.get_num() * 1;
        mpz_class d = x.get_den();
        mpz_class pm(p), di;
        mpz_invert(di.get_mpz_t(), d.get_mpz_t(), pm.get_mpz_t());
        n = (n * di) % pm;
        if (n < 0) n += pm;
        x = Q(n);
    };
    for (auto& r : a)
        for (auto& x : r) norm(x);
    std::size_t rk = 0;
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    for (std::size_t c = 0; c < cols && rk < rows; ++c) {
        std::size_t piv = rows;
        for (std::size_t i = rk; i < rows; ++i)
            if (a[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv == rows) continue;
        std::swap(a[piv], a[rk]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rk || a[i][c] == 0) continue;
            Q factor = a[i][c] / a[rk][c];
            if (p) {
                mpz_class pm(p), inv;
                mpz_invert(inv.get_mpz_t(), a[rk][c].get_num_mpz_t(), pm.get_mpz_t());
                factor = Q((a[i][c].get_num() * inv) % pm);
            }
            for (std::size_t j = 0; j < cols; ++j) {
                a[i][j] -= factor * a[rk][j];
                norm(a[i][j]);
            }
        }
        ++rk;
    }
    return rk;
}

inline Mat transpose(const Mat& a)
{
    if (a.empty()) return {};
    Mat t = zeros(a[0].size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
    return t;
}

// rank of a list of column vectors
inline std::size_t span_rank(const std::vector<Vec>& columns, unsigned long p = 0)
{
    if (columns.empty()) return 0;
    return rank(Mat(columns.begin(), columns.end()), p);
}

// structure-constant algebra given by a product on basis indices
struct Alg {
    std::size_t dim;
    std::function<Vec(std::size_t, std::size_t)> mul; // e_i e_j
    Vec unit;
};

inline Vec mul_vec(const Alg& a, const Vec& x, const Vec& y)
{
    Vec out(a.dim, Q(0));
    for (std::size_t i = 0; i < a.dim; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < a.dim; ++j) {
            if (y[j] == 0) continue;
            Vec p = a.mul(i, j);
            for (std::size_t k = 0; k < a.dim; ++k) out[k] += x[i] * y[j] * p[k];
        }
    }
    return out;
}

inline Vec basis(std::size_t n, std::size_t i)
{
    Vec v(n, Q(0));
    v[i] = 1;
    return v;
}

inline Vec kron(const Vec& a, const Vec& b)
{
    Vec out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b) out.push_back(x * y);
    return out;
}

// B # k[Z/2] pattern with B = k[y]/(y^2-1), g.y = -y, coded from the group law:
// (y^a (x) y^a' (x) g^c)(y^b (x) y^b' (x) g^d) = (-1)^(cb + d a') y^(a+b) (x) y^(b'+a') (x) g^(c+d)
inline Mat smash_c2()
{
    Mat m = zeros(8, 64);
    auto idx = [](int a, int a2, int c) { return (a * 2 + a2) * 2 + c; };
    for (int a = 0; a < 2; ++a)
        for (int a2 = 0; a2 < 2; ++a2)
            for (int c = 0; c < 2; ++c)
                for (int b = 0; b < 2; ++b)
                    for (int b2 = 0; b2 < 2; ++b2)
                        for (int d = 0; d < 2; ++d) {
                            int sign = (c * b + d * a2) % 2 ? -1 : 1;
                            m[idx((a + b) % 2, (b2 + a2) % 2, (c + d) % 2)][idx(a, a2, c) * 8 + idx(b, b2, d)] = sign;
                        }
    return m;
}

} // namespace oracle
