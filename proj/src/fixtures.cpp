#include "torsorkit/fixtures.hpp"

#include <regex>

namespace torsorkit {

namespace {

// dense helpers written with plain loops so the oracle does not go through
// the tensor machinery
Scalar mult_coeff(const Algebra& a, std::size_t i, std::size_t j, std::size_t k)
{
    return a.mult().at(k, i * a.dim() + j);
}

std::vector<Scalar> mul_vec(const Field& f, const Algebra& a, const std::vector<Scalar>& x, const std::vector<Scalar>& y)
{
    const std::size_t n = a.dim();
    std::vector<Scalar> out(n, Scalar(0));
    for (std::size_t i = 0; i < n; ++i) {
        if (Field::is_zero(x[i])) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (Field::is_zero(y[j])) continue;
            for (std::size_t k = 0; k < n; ++k) out[k] = f.add(out[k], f.mul(f.mul(x[i], y[j]), mult_coeff(a, i, j, k)));
        }
    }
    return out;
}

std::vector<Scalar> col(const Matrix& m, std::size_t j)
{
    std::vector<Scalar> v(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m.at(i, j);
    return v;
}

Matrix from_cols(const Field& f, std::size_t rows, const std::vector<std::vector<Scalar>>& cols)
{
    std::vector<Matrix::Triplet> t;
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < rows; ++i)
            if (!Field::is_zero(cols[j][i])) t.push_back({i, j, cols[j][i]});
    return Matrix::from_triplets(f, rows, cols.size(), t);
}

// naive dims for a pre-torsor over A = B = k
std::vector<std::pair<std::string, long>> naive_dims(const PreTorsorBundle& b, const Matrix& tau_k)
{
    const Field& f = b.field();
    const std::size_t n = b.n();
    const Algebra& T = b.T;
    std::vector<Scalar> one = col(T.unit(), 0);
    auto e = [&](std::size_t i) {
        std::vector<Scalar> v(n, Scalar(0));
        v[i] = Scalar(1);
        return v;
    };
    // omega(t (x) u) = t tau(u) - 1 (x) t (x) u and the D analogue, as n^3 x n^2 matrices
    std::vector<std::vector<Scalar>> om, od, mu;
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t u = 0; u < n; ++u) {
            std::vector<Scalar> c(n * n * n, Scalar(0)), d(n * n * n, Scalar(0));
            for (std::size_t x = 0; x < n * n * n; ++x) {
                Scalar tu = tau_k.at(x, u), tt = tau_k.at(x, t);
                std::size_t x1 = x / (n * n), x2 = (x / n) % n, x3 = x % n;
                if (!Field::is_zero(tu)) {
                    auto p = mul_vec(f, T, e(t), e(x1));
                    for (std::size_t k = 0; k < n; ++k)
                        c[k * n * n + x2 * n + x3] = f.add(c[k * n * n + x2 * n + x3], f.mul(tu, p[k]));
                }
                if (!Field::is_zero(tt)) {
                    auto p = mul_vec(f, T, e(x3), e(u));
                    for (std::size_t k = 0; k < n; ++k)
                        d[x1 * n * n + x2 * n + k] = f.add(d[x1 * n * n + x2 * n + k], f.mul(tt, p[k]));
                }
            }
            for (std::size_t k = 0; k < n; ++k) {
                c[k * n * n + t * n + u] = f.sub(c[k * n * n + t * n + u], one[k]);
                d[t * n * n + u * n + k] = f.sub(d[t * n * n + u * n + k], one[k]);
            }
            om.push_back(c);
            od.push_back(d);
            mu.push_back(mul_vec(f, T, e(t), e(u)));
        }
    Matrix W = from_cols(f, n * n * n, om), V = from_cols(f, n * n * n, od), M = from_cols(f, n, mu);
    Matrix I = Matrix::identity(f, n);
    long dc = static_cast<long>(n * n - rank(W));
    long dd = static_cast<long>(n * n - rank(V));
    long tb = static_cast<long>(n * n * n - rank(Matrix::vcat({Matrix::kron(W, I), Matrix::kron(I, V)})));
    long o1a = static_cast<long>(n * n - rank(Matrix::vcat({W, M})));
    // Omega^1(B) = {sum t (x) u in T (x)_A T : tu = 0 and tau(t) u = t (x) u (x) 1}
    long o1b = static_cast<long>(n * n - rank(Matrix::vcat({V, M})));
    return {{"C", dc}, {"D", dd}, {"Tbar", tb}, {"Omega1_A", o1a}, {"Omega1_B", o1b}};
}

} // namespace

void check_hopf(const HopfData& h)
{
    const Algebra& H = h.H;
    const Field& f = H.field();
    const std::size_t n = H.dim();
    Matrix I = Matrix::identity(f, n);
    if (Matrix::kron(h.delta, I) * h.delta != Matrix::kron(I, h.delta) * h.delta) throw Error("Hopf: not coassociative");
    Matrix left = Matrix::kron(h.eps, I) * h.delta, right = Matrix::kron(I, h.eps) * h.delta;
    if (left != I || right != I) throw Error("Hopf: not counital");
    // Delta(xy) = Delta(x) Delta(y) on basis pairs, products taken factorwise by hand
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Scalar> xy = col(H.mult(), i * n + j);
            std::vector<Scalar> lhs(n * n, Scalar(0));
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t r = 0; r < n * n; ++r) lhs[r] = f.add(lhs[r], f.mul(xy[k], h.delta.at(r, k)));
            std::vector<Scalar> rhs(n * n, Scalar(0));
            for (std::size_t p = 0; p < n * n; ++p) {
                Scalar a = h.delta.at(p, i);
                if (Field::is_zero(a)) continue;
                for (std::size_t q = 0; q < n * n; ++q) {
                    Scalar c = h.delta.at(q, j);
                    if (Field::is_zero(c)) continue;
                    for (std::size_t u = 0; u < n; ++u)
                        for (std::size_t v = 0; v < n; ++v) {
                            Scalar m1 = mult_coeff(H, p / n, q / n, u), m2 = mult_coeff(H, p % n, q % n, v);
                            rhs[u * n + v] = f.add(rhs[u * n + v], f.mul(f.mul(a, c), f.mul(m1, m2)));
                        }
                }
            }
            if (lhs != rhs) throw Error("Hopf: coproduct not multiplicative");
            Scalar ex = Scalar(0);
            for (std::size_t k = 0; k < n; ++k) ex = f.add(ex, f.mul(xy[k], h.eps.at(0, k)));
            if (ex != f.mul(h.eps.at(0, i), h.eps.at(0, j))) throw Error("Hopf: counit not multiplicative");
        }
    Matrix ue = H.unit() * h.eps;
    Matrix sl = H.mult() * Matrix::kron(h.antipode, I) * h.delta;
    Matrix sr = H.mult() * Matrix::kron(I, h.antipode) * h.delta;
    if (sl != ue || sr != ue) throw Error("Hopf: antipode identities fail");
}

HopfData cyclic_group_hopf(Field f, std::size_t n)
{
    std::vector<Algebra::Constant> c;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(i == 0 ? "e" : (n == 2 ? "g" : "g" + std::to_string(i)));
        for (std::size_t j = 0; j < n; ++j) c.emplace_back(i, j, (i + j) % n, Scalar(1));
    }
    Algebra H = make_algebra(f, n, c, Matrix::unit_vector(f, n, 0), "k[Z/" + std::to_string(n) + "]", labels);
    std::vector<Matrix::Triplet> d, s, e;
    for (std::size_t i = 0; i < n; ++i) {
        d.push_back({i * n + i, i, Scalar(1)});
        s.push_back({(n - i) % n, i, Scalar(1)});
        e.push_back({0, i, Scalar(1)});
    }
    return {H, Matrix::from_triplets(f, n * n, n, d), Matrix::from_triplets(f, 1, n, e),
            Matrix::from_triplets(f, n, n, s)};
}

HopfData sweedler_hopf(Field f)
{
    // basis g^a x^b at index a + 2b: 1, g, x, gx
    auto idx = [](int a, int b) { return static_cast<std::size_t>(a + 2 * b); };
    std::vector<Algebra::Constant> c;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int a2 = 0; a2 < 2; ++a2)
                for (int b2 = 0; b2 < 2; ++b2) {
                    if (b + b2 > 1) continue; // x^2 = 0
                    // x g = -g x
                    Scalar sign = (b * a2) % 2 ? Scalar(-1) : Scalar(1);
                    c.emplace_back(idx(a, b), idx(a2, b2), idx((a + a2) % 2, b + b2), sign);
                }
    Algebra H = make_algebra(f, 4, c, Matrix::unit_vector(f, 4, 0), "H4", {"1", "g", "x", "gx"});
    // Delta(g) = g (x) g, Delta(x) = x (x) 1 + g (x) x, extended multiplicatively
    Algebra HH = tensor_algebra(H, H);
    auto pure = [&](std::size_t i, std::size_t j) { return Matrix::unit_vector(f, 16, i * 4 + j); };
    Matrix dg = pure(1, 1), dx = pure(2, 0) + pure(1, 2);
    std::vector<Matrix> dcols = {pure(0, 0), dg, dx, HH.product(dg, dx)};
    Matrix delta = Matrix::hcat(dcols);
    Matrix eps = Matrix::from_dense(f, 1, 4, {Scalar(1), Scalar(1), Scalar(0), Scalar(0)});
    // S(g) = g, S(x) = -gx, S(gx) = S(x)S(g)
    Matrix sg = H.basis_vector(1), sx = H.basis_vector(3).scaled(Scalar(-1));
    Matrix s = Matrix::hcat({H.basis_vector(0), sg, sx, H.product(sx, sg)});
    return {H, delta, eps, s};
}

PreTorsorBundle hopf_torsor(const std::string& name, const HopfData& h)
{
    const Field& f = h.H.field();
    const std::size_t n = h.H.dim();
    Matrix I = Matrix::identity(f, n);
    Matrix tau = Matrix::kron({I, h.antipode, I}) * Matrix::kron(h.delta, I) * h.delta;
    Algebra k = ground_algebra(f);
    return make_pretorsor(name, k, k, h.H, unit_map(h.H), unit_map(h.H), tau, true);
}

std::vector<std::string> fixture_names()
{
    return {"EX-TRIV", "EX-C2", "EX-SW", "EX-M2", "EX-SMASH", "EX-Q(3)", "EX-Q(4)"};
}

Fixture generate(const std::string& name, Field f)
{
    Fixture fx;
    fx.name = name;
    std::smatch m;
    static const std::regex cyclic(R"(EX-Q\(?(\d+)\)?)");
    if (name == "EX-TRIV") {
        Algebra k = ground_algebra(f);
        // k as an algebra distinct from the ground instance, so T is its own object
        Algebra t = make_algebra(f, 1, {{0, 0, 0, Scalar(1)}}, Matrix::identity(f, 1), "Q", {"1"});
        fx.bundle = make_pretorsor(name, k, k, t, unit_map(t), unit_map(t), Matrix::identity(f, 1), true);
        fx.oracle = naive_dims(fx.bundle, Matrix::identity(f, 1));
    } else if (name == "EX-C2" || name == "EX-SW" || std::regex_match(name, m, cyclic)) {
        HopfData h;
        if (name == "EX-C2")
            h = cyclic_group_hopf(f, 2);
        else if (name == "EX-SW")
            h = sweedler_hopf(f);
        else {
            std::size_t n = std::stoul(m[1]);
            if (n < 1 || n > 8) throw UnknownFixture("cyclic fixtures are limited to orders 1..8");
            h = cyclic_group_hopf(f, n);
        }
        check_hopf(h);
        fx.hopf = h;
        fx.bundle = hopf_torsor(name, h);
        const std::size_t n = h.H.dim();
        Matrix I = Matrix::identity(f, n);
        fx.oracle = naive_dims(fx.bundle, Matrix::kron({I, h.antipode, I}) * Matrix::kron(h.delta, I) * h.delta);
        fx.oracle.insert(fx.oracle.begin(), {"hopf_axioms", 1});
    } else if (name == "EX-M2") {
        std::vector<Algebra::Constant> c;
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b)
                for (std::size_t d = 0; d < 2; ++d) c.emplace_back(2 * a + b, 2 * b + d, 2 * a + d, Scalar(1));
        Matrix u = Matrix::from_dense(f, 4, 1, {Scalar(1), Scalar(0), Scalar(0), Scalar(1)});
        Algebra m2 = make_algebra(f, 4, c, u, "M2", {"E11", "E12", "E21", "E22"});
        // matrix units: E_ab E_cd = [b == c] E_ad
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                for (std::size_t k = 0; k < 4; ++k) {
                    Scalar want = (i % 2 == j / 2 && k == 2 * (i / 2) + j % 2) ? Scalar(1) : Scalar(0);
                    if (mult_coeff(m2, i, j, k) != want) throw Error("M2 oracle: matrix unit table is wrong");
                }
        Matrix tau = Matrix::kron({u, u, Matrix::identity(f, 4)});
        fx.bundle = make_pretorsor(name, m2, m2, m2, identity_map(m2), identity_map(m2), tau, true);
        fx.oracle = {{"C", 4}, {"D", 4}, {"Tbar", 4}};
    } else if (name == "EX-SMASH") {
        // T = B # k[Z/2], B = k[y]/(y^2 - 1), g.y = -y; basis y^a g^b at index 2a + b
        std::vector<Algebra::Constant> c;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int a2 = 0; a2 < 2; ++a2)
                    for (int b2 = 0; b2 < 2; ++b2) {
                        Scalar sign = (b * a2) % 2 ? Scalar(-1) : Scalar(1);
                        c.emplace_back(2 * a + b, 2 * a2 + b2, 2 * ((a + a2) % 2) + (b + b2) % 2, sign);
                    }
        Algebra t = make_algebra(f, 4, c, Matrix::unit_vector(f, 4, 0), "B#H", {"1", "g", "y", "yg"});
        Algebra bb = make_algebra(f, 2, {{0, 0, 0, Scalar(1)}, {0, 1, 1, Scalar(1)}, {1, 0, 1, Scalar(1)}, {1, 1, 0, Scalar(1)}},
                                  Matrix::unit_vector(f, 2, 0), "B", {"1", "y"});
        AlgebraMap beta = make_algebra_map(bb, t, Matrix::from_triplets(f, 4, 2, {{0, 0, Scalar(1)}, {2, 1, Scalar(1)}}));
        // tau(y^a g^b) = y^a g^b (x) g^b (x) g^b
        std::vector<Matrix::Triplet> tt;
        for (std::size_t i = 0; i < 4; ++i) {
            std::size_t g = i % 2;
            tt.push_back({i * 16 + g * 4 + g, i, Scalar(1)});
        }
        Algebra k = ground_algebra(f);
        fx.bundle = make_pretorsor(name, k, bb, t, unit_map(t), beta, Matrix::from_triplets(f, 64, 4, tt), false);
        fx.oracle = {{"D", 8}};
    } else {
        throw UnknownFixture("unknown fixture '" + name + "'");
    }
    bool unital = false;
    Report r = validate_pretorsor(fx.bundle, &unital);
    for (const auto& c : r.checks)
        if (c.status == Status::Fail) {
            std::string w;
            for (const auto& x : c.witnesses) w += " [" + x + "]";
            throw Error("fixture " + name + " is not a pre-torsor: " + c.id + w);
        }
    fx.oracle.push_back({"unital", unital});
    // a declared torsor that fails Def 5.1 is kept; the verdict is reported, not repaired
    if (fx.bundle.torsor) fx.oracle.push_back({"torsor_axioms", !validate_torsor(fx.bundle).failed()});
    return fx;
}

} // namespace torsorkit
