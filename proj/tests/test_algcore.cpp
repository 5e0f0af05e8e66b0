#include "doctest.h"

#include "oracle.hpp"
#include "torsorkit/algcore.hpp"

using namespace torsorkit;

namespace {

Algebra group_c2(Field f)
{
    // e0 = identity, e1 = g
    return make_algebra(f, 2,
                        {{0, 0, 0, Scalar(1)}, {0, 1, 1, Scalar(1)}, {1, 0, 1, Scalar(1)}, {1, 1, 0, Scalar(1)}},
                        Matrix::unit_vector(f, 2, 0), "C2", {"e", "g"});
}

Algebra m2(Field f)
{
    std::vector<Algebra::Constant> c;
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t d = 0; d < 2; ++d) c.emplace_back(2 * a + b, 2 * b + d, 2 * a + d, Scalar(1));
    std::vector<Scalar> u = {1, 0, 0, 1};
    return make_algebra(f, 4, c, Matrix::from_dense(f, 4, 1, u), "M2", {"E11", "E12", "E21", "E22"});
}

oracle::Alg m2_oracle()
{
    return {4,
            [](std::size_t i, std::size_t j) {
                oracle::Vec v(4, 0);
                if (i % 2 == j / 2) v[2 * (i / 2) + j % 2] = 1;
                return v;
            },
            {1, 0, 0, 1}};
}

} // namespace

TEST_CASE("make_algebra examples")
{
    Field q;
    Algebra k = make_algebra(q, 1, {{0, 0, 0, Scalar(1)}}, Matrix::identity(q, 1));
    CHECK(k.dim() == 1);
    CHECK(group_c2(q).dim() == 2);

    // e0 e0 = e1 and e1 absorbing: no unit
    std::vector<Algebra::Constant> bad = {
        {0, 0, 1, Scalar(1)}, {0, 1, 1, Scalar(1)}, {1, 0, 1, Scalar(1)}, {1, 1, 1, Scalar(1)}};
    CHECK_THROWS_AS(make_algebra(q, 2, bad, Matrix::unit_vector(q, 2, 0)), NotUnital);

    // unital but e1 e1 = e0 + e1 twisted away from associativity
    std::vector<Algebra::Constant> nonassoc = {{0, 0, 0, Scalar(1)}, {0, 1, 1, Scalar(1)}, {1, 0, 1, Scalar(1)},
                                               {1, 1, 0, Scalar(1)}, {1, 1, 1, Scalar(1)}};
    CHECK_NOTHROW(make_algebra(q, 2, nonassoc, Matrix::unit_vector(q, 2, 0)));
    std::vector<Algebra::Constant> broken = {{0, 0, 0, Scalar(1)}, {0, 1, 1, Scalar(1)}, {0, 2, 2, Scalar(1)},
                                             {1, 0, 1, Scalar(1)}, {2, 0, 2, Scalar(1)}, {1, 1, 2, Scalar(1)},
                                             {1, 2, 1, Scalar(1)}, {2, 1, 0, Scalar(1)}, {2, 2, 1, Scalar(1)}};
    try {
        make_algebra(q, 3, broken, Matrix::unit_vector(q, 3, 0));
        FAIL("expected NotAssociative");
    } catch (const NotAssociative& e) {
        CHECK(e.i > 0);
    }
}

TEST_CASE("algebra maps and opposite")
{
    Field q;
    Algebra a = m2(q);
    CHECK_NOTHROW(identity_map(a));
    CHECK_NOTHROW(unit_map(a));
    // transpose is an anti-automorphism of M2
    std::vector<Scalar> tr = {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1};
    Matrix t = Matrix::from_dense(q, 4, 4, tr);
    CHECK_THROWS_AS(make_algebra_map(a, a, t, false), NotAlgebraMap);
    CHECK_NOTHROW(make_algebra_map(a, a, t, true));
    CHECK_NOTHROW(make_algebra_map(a.opposite(), a, t, false));
}

TEST_CASE("balanced tensor examples")
{
    Field q;
    Algebra k = ground_algebra(q);
    Bimodule kk = regular_bimodule(k);
    CHECK(balanced_tensor(kk, k, kk).dim() == 1);

    Algebra c2 = group_c2(q);
    Bimodule t = via_maps(c2, unit_map(c2), unit_map(c2));
    TensorSpace tt = balanced_tensor(t, k, t);
    CHECK(tt.dim() == 4);
    CHECK(tt.proj() == Matrix::identity(q, 4)); // over the field the projection is bijective

    Algebra a = m2(q);
    Bimodule ra = regular_bimodule(a);
    TensorSpace ta = balanced_tensor(ra, a, ra);

    // oracle: relation span generated in a different enumeration order (r outermost last)
    oracle::Alg o = m2_oracle();
    std::vector<oracle::Vec> rels;
    for (std::size_t n = 0; n < 4; ++n)
        for (std::size_t m = 0; m < 4; ++m)
            for (std::size_t r = 0; r < 4; ++r) {
                oracle::Vec lhs = oracle::kron(o.mul(m, r), oracle::basis(4, n));
                oracle::Vec rhs = oracle::kron(oracle::basis(4, m), o.mul(r, n));
                for (std::size_t i = 0; i < 16; ++i) lhs[i] -= rhs[i];
                rels.push_back(lhs);
            }
    std::size_t rel_rank = oracle::span_rank(rels);
    CHECK(rel_rank == 12);
    CHECK(ta.dim() == 16 - rel_rank);
    CHECK(ta.relation_rank() == rel_rank);
    CHECK(ta.proj() * ta.sect() == Matrix::identity(q, ta.dim()));

    Algebra other = group_c2(q);
    CHECK_THROWS_AS(balanced_tensor(ra, other, ra), ActionMismatch);
}

TEST_CASE("induce_map examples")
{
    Field q;
    Algebra a = m2(q);
    Bimodule ra = regular_bimodule(a);
    TensorSpace ta = balanced_tensor(ra, a, ra);
    Matrix induced = induce_plain(a.mult(), ta, "mu");
    CHECK(induced * ta.proj() == a.mult());

    Matrix swap_mu = a.mult() * swap_matrix(q, 4, 4);
    try {
        induce_plain(swap_mu, ta, "swap then mu");
        FAIL("expected NotWellDefined");
    } catch (const NotWellDefined& e) {
        CHECK((ta.proj() * e.witness).is_zero());
        CHECK(!(swap_mu * e.witness).is_zero());
    }

    Algebra c2 = group_c2(q);
    Bimodule t = via_maps(c2, unit_map(c2), unit_map(c2));
    TensorSpace tt = balanced_tensor(t, ground_algebra(q), t);
    LinearMap raw(make_space(4), c2.space(), c2.mult());
    CHECK_THROWS_AS(induce_map(raw, tt, make_space(2)), SpaceMismatch);
    CHECK(induce_map(raw, tt, c2.space()).matrix() == c2.mult());
}

TEST_CASE("certify_free examples")
{
    Field q;
    Algebra a = m2(q);
    FreenessCertificate self = certify_free(regular_bimodule(a), Side::Left);
    CHECK(self.rank == 1);
    CHECK(rank(self.iso) == 4);

    Algebra c2 = group_c2(q);
    Bimodule t = via_maps(c2, unit_map(c2), unit_map(c2));
    CHECK(certify_free(t, Side::Right).rank == 2);
    CHECK(certify_free(regular_bimodule(a), Side::Right).rank == 1);

    // k^3 as a module over C2 cannot be free
    Bimodule k3 = make_bimodule(make_space(3), c2, ground_algebra(q),
                                {Matrix::identity(q, 3), Matrix::identity(q, 3)}, {Matrix::identity(q, 3)});
    CHECK_THROWS_AS(certify_free(k3, Side::Left), NotFree);
}

TEST_CASE("enveloping examples")
{
    Field q;
    CHECK(enveloping(ground_algebra(q)).dim() == 1);
    Algebra e = enveloping(group_c2(q));
    CHECK(e.dim() == 4);
    CHECK(e.mult() * swap_matrix(q, 4, 4) == e.mult()); // commutative
    Algebra em = enveloping(m2(q));
    CHECK(em.dim() == 16);
    CHECK(em.unit() == Matrix::kron(m2(q).unit(), m2(q).unit()));
}

TEST_CASE("rebracketing is bijective")
{
    Field q;
    Algebra a = m2(q);
    Bimodule ra = regular_bimodule(a);
    TensorSpace left = tensor_chain({ra, ra, ra}, {a, a});
    TensorSpace inner = balanced_tensor(ra, a, ra);
    TensorSpace right = balanced_tensor(ra, a, inner.bimodule());
    CHECK(left.dim() == right.dim());
    Matrix r = rebracket(left, inner, right);
    CHECK(rank(r) == left.dim());
    CHECK(rebracket(left, inner, right) == r);
}
