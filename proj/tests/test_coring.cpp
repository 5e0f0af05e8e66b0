#include "doctest.h"

#include "torsorkit/coring.hpp"

using namespace torsorkit;

namespace {

// kC2 as a k-coring: e, g group-like
Coring group_coring(Field f, bool flip = false)
{
    Algebra k = ground_algebra(f);
    Matrix id = Matrix::identity(f, 2);
    Bimodule m = make_bimodule(make_space({"e", "g"}), k, k, {id}, {id}, "kC2");
    Scalar s = flip ? Scalar(-1) : Scalar(1);
    Matrix delta = Matrix::from_triplets(f, 4, 2, {{0, 0, Scalar(1)}, {3, 1, s}});
    Matrix eps = Matrix::from_dense(f, 1, 2, {Scalar(1), Scalar(1)});
    return make_coring(k, m, delta, eps);
}

} // namespace

TEST_CASE("trivial coring")
{
    Field q;
    Algebra k = ground_algebra(q);
    Coring c = trivial_coring(k);
    CHECK(c.dim() == 1);
    CHECK(c.delta.at(0, 0) == 1);
    CHECK_NOTHROW(check_grouplike(c, k.unit()));
}

TEST_CASE("coassociativity and counit failures")
{
    Field q;
    CHECK_NOTHROW(group_coring(q));
    // g -> -g (x) g breaks the counit law before anything else
    CHECK_THROWS_AS(group_coring(q, true), NotCounital);

    Algebra k = ground_algebra(q);
    Matrix id = Matrix::identity(q, 2);
    Bimodule m = make_bimodule(make_space(2, "x"), k, k, {id}, {id});
    // x1 -> x0 (x) x0 is not coassociative against x0 -> x1 (x) x1
    Matrix delta = Matrix::from_triplets(q, 4, 2, {{3, 0, Scalar(1)}, {0, 1, Scalar(1)}});
    Matrix eps = Matrix::from_dense(q, 1, 2, {Scalar(1), Scalar(1)});
    CHECK_THROWS_AS(make_coring(k, m, delta, eps), NotCoassociative);
}

TEST_CASE("group-likes and morphisms")
{
    Field q;
    Coring c = group_coring(q);
    CHECK_NOTHROW(check_grouplike(c, Matrix::unit_vector(q, 2, 1)));
    Matrix sum = Matrix::from_dense(q, 2, 1, {Scalar(1), Scalar(1)});
    CHECK_THROWS_AS(check_grouplike(c, sum), NotGroupLike);

    Coring t = trivial_coring(c.base);
    Matrix eps = c.eps;
    CHECK_NOTHROW(coring_morphism(eps, c, t));
    CHECK_THROWS_AS(coring_morphism(Matrix(q, 1, 2), c, t), NotCounitPreserving);
    Matrix two = Matrix::identity(q, 2).scaled(Scalar(2));
    CHECK_THROWS(coring_morphism(two, c, c));
}

TEST_CASE("cotensor with the regular comodule")
{
    Field q;
    Coring c = group_coring(q);
    Algebra k = c.base;
    // N = k^2 with e acting on n0 and g on n1
    Matrix id = Matrix::identity(q, 2);
    Bimodule n = make_bimodule(make_space(2, "n"), k, k, {id}, {id});
    Comodule reg = regular_comodule(c, CoSide::Right);
    TensorSpace cn = balanced_tensor(c.carrier, k, n);
    Matrix rho = cn.proj() * Matrix::from_triplets(q, 4, 2, {{0, 0, Scalar(1)}, {3, 1, Scalar(1)}});
    Comodule nl = make_comodule(c, n, CoSide::Left, rho);
    Cotensor ct = cotensor(reg, nl);
    CHECK(ct.sub.dim() == 2);
    // spanned by e (x) n0 and g (x) n1
    Matrix expect = Matrix::from_triplets(q, 4, 2, {{0, 0, Scalar(1)}, {3, 1, Scalar(1)}});
    CHECK(ct.sub.contains(expect));

    Matrix bad = cn.proj() * Matrix::from_triplets(q, 4, 2, {{0, 0, Scalar(1)}, {2, 1, Scalar(1)}});
    CHECK_THROWS_AS(make_comodule(c, n, CoSide::Left, bad), NotComodule);

    Subspace co = coinvariants(reg, GroupLike{Matrix::unit_vector(q, 2, 0)});
    CHECK(co.dim() == 1);
}
