#include "torsorkit/coring.hpp"

namespace torsorkit {

namespace {

std::size_t first_bad(const Matrix& lhs, const Matrix& rhs)
{
    return *(lhs - rhs).first_nonzero_column();
}

void check_bilinear(const Bimodule& src, const Bimodule& dst, const Matrix& f, const std::string& what)
{
    for (std::size_t i = 0; i < src.left().dim(); ++i) {
        Matrix lhs = f * src.lact(i), rhs = dst.lact(i) * f;
        if (lhs != rhs) throw NotBilinear(what + " is not left linear", first_bad(lhs, rhs));
    }
    for (std::size_t i = 0; i < src.right().dim(); ++i) {
        Matrix lhs = f * src.ract(i), rhs = dst.ract(i) * f;
        if (lhs != rhs) throw NotBilinear(what + " is not right linear", first_bad(lhs, rhs));
    }
}

} // namespace

Matrix delta_left(const Coring& c)
{
    Matrix raw = Matrix::kron(c.cc.sect() * c.delta, Matrix::identity(c.base.field(), c.dim()));
    return induce(raw, c.cc, c.ccc, "Delta (x) C");
}

Matrix delta_right(const Coring& c)
{
    Matrix raw = Matrix::kron(Matrix::identity(c.base.field(), c.dim()), c.cc.sect() * c.delta);
    return induce(raw, c.cc, c.ccc, "C (x) Delta");
}

Coring make_coring(const Algebra& base, const Bimodule& carrier, const Matrix& delta, const Matrix& eps)
{
    if (!carrier.left().same(base) || !carrier.right().same(base))
        throw ActionMismatch("coring carrier must be a bimodule over the base algebra");
    Coring c;
    c.base = base;
    c.carrier = carrier;
    c.cc = balanced_tensor(carrier, base, carrier);
    c.ccc = extend(c.cc, base, carrier);
    if (delta.rows() != c.cc.dim() || delta.cols() != carrier.dim()) throw ShapeMismatch("coproduct has wrong shape");
    if (eps.rows() != base.dim() || eps.cols() != carrier.dim()) throw ShapeMismatch("counit has wrong shape");
    c.delta = delta;
    c.eps = eps;

    check_bilinear(carrier, c.cc.bimodule(), delta, "coproduct");
    check_bilinear(carrier, regular_bimodule(base), eps, "counit");

    Matrix l = delta_left(c) * delta, r = delta_right(c) * delta;
    if (l != r) throw NotCoassociative("coproduct is not coassociative", first_bad(l, r));

    const Field& f = base.field();
    Matrix id = Matrix::identity(f, carrier.dim());
    Matrix el = induce_plain(carrier.lact_map() * Matrix::kron(eps, id), c.cc, "eps (x) C") * delta;
    if (el != id) throw NotCounital("left counit law fails", first_bad(el, id));
    Matrix er = induce_plain(carrier.ract_map() * Matrix::kron(id, eps), c.cc, "C (x) eps") * delta;
    if (er != id) throw NotCounital("right counit law fails", first_bad(er, id));
    return c;
}

Coring trivial_coring(const Algebra& b)
{
    Bimodule rb = regular_bimodule(b);
    TensorSpace bb = balanced_tensor(rb, b, rb);
    Matrix delta = bb.proj() * Matrix::kron(b.unit(), Matrix::identity(b.field(), b.dim()));
    return make_coring(b, rb, delta, Matrix::identity(b.field(), b.dim()));
}

GroupLike check_grouplike(const Coring& c, const Matrix& g)
{
    if (g.rows() != c.dim() || g.cols() != 1) throw ShapeMismatch("group-like candidate has wrong shape");
    if (c.delta * g != c.cc.pure({g, g})) throw NotGroupLike("Delta(g) != g (x) g");
    if (c.eps * g != c.base.unit()) throw NotGroupLike("eps(g) != 1");
    return {g};
}

Comodule make_comodule(const Coring& c, const Bimodule& m, CoSide side, const Matrix& rho)
{
    const Field& f = c.base.field();
    Comodule out{c, m, side, {}, rho};
    Matrix id = Matrix::identity(f, m.dim());
    Matrix idc = Matrix::identity(f, c.dim());
    if (side == CoSide::Right) {
        out.target = balanced_tensor(m, c.base, c.carrier);
        if (rho.rows() != out.target.dim() || rho.cols() != m.dim()) throw ShapeMismatch("coaction has wrong shape");
        TensorSpace mcc = extend(out.target, c.base, c.carrier);
        Matrix a = induce(Matrix::kron(out.target.sect() * rho, idc), out.target, mcc, "rho (x) C") * rho;
        Matrix b = induce(Matrix::kron(id, c.cc.sect() * c.delta), out.target, mcc, "M (x) Delta") * rho;
        if (a != b) throw NotComodule("coaction is not coassociative on basis " + std::to_string(first_bad(a, b)));
        Matrix e = induce_plain(m.ract_map() * Matrix::kron(id, c.eps), out.target, "M (x) eps") * rho;
        if (e != id) throw NotComodule("coaction is not counital on basis " + std::to_string(first_bad(e, id)));
        for (std::size_t i = 0; i < c.base.dim(); ++i)
            if (rho * m.ract(i) != out.target.bimodule().ract(i) * rho)
                throw NotComodule("coaction is not right linear");
    } else {
        out.target = balanced_tensor(c.carrier, c.base, m);
        if (rho.rows() != out.target.dim() || rho.cols() != m.dim()) throw ShapeMismatch("coaction has wrong shape");
        TensorSpace ccm = extend(c.cc, c.base, m);
        Matrix a = induce(Matrix::kron(c.cc.sect() * c.delta, id), out.target, ccm, "Delta (x) M") * rho;
        Matrix b = induce(Matrix::kron(idc, out.target.sect() * rho), out.target, ccm, "C (x) rho") * rho;
        if (a != b) throw NotComodule("coaction is not coassociative on basis " + std::to_string(first_bad(a, b)));
        Matrix e = induce_plain(m.lact_map() * Matrix::kron(c.eps, id), out.target, "eps (x) M") * rho;
        if (e != id) throw NotComodule("coaction is not counital on basis " + std::to_string(first_bad(e, id)));
        for (std::size_t i = 0; i < c.base.dim(); ++i)
            if (rho * m.lact(i) != out.target.bimodule().lact(i) * rho)
                throw NotComodule("coaction is not left linear");
    }
    return out;
}

Comodule regular_comodule(const Coring& c, CoSide side)
{
    return Comodule{c, c.carrier, side, c.cc, c.delta};
}

Bicomodule make_bicomodule(const Comodule& left, const Comodule& right)
{
    if (left.side != CoSide::Left || right.side != CoSide::Right)
        throw NotComodule("bicomodule needs a left and a right coaction");
    if (!left.module.same(right.module)) throw NotComodule("bicomodule coactions must share one bimodule");
    const Field& f = left.coring.base.field();
    TensorSpace dmc = extend(left.target, right.coring.base, right.coring.carrier);
    Matrix a = induce(Matrix::kron(Matrix::identity(f, left.coring.dim()), right.target.sect() * right.rho), left.target,
                      dmc, "D (x) rho") *
               left.rho;
    Matrix b = induce(Matrix::kron(left.target.sect() * left.rho, Matrix::identity(f, right.coring.dim())),
                      right.target, dmc, "rho (x) C") *
               right.rho;
    if (a != b) throw NotComodule("coactions do not commute on basis " + std::to_string(first_bad(a, b)));
    return {left, right};
}

Cotensor cotensor(const Comodule& m, const Comodule& n)
{
    if (m.side != CoSide::Right || n.side != CoSide::Left) throw NotComodule("cotensor needs right (x) left comodules");
    if (m.coring.carrier.space()->id != n.coring.carrier.space()->id) throw NotComodule("cotensor over different corings");
    const Coring& c = m.coring;
    const Field& f = c.base.field();
    TensorSpace amb = balanced_tensor(m.module, c.base, n.module);
    TensorSpace mcn = extend(m.target, c.base, n.module);
    Matrix a = induce(Matrix::kron(m.target.sect() * m.rho, Matrix::identity(f, n.module.dim())), amb, mcn, "rho (x) N");
    Matrix b = induce(Matrix::kron(Matrix::identity(f, m.module.dim()), n.target.sect() * n.rho), amb, mcn, "M (x) rho");
    return {amb, kernel(LinearMap(amb.carrier(), mcn.carrier(), a - b))};
}

Subspace coinvariants(const Comodule& m, const GroupLike& g)
{
    const Field& f = m.coring.base.field();
    Matrix id = Matrix::identity(f, m.module.dim());
    Matrix ref = m.side == CoSide::Right ? m.target.proj() * Matrix::kron(id, g.element)
                                         : m.target.proj() * Matrix::kron(g.element, id);
    return coinvariants(m, ref);
}

Subspace coinvariants(const Comodule& m, const Matrix& reference)
{
    if (reference.rows() != m.rho.rows() || reference.cols() != m.rho.cols())
        throw ShapeMismatch("reference coaction has wrong shape");
    return kernel(LinearMap(m.module.space(), m.target.carrier(), m.rho - reference));
}

void coring_morphism(const Matrix& kappa, const Coring& c, const Coring& c2)
{
    if (!c.base.same(c2.base)) throw ActionMismatch("coring morphism between different base algebras");
    if (kappa.rows() != c2.dim() || kappa.cols() != c.dim()) throw ShapeMismatch("coring morphism has wrong shape");
    check_bilinear(c.carrier, c2.carrier, kappa, "coring morphism");
    Matrix kk = induce(Matrix::kron(kappa, kappa), c.cc, c2.cc, "kappa (x) kappa");
    if (c2.delta * kappa != kk * c.delta) throw NotColinear("Delta' kappa != (kappa (x) kappa) Delta");
    if (c2.eps * kappa != c.eps) throw NotCounitPreserving("eps' kappa != eps");
}

} // namespace torsorkit
