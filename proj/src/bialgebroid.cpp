#include "torsorkit/bialgebroid.hpp"

#include <set>

namespace torsorkit {

namespace {

std::vector<std::string> differing(const Matrix& lhs, const Matrix& rhs, const std::string& what)
{
    std::set<std::size_t> cols;
    Matrix d = lhs - rhs;
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (const auto& e : d.row(i)) cols.insert(e.col);
    std::vector<std::string> w;
    for (auto j : cols) w.push_back(what + " " + std::to_string(j));
    return w;
}

void record(Report& r, const std::string& id, const std::vector<std::string>& bad, bool certified,
            std::vector<std::pair<std::string, long>> dims = {})
{
    if (bad.empty())
        r.verified(id, certified, std::move(dims));
    else
        r.fail(id, bad).dims = std::move(dims);
}

Matrix block_identity(Field f, std::size_t n)
{
    return Matrix::identity(f, n);
}

std::vector<Matrix> trivial_action(Field f, std::size_t n)
{
    return {block_identity(f, n)};
}

// the carrier leaf "C" of a bialgebroid workspace
std::shared_ptr<Workspace> bialgebroid_workspace(const Coring& cor, const Algebra& ring, const Matrix& s,
                                                 const Matrix& t)
{
    const Field& f = ring.field();
    auto ws = std::make_shared<Workspace>(f);
    const Algebra& R = cor.base;
    ws->add_algebra("R", R);
    ws->add_algebra("Ro", R.opposite());
    ws->add_algebra("Rs", R);
    Workspace* raw = ws.get();
    SpaceRef space = cor.carrier.space();
    ws->add_leaf("C", [raw, ring, s, t, space, f](const std::string& l, const std::string& r) {
        const std::size_t dr = s.cols();
        auto col = [](const Matrix& m, std::size_t i) { return m.column(i); };
        std::vector<Matrix> la, ra;
        if (l == "k")
            la = trivial_action(f, ring.dim());
        else
            for (std::size_t i = 0; i < dr; ++i) {
                if (l == "R")
                    la.push_back(ring.rmul_by(col(t, i)));
                else if (l == "Ro")
                    la.push_back(ring.lmul_by(col(t, i)));
                else if (l == "Rs")
                    la.push_back(ring.lmul_by(col(s, i)));
                else
                    throw Error("no left structure of C over " + l);
            }
        if (r == "k")
            ra = trivial_action(f, ring.dim());
        else
            for (std::size_t i = 0; i < dr; ++i) {
                if (r == "R")
                    ra.push_back(ring.rmul_by(col(s, i)));
                else if (r == "Ro")
                    ra.push_back(ring.rmul_by(col(t, i)));
                else
                    throw Error("no right structure of C over " + r);
            }
        return make_bimodule(space, raw->algebra(l), raw->algebra(r), la, ra, l + "C" + r);
    });
    return ws;
}

RightBialgebroid assemble(const PreTorsorBundle& b, const std::string& spec, const Subspace& sub, const Matrix& lift,
                          const Coring& cor, const AlgebraMap& rmap, const std::string& name, Report& r,
                          bool certified)
{
    Workspace& ws = *b.ws;
    const Field& f = b.field();
    const std::size_t n = b.n();
    const std::string id = "thm5.2." + name + ".product";
    TensorSpace tt = ws.chain(spec);
    RightBialgebroid h;
    h.name = name;
    h.coring = cor;
    try {
        // (u (x) v)(u' (x) v') = u'u (x) vv'
        std::vector<std::size_t> four(4, n);
        KWord w(f, four);
        w.apply(0, 4, permute_factors(f, four, {2, 0, 1, 3}), four);
        w.apply(0, 2, b.T.mult(), {n});
        w.apply(1, 2, b.T.mult(), {n});
        Matrix raw = tt.proj() * w.matrix();
        Matrix rel = nullspace(tt.proj());
        if (rel.cols() > 0 &&
            (!(raw * Matrix::kron(rel, lift)).is_zero() || !(raw * Matrix::kron(lift, rel)).is_zero()))
            throw ClosureFailure("product is not defined on " + name + " inside T (x) T");
        Matrix prod = raw * Matrix::kron(lift, lift);
        if (!sub.contains(prod)) throw ClosureFailure("product leaves " + name);
        const Matrix& one = b.T.unit();
        Matrix unit = tt.pure({one, one});
        if (!sub.contains(unit)) throw ClosureFailure("1 (x) 1 is not in " + name);
        h.ring = make_algebra_from_mult(f, sub.coordinates(prod), sub.coordinates(unit), name,
                                        cor.carrier.space()->labels);
        const Algebra& R = cor.base;
        std::vector<Matrix> sv, tv;
        for (std::size_t i = 0; i < R.dim(); ++i) {
            Matrix x = rmap(R.basis_vector(i));
            Matrix si = tt.pure({one, x}), ti = tt.pure({x, one});
            if (!sub.contains(si) || !sub.contains(ti)) throw ClosureFailure("source or target leaves " + name);
            sv.push_back(sub.coordinates(si));
            tv.push_back(sub.coordinates(ti));
        }
        h.s = Matrix::hcat(sv);
        h.t = Matrix::hcat(tv);
    } catch (const ClosureFailure& e) {
        r.fail(id, {e.what()});
        throw;
    } catch (const NotAssociative& e) {
        r.fail(id, {e.what()});
        throw ClosureFailure(e.what());
    } catch (const NotUnital& e) {
        r.fail(id, {e.what()});
        throw ClosureFailure(e.what());
    }
    r.verified(id, certified, {{"dim", static_cast<long>(h.dim())}});
    h.ws = bialgebroid_workspace(h.coring, h.ring, h.s, h.t);
    check_bialgebroid(h, "thm5.2." + name, r, certified);
    return h;
}

// comodule algebra: the coaction is multiplicative and unital. For a left
// coaction into D (x) T the coring product is the opposite of the stored ring.
void comodule_algebra(const PreTorsorBundle& b, const RightBialgebroid& h, const Comodule& m, const std::string& id,
                      Report& r, bool certified)
{
    const Field& f = b.field();
    const std::size_t n = b.n(), d = h.dim();
    const Matrix s = m.target.sect() * m.rho;
    std::vector<std::size_t> four = m.side == CoSide::Right ? std::vector<std::size_t>{n, d, n, d}
                                                            : std::vector<std::size_t>{d, n, d, n};
    KWord w(f, {n, n});
    w.apply(0, 1, s, {four[0], four[1]});
    w.apply(2, 1, s, {four[2], four[3]});
    w.apply(0, 4, permute_factors(f, four, {0, 2, 1, 3}), {four[0], four[2], four[1], four[3]});
    Matrix prod_c = m.side == CoSide::Right ? h.ring.mult() : h.ring.mult() * swap_matrix(f, d, d);
    if (m.side == CoSide::Right) {
        w.apply(0, 2, b.T.mult(), {n});
        w.apply(1, 2, prod_c, {d});
    } else {
        w.apply(0, 2, prod_c, {d});
        w.apply(1, 2, b.T.mult(), {n});
    }
    std::vector<std::string> bad = differing(m.rho * b.T.mult(), m.target.proj() * w.matrix(), "pair");
    Matrix one_c = h.ring.unit();
    Matrix unit = m.side == CoSide::Right ? Matrix::kron(b.T.unit(), one_c) : Matrix::kron(one_c, b.T.unit());
    if (m.rho * b.T.unit() != m.target.proj() * unit) bad.push_back("unit");
    record(r, id, bad, certified);
}

// C (x)_R N and its coaction, keeping the tensor space for lifting
struct Induced {
    TensorSpace space;
    Comodule comodule;
};

Induced induced(const RightBialgebroid& h, const Bimodule& nmod)
{
    const Field& f = h.ring.field();
    const std::size_t d = h.dim();
    Induced out;
    out.space = balanced_tensor(h.coring.carrier, h.base(), nmod);
    Bimodule pmod = out.space.bimodule();
    TensorSpace target = balanced_tensor(h.coring.carrier, h.base(), pmod);
    KWord w(f, {d, nmod.dim()});
    w.apply(0, 1, h.coring.cc.sect() * h.coring.delta, {d, d});
    w.apply(1, 2, out.space.proj(), {out.space.dim()});
    Matrix rho = induce(w.matrix(), out.space, target, "coaction of C (x) N");
    out.comodule = make_comodule(h.coring, pmod, CoSide::Left, rho);
    return out;
}

struct Tensored {
    TensorSpace space; // M (x)_{R^op} M'
    Comodule comodule;
};

Tensored tensored(const Comodule& m, const Comodule& m2, const RightBialgebroid& h)
{
    if (m.side != CoSide::Left || m2.side != CoSide::Left) throw NotComodule("expected left comodules");
    const Algebra& R = h.base();
    if (!m.module.right().same(R) || !m2.module.right().same(R))
        throw NotComodule("install the comodule actions first");
    const Field& f = R.field();
    const Algebra& Ro = h.ws->algebra("Ro");
    const Algebra k = ground_algebra(f);
    const std::size_t d = h.dim(), dm = m.module.dim(), dm2 = m2.module.dim();
    std::vector<Matrix> r1, l2, r2;
    for (std::size_t i = 0; i < R.dim(); ++i) {
        r1.push_back(m.module.lact(i));
        l2.push_back(m2.module.ract(i));
        r2.push_back(m2.module.lact(i));
    }
    Bimodule mr = make_bimodule(m.module.space(), k, Ro, trivial_action(f, dm), r1, "M");
    Bimodule ml = make_bimodule(m2.module.space(), Ro, Ro, l2, r2, "M'");
    Tensored out;
    out.space = balanced_tensor(mr, Ro, ml);
    std::vector<Matrix> xl;
    for (std::size_t i = 0; i < R.dim(); ++i) xl.push_back(out.space.bimodule().ract(i));
    Bimodule xmod = make_bimodule(out.space.carrier(), R, k, xl, trivial_action(f, out.space.dim()), "M(x)M'");
    TensorSpace target = balanced_tensor(h.coring.carrier, R, xmod);
    KWord w(f, {dm, dm2});
    w.apply(0, 1, m.target.sect() * m.rho, {d, dm});
    w.apply(2, 1, m2.target.sect() * m2.rho, {d, dm2});
    w.apply(0, 4, permute_factors(f, {d, dm, d, dm2}, {0, 2, 1, 3}), {d, d, dm, dm2});
    w.apply(0, 2, h.ring.mult(), {d});
    w.apply(1, 2, out.space.proj(), {out.space.dim()});
    Matrix rho = induce(w.matrix(), out.space, target, "diagonal coaction");
    out.comodule = make_comodule(h.coring, xmod, CoSide::Left, rho);
    return out;
}

struct XiParts {
    Cotensor c1, c2, cod;
    TensorSpace dom;
    Tensored x;
    Matrix xi;
};

XiParts xi_parts(const PreTorsorBundle& b, const Corings& c, const RightBialgebroid& h, const Comodule& m,
                 const Comodule& m2)
{
    const Field& f = b.field();
    const std::size_t n = b.n(), dm = m.module.dim(), dm2 = m2.module.dim();
    XiParts p;
    p.c1 = cotensor(c.rhoT, m);
    p.c2 = cotensor(c.rhoT, m2);
    // T (x)_A M is a B-B bimodule: beta(B) commutes with alpha(A) for a torsor
    std::vector<Matrix> lb, rb;
    for (std::size_t i = 0; i < b.B.dim(); ++i) {
        lb.push_back(p.c1.ambient.bimodule().lact(i));
        Matrix raw = Matrix::kron(b.T.rmul_by(b.beta(b.B.basis_vector(i))), Matrix::identity(f, dm));
        rb.push_back(induce(raw, p.c1.ambient, p.c1.ambient, "right B-action on T (x) M"));
    }
    Bimodule amb1 = make_bimodule(p.c1.ambient.carrier(), b.B, b.B, lb, rb, "T(x)M");
    Bimodule x1 = sub_bimodule(amb1, p.c1.sub, "T□M");
    Bimodule x2 = sub_bimodule(forget_right(p.c2.ambient.bimodule()), p.c2.sub, "T□M'");
    p.dom = balanced_tensor(x1, b.B, x2);
    p.x = tensored(m, m2, h);
    p.cod = cotensor(c.rhoT, p.x.comodule);
    KWord w(f, {x1.dim(), x2.dim()});
    w.apply(0, 1, p.c1.ambient.sect() * p.c1.sub.basis(), {n, dm});
    w.apply(2, 1, p.c2.ambient.sect() * p.c2.sub.basis(), {n, dm2});
    w.apply(0, 4, permute_factors(f, {n, dm, n, dm2}, {0, 2, 1, 3}), {n, n, dm, dm2});
    w.apply(0, 2, b.T.mult(), {n});
    w.apply(1, 2, p.x.space.proj(), {p.x.space.dim()});
    Matrix img = induce(w.matrix(), p.dom, p.cod.ambient, "xi");
    if (!p.cod.sub.contains(img)) throw WitnessNotIso("xi leaves the cotensor product");
    p.xi = p.cod.sub.coordinates(img);
    return p;
}

Matrix translation_lift(const RightBialgebroid& h, const ThetaData& th)
{
    return h.ws->chain("k C Ro C k").sect() * th.translation;
}

} // namespace

RightBialgebroid make_right_bialgebroid(std::string name, const Coring& coring, const Algebra& ring, const Matrix& s,
                                        const Matrix& t)
{
    RightBialgebroid h{std::move(name), coring, ring, s, t, nullptr};
    h.ws = bialgebroid_workspace(coring, ring, s, t);
    return h;
}

RightBialgebroid bialgebroid_C(const PreTorsorBundle& b, const Corings& c, Report& r)
{
    bool cert = certify_hypotheses(b).certified();
    RightBialgebroid h = assemble(b, "A T B T A", c.C_sub, c.LC, c.C, b.alpha, "C", r, cert);
    comodule_algebra(b, h, c.rhoT, "thm5.2.C.comodule-algebra", r, cert);
    return h;
}

RightBialgebroid bialgebroid_Dop(const PreTorsorBundle& b, const Corings& c, Report& r)
{
    bool cert = certify_hypotheses(b).certified();
    RightBialgebroid h = assemble(b, "B T A T B", c.D_sub, c.LD, c.D, b.beta, "D", r, cert);
    comodule_algebra(b, h, c.lamT, "thm5.2.D.comodule-algebra", r, cert);
    return h;
}

void check_bialgebroid(const RightBialgebroid& h, const std::string& prefix, Report& r, bool certified)
{
    const Field& f = h.ring.field();
    const Algebra& R = h.base();
    const Algebra& C = h.ring;
    const std::size_t d = h.dim(), dr = R.dim();
    const Matrix idc = Matrix::identity(f, d);

    std::vector<std::string> bad;
    try {
        make_algebra_map(R, C, h.s);
    } catch (const NotAlgebraMap& e) {
        bad.push_back(std::string("source: ") + e.what());
    }
    try {
        make_algebra_map(R, C, h.t, true);
    } catch (const NotAlgebraMap& e) {
        bad.push_back(std::string("target: ") + e.what());
    }
    for (std::size_t i = 0; i < dr; ++i)
        for (std::size_t j = 0; j < dr; ++j)
            if (C.product(h.s.column(i), h.t.column(j)) != C.product(h.t.column(j), h.s.column(i)))
                bad.push_back("s(" + R.space()->labels[i] + ") t(" + R.space()->labels[j] + ") do not commute");
    record(r, prefix + ".source-target", bad, certified);

    bad.clear();
    for (std::size_t i = 0; i < dr; ++i) {
        if (h.coring.carrier.lact(i) != C.rmul_by(h.t.column(i))) bad.push_back("left action " + R.space()->labels[i]);
        if (h.coring.carrier.ract(i) != C.rmul_by(h.s.column(i))) bad.push_back("right action " + R.space()->labels[i]);
    }
    record(r, prefix + ".bimodule", bad, certified);

    const TensorSpace& cc = h.coring.cc;
    bad.clear();
    for (std::size_t i = 0; i < dr; ++i) {
        Matrix l = induce(Matrix::kron(C.lmul_by(h.s.column(i)), idc), cc, cc, "s(a) (x) C") * h.coring.delta;
        Matrix rr = induce(Matrix::kron(idc, C.lmul_by(h.t.column(i))), cc, cc, "C (x) t(a)") * h.coring.delta;
        for (auto& w : differing(l, rr, "a=" + R.space()->labels[i] + ", basis")) bad.push_back(w);
    }
    record(r, prefix + ".takeuchi", bad, certified);

    bad.clear();
    const Matrix dl = cc.sect() * h.coring.delta;
    const Matrix fac = Matrix::kron(C.mult(), C.mult()) * permute_factors(f, {d, d, d, d}, {0, 2, 1, 3});
    bad = differing(h.coring.delta * C.mult(), cc.proj() * fac * Matrix::kron(dl, dl), "pair");
    if (h.coring.delta * C.unit() != cc.pure({C.unit(), C.unit()})) bad.push_back("Delta(1)");
    record(r, prefix + ".coproduct", bad, certified);

    bad.clear();
    const Matrix& eps = h.coring.eps;
    if (eps * C.unit() != R.unit()) bad.push_back("eps(1)");
    Matrix lhs = eps * C.mult();
    for (auto& w : differing(lhs, eps * C.mult() * Matrix::kron(h.s * eps, idc), "s-form pair")) bad.push_back(w);
    for (auto& w : differing(lhs, eps * C.mult() * Matrix::kron(h.t * eps, idc), "t-form pair")) bad.push_back(w);
    record(r, prefix + ".counit", bad, certified);
}

ThetaData theta(const RightBialgebroid& h)
{
    Workspace& ws = *h.ws;
    const std::size_t d = h.dim();
    const Matrix dl = h.coring.cc.sect() * h.coring.delta;
    ThetaData th;
    th.theta = ws.map("k C Ro C k", "R C R C R", {{1, 1, dl, {d, d}}, {0, 2, h.ring.mult(), {d}}}, "theta");
    try {
        th.theta_inv = invert_matrix(th.theta);
    } catch (const NotInvertible& e) {
        throw NotTimesAHopf("theta is not bijective", std::max(th.theta.rows(), th.theta.cols()) - e.rank);
    }
    th.translation = th.theta_inv * ws.map("R C R", "R C R C R", {{0, 0, h.ring.unit(), {d}}}, "1 (x) -");
    return th;
}

void check_theta(const RightBialgebroid& h, const ThetaData& th, Report& r, bool certified)
{
    Workspace& ws = *h.ws;
    const Field& f = h.ring.field();
    const std::size_t d = h.dim();
    const Algebra& R = h.base();
    const Matrix tk = ws.chain("R C R C R").sect() * th.theta * ws.chain("k C Ro C k").proj();
    const Matrix swap23 = permute_factors(f, {d, d, d}, {0, 2, 1});
    try {
        Matrix lhs = ws.map("k C Ro C Ro C k", "R C R C R C R", {{1, 2, tk, {d, d}}, {0, 2, tk, {d, d}}}, "pentagon");
        Matrix rhs = ws.map("k C Ro C Ro C k", "R C R C R C R",
                            {{0, 2, tk, {d, d}},
                             {0, 3, swap23, {d, d, d}},
                             {0, 2, tk, {d, d}},
                             {0, 3, swap23, {d, d, d}},
                             {1, 2, tk, {d, d}}},
                            "pentagon");
        record(r, "sec2.theta.pentagon", differing(lhs, rhs, "basis"), certified,
               {{"domain", static_cast<long>(lhs.cols())}});
    } catch (const NotWellDefined& e) {
        r.fail("sec2.theta.pentagon", {e.what()});
    }

    TensorSpace dom = ws.chain("k C Ro C k"), cod = ws.chain("R C R C R");
    const Matrix one = h.ring.unit();
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < R.dim(); ++i) {
        Matrix s = h.s.column(i), t = h.t.column(i);
        if (th.theta_inv * cod.pure({one, t}) != dom.pure({s, one})) bad.push_back("t(" + R.space()->labels[i] + ")");
        if (th.theta_inv * cod.pure({one, s}) != dom.pure({one, s})) bad.push_back("s(" + R.space()->labels[i] + ")");
    }
    record(r, "sec2.theta.eq2.3", bad, certified);

    // translation map into (C^op (x) C) restricted to the centre
    const Matrix st = dom.sect() * th.translation;
    const Matrix prod = Matrix::kron(h.ring.mult(), h.ring.mult()) * permute_factors(f, {d, d, d, d}, {2, 0, 1, 3});
    record(r, "sec2.theta.translation", differing(th.translation * h.ring.mult(), dom.proj() * prod * Matrix::kron(st, st), "pair"),
           certified);
}

void diagonal_coinvariants(const PreTorsorBundle& b, const Corings& c, Report& r, bool certified)
{
    Workspace& ws = *b.ws;
    const Field& f = b.field();
    const std::size_t n = b.n();
    const Matrix& th = b.tau_hat;
    const Matrix& mult = b.T.mult();
    const Matrix& one = b.T.unit();
    const std::vector<std::size_t> six(6, n);
    const Matrix perm = permute_factors(f, six, {0, 3, 4, 1, 2, 5});

    auto run = [&](const std::string& id, const std::string& dom, const std::string& cod, std::vector<LocalOp> coact,
                   std::vector<LocalOp> ref, const Subspace& expected) {
        try {
            Matrix m = ws.map(dom, cod, coact, "diagonal coaction") - ws.map(dom, cod, ref, "trivial coaction");
            Subspace co = kernel(LinearMap(ws.chain(dom).carrier(), ws.chain(cod).carrier(), m));
            std::vector<std::pair<std::string, long>> dims = {{"coinvariants", static_cast<long>(co.dim())},
                                                              {"expected", static_cast<long>(expected.dim())}};
            if (co.same_as(expected))
                r.verified(id, certified, dims);
            else
                r.fail(id, {"coinvariants differ from the coring"}).dims = dims;
        } catch (const NotWellDefined& e) {
            r.fail(id, {e.what()});
        }
    };
    // u (x) v -> u1 (x) v1 (x) v2 u2 (x) u3 v3
    run("lem5.3.D", "B T A T B", "B T A T A T B T A",
        {{1, 1, th, {n, n, n}}, {0, 1, th, {n, n, n}}, {0, 6, perm, six}, {2, 2, mult, {n}}, {3, 2, mult, {n}}},
        {{2, 0, one, {n}}, {3, 0, one, {n}}}, c.D_sub);
    // u (x) v -> u1 v1 (x) v2 u2 (x) u3 (x) v3
    run("lem5.3.C", "A T B T A", "B T A T B T B T A",
        {{1, 1, th, {n, n, n}}, {0, 1, th, {n, n, n}}, {0, 6, perm, six}, {0, 2, mult, {n}}, {1, 2, mult, {n}}},
        {{0, 0, one, {n}}, {0, 0, one, {n}}}, c.C_sub);
}

Comodule comodule_actions(const Comodule& m, const RightBialgebroid& h)
{
    const Field& f = h.ring.field();
    const Algebra& R = h.base();
    const std::size_t d = h.dim(), dm = m.module.dim();
    const Matrix idm = Matrix::identity(f, dm), idc = Matrix::identity(f, d);
    const bool left = m.side == CoSide::Left;
    std::vector<Matrix> act;
    for (std::size_t i = 0; i < R.dim(); ++i) {
        Matrix forms[2];
        const Matrix* gens[2] = {&h.s, &h.t};
        for (int k = 0; k < 2; ++k) {
            Matrix e = h.coring.eps * h.ring.lmul_by(gens[k]->column(i));
            Matrix raw = left ? m.module.lact_map() * Matrix::kron(e, idm) : m.module.ract_map() * Matrix::kron(idm, e);
            forms[k] = induce_plain(raw, m.target, "induced action") * m.rho;
        }
        if (forms[0] != forms[1])
            throw TakeuchiViolation("source and target forms of the induced action differ at " + R.space()->labels[i]);
        Matrix a = forms[0];
        // the coaction must land in the Takeuchi product
        Matrix lhs, rhs;
        if (left) {
            lhs = induce(Matrix::kron(idc, a), m.target, m.target) * m.rho;
            rhs = induce(Matrix::kron(h.ring.lmul_by(h.s.column(i)), idm), m.target, m.target) * m.rho;
        } else {
            lhs = induce(Matrix::kron(a, idc), m.target, m.target) * m.rho;
            rhs = induce(Matrix::kron(idm, h.ring.lmul_by(h.t.column(i))), m.target, m.target) * m.rho;
        }
        if (lhs != rhs) throw TakeuchiViolation("coaction leaves the Takeuchi product at " + R.space()->labels[i]);
        act.push_back(a);
    }
    std::vector<Matrix> other;
    Comodule out = m;
    if (left) {
        for (std::size_t i = 0; i < R.dim(); ++i) other.push_back(m.module.lact(i));
        out.module = make_bimodule(m.module.space(), R, R, other, act, m.module.name());
    } else {
        for (std::size_t i = 0; i < R.dim(); ++i) other.push_back(m.module.ract(i));
        out.module = make_bimodule(m.module.space(), R, R, act, other, m.module.name());
    }
    return out;
}

Comodule tensor_comodules(const Comodule& m, const Comodule& m2, const RightBialgebroid& h)
{
    return tensored(m, m2, h).comodule;
}

Comodule unit_comodule(const RightBialgebroid& h)
{
    const Algebra& R = h.base();
    Bimodule amod = forget_right(regular_bimodule(R));
    TensorSpace target = balanced_tensor(h.coring.carrier, R, amod);
    Matrix rho = target.proj() * Matrix::kron(h.t, R.unit());
    return make_comodule(h.coring, amod, CoSide::Left, rho);
}

Comodule induced_comodule(const RightBialgebroid& h, const Bimodule& n)
{
    return induced(h, n).comodule;
}

MonoidalWitness monoidal_unit_witness(const PreTorsorBundle& b, const Corings& c, const RightBialgebroid& h)
{
    Cotensor cot = cotensor(c.rhoT, unit_comodule(h));
    Matrix img = cot.ambient.proj() * Matrix::kron(b.beta.matrix(), h.base().unit());
    if (!cot.sub.contains(img)) throw WitnessNotIso("xi0 leaves T□A");
    MonoidalWitness w;
    w.xi0 = cot.sub.coordinates(img);
    w.cot_A = cot.sub.dim();
    w.xi0_bijective = w.xi0.rows() == w.xi0.cols() && rank(w.xi0) == w.xi0.cols();
    return w;
}

XiData monoidal_witness(const PreTorsorBundle& b, const Corings& c, const RightBialgebroid& h, const Comodule& m,
                        const Comodule& m2)
{
    XiParts p = xi_parts(b, c, h, m, m2);
    XiData x;
    x.xi = p.xi;
    x.dom_dim = p.xi.cols();
    x.cod_dim = p.xi.rows();
    x.bijective = x.dom_dim == x.cod_dim && rank(p.xi) == x.dom_dim;
    return x;
}

bool can_factorization(const PreTorsorBundle& b, const Corings& c, const GaloisData& g, const RightBialgebroid& h)
{
    Workspace& ws = *b.ws;
    const Field& f = b.field();
    const std::size_t n = b.n(), d = h.dim(), dr = h.base().dim();
    Comodule reg = comodule_actions(regular_comodule(h.coring, CoSide::Left), h);
    XiParts p = xi_parts(b, c, h, reg, reg);
    const Matrix rk = c.rhoT.target.sect() * c.rhoT.rho;
    Matrix r1 = p.c1.sub.coordinates(p.c1.ambient.proj() * rk);
    Matrix r2 = p.c2.sub.coordinates(p.c2.ambient.proj() * rk);
    Matrix rr = induce(Matrix::kron(r1, r2), ws.chain("A T B T A"), p.dom, "rho (x)_B rho");
    // t (x) c (x) c' -> t (x) c' eps(c)
    KWord w(f, {n, p.x.space.dim()});
    w.apply(1, 1, p.x.space.sect(), {d, d});
    w.apply(1, 1, h.coring.eps, {dr});
    w.apply(1, 2, swap_matrix(f, dr, d), {d, dr});
    w.apply(1, 2, reg.module.ract_map(), {d});
    Matrix e = induce(w.matrix(), p.cod.ambient, c.rhoT.target, "T□(eps (x) C)") * p.cod.sub.basis();
    return e * p.xi * rr == g.can;
}

LemmaIsoData lemma_iso(const PreTorsorBundle& b, const Corings& c, const RightBialgebroid& h, const ThetaData& th,
                       const Bimodule& nmod, const Bimodule& mmod)
{
    Workspace& ws = *b.ws;
    const Field& f = b.field();
    const Algebra& R = h.base();
    const std::size_t n = b.n(), d = h.dim(), dr = R.dim(), dn = nmod.dim(), dm = mmod.dim();
    Induced pn = induced(h, nmod), pm = induced(h, mmod);
    Comodule an = comodule_actions(pn.comodule, h), am = comodule_actions(pm.comodule, h);
    Tensored x = tensored(an, am, h);
    Cotensor cot = cotensor(c.rhoT, x.comodule);

    // (T (x)_R C (x)_{R (x) R} (N (x) M)), C acted on by t(a) c s(a')
    Algebra rr = tensor_algebra(R, R);
    std::vector<Matrix> cl, cr, nl;
    for (std::size_t i = 0; i < dr; ++i) cl.push_back(h.coring.carrier.lact(i));
    for (std::size_t p = 0; p < dr; ++p)
        for (std::size_t q = 0; q < dr; ++q) {
            cr.push_back(h.ring.lmul_by(h.t.column(p)) * h.ring.rmul_by(h.s.column(q)));
            nl.push_back(Matrix::kron(nmod.lact(p), mmod.lact(q)));
        }
    Bimodule cmod = make_bimodule(h.coring.carrier.space(), R, rr, cl, cr, "C");
    Bimodule nm = make_bimodule(make_space(dn * dm, "nm"), rr, ground_algebra(f), nl,
                                trivial_action(f, dn * dm), "N(x)M");
    TensorSpace cod = tensor_chain({ws.leaf("T", "B", "A"), cmod, nm}, {R, rr});

    KWord fw(f, {n, x.space.dim()});
    fw.apply(1, 1, x.space.sect(), {pn.space.dim(), pm.space.dim()});
    fw.apply(2, 1, pm.space.sect(), {d, dm});
    fw.apply(1, 1, pn.space.sect(), {d, dn});
    fw.apply(1, 1, h.coring.eps, {dr});
    fw.apply(1, 2, nmod.lact_map(), {dn});
    fw.apply(1, 2, swap_matrix(f, dn, d), {d, dn});
    LemmaIsoData out;
    out.forward = induce(fw.matrix(), cot.ambient, cod, "eps (x) N") * cot.sub.basis();

    KWord bw(f, {n, d, dn * dm});
    bw.apply(2, 1, Matrix::identity(f, dn * dm), {dn, dm});
    bw.apply(0, 1, c.rhoT.target.sect() * c.rhoT.rho, {n, d});
    bw.apply(2, 1, translation_lift(h, th), {d, d});
    bw.apply(1, 2, h.ring.mult(), {d});
    bw.apply(2, 2, swap_matrix(f, d, dn), {dn, d});
    bw.apply(1, 2, pn.space.proj(), {pn.space.dim()});
    bw.apply(2, 2, pm.space.proj(), {pm.space.dim()});
    bw.apply(1, 2, x.space.proj(), {x.space.dim()});
    Matrix back = induce(bw.matrix(), cod, cot.ambient, "inverse through the translation map");
    if (!cot.sub.contains(back)) throw WitnessNotIso("inverse leaves the cotensor product");
    out.backward = cot.sub.coordinates(back);
    out.dim = cot.sub.dim();
    return out;
}

Report run_bialgebroid(const PreTorsorBundle& b, bool include_large)
{
    Report r;
    r.subject = b.name;
    r.field = b.field().name();
    const bool cert = certify_hypotheses(b).certified();
    Corings c;
    GaloisData g;
    try {
        c = build_corings(b);
        g = galois(b, c);
    } catch (const Error& e) {
        r.fail("thm5.2.galois", {e.what()});
        return r;
    }
    if (reconstruct_tau(b, c, g) == b.tau)
        r.verified("thm5.2.roundtrip", cert);
    else
        r.fail("thm5.2.roundtrip", {"tau differs after the Galois round trip"});

    diagonal_coinvariants(b, c, r, cert);

    std::optional<RightBialgebroid> hc;
    try {
        hc = bialgebroid_C(b, c, r);
    } catch (const Error&) {
    }
    try {
        bialgebroid_Dop(b, c, r);
    } catch (const Error&) {
    }
    if (!hc) return r;
    const RightBialgebroid& h = *hc;

    std::optional<ThetaData> th;
    try {
        th = theta(h);
        r.verified("sec2.theta", cert, {{"domain", static_cast<long>(th->theta.cols())}});
        check_theta(h, *th, r, cert);
    } catch (const NotTimesAHopf& e) {
        r.fail("sec2.theta", {e.what()}).dims = {{"deficit", static_cast<long>(e.deficit)}};
    } catch (const Error& e) {
        r.fail("sec2.theta", {e.what()});
    }

    std::optional<Comodule> regC;
    try {
        regC = comodule_actions(regular_comodule(h.coring, CoSide::Left), h);
        Comodule tc = comodule_actions(c.rhoT, h);
        std::vector<std::string> bad;
        for (std::size_t i = 0; i < b.A.dim(); ++i)
            if (tc.module.lact(i) != b.T.lmul_by(b.alpha(b.A.basis_vector(i))))
                bad.push_back("T: a=" + b.A.space()->labels[i]);
        comodule_actions(unit_comodule(h), h);
        record(r, "sec2.comodule-actions", bad, cert);
    } catch (const Error& e) {
        r.fail("sec2.comodule-actions", {e.what()});
    }

    try {
        MonoidalWitness w = monoidal_unit_witness(b, c, h);
        if (w.xi0_bijective)
            r.verified("thm5.6.xi0", cert, {{"B", static_cast<long>(b.B.dim())}, {"cotensor", static_cast<long>(w.cot_A)}});
        else
            r.fail("thm5.6.xi0", {"xi0 is not bijective"}).dims = {{"cotensor", static_cast<long>(w.cot_A)}};
    } catch (const Error& e) {
        r.fail("thm5.6.xi0", {e.what()});
    }

    if (regC) {
        Comodule unit = comodule_actions(unit_comodule(h), h);
        const std::vector<std::tuple<std::string, const Comodule*, const Comodule*>> pairs = {
            {"A-A", &unit, &unit}, {"C-A", &*regC, &unit}, {"C-C", &*regC, &*regC}};
        for (const auto& [tag, m1, m2] : pairs) {
            const std::string id = "thm5.6.xi." + tag;
            try {
                XiData x = monoidal_witness(b, c, h, *m1, *m2);
                std::vector<std::pair<std::string, long>> dims = {{"domain", static_cast<long>(x.dom_dim)},
                                                                  {"codomain", static_cast<long>(x.cod_dim)}};
                if (x.bijective)
                    r.verified(id, cert, dims);
                else
                    r.fail(id, {"xi is not bijective"}).dims = dims;
            } catch (const Error& e) {
                r.fail(id, {e.what()});
            }
        }
        try {
            if (can_factorization(b, c, g, h))
                r.verified("thm5.6.eq5.12", cert);
            else
                r.fail("thm5.6.eq5.12", {"composite differs from can"});
        } catch (const Error& e) {
            r.fail("thm5.6.eq5.12", {e.what()});
        }
    }

    if (th) {
        Bimodule amod = forget_right(regular_bimodule(b.A));
        Bimodule cmod = forget_right(h.coring.carrier);
        std::vector<std::pair<std::string, Bimodule>> mods = {{"A-A", amod}};
        if (include_large) mods.push_back({"C-C", cmod});
        for (const auto& [tag, mod] : mods) {
            const std::string id = "lem5.5.iso." + tag;
            try {
                LemmaIsoData l = lemma_iso(b, c, h, *th, mod, mod);
                const Field& f = b.field();
                bool ok = l.forward.rows() == l.forward.cols() &&
                          l.forward * l.backward == Matrix::identity(f, l.forward.rows()) &&
                          l.backward * l.forward == Matrix::identity(f, l.dim);
                if (ok)
                    r.verified(id, cert, {{"dim", static_cast<long>(l.dim)}});
                else
                    r.fail(id, {"maps are not mutually inverse"}).dims = {{"dim", static_cast<long>(l.dim)}};
            } catch (const Error& e) {
                r.fail(id, {e.what()});
            }
        }
    }
    return r;
}

} // namespace torsorkit
