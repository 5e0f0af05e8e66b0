#include "torsorkit/diffcalc.hpp"

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

void append(std::vector<std::string>& to, const std::vector<std::string>& from)
{
    to.insert(to.end(), from.begin(), from.end());
}

std::string stem(const DiffCalculus& calc)
{
    return calc.base == CalcBase::A ? "corB.1.1" : "corB.1.2";
}

// coordinates of ambient vectors through an embedding, or MembershipFailure
Matrix through(const Matrix& into, const Matrix& vectors, const std::string& what)
{
    auto x = solve(into, vectors);
    if (!x) throw MembershipFailure(what);
    return *x;
}

// d(x) = 1 (x) x - x (x) 1 at the k-level, x in T
Matrix d0_k(const Algebra& t, const Matrix& x)
{
    return Matrix::kron(t.unit(), x) - Matrix::kron(x, t.unit());
}

bool calc_certified(const PreTorsorBundle& b)
{
    return certify_hypotheses(b).certified();
}

} // namespace

DiffCalculus build_calculus(const PreTorsorBundle& b, CalcBase base, Report& r)
{
    bool unital = false;
    validate_pretorsor(b, &unital);
    if (!unital) throw PreconditionFailed("tau(1) is not 1 (x) 1 (x) 1; the pre-torsor is not unital");

    Workspace& ws = *b.ws;
    const Field& f = b.field();
    const std::size_t n = b.n();
    const Matrix& th = b.tau_hat;
    const Matrix& mult = b.T.mult();
    const Matrix& one = b.T.unit();
    const Matrix ones = Matrix::kron(one, one);
    const bool cert = calc_certified(b);

    DiffCalculus calc;
    calc.base = base;
    const bool on_a = base == CalcBase::A;
    calc.degree0 = on_a ? b.A : b.B;
    const AlgebraMap& into_t = on_a ? b.alpha : b.beta;
    calc.spec1 = on_a ? "A T B T A" : "B T A T B";
    calc.spec2 = on_a ? "A T B T A T B T A" : "B T A T B T A T B";
    const std::string id = stem(calc);
    TensorSpace c1 = ws.chain(calc.spec1);

    // sum t_i u_i = 0
    Matrix mu = ws.map(calc.spec1, on_a ? "A T A" : "B T B", {{0, 2, mult, {n}}}, "multiplication");
    // A: sum t_i tau(u_i) = 1 (x) t_i (x) u_i;  B: sum tau(t_i) u_i = t_i (x) u_i (x) 1
    Matrix cond;
    if (on_a) {
        cond = ws.map(calc.spec1, "A T A T B T A", {{1, 1, th, {n, n, n}}, {0, 2, mult, {n}}}, "t tau(u)") -
               ws.map(calc.spec1, "A T A T B T A", {{0, 0, one, {n}}}, "1 (x) -");
    } else {
        cond = ws.map(calc.spec1, "B T A T B T B", {{0, 1, th, {n, n, n}}, {2, 2, mult, {n}}}, "tau(t) u") -
               ws.map(calc.spec1, "B T A T B T B", {{2, 0, one, {n}}}, "- (x) 1");
    }
    Subspace k1(f, c1.carrier(), nullspace(mu));
    Subspace k2(f, c1.carrier(), nullspace(cond));
    calc.omega1 = intersect({k1, k2});
    const std::size_t dim1 = calc.omega1.dim();
    r.verified(id + "a.omega1", cert,
               {{"dim", static_cast<long>(dim1)}, {"ker_mu", static_cast<long>(k1.dim())},
                {"ker_second", static_cast<long>(k2.dim())}});

    calc.omega1_mod = sub_bimodule(c1.bimodule(), calc.omega1, "Omega1");
    calc.lift1 = c1.sect() * calc.omega1.basis();

    // d0
    const Algebra& R = calc.degree0;
    std::vector<Matrix> dcols;
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < R.dim(); ++i) {
        Matrix x = into_t(R.basis_vector(i));
        Matrix v = c1.pure({one, x}) - c1.pure({x, one});
        if (!calc.omega1.contains(v)) {
            std::string what = "d(" + R.space()->labels[i] + ") is not in Omega^1";
            r.fail(id + "a.d0", {what});
            throw MembershipFailure(what);
        }
        dcols.push_back(calc.omega1.coordinates(v));
    }
    calc.d0 = Matrix::hcat(dcols);
    r.verified(id + "a.d0", cert, {{"rank", static_cast<long>(rank(calc.d0))}});
    // d(aa') = d(a) a' + a d(a')
    for (std::size_t i = 0; i < R.dim(); ++i)
        for (std::size_t j = 0; j < R.dim(); ++j) {
            Matrix ei = R.basis_vector(i), ej = R.basis_vector(j);
            Matrix lhs = calc.d0 * R.product(ei, ej);
            Matrix rhs = calc.omega1_mod.ract(j) * calc.d0 * ei + calc.omega1_mod.lact(i) * calc.d0 * ej;
            if (lhs != rhs) bad.push_back("pair " + std::to_string(i) + "," + std::to_string(j));
        }
    record(r, id + "a.leibniz", bad, cert);

    // Omega^2 and d1
    calc.omega2 = balanced_tensor(calc.omega1_mod, R, calc.omega1_mod);
    TensorSpace c2 = ws.chain(calc.spec2);
    calc.omega2_into = induce(Matrix::kron(calc.lift1, calc.lift1), calc.omega2, c2, "Omega^2 inclusion");
    calc.omega2_injective = rank(calc.omega2_into) == calc.omega2.dim();
    Matrix d1_amb;
    if (on_a) {
        d1_amb = ws.map(calc.spec1, calc.spec2, {{0, 0, ones, {n, n}}}) -
                 ws.map(calc.spec1, calc.spec2, {{1, 1, th, {n, n, n}}}) +
                 ws.map(calc.spec1, calc.spec2, {{2, 0, ones, {n, n}}});
    } else {
        d1_amb = ws.map(calc.spec1, calc.spec2, {{0, 0, ones, {n, n}}}) -
                 ws.map(calc.spec1, calc.spec2, {{0, 1, th, {n, n, n}}}) +
                 ws.map(calc.spec1, calc.spec2, {{2, 0, ones, {n, n}}});
    }
    d1_amb = d1_amb * calc.omega1.basis();
    try {
        calc.d1 = through(calc.omega2_into, d1_amb, "d leaves Omega^1 (x) Omega^1");
        r.verified(id + "a.d1", cert && calc.omega2_injective,
                   {{"omega2", static_cast<long>(calc.omega2.dim())},
                    {"omega2_injective", calc.omega2_injective ? 1 : 0}});
    } catch (const MembershipFailure& e) {
        r.fail(id + "a.d1", {e.what()});
        throw;
    }
    bad.clear();
    if (!(d1_amb * calc.d0).is_zero()) bad.push_back("ambient");
    if (!(calc.d1 * calc.d0).is_zero()) bad.push_back("Omega^2 coordinates");
    record(r, id + "a.d1d0", bad, cert);
    return calc;
}

Connection connection(const PreTorsorBundle& b, const DiffCalculus& calc, Report& r)
{
    Workspace& ws = *b.ws;
    const Field& f = b.field();
    const std::size_t n = b.n();
    const Matrix& th = b.tau_hat;
    const Matrix& one = b.T.unit();
    const Matrix ones = Matrix::kron(one, one);
    const bool cert = calc_certified(b);
    const bool right = calc.base == CalcBase::A;
    const std::string id = stem(calc) + "b";
    const Algebra& R = calc.degree0;
    const AlgebraMap& into_t = right ? b.alpha : b.beta;

    Connection c;
    std::string src, flat_cod;
    if (right) {
        // t -> tau(t) - t (x) 1 (x) 1 in T (x)_A Omega^1(A)
        src = "k T A";
        c.chain = "k T A T B T A";
        c.space = balanced_tensor(ws.leaf("T", "k", "A"), R, calc.omega1_mod);
        c.into = induce(Matrix::kron(Matrix::identity(f, n), calc.lift1), c.space, ws.chain(c.chain), "T (x) Omega^1");
        c.ambient = ws.map(src, c.chain, {{0, 1, th, {n, n, n}}}) - ws.map(src, c.chain, {{1, 0, ones, {n, n}}});
        // nabla(m (x) w) = nabla(m) w + m (x) dw on T (x)_A Omega^1(A)
        flat_cod = "k T A T B T A T B T A";
        Matrix lhs = ws.map(c.chain, flat_cod, {{0, 1, th, {n, n, n}}}) -
                     ws.map(c.chain, flat_cod, {{2, 1, th, {n, n, n}}}) +
                     ws.map(c.chain, flat_cod, {{3, 0, ones, {n, n}}});
        bool flat = (lhs * c.ambient).is_zero();
        // Leibniz: nabla(t a) = nabla(t) a + t (x) da
        std::vector<std::string> bad;
        TensorSpace amb = ws.chain(c.chain);
        for (std::size_t i = 0; i < R.dim(); ++i) {
            Matrix x = into_t(R.basis_vector(i));
            Matrix l = c.ambient * b.T.rmul_by(x);
            Matrix rr = amb.bimodule().ract(i) * c.ambient + ws.map(src, c.chain, {{1, 0, d0_k(b.T, x), {n, n}}});
            append(bad, differing(l, rr, "a=" + R.space()->labels[i] + ", t"));
        }
        try {
            c.nabla = through(c.into, c.ambient, "nabla leaves T (x)_A Omega^1(A)");
            r.verified(id + ".connection", cert, {{"space", static_cast<long>(c.space.dim())}});
        } catch (const MembershipFailure& e) {
            r.fail(id + ".connection", {e.what()});
        }
        record(r, id + ".leibniz", bad, cert);
        record(r, id + ".flat", flat ? std::vector<std::string>{} : std::vector<std::string>{"nabla o nabla != 0"},
               cert);
    } else {
        // t -> 1 (x) 1 (x) t - tau(t) in Omega^1(B) (x)_B T
        src = "B T k";
        c.chain = "B T A T B T k";
        c.space = balanced_tensor(calc.omega1_mod, R, ws.leaf("T", "B", "k"));
        c.into = induce(Matrix::kron(calc.lift1, Matrix::identity(f, n)), c.space, ws.chain(c.chain), "Omega^1 (x) T");
        c.ambient = ws.map(src, c.chain, {{0, 0, ones, {n, n}}}) - ws.map(src, c.chain, {{0, 1, th, {n, n, n}}});
        // nabla(w (x) m) = dw (x) m - w nabla(m)
        flat_cod = "B T A T B T A T B T k";
        Matrix lhs = ws.map(c.chain, flat_cod, {{0, 0, ones, {n, n}}}) -
                     ws.map(c.chain, flat_cod, {{0, 1, th, {n, n, n}}}) +
                     ws.map(c.chain, flat_cod, {{2, 1, th, {n, n, n}}});
        bool flat = (lhs * c.ambient).is_zero();
        // Leibniz: nabla(b t) = db (x) t + b nabla(t)
        std::vector<std::string> bad;
        TensorSpace amb = ws.chain(c.chain);
        for (std::size_t i = 0; i < R.dim(); ++i) {
            Matrix x = into_t(R.basis_vector(i));
            Matrix l = c.ambient * b.T.lmul_by(x);
            Matrix rr = amb.bimodule().lact(i) * c.ambient + ws.map(src, c.chain, {{0, 0, d0_k(b.T, x), {n, n}}});
            append(bad, differing(l, rr, "b=" + R.space()->labels[i] + ", t"));
        }
        try {
            c.nabla = through(c.into, c.ambient, "nabla leaves Omega^1(B) (x)_B T");
            r.verified(id + ".connection", cert, {{"space", static_cast<long>(c.space.dim())}});
        } catch (const MembershipFailure& e) {
            r.fail(id + ".connection", {e.what()});
        }
        record(r, id + ".leibniz", bad, cert);
        record(r, id + ".flat", flat ? std::vector<std::string>{} : std::vector<std::string>{"nabla o nabla != 0"},
               cert);
    }
    return c;
}

BimoduleConnection bimodule_connection(const PreTorsorBundle& b, const Corings& corings, const EntwiningData& e,
                                       const DiffCalculus& calc_a, const DiffCalculus& calc_b,
                                       const Connection& right, const Connection& left, Report& r)
{
    Workspace& ws = *b.ws;
    const Field& f = b.field();
    const std::size_t n = b.n();
    const Matrix& th = b.tau_hat;
    const Matrix& mult = b.T.mult();
    const bool cert = calc_certified(b);
    const Matrix idn = Matrix::identity(f, n);
    const Algebra& B = b.B;

    // t (x) u (x) v -> tau(t u) v at the k-level, three factors in and out
    KWord w(f, {n, n, n});
    w.apply(0, 2, mult, {n});
    w.apply(0, 1, th, {n, n, n});
    w.apply(2, 2, mult, {n});
    const Matrix twist_k = w.matrix();

    BimoduleConnection out;
    out.domain = balanced_tensor(ws.leaf("T", "k", "B"), B, calc_b.omega1_mod);
    TensorSpace cod = ws.chain(left.chain);
    const std::string id = "propB.2.1";
    Matrix sigma_amb;
    try {
        sigma_amb = induce(twist_k * Matrix::kron(idn, calc_b.lift1), out.domain, cod, "sigma_B");
        std::vector<std::string> bad;
        // the proof's first condition: the image is killed by mu (x) T
        if (!(ws.map(left.chain, "B T B T k", {{0, 2, mult, {n}}}) * sigma_amb).is_zero()) bad.push_back("mu (x) T");
        auto x = solve(left.into, sigma_amb);
        if (!x)
            bad.push_back("image leaves Omega^1(B) (x)_B T");
        else
            out.sigma = *x;
        record(r, id + ".sigma-well-defined", bad, cert, {{"domain", static_cast<long>(out.domain.dim())}});
    } catch (const NotWellDefined& ex) {
        r.fail(id + ".sigma-well-defined", {ex.what()});
        return out;
    }

    // twisted Leibniz: nabla(t b) = nabla(t) b + sigma(t (x) db)
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < B.dim(); ++i) {
        Matrix y = b.beta(B.basis_vector(i));
        Matrix l = left.ambient * b.T.rmul_by(y);
        Matrix nb = ws.map(left.chain, left.chain, {{2, 1, b.T.rmul_by(y), {n}}}) * left.ambient;
        Matrix tdb = out.domain.proj() * Matrix::kron(idn, calc_b.d0 * B.basis_vector(i));
        append(bad, differing(l, nb + sigma_amb * tdb, "b=" + B.space()->labels[i] + ", t"));
    }
    record(r, id + ".twisted-leibniz", bad, cert);

    // sigma_B is psi_D on T (x)_B Omega^1(B), Omega^1(B) sitting inside D
    bad.clear();
    if (!corings.D_sub.contains(calc_b.omega1.basis())) {
        bad.push_back("Omega^1(B) is not inside D");
    } else {
        Matrix in_d = corings.D_sub.coordinates(calc_b.omega1.basis());
        Matrix to_td = induce(Matrix::kron(idn, in_d), out.domain, ws.chain("B T B D B"), "T (x) Omega^1 -> T (x) D");
        Matrix lift_d = ws.map("B D B T B", left.chain, {{0, 1, corings.LD, {n, n}}}, "D (x) T -> T (x) T (x) T");
        append(bad, differing(lift_d * e.psiD * to_td, sigma_amb, "basis"));
    }
    record(r, id + ".psiD-restriction", bad, cert);

    // sigma^l needs tau right B-linear
    const std::string id2 = "propB.2.2";
    Matrix tau3 = ws.map("k T k", "k T A T B T k", {{0, 1, th, {n, n, n}}}, "tau");
    out.tau_right_B_linear = true;
    for (std::size_t i = 0; i < B.dim() && out.tau_right_B_linear; ++i) {
        Matrix y = b.beta(B.basis_vector(i));
        Matrix lhs = tau3 * b.T.rmul_by(y);
        Matrix rhs = ws.map("k T A T B T k", "k T A T B T k", {{2, 1, b.T.rmul_by(y), {n}}}) * tau3;
        out.tau_right_B_linear = lhs == rhs;
    }
    r.add(id2 + ".precondition", Status::Pass, {}, {{"tau_right_B_linear", out.tau_right_B_linear ? 1 : 0}},
          out.tau_right_B_linear ? "" : "tau is not right B-linear; sigma^l is not formed");
    if (!out.tau_right_B_linear) return out;

    try {
        Matrix sl_amb = induce(twist_k * Matrix::kron(idn, calc_a.lift1), right.space, cod, "sigma^l");
        bad.clear();
        auto x = solve(left.into, sl_amb);
        if (!x)
            bad.push_back("image leaves Omega^1(B) (x)_B T");
        else
            out.sigma_l = *x;
        // sigma^l(t (x) da) = 0 and nabla^l is right A-linear
        for (std::size_t i = 0; i < b.A.dim(); ++i) {
            Matrix tda = right.space.proj() * Matrix::kron(idn, calc_a.d0 * b.A.basis_vector(i));
            if (!(sl_amb * tda).is_zero()) bad.push_back("t (x) d" + b.A.space()->labels[i]);
            Matrix x_a = b.alpha(b.A.basis_vector(i));
            Matrix l = left.ambient * b.T.rmul_by(x_a);
            Matrix rr = ws.map(left.chain, left.chain, {{2, 1, b.T.rmul_by(x_a), {n}}}) * left.ambient;
            append(bad, differing(l, rr, "nabla^l right A-linear, a=" + b.A.space()->labels[i] + ", t"));
        }
        record(r, id2 + ".sigma-l", bad, cert, {{"domain", static_cast<long>(right.space.dim())}});
    } catch (const NotWellDefined& ex) {
        r.fail(id2 + ".sigma-l", {ex.what()});
    }
    return out;
}

Report run_diffcalc(const PreTorsorBundle& b)
{
    Report r;
    r.subject = b.name;
    r.field = b.field().name();
    try {
        DiffCalculus ca = build_calculus(b, CalcBase::A, r);
        DiffCalculus cb = build_calculus(b, CalcBase::B, r);
        Connection right = connection(b, ca, r);
        Connection left = connection(b, cb, r);
        Corings c = build_corings(b);
        Report scratch;
        EntwiningData e = entwining(b, c, scratch);
        bimodule_connection(b, c, e, ca, cb, right, left, r);
    } catch (const PreconditionFailed& ex) {
        r.fail("corB.1.unital", {ex.what()});
    } catch (const MembershipFailure&) {
        // recorded where it happened
    }
    return r;
}

} // namespace torsorkit
