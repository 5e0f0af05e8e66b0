#include "torsorkit/algcore.hpp"

#include <random>

namespace torsorkit {

namespace {

Matrix column_block(const Matrix& m, std::size_t begin, std::size_t count)
{
    return m.column_range(begin, count);
}

std::vector<std::string> default_labels(std::size_t dim, const std::string& prefix)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < dim; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

Matrix combination(const std::vector<Matrix>& mats, const Matrix& x, const Field& f, std::size_t dim)
{
    Matrix out(f, dim, dim);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        Scalar c = x.at(i, 0);
        if (!Field::is_zero(c)) out = out + mats[i].scaled(c);
    }
    return out;
}

} // namespace

Matrix swap_matrix(Field f, std::size_t da, std::size_t db)
{
    // a (x) b -> b (x) a
    std::vector<Matrix::Triplet> t;
    t.reserve(da * db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < db; ++j) t.emplace_back(j * da + i, i * db + j, Scalar(1));
    return Matrix::from_triplets(f, da * db, da * db, t);
}

Matrix Algebra::lmul_by(const Matrix& x) const
{
    return combination(d_->left, x, field(), dim());
}

Matrix Algebra::rmul_by(const Matrix& x) const
{
    return combination(d_->right, x, field(), dim());
}

Matrix Algebra::product(const Matrix& x, const Matrix& y) const
{
    return d_->mult * Matrix::kron(x, y);
}

std::vector<Algebra::Constant> Algebra::constants() const
{
    std::vector<Constant> out;
    Matrix t = d_->mult.transpose();
    for (std::size_t c = 0; c < t.rows(); ++c)
        for (const auto& e : t.row(c)) out.emplace_back(c / dim(), c % dim(), e.col, e.val);
    return out;
}

Algebra Algebra::opposite() const
{
    Matrix op = d_->mult * swap_matrix(field(), dim(), dim());
    Algebra a = make_algebra_from_mult(field(), op, d_->unit, d_->name + "^op", d_->space->labels);
    return a;
}

Algebra make_algebra_from_mult(Field f, const Matrix& mult, const Matrix& unit, std::string name,
                               std::vector<std::string> labels)
{
    const std::size_t n = mult.rows();
    if (mult.cols() != n * n) throw ShapeMismatch("structure constants must be dim x dim^2");
    if (unit.rows() != n || unit.cols() != 1) throw ShapeMismatch("unit must be a dim x 1 vector");
    if (n == 0) throw NotUnital(0);
    if (labels.empty()) labels = default_labels(n, "e");
    auto d = std::make_shared<Algebra::Data>();
    d->field = f;
    d->space = make_space(std::move(labels));
    d->name = std::move(name);
    d->mult = mult;
    d->unit = unit;
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) {
        d->left.push_back(column_block(mult, i * n, n));
        for (std::size_t j = 0; j < n; ++j) idx[j] = j * n + i;
        d->right.push_back(mult.select_columns(idx));
    }
    Algebra a;
    a.d_ = d;

    Matrix id = Matrix::identity(f, n);
    Matrix lu = a.lmul_by(unit), ru = a.rmul_by(unit);
    if (lu != id || ru != id) {
        Matrix diff = Matrix::hcat({lu - id, ru - id});
        throw NotUnital(*diff.first_nonzero_column() % n);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            // (e_i e_j) y  versus  e_i (e_j y) for all basis y
            Matrix lhs = a.lmul_by(mult.column(i * n + j));
            Matrix rhs = d->left[i] * d->left[j];
            if (lhs != rhs) throw NotAssociative(i, j, *(lhs - rhs).first_nonzero_column());
        }
    return a;
}

Algebra make_algebra(Field f, std::size_t dim, const std::vector<Algebra::Constant>& constants, const Matrix& unit,
                     std::string name, std::vector<std::string> labels)
{
    std::vector<Matrix::Triplet> t;
    for (const auto& [i, j, k, v] : constants) {
        if (i >= dim || j >= dim || k >= dim) throw ShapeMismatch("structure constant index out of range");
        t.emplace_back(k, i * dim + j, v);
    }
    return make_algebra_from_mult(f, Matrix::from_triplets(f, dim, dim * dim, t), unit, std::move(name),
                                  std::move(labels));
}

Algebra ground_algebra(Field f)
{
    static std::mutex mu;
    static std::map<unsigned long, Algebra> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(f.characteristic());
    if (it != cache.end()) return it->second;
    Algebra k = make_algebra(f, 1, {{0, 0, 0, Scalar(1)}}, Matrix::identity(f, 1), "k", {"1"});
    cache.emplace(f.characteristic(), k);
    return k;
}

Algebra tensor_algebra(const Algebra& a, const Algebra& b)
{
    const Field& f = a.field();
    const std::size_t da = a.dim(), db = b.dim(), n = da * db;
    std::vector<Matrix::Triplet> t;
    Matrix ma = a.mult().transpose(), mb = b.mult().transpose();
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j)
            for (const auto& ea : ma.row(i * da + j))
                for (std::size_t i2 = 0; i2 < db; ++i2)
                    for (std::size_t j2 = 0; j2 < db; ++j2)
                        for (const auto& eb : mb.row(i2 * db + j2))
                            t.emplace_back(ea.col * db + eb.col, (i * db + i2) * n + (j * db + j2),
                                           f.mul(ea.val, eb.val));
    std::vector<std::string> labels;
    for (const auto& la : a.space()->labels)
        for (const auto& lb : b.space()->labels) labels.push_back(la + "(x)" + lb);
    return make_algebra_from_mult(f, Matrix::from_triplets(f, n, n * n, t), Matrix::kron(a.unit(), b.unit()),
                                  a.name() + "(x)" + b.name(), labels);
}

Algebra enveloping(const Algebra& b)
{
    return tensor_algebra(b, b.opposite());
}

AlgebraMap make_algebra_map(const Algebra& src, const Algebra& tgt, const Matrix& m, bool anti)
{
    if (m.rows() != tgt.dim() || m.cols() != src.dim()) throw ShapeMismatch("algebra map has wrong shape");
    if (m * src.unit() != tgt.unit()) throw NotAlgebraMap("does not preserve the unit");
    Matrix k = Matrix::kron(m, m);
    if (anti) k = k * swap_matrix(src.field(), src.dim(), src.dim());
    Matrix diff = m * src.mult() - tgt.mult() * k;
    if (auto c = diff.first_nonzero_column())
        throw NotAlgebraMap(std::string(anti ? "anti-" : "") + "multiplicativity fails on basis pair (" +
                            std::to_string(*c / src.dim()) + "," + std::to_string(*c % src.dim()) + ")");
    AlgebraMap f;
    f.src_ = src;
    f.tgt_ = tgt;
    f.m_ = m;
    f.anti_ = anti;
    return f;
}

AlgebraMap identity_map(const Algebra& a)
{
    return make_algebra_map(a, a, Matrix::identity(a.field(), a.dim()));
}

AlgebraMap unit_map(const Algebra& a)
{
    return make_algebra_map(ground_algebra(a.field()), a, a.unit());
}

Matrix Bimodule::lact_by(const Matrix& x) const
{
    return combination(d_->lact, x, field(), dim());
}

Matrix Bimodule::ract_by(const Matrix& x) const
{
    return combination(d_->ract, x, field(), dim());
}

Matrix Bimodule::lact_map() const
{
    return Matrix::hcat(d_->lact);
}

Matrix Bimodule::ract_map() const
{
    const std::size_t dr = right().dim(), n = dim();
    std::vector<Matrix::Triplet> t;
    for (std::size_t r = 0; r < dr; ++r) {
        Matrix tr = d_->ract[r].transpose();
        for (std::size_t m = 0; m < n; ++m)
            for (const auto& e : tr.row(m)) t.emplace_back(e.col, m * dr + r, e.val);
    }
    return Matrix::from_triplets(field(), n, n * dr, t);
}

Bimodule make_bimodule(SpaceRef space, const Algebra& left, const Algebra& right, std::vector<Matrix> lact,
                       std::vector<Matrix> ract, std::string name, bool validate)
{
    const std::size_t n = space->dim;
    if (lact.size() != left.dim() || ract.size() != right.dim()) throw ShapeMismatch("one action matrix per basis vector");
    for (const auto& m : lact)
        if (m.rows() != n || m.cols() != n) throw ShapeMismatch("left action matrix has wrong shape");
    for (const auto& m : ract)
        if (m.rows() != n || m.cols() != n) throw ShapeMismatch("right action matrix has wrong shape");
    auto d = std::make_shared<Bimodule::Data>();
    d->space = std::move(space);
    d->left_alg = left;
    d->right_alg = right;
    d->lact = std::move(lact);
    d->ract = std::move(ract);
    d->name = std::move(name);
    Bimodule b;
    b.d_ = d;
    if (!validate) return b;

    const Field& f = left.field();
    Matrix id = Matrix::identity(f, n);
    if (b.lact_by(left.unit()) != id) throw NotBimodule("left action is not unital");
    if (b.ract_by(right.unit()) != id) throw NotBimodule("right action is not unital");
    for (std::size_t i = 0; i < left.dim(); ++i)
        for (std::size_t j = 0; j < left.dim(); ++j)
            if (b.lact_by(left.product(left.basis_vector(i), left.basis_vector(j))) != d->lact[i] * d->lact[j])
                throw NotBimodule("left action not associative on (" + std::to_string(i) + "," + std::to_string(j) + ")");
    for (std::size_t i = 0; i < right.dim(); ++i)
        for (std::size_t j = 0; j < right.dim(); ++j)
            if (b.ract_by(right.product(right.basis_vector(i), right.basis_vector(j))) != d->ract[j] * d->ract[i])
                throw NotBimodule("right action not associative on (" + std::to_string(i) + "," + std::to_string(j) + ")");
    for (std::size_t i = 0; i < left.dim(); ++i)
        for (std::size_t j = 0; j < right.dim(); ++j)
            if (d->lact[i] * d->ract[j] != d->ract[j] * d->lact[i])
                throw NotBimodule("actions do not commute on (" + std::to_string(i) + "," + std::to_string(j) + ")");
    return b;
}

Bimodule regular_bimodule(const Algebra& a)
{
    std::vector<Matrix> l, r;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        l.push_back(a.lmul(i));
        r.push_back(a.rmul(i));
    }
    return make_bimodule(a.space(), a, a, std::move(l), std::move(r), a.name(), false);
}

Bimodule pullback(const Bimodule& m, const AlgebraMap& f, const AlgebraMap& g, std::string name)
{
    if (f.anti() || g.anti()) throw ActionMismatch("pullback along an anti-homomorphism changes sides");
    if (!f.target().same(m.left()) || !g.target().same(m.right()))
        throw ActionMismatch("pullback maps do not land in the acting algebras");
    std::vector<Matrix> l, r;
    for (std::size_t i = 0; i < f.source().dim(); ++i) l.push_back(m.lact_by(f.matrix().column(i)));
    for (std::size_t i = 0; i < g.source().dim(); ++i) r.push_back(m.ract_by(g.matrix().column(i)));
    return make_bimodule(m.space(), f.source(), g.source(), std::move(l), std::move(r),
                         name.empty() ? m.name() : name, false);
}

Bimodule via_maps(const Algebra& t, const AlgebraMap& f, const AlgebraMap& g, std::string name)
{
    return pullback(regular_bimodule(t), f, g, name.empty() ? t.name() : name);
}

Bimodule sub_bimodule(const Bimodule& m, const Subspace& s, std::string name)
{
    if (s.ambient()->id != m.space()->id) throw AmbientMismatch("sub-bimodule of a different space");
    const Matrix& inc = s.basis();
    const Matrix& ret = s.retraction().matrix();
    std::vector<Matrix> l, r;
    for (std::size_t i = 0; i < m.left().dim(); ++i) {
        Matrix img = m.lact(i) * inc;
        if (!s.contains(img)) throw NotBimodule("subspace not closed under left action of basis " + std::to_string(i));
        l.push_back(ret * img);
    }
    for (std::size_t i = 0; i < m.right().dim(); ++i) {
        Matrix img = m.ract(i) * inc;
        if (!s.contains(img)) throw NotBimodule("subspace not closed under right action of basis " + std::to_string(i));
        r.push_back(ret * img);
    }
    return make_bimodule(s.space(), m.left(), m.right(), std::move(l), std::move(r), name.empty() ? m.name() : name,
                         false);
}

Bimodule forget_right(const Bimodule& m)
{
    std::vector<Matrix> l;
    for (std::size_t i = 0; i < m.left().dim(); ++i) l.push_back(m.lact(i));
    return make_bimodule(m.space(), m.left(), ground_algebra(m.field()), std::move(l),
                         {Matrix::identity(m.field(), m.dim())}, m.name(), false);
}

Bimodule forget_left(const Bimodule& m)
{
    std::vector<Matrix> r;
    for (std::size_t i = 0; i < m.right().dim(); ++i) r.push_back(m.ract(i));
    return make_bimodule(m.space(), ground_algebra(m.field()), m.right(), {Matrix::identity(m.field(), m.dim())},
                         std::move(r), m.name(), false);
}

Matrix TensorSpace::pure(const std::vector<Matrix>& vectors) const
{
    return d_->proj * Matrix::kron(vectors);
}

TensorSpace single(const Bimodule& m)
{
    auto d = std::make_shared<TensorSpace::Data>();
    d->factors = {m};
    d->proj = Matrix::identity(m.field(), m.dim());
    d->sect = d->proj;
    d->bimodule = m;
    TensorSpace t;
    t.d_ = d;
    return t;
}

TensorSpace extend(const TensorSpace& x, const Algebra& r, const Bimodule& n)
{
    const Bimodule& xb = x.bimodule();
    if (!xb.right().same(r) || !n.left().same(r))
        throw ActionMismatch("balanced tensor over " + r.name() + " needs matching actions (" + xb.right().name() +
                             ", " + n.left().name() + ")");
    const Field& f = r.field();
    const std::size_t c = x.dim(), dn = n.dim(), dr = r.dim();

    std::vector<std::string> labels;
    labels.reserve(c * dn);
    for (const auto& a : x.carrier()->labels)
        for (const auto& b : n.space()->labels) labels.push_back(a + "(x)" + b);
    SpaceRef amb = make_space(std::move(labels));

    // relation columns x.r (x) m - x (x) r.m
    std::vector<Matrix::Triplet> t;
    std::size_t col = 0;
    bool trivial = dr == 1 && xb.ract(0) == Matrix::identity(f, c) && n.lact(0) == Matrix::identity(f, dn);
    if (!trivial) {
        for (std::size_t k = 0; k < dr; ++k) {
            Matrix xr = xb.ract(k).transpose();
            Matrix nl = n.lact(k).transpose();
            for (std::size_t i = 0; i < c; ++i)
                for (std::size_t m = 0; m < dn; ++m, ++col) {
                    for (const auto& e : xr.row(i)) t.emplace_back(e.col * dn + m, col, e.val);
                    for (const auto& e : nl.row(m)) t.emplace_back(i * dn + e.col, col, f.neg(e.val));
                }
        }
    }
    Matrix rel = Matrix::from_triplets(f, c * dn, col, t);
    Quotient q = quotient(amb, Subspace(f, amb, rel));
    const Matrix& ps = q.proj.matrix();
    const Matrix& ss = q.sect.matrix();

    auto d = std::make_shared<TensorSpace::Data>();
    d->factors = x.factors();
    d->factors.push_back(n);
    d->over = x.over();
    d->over.push_back(r);
    Matrix idn = Matrix::identity(f, dn);
    d->proj = ps * Matrix::kron(x.proj(), idn);
    d->sect = Matrix::kron(x.sect(), idn) * ss;

    std::vector<Matrix> l, rr;
    Matrix idc = Matrix::identity(f, c);
    for (std::size_t i = 0; i < xb.left().dim(); ++i) {
        Matrix raw = ps * Matrix::kron(xb.lact(i), idn);
        Matrix a = raw * ss;
        if (a * ps != raw) throw ActionMismatch("outer left action does not descend to the balanced tensor");
        l.push_back(std::move(a));
    }
    for (std::size_t i = 0; i < n.right().dim(); ++i) {
        Matrix raw = ps * Matrix::kron(idc, n.ract(i));
        Matrix a = raw * ss;
        if (a * ps != raw) throw ActionMismatch("outer right action does not descend to the balanced tensor");
        rr.push_back(std::move(a));
    }
    d->bimodule = make_bimodule(q.space, xb.left(), n.right(), std::move(l), std::move(rr),
                                xb.name() + "(x)" + n.name(), false);
    TensorSpace out;
    out.d_ = d;
    return out;
}

TensorSpace balanced_tensor(const Bimodule& m, const Algebra& r, const Bimodule& n)
{
    return extend(single(m), r, n);
}

TensorSpace tensor_chain(const std::vector<Bimodule>& factors, const std::vector<Algebra>& over)
{
    if (factors.empty() || over.size() + 1 != factors.size()) throw ShapeMismatch("tensor chain needs n factors and n-1 algebras");
    TensorSpace t = single(factors[0]);
    for (std::size_t i = 0; i < over.size(); ++i) t = extend(t, over[i], factors[i + 1]);
    return t;
}

namespace {

Matrix check_descends(const Matrix& a, const TensorSpace& dom, const std::string& what)
{
    Matrix b = a * dom.sect();
    Matrix diff = b * dom.proj() - a;
    if (auto j = diff.first_nonzero_column()) {
        const Field& f = dom.field();
        Matrix e = Matrix::unit_vector(f, dom.ambient_dim(), *j);
        Matrix w = e - dom.sect() * (dom.proj() * e);
        throw NotWellDefined(what + " is not balanced: a relation vector has nonzero image", w);
    }
    return b;
}

} // namespace

Matrix induce(const Matrix& raw, const TensorSpace& dom, const TensorSpace& cod, const std::string& what)
{
    if (raw.rows() != cod.ambient_dim() || raw.cols() != dom.ambient_dim())
        throw ShapeMismatch(what + ": raw map has shape " + std::to_string(raw.rows()) + "x" +
                            std::to_string(raw.cols()) + ", expected " + std::to_string(cod.ambient_dim()) + "x" +
                            std::to_string(dom.ambient_dim()));
    return check_descends(cod.proj() * raw, dom, what);
}

Matrix induce_plain(const Matrix& raw, const TensorSpace& dom, const std::string& what)
{
    if (raw.cols() != dom.ambient_dim()) throw ShapeMismatch(what + ": raw map has wrong domain");
    return check_descends(raw, dom, what);
}

LinearMap induce_map(const LinearMap& raw, const TensorSpace& dom, const SpaceRef& cod)
{
    if (raw.codomain()->id != cod->id) throw SpaceMismatch("induce_map: codomain handle differs");
    return LinearMap(dom.carrier(), cod, induce_plain(raw.matrix(), dom, "induced map"));
}

Matrix rebracket(const TensorSpace& left_assoc, const TensorSpace& inner_right, const TensorSpace& right_assoc)
{
    static std::mutex mu;
    static std::map<std::pair<std::uint64_t, std::uint64_t>, Matrix> cache;
    const auto key = std::make_pair(right_assoc.id(), left_assoc.id());
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    if (right_assoc.factors().size() != 2 || right_assoc.factors()[1].space()->id != inner_right.carrier()->id)
        throw ShapeMismatch("rebracket: right-associated space must be M (x) (inner tensor)");
    const Field& f = left_assoc.field();
    Matrix raw = Matrix::kron(Matrix::identity(f, right_assoc.factors()[0].dim()), inner_right.sect());
    Matrix m = induce(raw, right_assoc, left_assoc, "rebracketing");
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, m).first->second;
}

FreenessCertificate certify_free(const Bimodule& m, Side side)
{
    const Algebra& r = side == Side::Left ? m.left() : m.right();
    const Field& f = m.field();
    const std::size_t dr = r.dim(), n = m.dim();
    if (n % dr != 0)
        throw NotFree("dimension " + std::to_string(n) + " is not a multiple of " + std::to_string(dr));
    const std::size_t rk = n / dr;
    auto act = [&](std::size_t i) -> const Matrix& { return side == Side::Left ? m.lact(i) : m.ract(i); };
    // columns e_i . g for a generator g
    auto orbit = [&](const Matrix& g) {
        std::vector<Matrix> cols;
        for (std::size_t i = 0; i < dr; ++i) cols.push_back(act(i) * g);
        return Matrix::hcat(cols);
    };
    auto finish = [&](const std::vector<Matrix>& gens) -> std::optional<FreenessCertificate> {
        std::vector<Matrix> blocks;
        for (const auto& g : gens) blocks.push_back(orbit(g));
        Matrix iso = rk == 0 ? Matrix(f, n, 0) : Matrix::hcat(blocks);
        if (rank(iso) != n) return std::nullopt;
        return FreenessCertificate{side, rk, iso, rk == 0 ? Matrix(f, n, 0) : Matrix::hcat(gens)};
    };
    if (rk == 0) return *finish({});

    // greedy over basis vectors first, then seeded random combinations
    std::vector<Matrix> gens;
    Matrix span(f, n, 0);
    for (std::size_t j = 0; j < n && gens.size() < rk; ++j) {
        Matrix g = Matrix::unit_vector(f, n, j);
        Matrix cand = Matrix::hcat({span, orbit(g)});
        if (rank(cand) == span.cols() + dr) {
            gens.push_back(g);
            span = cand;
        }
    }
    if (gens.size() == rk)
        if (auto c = finish(gens)) return *c;
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int attempt = 0; attempt < 40; ++attempt) {
        std::vector<Matrix> rg;
        for (std::size_t k = 0; k < rk; ++k) {
            std::vector<Scalar> v(n);
            for (auto& x : v) x = coef(rng);
            rg.push_back(Matrix::from_dense(f, n, 1, v));
        }
        if (auto c = finish(rg)) return *c;
    }
    throw NotFree("no free basis of rank " + std::to_string(rk) + " found; freeness not certified");
}

} // namespace torsorkit

namespace torsorkit {

Matrix local_op(Field f, const std::vector<std::size_t>& dims, std::size_t pos, std::size_t arity, const Matrix& op)
{
    if (pos + arity > dims.size()) throw ShapeMismatch("local_op: factor range out of bounds");
    std::size_t before = 1, inner = 1, after = 1;
    for (std::size_t i = 0; i < pos; ++i) before *= dims[i];
    for (std::size_t i = pos; i < pos + arity; ++i) inner *= dims[i];
    for (std::size_t i = pos + arity; i < dims.size(); ++i) after *= dims[i];
    if (op.cols() != inner) throw ShapeMismatch("local_op: operator domain does not match the factors");
    Matrix m = op;
    if (before > 1) m = Matrix::kron(Matrix::identity(f, before), m);
    if (after > 1) m = Matrix::kron(m, Matrix::identity(f, after));
    return m;
}

KWord::KWord(Field f, std::vector<std::size_t> dims) : f_(f), dims_(std::move(dims))
{
    std::size_t n = 1;
    for (auto d : dims_) n *= d;
    m_ = Matrix::identity(f_, n);
}

KWord& KWord::apply(std::size_t pos, std::size_t arity, const Matrix& op, const std::vector<std::size_t>& out_dims)
{
    std::size_t out = 1;
    for (auto d : out_dims) out *= d;
    if (op.rows() != out) throw ShapeMismatch("KWord::apply: operator codomain does not match out_dims");
    m_ = local_op(f_, dims_, pos, arity, op) * m_;
    std::vector<std::size_t> nd(dims_.begin(), dims_.begin() + static_cast<std::ptrdiff_t>(pos));
    nd.insert(nd.end(), out_dims.begin(), out_dims.end());
    nd.insert(nd.end(), dims_.begin() + static_cast<std::ptrdiff_t>(pos + arity), dims_.end());
    dims_ = std::move(nd);
    return *this;
}

} // namespace torsorkit
