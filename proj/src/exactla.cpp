#include "torsorkit/exactla.hpp"

#include <atomic>
#include <set>

namespace torsorkit {

namespace {
std::atomic<std::uint64_t> next_space_id{1};
}

SpaceRef make_space(std::vector<std::string> labels)
{
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size()) throw Error("space labels must be unique");
    auto s = std::make_shared<Space>();
    s->id = next_space_id.fetch_add(1);
    s->dim = labels.size();
    s->labels = std::move(labels);
    return s;
}

SpaceRef make_space(std::size_t dim, const std::string& prefix)
{
    std::vector<std::string> labels;
    labels.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) labels.push_back(prefix + std::to_string(i));
    return make_space(std::move(labels));
}

LinearMap::LinearMap(SpaceRef domain, SpaceRef codomain, Matrix m)
    : dom_(std::move(domain)), cod_(std::move(codomain)), m_(std::move(m))
{
    if (m_.rows() != cod_->dim || m_.cols() != dom_->dim)
        throw ShapeMismatch("linear map matrix is " + std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) +
                            ", spaces need " + std::to_string(cod_->dim) + "x" + std::to_string(dom_->dim));
}

LinearMap LinearMap::after(const LinearMap& inner) const
{
    if (inner.cod_->id != dom_->id) throw SpaceMismatch("composition through different spaces");
    return LinearMap(inner.dom_, cod_, m_ * inner.m_);
}

LinearMap LinearMap::operator+(const LinearMap& o) const
{
    if (o.dom_->id != dom_->id || o.cod_->id != cod_->id) throw SpaceMismatch("sum of maps between different spaces");
    return LinearMap(dom_, cod_, m_ + o.m_);
}

LinearMap LinearMap::operator-(const LinearMap& o) const
{
    if (o.dom_->id != dom_->id || o.cod_->id != cod_->id)
        throw SpaceMismatch("difference of maps between different spaces");
    return LinearMap(dom_, cod_, m_ - o.m_);
}

LinearMap LinearMap::identity(Field f, const SpaceRef& s)
{
    return LinearMap(s, s, Matrix::identity(f, s->dim));
}

LinearMap LinearMap::zero(Field f, const SpaceRef& dom, const SpaceRef& cod)
{
    return LinearMap(dom, cod, Matrix(f, cod->dim, dom->dim));
}

namespace {

Matrix retraction_for(Field f, std::size_t ambient_dim, const std::vector<std::size_t>& pivots)
{
    std::vector<Matrix::Triplet> t;
    for (std::size_t i = 0; i < pivots.size(); ++i) t.emplace_back(i, pivots[i], Scalar(1));
    return Matrix::from_triplets(f, pivots.size(), ambient_dim, t);
}

} // namespace

Subspace::Subspace(Field f, SpaceRef ambient, const Matrix& spanning_columns)
    : ambient_(std::move(ambient))
{
    if (spanning_columns.rows() != ambient_->dim) throw ShapeMismatch("spanning set has wrong length");
    Matrix basis = canonical_span(spanning_columns, &pivots_);
    space_ = make_space(pivots_.size(), "s");
    inclusion_ = LinearMap(space_, ambient_, basis);
    retraction_ = LinearMap(ambient_, space_, retraction_for(f, ambient_->dim, pivots_));
}

bool Subspace::contains(const Matrix& vectors) const
{
    // basis has identity rows at the pivots, so v is inside iff v = B (R v)
    const Matrix& b = inclusion_.matrix();
    return b * (retraction_.matrix() * vectors) == vectors;
}

Matrix Subspace::coordinates(const Matrix& vectors) const
{
    if (!contains(vectors)) throw Error("vector is not inside the subspace");
    return retraction_.matrix() * vectors;
}

bool Subspace::same_as(const Subspace& o) const
{
    return ambient_->id == o.ambient_->id && basis() == o.basis();
}

bool Subspace::within(const Subspace& o) const
{
    return ambient_->id == o.ambient_->id && o.contains(basis());
}

Subspace kernel(const LinearMap& f)
{
    Matrix n = nullspace(f.matrix());
    Subspace s(f.field(), f.domain(), n);
    std::size_t r = rank(f.matrix());
    if (s.dim() + r != f.domain()->dim) throw InternalError("rank-nullity violated in kernel");
    return s;
}

Subspace image(const LinearMap& f)
{
    return Subspace(f.field(), f.codomain(), f.matrix());
}

Quotient quotient(const SpaceRef& v, const Subspace& s)
{
    if (s.ambient()->id != v->id) throw AmbientMismatch("quotient by a subspace of another space");
    const Field f = s.inclusion().field();
    std::vector<char> pivot(v->dim, 0);
    for (std::size_t p : s.pivots()) pivot[p] = 1;
    std::vector<std::size_t> comp;
    for (std::size_t j = 0; j < v->dim; ++j)
        if (!pivot[j]) comp.push_back(j);

    std::vector<std::string> labels;
    for (std::size_t j : comp) labels.push_back("[" + v->labels[j] + "]");
    SpaceRef q = make_space(labels);

    // proj = C (I - B R): keep complement coordinates after removing the S part
    Matrix id = Matrix::identity(f, v->dim);
    Matrix c = id.select_rows(comp);
    Matrix proj = c - (c * s.basis()) * s.retraction().matrix();
    Matrix sect = c.transpose();
    return {q, LinearMap(v, q, proj), LinearMap(q, v, sect)};
}

Matrix invert_matrix(const Matrix& m)
{
    const Field& f = m.field();
    if (m.rows() != m.cols())
        throw NotInvertible("not square: " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()), rank(m),
                            Matrix(f, 0, 0));
    Echelon e = reduced_echelon(Matrix::hcat({m, Matrix::identity(f, m.rows())}));
    std::size_t r = 0;
    while (r < e.rank() && e.pivots[r] < m.cols()) ++r;
    if (r < m.cols()) {
        Matrix ker = nullspace(m);
        throw NotInvertible("rank " + std::to_string(r) + " < " + std::to_string(m.cols()), r, ker.column(0));
    }
    return e.rref.column_range(m.cols(), m.cols());
}

LinearMap invert(const LinearMap& f)
{
    if (f.domain()->dim != f.codomain()->dim)
        throw NotInvertible("dimension mismatch: " + std::to_string(f.domain()->dim) + " -> " +
                                std::to_string(f.codomain()->dim),
                            rank(f.matrix()), Matrix(f.field(), 0, 0));
    return LinearMap(f.codomain(), f.domain(), invert_matrix(f.matrix()));
}

Subspace intersect(const std::vector<Subspace>& subspaces)
{
    if (subspaces.empty()) throw Error("intersect of an empty list");
    const SpaceRef& amb = subspaces.front().ambient();
    const Field f = subspaces.front().inclusion().field();
    std::vector<Matrix> blocks;
    Matrix id = Matrix::identity(f, amb->dim);
    for (const auto& s : subspaces) {
        if (s.ambient()->id != amb->id) throw AmbientMismatch("intersect: subspaces live in different spaces");
        blocks.push_back(id - s.basis() * s.retraction().matrix());
    }
    return Subspace(f, amb, nullspace(Matrix::vcat(blocks)));
}

std::optional<std::size_t> first_nonzero_column_of(const Matrix& m)
{
    return m.first_nonzero_column();
}

} // namespace torsorkit
