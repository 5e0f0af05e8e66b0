#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "torsorkit/matrix.hpp"

namespace torsorkit {

struct Space {
    std::uint64_t id;
    std::size_t dim;
    std::vector<std::string> labels;
};
using SpaceRef = std::shared_ptr<const Space>;

SpaceRef make_space(std::vector<std::string> labels);
SpaceRef make_space(std::size_t dim, const std::string& prefix = "v");

class LinearMap {
public:
    LinearMap() = default;
    LinearMap(SpaceRef domain, SpaceRef codomain, Matrix m);

    const SpaceRef& domain() const { return dom_; }
    const SpaceRef& codomain() const { return cod_; }
    const Matrix& matrix() const { return m_; }
    const Field& field() const { return m_.field(); }

    // this ∘ inner; requires inner.codomain == this->domain (same handle)
    LinearMap after(const LinearMap& inner) const;
    LinearMap operator+(const LinearMap& o) const;
    LinearMap operator-(const LinearMap& o) const;

    static LinearMap identity(Field f, const SpaceRef& s);
    static LinearMap zero(Field f, const SpaceRef& dom, const SpaceRef& cod);

private:
    SpaceRef dom_, cod_;
    Matrix m_;
};

class NotInvertible : public Error {
public:
    NotInvertible(std::string msg, std::size_t rank, Matrix kernel_vector)
        : Error(std::move(msg)), rank(rank), kernel_vector(std::move(kernel_vector)) {}
    std::size_t rank;
    Matrix kernel_vector; // empty (0x0) on dimension mismatch
};

class Subspace {
public:
    // spanning columns need not be independent; the stored basis is canonical
    Subspace() = default;
    Subspace(Field f, SpaceRef ambient, const Matrix& spanning_columns);

    const SpaceRef& ambient() const { return ambient_; }
    const SpaceRef& space() const { return space_; }
    std::size_t dim() const { return space_->dim; }
    const LinearMap& inclusion() const { return inclusion_; }
    const LinearMap& retraction() const { return retraction_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    const Matrix& basis() const { return inclusion_.matrix(); }

    bool contains(const Matrix& vectors) const;
    // coordinates of ambient vectors known to lie in the subspace
    Matrix coordinates(const Matrix& vectors) const;
    bool same_as(const Subspace& o) const;
    bool within(const Subspace& o) const;

private:
    SpaceRef ambient_;
    SpaceRef space_;
    LinearMap inclusion_;
    LinearMap retraction_;
    std::vector<std::size_t> pivots_;
};

struct Quotient {
    SpaceRef space;
    LinearMap proj;
    LinearMap sect;
};

Subspace kernel(const LinearMap& f);
Subspace image(const LinearMap& f);
Quotient quotient(const SpaceRef& v, const Subspace& s);
LinearMap invert(const LinearMap& f);
Subspace intersect(const std::vector<Subspace>& subspaces);

// matrix-level helpers shared by the higher modules
Matrix invert_matrix(const Matrix& m);
// column index of a vector in the kernel of m that m does not kill, i.e.
// first column j with m e_j != 0; returns nullopt when m == 0
std::optional<std::size_t> first_nonzero_column_of(const Matrix& m);

} // namespace torsorkit
