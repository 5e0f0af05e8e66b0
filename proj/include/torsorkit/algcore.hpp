#pragma once

#include <memory>
#include <mutex>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "torsorkit/exactla.hpp"

namespace torsorkit {

class NotAssociative : public Error {
public:
    NotAssociative(std::size_t i, std::size_t j, std::size_t k)
        : Error("not associative on basis triple (" + std::to_string(i) + "," + std::to_string(j) + "," +
                std::to_string(k) + ")"),
          i(i), j(j), k(k) {}
    std::size_t i, j, k;
};

class NotUnital : public Error {
public:
    explicit NotUnital(std::size_t i) : Error("unit fails on basis vector " + std::to_string(i)), i(i) {}
    std::size_t i;
};

class NotAlgebraMap : public Error {
public:
    using Error::Error;
};

class NotBimodule : public Error {
public:
    using Error::Error;
};

class ActionMismatch : public Error {
public:
    using Error::Error;
};

class NotWellDefined : public Error {
public:
    NotWellDefined(std::string msg, Matrix witness) : Error(std::move(msg)), witness(std::move(witness)) {}
    Matrix witness; // vector in the kernel of the projection that the raw map does not kill
};

class NotFree : public Error {
public:
    using Error::Error;
};

// Structure-constant algebra. Elements are column vectors (dim x 1).
class Algebra {
public:
    using Constant = std::tuple<std::size_t, std::size_t, std::size_t, Scalar>;

    Algebra() = default;

    const SpaceRef& space() const { return d_->space; }
    std::size_t dim() const { return d_->space->dim; }
    const Field& field() const { return d_->field; }
    const std::string& name() const { return d_->name; }
    std::uint64_t id() const { return d_->space->id; }
    bool same(const Algebra& o) const { return d_ == o.d_; }
    explicit operator bool() const { return static_cast<bool>(d_); }

    // dim x dim^2, column i*dim+j is e_i e_j
    const Matrix& mult() const { return d_->mult; }
    const Matrix& unit() const { return d_->unit; }
    // y -> e_i y and y -> y e_i
    const Matrix& lmul(std::size_t i) const { return d_->left[i]; }
    const Matrix& rmul(std::size_t i) const { return d_->right[i]; }
    Matrix lmul_by(const Matrix& x) const;
    Matrix rmul_by(const Matrix& x) const;
    Matrix product(const Matrix& x, const Matrix& y) const;
    Matrix basis_vector(std::size_t i) const { return Matrix::unit_vector(field(), dim(), i); }
    std::vector<Constant> constants() const;

    Algebra opposite() const;

    friend Algebra make_algebra(Field f, std::size_t dim, const std::vector<Constant>& constants,
                                const Matrix& unit, std::string name, std::vector<std::string> labels);
    friend Algebra make_algebra_from_mult(Field f, const Matrix& mult, const Matrix& unit, std::string name,
                                          std::vector<std::string> labels);

private:
    struct Data {
        Field field;
        SpaceRef space;
        std::string name;
        Matrix mult;
        Matrix unit;
        std::vector<Matrix> left, right;
        std::shared_ptr<const Data> opposite_of; // set when this is B^op of a stored algebra
    };
    std::shared_ptr<const Data> d_;
};

Algebra make_algebra(Field f, std::size_t dim, const std::vector<Algebra::Constant>& constants, const Matrix& unit,
                     std::string name = "A", std::vector<std::string> labels = {});
Algebra make_algebra_from_mult(Field f, const Matrix& mult, const Matrix& unit, std::string name = "A",
                               std::vector<std::string> labels = {});
// the one-dimensional algebra k; one shared instance per field
Algebra ground_algebra(Field f);
Algebra enveloping(const Algebra& b);
// a (x) b -> b (x) a on k-tensors of dimensions da, db
Matrix swap_matrix(Field f, std::size_t da, std::size_t db);
// k-tensor product A (x) B with factorwise product
Algebra tensor_algebra(const Algebra& a, const Algebra& b);

class AlgebraMap {
public:
    AlgebraMap() = default;
    const Algebra& source() const { return src_; }
    const Algebra& target() const { return tgt_; }
    const Matrix& matrix() const { return m_; }
    bool anti() const { return anti_; }
    Matrix operator()(const Matrix& x) const { return m_ * x; }

    friend AlgebraMap make_algebra_map(const Algebra& src, const Algebra& tgt, const Matrix& m, bool anti);

private:
    Algebra src_, tgt_;
    Matrix m_;
    bool anti_ = false;
};

// checks unit and (anti-)multiplicativity on all basis pairs
AlgebraMap make_algebra_map(const Algebra& src, const Algebra& tgt, const Matrix& m, bool anti = false);
AlgebraMap identity_map(const Algebra& a);
AlgebraMap unit_map(const Algebra& a); // k -> A

// L-R bimodule with actions stored as full matrices.
class Bimodule {
public:
    Bimodule() = default;

    const SpaceRef& space() const { return d_->space; }
    std::size_t dim() const { return d_->space->dim; }
    const Field& field() const { return d_->left_alg.field(); }
    const Algebra& left() const { return d_->left_alg; }
    const Algebra& right() const { return d_->right_alg; }
    const std::string& name() const { return d_->name; }
    bool same(const Bimodule& o) const { return d_ == o.d_; }

    // action matrices of basis vectors
    const Matrix& lact(std::size_t i) const { return d_->lact[i]; }
    const Matrix& ract(std::size_t i) const { return d_->ract[i]; }
    Matrix lact_by(const Matrix& x) const;
    Matrix ract_by(const Matrix& x) const;
    // full action maps: dim x (dimL*dim), dim x (dim*dimR)
    Matrix lact_map() const;
    Matrix ract_map() const;

    friend Bimodule make_bimodule(SpaceRef space, const Algebra& left, const Algebra& right,
                                  std::vector<Matrix> lact, std::vector<Matrix> ract, std::string name,
                                  bool validate);

private:
    struct Data {
        SpaceRef space;
        Algebra left_alg, right_alg;
        std::vector<Matrix> lact, ract;
        std::string name;
    };
    std::shared_ptr<const Data> d_;
};

Bimodule make_bimodule(SpaceRef space, const Algebra& left, const Algebra& right, std::vector<Matrix> lact,
                       std::vector<Matrix> ract, std::string name = "M", bool validate = true);
// A as an A-A bimodule
Bimodule regular_bimodule(const Algebra& a);
// M with actions pulled back along f: L' -> L and g: R' -> R (anti maps act on the other side)
Bimodule pullback(const Bimodule& m, const AlgebraMap& f, const AlgebraMap& g, std::string name = "");
// T as an L-R bimodule via algebra maps into T
Bimodule via_maps(const Algebra& t, const AlgebraMap& f, const AlgebraMap& g, std::string name = "");
// restriction of a bimodule to a subspace closed under both actions
Bimodule sub_bimodule(const Bimodule& m, const Subspace& s, std::string name = "");
// forget one side: make the right (or left) algebra the ground field
Bimodule forget_right(const Bimodule& m);
Bimodule forget_left(const Bimodule& m);

// Iterated balanced tensor product F0 (x)_{R0} F1 (x)_{R1} ... , left associated.
// The ambient is the k-tensor product of the factor spaces in Kronecker order.
class TensorSpace {
public:
    TensorSpace() = default;

    const std::vector<Bimodule>& factors() const { return d_->factors; }
    const std::vector<Algebra>& over() const { return d_->over; }
    const SpaceRef& carrier() const { return d_->bimodule.space(); }
    std::size_t dim() const { return carrier()->dim; }
    std::size_t ambient_dim() const { return d_->proj.cols(); }
    const Field& field() const { return d_->proj.field(); }
    // carrier x ambient and ambient x carrier, proj * sect = id
    const Matrix& proj() const { return d_->proj; }
    const Matrix& sect() const { return d_->sect; }
    // outer structure: left of the first factor, right of the last
    const Bimodule& bimodule() const { return d_->bimodule; }
    std::uint64_t id() const { return carrier()->id; }

    // class of a pure tensor x0 (x) x1 (x) ...
    Matrix pure(const std::vector<Matrix>& vectors) const;
    // rank of the relation span: ambient_dim - dim
    std::size_t relation_rank() const { return ambient_dim() - dim(); }

    friend TensorSpace single(const Bimodule& m);
    friend TensorSpace extend(const TensorSpace& x, const Algebra& r, const Bimodule& n);

private:
    struct Data {
        std::vector<Bimodule> factors;
        std::vector<Algebra> over;
        Matrix proj, sect;
        Bimodule bimodule;
    };
    std::shared_ptr<const Data> d_;
};

TensorSpace single(const Bimodule& m);
TensorSpace extend(const TensorSpace& x, const Algebra& r, const Bimodule& n);
TensorSpace balanced_tensor(const Bimodule& m, const Algebra& r, const Bimodule& n);
TensorSpace tensor_chain(const std::vector<Bimodule>& factors, const std::vector<Algebra>& over);

// P_cod * raw * S_dom after checking raw maps ker(P_dom) into ker(P_cod)
Matrix induce(const Matrix& raw, const TensorSpace& dom, const TensorSpace& cod, const std::string& what = "map");
// raw * S_dom after checking raw kills ker(P_dom); cod is a plain space
Matrix induce_plain(const Matrix& raw, const TensorSpace& dom, const std::string& what = "map");
LinearMap induce_map(const LinearMap& raw, const TensorSpace& dom, const SpaceRef& cod);

// canonical map M (x) (N (x) K) -> (M (x) N) (x) K induced by the identity on the
// k-tensor; memoised per pair of carriers, safe to call from several threads
Matrix rebracket(const TensorSpace& left_assoc, const TensorSpace& inner_right, const TensorSpace& right_assoc);

enum class Side { Left, Right };

struct FreenessCertificate {
    Side side;
    std::size_t rank;
    Matrix iso; // (algebra)^rank -> module, one-sided linear
    Matrix generators;
};

FreenessCertificate certify_free(const Bimodule& m, Side side);

} // namespace torsorkit

namespace torsorkit {

// kron(I, op, I) where op acts on factors [pos, pos+arity) of a k-tensor with
// the given factor dimensions
Matrix local_op(Field f, const std::vector<std::size_t>& dims, std::size_t pos, std::size_t arity, const Matrix& op);

// Composite of local operations on k-tensors, tracking factor dimensions.
class KWord {
public:
    KWord(Field f, std::vector<std::size_t> dims);
    // replace factors [pos, pos+arity) by op's output factors out_dims
    KWord& apply(std::size_t pos, std::size_t arity, const Matrix& op, const std::vector<std::size_t>& out_dims);
    const Matrix& matrix() const { return m_; }
    const std::vector<std::size_t>& dims() const { return dims_; }

private:
    Field f_;
    std::vector<std::size_t> dims_;
    Matrix m_;
};

} // namespace torsorkit
