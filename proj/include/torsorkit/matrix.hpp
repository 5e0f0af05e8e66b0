#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "torsorkit/field.hpp"

namespace torsorkit {

// Sparse row-major exact matrix. Rows hold strictly increasing column
// indices and never store zeros.
class Matrix {
public:
    struct Entry {
        std::size_t col;
        Scalar val;
    };
    using Row = std::vector<Entry>;
    using Triplet = std::tuple<std::size_t, std::size_t, Scalar>;

    Matrix() = default;
    Matrix(Field f, std::size_t rows, std::size_t cols);

    static Matrix identity(Field f, std::size_t n);
    static Matrix from_dense(Field f, std::size_t rows, std::size_t cols,
                             const std::vector<Scalar>& row_major);
    static Matrix from_triplets(Field f, std::size_t rows, std::size_t cols,
                                const std::vector<Triplet>& entries);
    static Matrix from_rows(Field f, std::size_t cols, std::vector<Row> rows);
    static Matrix unit_vector(Field f, std::size_t n, std::size_t i);
    static Matrix kron(const Matrix& a, const Matrix& b);
    static Matrix kron(const std::vector<Matrix>& factors);
    static Matrix hcat(const std::vector<Matrix>& blocks);
    static Matrix vcat(const std::vector<Matrix>& blocks);

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    const Field& field() const { return field_; }
    const Row& row(std::size_t i) const { return rows_[i]; }

    Scalar at(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, const Scalar& v);
    void add_to(std::size_t i, std::size_t j, const Scalar& v);

    Matrix operator*(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator-() const;
    Matrix scaled(const Scalar& s) const;

    Matrix transpose() const;
    Matrix column(std::size_t j) const;
    Matrix select_columns(const std::vector<std::size_t>& idx) const;
    Matrix select_rows(const std::vector<std::size_t>& idx) const;
    Matrix column_range(std::size_t begin, std::size_t count) const;
    Matrix row_range(std::size_t begin, std::size_t count) const;

    bool is_zero() const;
    std::size_t nnz() const;
    bool operator==(const Matrix& o) const;
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    // first column index j with a nonzero entry, or nullopt
    std::optional<std::size_t> first_nonzero_column() const;

    std::vector<Scalar> dense() const;
    std::string str() const;

private:
    Field field_;
    std::size_t cols_ = 0;
    std::vector<Row> rows_;
};

struct Echelon {
    Matrix rref;                     // reduced row echelon form, zero rows dropped
    std::vector<std::size_t> pivots; // pivot column of each row
    std::size_t rank() const { return pivots.size(); }
};

// Fraction-free (Bareiss) forward elimination followed by back substitution.
Echelon reduced_echelon(const Matrix& m);
std::size_t rank(const Matrix& m);
// columns spanning {x : m x = 0}, one per free column
Matrix nullspace(const Matrix& m);
// a solution X of a X = b, or nullopt
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);
// canonical basis of the column span: columns whose transpose is in rref
Matrix canonical_span(const Matrix& spanning_columns, std::vector<std::size_t>* pivots = nullptr);

} // namespace torsorkit
