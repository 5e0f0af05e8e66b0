#include "torsorkit/matrix.hpp"

#include <algorithm>
#include <sstream>

namespace torsorkit {

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok) throw ShapeMismatch(what);
}

// out = a*x + b*y, entries divided by d when d is given
Matrix::Row combine(const Field& f, const Scalar& a, const Matrix::Row& x, const Scalar& b,
                    const Matrix::Row& y, const Scalar* d = nullptr)
{
    Matrix::Row out;
    out.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    auto push = [&](std::size_t col, Scalar v) {
        if (d) v = f.div(v, *d);
        if (!Field::is_zero(v)) out.push_back({col, std::move(v)});
    };
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].col < y[j].col)) {
            push(x[i].col, f.mul(a, x[i].val));
            ++i;
        } else if (i == x.size() || y[j].col < x[i].col) {
            push(y[j].col, f.mul(b, y[j].val));
            ++j;
        } else {
            Scalar v = f.mul(a, x[i].val);
            f.fma(v, b, y[j].val);
            push(x[i].col, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

void scale_row(const Field& f, Matrix::Row& r, const Scalar& s, const Scalar* d = nullptr)
{
    for (auto& e : r) {
        e.val = f.mul(e.val, s);
        if (d) e.val = f.div(e.val, *d);
    }
}

} // namespace

Matrix::Matrix(Field f, std::size_t rows, std::size_t cols) : field_(f), cols_(cols), rows_(rows) {}

Matrix Matrix::identity(Field f, std::size_t n)
{
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m.rows_[i].push_back({i, Scalar(1)});
    return m;
}

Matrix Matrix::from_dense(Field f, std::size_t rows, std::size_t cols, const std::vector<Scalar>& row_major)
{
    require(row_major.size() == rows * cols, "from_dense: entry count does not match shape");
    Matrix m(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            Scalar v = f.reduce(row_major[i * cols + j]);
            if (!Field::is_zero(v)) m.rows_[i].push_back({j, std::move(v)});
        }
    return m;
}

Matrix Matrix::from_triplets(Field f, std::size_t rows, std::size_t cols, const std::vector<Triplet>& entries)
{
    std::vector<std::vector<std::pair<std::size_t, Scalar>>> tmp(rows);
    for (const auto& [i, j, v] : entries) {
        require(i < rows && j < cols, "from_triplets: index out of range");
        tmp[i].emplace_back(j, f.reduce(v));
    }
    Matrix m(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        auto& t = tmp[i];
        std::stable_sort(t.begin(), t.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t k = 0; k < t.size();) {
            std::size_t col = t[k].first;
            Scalar acc = 0;
            for (; k < t.size() && t[k].first == col; ++k) acc = f.add(acc, t[k].second);
            if (!Field::is_zero(acc)) m.rows_[i].push_back({col, std::move(acc)});
        }
    }
    return m;
}

Matrix Matrix::from_rows(Field f, std::size_t cols, std::vector<Row> rows)
{
    Matrix m(f, 0, cols);
    m.rows_ = std::move(rows);
    return m;
}

Matrix Matrix::unit_vector(Field f, std::size_t n, std::size_t i)
{
    require(i < n, "unit_vector: index out of range");
    Matrix m(f, n, 1);
    m.rows_[i].push_back({0, Scalar(1)});
    return m;
}

Matrix Matrix::kron(const Matrix& a, const Matrix& b)
{
    require(a.field_ == b.field_, "kron: field mismatch");
    const Field& f = a.field_;
    Matrix m(f, a.rows() * b.rows(), a.cols_ * b.cols_);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < b.rows(); ++k) {
            Row& out = m.rows_[i * b.rows() + k];
            out.reserve(a.rows_[i].size() * b.rows_[k].size());
            for (const auto& ea : a.rows_[i])
                for (const auto& eb : b.rows_[k]) out.push_back({ea.col * b.cols_ + eb.col, f.mul(ea.val, eb.val)});
        }
    return m;
}

Matrix Matrix::kron(const std::vector<Matrix>& factors)
{
    require(!factors.empty(), "kron: no factors");
    Matrix m = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) m = kron(m, factors[i]);
    return m;
}

Matrix Matrix::hcat(const std::vector<Matrix>& blocks)
{
    require(!blocks.empty(), "hcat: no blocks");
    std::size_t r = blocks.front().rows(), c = 0;
    for (const auto& b : blocks) {
        require(b.rows() == r, "hcat: row counts differ");
        c += b.cols_;
    }
    Matrix m(blocks.front().field_, r, c);
    std::size_t off = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < r; ++i)
            for (const auto& e : b.rows_[i]) m.rows_[i].push_back({e.col + off, e.val});
        off += b.cols_;
    }
    return m;
}

Matrix Matrix::vcat(const std::vector<Matrix>& blocks)
{
    require(!blocks.empty(), "vcat: no blocks");
    std::size_t c = blocks.front().cols_;
    Matrix m(blocks.front().field_, 0, c);
    for (const auto& b : blocks) {
        require(b.cols_ == c, "vcat: column counts differ");
        m.rows_.insert(m.rows_.end(), b.rows_.begin(), b.rows_.end());
    }
    return m;
}

Scalar Matrix::at(std::size_t i, std::size_t j) const
{
    require(i < rows() && j < cols_, "at: index out of range");
    const Row& r = rows_[i];
    auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t c) { return e.col < c; });
    if (it != r.end() && it->col == j) return it->val;
    return Scalar(0);
}

void Matrix::set(std::size_t i, std::size_t j, const Scalar& v0)
{
    require(i < rows() && j < cols_, "set: index out of range");
    Scalar v = field_.reduce(v0);
    Row& r = rows_[i];
    auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t c) { return e.col < c; });
    bool present = it != r.end() && it->col == j;
    if (Field::is_zero(v)) {
        if (present) r.erase(it);
    } else if (present) {
        it->val = v;
    } else {
        r.insert(it, {j, v});
    }
}

void Matrix::add_to(std::size_t i, std::size_t j, const Scalar& v)
{
    set(i, j, field_.add(at(i, j), field_.reduce(v)));
}

Matrix Matrix::operator*(const Matrix& o) const
{
    require(cols_ == o.rows(), "multiply: inner dimensions " + std::to_string(cols_) + " vs " +
                                   std::to_string(o.rows()));
    require(field_ == o.field_, "multiply: field mismatch");
    const Field& f = field_;
    Matrix m(f, rows(), o.cols_);
    std::vector<Scalar> acc(o.cols_);
    std::vector<char> hit(o.cols_, 0);
    std::vector<std::size_t> touched;
    for (std::size_t i = 0; i < rows(); ++i) {
        touched.clear();
        for (const auto& ea : rows_[i])
            for (const auto& eb : o.rows_[ea.col]) {
                if (!hit[eb.col]) {
                    hit[eb.col] = 1;
                    touched.push_back(eb.col);
                    acc[eb.col] = f.mul(ea.val, eb.val);
                } else {
                    f.fma(acc[eb.col], ea.val, eb.val);
                }
            }
        std::sort(touched.begin(), touched.end());
        Row& out = m.rows_[i];
        for (std::size_t c : touched) {
            hit[c] = 0;
            if (!Field::is_zero(acc[c])) out.push_back({c, acc[c]});
        }
    }
    return m;
}

Matrix Matrix::operator+(const Matrix& o) const
{
    require(rows() == o.rows() && cols_ == o.cols_, "add: shape mismatch");
    Matrix m(field_, 0, cols_);
    m.rows_.reserve(rows());
    for (std::size_t i = 0; i < rows(); ++i) m.rows_.push_back(combine(field_, 1, rows_[i], 1, o.rows_[i]));
    return m;
}

Matrix Matrix::operator-(const Matrix& o) const
{
    require(rows() == o.rows() && cols_ == o.cols_, "subtract: shape mismatch");
    Matrix m(field_, 0, cols_);
    m.rows_.reserve(rows());
    Scalar minus = field_.neg(1);
    for (std::size_t i = 0; i < rows(); ++i) m.rows_.push_back(combine(field_, 1, rows_[i], minus, o.rows_[i]));
    return m;
}

Matrix Matrix::operator-() const
{
    return scaled(field_.neg(1));
}

Matrix Matrix::scaled(const Scalar& s0) const
{
    Scalar s = field_.reduce(s0);
    Matrix m(field_, rows(), cols_);
    if (Field::is_zero(s)) return m;
    for (std::size_t i = 0; i < rows(); ++i) {
        m.rows_[i] = rows_[i];
        scale_row(field_, m.rows_[i], s);
    }
    return m;
}

Matrix Matrix::transpose() const
{
    Matrix m(field_, cols_, rows());
    for (std::size_t i = 0; i < rows(); ++i)
        for (const auto& e : rows_[i]) m.rows_[e.col].push_back({i, e.val});
    return m;
}

Matrix Matrix::column(std::size_t j) const
{
    return select_columns({j});
}

Matrix Matrix::select_columns(const std::vector<std::size_t>& idx) const
{
    std::vector<std::ptrdiff_t> where(cols_, -1);
    for (std::size_t k = 0; k < idx.size(); ++k) {
        require(idx[k] < cols_, "select_columns: index out of range");
        require(where[idx[k]] < 0, "select_columns: repeated index");
        where[idx[k]] = static_cast<std::ptrdiff_t>(k);
    }
    Matrix m(field_, rows(), idx.size());
    for (std::size_t i = 0; i < rows(); ++i) {
        for (const auto& e : rows_[i])
            if (where[e.col] >= 0) m.rows_[i].push_back({static_cast<std::size_t>(where[e.col]), e.val});
        std::sort(m.rows_[i].begin(), m.rows_[i].end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
    }
    return m;
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const
{
    Matrix m(field_, 0, cols_);
    m.rows_.reserve(idx.size());
    for (std::size_t i : idx) {
        require(i < rows(), "select_rows: index out of range");
        m.rows_.push_back(rows_[i]);
    }
    return m;
}

Matrix Matrix::column_range(std::size_t begin, std::size_t count) const
{
    require(begin + count <= cols_, "column_range: out of range");
    Matrix m(field_, rows(), count);
    for (std::size_t i = 0; i < rows(); ++i)
        for (const auto& e : rows_[i])
            if (e.col >= begin && e.col < begin + count) m.rows_[i].push_back({e.col - begin, e.val});
    return m;
}

Matrix Matrix::row_range(std::size_t begin, std::size_t count) const
{
    require(begin + count <= rows(), "row_range: out of range");
    Matrix m(field_, 0, cols_);
    m.rows_.assign(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
                   rows_.begin() + static_cast<std::ptrdiff_t>(begin + count));
    return m;
}

bool Matrix::is_zero() const
{
    for (const auto& r : rows_)
        if (!r.empty()) return false;
    return true;
}

std::size_t Matrix::nnz() const
{
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
}

bool Matrix::operator==(const Matrix& o) const
{
    if (rows() != o.rows() || cols_ != o.cols_ || field_ != o.field_) return false;
    for (std::size_t i = 0; i < rows(); ++i) {
        const Row& a = rows_[i];
        const Row& b = o.rows_[i];
        if (a.size() != b.size()) return false;
        for (std::size_t k = 0; k < a.size(); ++k)
            if (a[k].col != b[k].col || a[k].val != b[k].val) return false;
    }
    return true;
}

std::optional<std::size_t> Matrix::first_nonzero_column() const
{
    std::optional<std::size_t> best;
    for (const auto& r : rows_)
        if (!r.empty() && (!best || r.front().col < *best)) best = r.front().col;
    return best;
}

std::vector<Scalar> Matrix::dense() const
{
    std::vector<Scalar> out(rows() * cols_);
    for (std::size_t i = 0; i < rows(); ++i)
        for (const auto& e : rows_[i]) out[i * cols_ + e.col] = e.val;
    return out;
}

std::string Matrix::str() const
{
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows(); ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j).get_str();
    }
    os << "]";
    return os.str();
}

Echelon reduced_echelon(const Matrix& m)
{
    const Field& f = m.field();
    std::vector<Matrix::Row> rows;
    rows.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (m.row(i).empty()) continue;
        Matrix::Row r = m.row(i);
        if (f.is_rational()) {
            // clear denominators so the Bareiss steps stay inside the integers
            mpz_class l = 1;
            for (const auto& e : r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.val.get_den_mpz_t());
            if (l != 1) scale_row(f, r, mpq_class(l));
        }
        rows.push_back(std::move(r));
    }

    std::vector<std::size_t> pivots;
    Scalar prev = 1;
    std::size_t r = 0;
    const std::size_t n = rows.size();
    for (std::size_t c = 0; c < m.cols() && r < n; ++c) {
        std::size_t p = n;
        for (std::size_t i = r; i < n; ++i)
            if (!rows[i].empty() && rows[i].front().col == c && (p == n || rows[i].size() < rows[p].size())) p = i;
        if (p == n) continue;
        std::swap(rows[r], rows[p]);
        const Scalar piv = rows[r].front().val;
        for (std::size_t i = r + 1; i < n; ++i) {
            if (!rows[i].empty() && rows[i].front().col == c) {
                Scalar a = f.neg(rows[i].front().val);
                rows[i] = combine(f, piv, rows[i], a, rows[r], &prev);
            } else if (piv != prev) {
                scale_row(f, rows[i], piv, &prev);
            }
        }
        prev = piv;
        pivots.push_back(c);
        ++r;
    }
    rows.resize(r);

    for (std::size_t k = 0; k < r; ++k) {
        Scalar s = f.inv(rows[k].front().val);
        scale_row(f, rows[k], s);
    }
    for (std::size_t k = r; k-- > 0;) {
        const std::size_t pc = pivots[k];
        for (std::size_t i = 0; i < k; ++i) {
            const auto& ri = rows[i];
            auto it = std::lower_bound(ri.begin(), ri.end(), pc,
                                       [](const Matrix::Entry& e, std::size_t col) { return e.col < col; });
            if (it == ri.end() || it->col != pc) continue;
            Scalar a = f.neg(it->val);
            rows[i] = combine(f, 1, rows[i], a, rows[k]);
        }
    }
    return {Matrix::from_rows(f, m.cols(), std::move(rows)), std::move(pivots)};
}

std::size_t rank(const Matrix& m)
{
    return reduced_echelon(m).rank();
}

Matrix nullspace(const Matrix& m)
{
    const Field& f = m.field();
    Echelon e = reduced_echelon(m);
    std::vector<char> is_pivot(m.cols(), 0);
    for (std::size_t p : e.pivots) is_pivot[p] = 1;
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!is_pivot[j]) free_cols.push_back(j);
    std::vector<Matrix::Triplet> t;
    for (std::size_t k = 0; k < free_cols.size(); ++k) t.emplace_back(free_cols[k], k, Scalar(1));
    for (std::size_t i = 0; i < e.rank(); ++i)
        for (const auto& en : e.rref.row(i)) {
            if (is_pivot[en.col]) continue;
            auto it = std::lower_bound(free_cols.begin(), free_cols.end(), en.col);
            t.emplace_back(e.pivots[i], static_cast<std::size_t>(it - free_cols.begin()), f.neg(en.val));
        }
    return Matrix::from_triplets(f, m.cols(), free_cols.size(), t);
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b)
{
    require(a.rows() == b.rows(), "solve: row counts differ");
    const Field& f = a.field();
    Echelon e = reduced_echelon(Matrix::hcat({a, b}));
    std::vector<Matrix::Triplet> t;
    for (std::size_t i = 0; i < e.rank(); ++i) {
        if (e.pivots[i] >= a.cols()) return std::nullopt;
        for (const auto& en : e.rref.row(i))
            if (en.col >= a.cols()) t.emplace_back(e.pivots[i], en.col - a.cols(), en.val);
    }
    return Matrix::from_triplets(f, a.cols(), b.cols(), t);
}

Matrix canonical_span(const Matrix& spanning_columns, std::vector<std::size_t>* pivots)
{
    Echelon e = reduced_echelon(spanning_columns.transpose());
    if (pivots) *pivots = e.pivots;
    return e.rref.transpose();
}

} // namespace torsorkit
