#include "coshom/field.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

namespace coshom {

namespace {

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
    if (p < 2 || p >= (1u << 16) || !is_prime(p))
        throw InvalidInput("field characteristic must be a prime in [2, 2^16): got " +
                           std::to_string(p));
}

std::uint32_t PrimeField::inv(std::uint32_t a) const {
    a %= p_;
    if (a == 0) throw NotInvertible("zero has no multiplicative inverse");
    // Extended Euclid on (a, p); p is prime so gcd is 1.
    long long t = 0, new_t = 1;
    long long r = p_, new_r = a;
    while (new_r != 0) {
        long long q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    if (t < 0) t += p_;
    return static_cast<std::uint32_t>(t);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, PrimeField field)
    : rows_(rows), cols_(cols), field_(field), data_(rows * cols, 0) {}

Matrix Matrix::identity(std::size_t n, PrimeField field) {
    Matrix m(n, n, field);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<long long>> rows,
                         PrimeField field) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(r, c, field);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw InvalidInput("ragged rows in matrix literal");
        std::size_t j = 0;
        for (long long v : row) m.set_int(i, j++, v);
        ++i;
    }
    return m;
}

Matrix Matrix::from_columns(const std::vector<Vec>& columns, std::size_t rows,
                            PrimeField field) {
    Matrix m(rows, columns.size(), field);
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != rows) throw InvalidInput("column has wrong length");
        for (std::size_t i = 0; i < rows; ++i) m.set(i, j, columns[j][i]);
    }
    return m;
}

bool Matrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](std::uint32_t x) { return x == 0; });
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_ || field_ != rhs.field_)
        throw InvalidInput("matrix product shape mismatch: " + std::to_string(rows_) + "x" +
                           std::to_string(cols_) + " * " + std::to_string(rhs.rows_) + "x" +
                           std::to_string(rhs.cols_));
    Matrix out(rows_, rhs.cols_, field_);
    const std::uint64_t p = field_.modulus();
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            std::uint64_t aik = at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) {
                std::uint64_t acc = out.data_[i * out.cols_ + j] + aik * rhs.at(k, j);
                out.data_[i * out.cols_ + j] = static_cast<std::uint32_t>(acc % p);
            }
        }
    return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_ || field_ != rhs.field_)
        throw InvalidInput("matrix sum shape mismatch");
    Matrix out(rows_, cols_, field_);
    for (std::size_t i = 0; i < data_.size(); ++i)
        out.data_[i] = field_.add(data_[i], rhs.data_[i]);
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_ || field_ != rhs.field_)
        throw InvalidInput("matrix difference shape mismatch");
    Matrix out(rows_, cols_, field_);
    for (std::size_t i = 0; i < data_.size(); ++i)
        out.data_[i] = field_.sub(data_[i], rhs.data_[i]);
    return out;
}

Matrix Matrix::scaled(std::uint32_t s) const {
    Matrix out(rows_, cols_, field_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_.mul(data_[i], s);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(cols_, rows_, field_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.set(j, i, at(i, j));
    return out;
}

Vec Matrix::apply(const Vec& v) const {
    if (v.size() != cols_) throw InvalidInput("apply: vector length != column count");
    Vec out(rows_, 0);
    const std::uint64_t p = field_.modulus();
    for (std::size_t i = 0; i < rows_; ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < cols_; ++j)
            acc = (acc + static_cast<std::uint64_t>(at(i, j)) * (v[j] % p)) % p;
        out[i] = static_cast<std::uint32_t>(acc);
    }
    return out;
}

void Matrix::insert_block(std::size_t r0, std::size_t c0, const Matrix& block) {
    if (r0 + block.rows_ > rows_ || c0 + block.cols_ > cols_)
        throw InvalidInput("insert_block out of range");
    for (std::size_t i = 0; i < block.rows_; ++i)
        for (std::size_t j = 0; j < block.cols_; ++j)
            data_[(r0 + i) * cols_ + (c0 + j)] = block.at(i, j);
}

void Matrix::add_block(std::size_t r0, std::size_t c0, const Matrix& block) {
    if (r0 + block.rows_ > rows_ || c0 + block.cols_ > cols_)
        throw InvalidInput("add_block out of range");
    for (std::size_t i = 0; i < block.rows_; ++i)
        for (std::size_t j = 0; j < block.cols_; ++j) {
            std::uint32_t& cell = data_[(r0 + i) * cols_ + (c0 + j)];
            cell = field_.add(cell, block.at(i, j));
        }
}

namespace {

/// Row-reduce `m` in place over its field, eliminating columns in the order
/// given by `col_order`. Pivot rule: for each column in order, take the
/// first untouched row (smallest index among rows not yet used as a pivot
/// row) with a nonzero entry, scale it to 1, and clear the column above and
/// below. Returns (pivot column -> pivot row) pairs in elimination order.
std::vector<std::pair<std::size_t, std::size_t>>
reduce(Matrix& m, const std::vector<std::size_t>& col_order) {
    const PrimeField f = m.field();
    std::vector<bool> row_used(m.rows(), false);
    std::vector<std::pair<std::size_t, std::size_t>> pivots;
    for (std::size_t col : col_order) {
        std::size_t pr = m.rows();
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (!row_used[r] && m.at(r, col) != 0) { pr = r; break; }
        if (pr == m.rows()) continue;
        row_used[pr] = true;
        std::uint32_t s = f.inv(m.at(pr, col));
        for (std::size_t j = 0; j < m.cols(); ++j) m.set(pr, j, f.mul(m.at(pr, j), s));
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == pr) continue;
            std::uint32_t c = m.at(r, col);
            if (c == 0) continue;
            for (std::size_t j = 0; j < m.cols(); ++j)
                m.set(r, j, f.sub(m.at(r, j), f.mul(c, m.at(pr, j))));
        }
        pivots.emplace_back(col, pr);
    }
    return pivots;
}

std::vector<std::size_t> natural_order(std::size_t n) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    return order;
}

} // namespace

std::size_t Matrix::rank() const {
    Matrix work = *this;
    return reduce(work, natural_order(cols_)).size();
}

std::vector<Vec> Matrix::kernel_basis() const {
    Matrix work = *this;
    auto pivots = reduce(work, natural_order(cols_));
    std::vector<bool> is_pivot_col(cols_, false);
    for (auto [c, r] : pivots) is_pivot_col[c] = true;
    std::vector<Vec> basis;
    // One basis vector per free column: that column set to 1, pivot columns
    // set to cancel it, in ascending free-column order.
    for (std::size_t free = 0; free < cols_; ++free) {
        if (is_pivot_col[free]) continue;
        Vec v(cols_, 0);
        v[free] = 1;
        for (auto [pc, pr] : pivots) v[pc] = field_.neg(work.at(pr, free));
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Vec> Matrix::solve(const Vec& rhs) const {
    return solve_with_column_order(rhs, natural_order(cols_));
}

std::optional<Vec> Matrix::solve_with_column_order(const Vec& rhs,
                                                   const std::vector<std::size_t>& order) const {
    if (rhs.size() != rows_) throw InvalidInput("solve: rhs length != row count");
    {
        std::vector<std::size_t> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != natural_order(cols_))
            throw InvalidInput("solve: column order is not a permutation of the columns");
    }
    // Eliminate on [m | rhs], never letting the appended column pivot.
    Matrix aug(rows_, cols_ + 1, field_);
    aug.insert_block(0, 0, *this);
    for (std::size_t i = 0; i < rows_; ++i) aug.set(i, cols_, rhs[i] % field_.modulus());
    auto pivots = reduce(aug, order);
    std::vector<bool> pivot_row(rows_, false);
    for (auto [c, r] : pivots) pivot_row[r] = true;
    for (std::size_t r = 0; r < rows_; ++r)
        if (!pivot_row[r] && aug.at(r, cols_) != 0) return std::nullopt;
    // Free variables zero; each pivot variable reads off the reduced rhs.
    Vec x(cols_, 0);
    for (auto [c, r] : pivots) x[c] = aug.at(r, cols_);
    return x;
}

bool Matrix::invertible() const { return rows_ == cols_ && rank() == rows_; }

Matrix Matrix::inverse() const {
    if (rows_ != cols_)
        throw NotInvertible("inverse of non-square matrix (" + std::to_string(rows_) + "x" +
                            std::to_string(cols_) + ")");
    Matrix aug(rows_, 2 * cols_, field_);
    aug.insert_block(0, 0, *this);
    aug.insert_block(0, cols_, identity(rows_, field_));
    auto pivots = reduce(aug, natural_order(cols_));
    if (pivots.size() != rows_) throw NotInvertible("matrix is singular");
    Matrix out(rows_, cols_, field_);
    // After full reduction the left block is a permutation of identity rows;
    // pivot (c, r) says reduced row r holds the c-th row of the inverse.
    for (auto [c, r] : pivots)
        for (std::size_t j = 0; j < cols_; ++j) out.set(c, j, aug.at(r, cols_ + j));
    return out;
}

std::string Matrix::to_string() const {
    std::ostringstream os;
    os << rows_ << "x" << cols_ << " mod " << field_.modulus() << "\n";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << "[";
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j);
        os << "]\n";
    }
    return os.str();
}

Matrix hcat(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.field() != b.field())
        throw InvalidInput("hcat: row counts or fields differ");
    Matrix out(a.rows(), a.cols() + b.cols(), a.field());
    out.insert_block(0, 0, a);
    out.insert_block(0, a.cols(), b);
    return out;
}

Matrix vcat(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols() || a.field() != b.field())
        throw InvalidInput("vcat: column counts or fields differ");
    Matrix out(a.rows() + b.rows(), a.cols(), a.field());
    out.insert_block(0, 0, a);
    out.insert_block(a.rows(), 0, b);
    return out;
}

Subquotient::Subquotient(const Matrix& out, const Matrix& in)
    : ambient_(out.cols()), solve_mat_(0, 0, out.field()) {
    if (in.rows() != ambient_)
        throw InvalidInput("subquotient: in/out ambient dimensions differ");
    if (!(out * in).is_zero())
        throw InvalidInput("subquotient: out * in != 0");
    // Representatives: kernel basis vectors that extend a basis of Im(in),
    // taken greedily in kernel-basis order so the choice is deterministic.
    // Independence is tracked incrementally: `echelon` holds normalized
    // vectors with distinct leading positions spanning Im(in) plus the
    // representatives accepted so far.
    const PrimeField f = out.field();
    std::vector<Vec> echelon; // each entry has a leading 1 at lead[i]
    std::vector<std::size_t> lead;
    auto try_insert = [&](Vec v) {
        for (std::size_t i = 0; i < echelon.size(); ++i) {
            std::uint32_t c = v[lead[i]];
            if (c == 0) continue;
            for (std::size_t j = 0; j < ambient_; ++j)
                v[j] = f.sub(v[j], f.mul(c, echelon[i][j]));
        }
        std::size_t l = 0;
        while (l < ambient_ && v[l] == 0) ++l;
        if (l == ambient_) return false; // dependent
        std::uint32_t s = f.inv(v[l]);
        for (auto& e : v) e = f.mul(e, s);
        echelon.push_back(std::move(v));
        lead.push_back(l);
        return true;
    };
    for (std::size_t j = 0; j < in.cols(); ++j) {
        Vec col(ambient_);
        for (std::size_t i = 0; i < ambient_; ++i) col[i] = in.at(i, j);
        try_insert(std::move(col));
    }
    for (Vec& v : out.kernel_basis())
        if (try_insert(v)) reps_.push_back(std::move(v));
    solve_mat_ = hcat(Matrix::from_columns(reps_, ambient_, f), in);
}

std::optional<Vec> Subquotient::coords(const Vec& z) const {
    if (z.size() != ambient_) throw InvalidInput("coords: vector has wrong ambient dimension");
    auto sol = solve_mat_.solve(z);
    if (!sol) return std::nullopt;
    // First block of the solution: coefficients on the representatives.
    // Unique because reps are independent modulo Im(in).
    return Vec(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(reps_.size()));
}

} // namespace coshom
