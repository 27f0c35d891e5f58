#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "coshom/error.hpp"

namespace coshom {

/// Arithmetic in the prime field F_p, 2 <= p < 2^16. Elements are residues
/// in [0, p) stored as uint32_t, so every product fits in 64 bits.
class PrimeField {
public:
    explicit PrimeField(std::uint32_t p);

    std::uint32_t modulus() const { return p_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return (a + b) % p_; }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return (a + p_ - b) % p_; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % p_);
    }
    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }

    /// Multiplicative inverse of a nonzero residue; throws NotInvertible on 0.
    std::uint32_t inv(std::uint32_t a) const;

    /// Reduce an arbitrary signed integer into [0, p).
    std::uint32_t from_int(long long v) const {
        long long r = v % static_cast<long long>(p_);
        if (r < 0) r += p_;
        return static_cast<std::uint32_t>(r);
    }

    bool operator==(const PrimeField&) const = default;

private:
    std::uint32_t p_;
};

/// Column vector of residues; the ambient field is carried by the matrix
/// or context the vector is used with.
using Vec = std::vector<std::uint32_t>;

/// Dense row-major matrix over a prime field. A 0 x n or n x 0 matrix is
/// legal and represents a map to or from the zero space.
///
/// All elimination-backed queries (rank, kernel_basis, solve, inverse) use
/// one deterministic pivoting rule: scan columns left to right and pick the
/// smallest-index remaining row with a nonzero entry. Tests rely on the
/// resulting representatives being reproducible.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols, PrimeField field);

    static Matrix identity(std::size_t n, PrimeField field);
    /// Build from signed integer rows, reducing every entry mod p.
    static Matrix from_rows(std::initializer_list<std::initializer_list<long long>> rows,
                            PrimeField field);
    /// Build from column vectors of the given length (residues, unreduced ok).
    static Matrix from_columns(const std::vector<Vec>& columns, std::size_t rows,
                               PrimeField field);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const PrimeField& field() const { return field_; }

    std::uint32_t at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, std::uint32_t residue) {
        data_[r * cols_ + c] = residue % field_.modulus();
    }
    void set_int(std::size_t r, std::size_t c, long long v) {
        data_[r * cols_ + c] = field_.from_int(v);
    }

    bool is_zero() const;
    bool operator==(const Matrix&) const = default;

    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix scaled(std::uint32_t s) const;
    Matrix transpose() const;
    Vec apply(const Vec& v) const;

    /// Copy `block` into this matrix with its (0,0) entry at (r0, c0).
    void insert_block(std::size_t r0, std::size_t c0, const Matrix& block);
    /// Add `block` entrywise into the region starting at (r0, c0).
    void add_block(std::size_t r0, std::size_t c0, const Matrix& block);

    std::size_t rank() const;
    std::vector<Vec> kernel_basis() const;
    /// One solution of m x = rhs under the fixed pivot rule, or nullopt if
    /// the system is inconsistent. rhs.size() must equal rows().
    std::optional<Vec> solve(const Vec& rhs) const;
    /// Same, but eliminate columns in the given order (a permutation of
    /// 0..cols-1). Picks a different representative solution in general.
    std::optional<Vec> solve_with_column_order(const Vec& rhs,
                                               const std::vector<std::size_t>& order) const;
    bool invertible() const;
    /// Two-sided inverse; throws NotInvertible unless square of full rank.
    /// The 0 x 0 matrix inverts to itself.
    Matrix inverse() const;

    std::string to_string() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    PrimeField field_;
    std::vector<std::uint32_t> data_;
};

/// [a | b] side by side; row counts and fields must agree.
Matrix hcat(const Matrix& a, const Matrix& b);
/// a stacked on top of b; column counts and fields must agree.
Matrix vcat(const Matrix& a, const Matrix& b);

/// The subquotient Ker(out) / Im(in) of the ambient space F^n, where
/// out: F^n -> F^r and in: F^a -> F^n satisfy out * in = 0. Chooses
/// deterministic representatives (kernel basis vectors completing the image)
/// and solves class coordinates for arbitrary kernel elements.
class Subquotient {
public:
    Subquotient(const Matrix& out, const Matrix& in);

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return reps_.size(); }
    const std::vector<Vec>& representatives() const { return reps_; }

    /// Coordinates of [z] in the representative basis; nullopt when z does
    /// not lie in Ker(out). Unique regardless of how the containing solve
    /// picks its lift.
    std::optional<Vec> coords(const Vec& z) const;

private:
    std::size_t ambient_;
    std::vector<Vec> reps_;
    Matrix solve_mat_; // [reps | in] as columns
};

} // namespace coshom
