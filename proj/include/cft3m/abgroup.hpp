#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cft3m/error.hpp"

namespace cft3m {

/// Every quantity in the library is an exact integer; invariant factors and
/// transformation matrices can outgrow any fixed word size.
using Int = boost::multiprecision::cpp_int;

/// Quotient rounded toward minus infinity; b must be nonzero.
Int floor_div(const Int& a, const Int& b);

/// Checked narrowing for report serialization.
long long to_int64(const Int& v);

/// Dense integer matrix, row-major. Empty shapes (0xN, Nx0) are legal and
/// stand for "no relations" / "no generators".
class IntMatrix {
  public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows);
    static IntMatrix from_rows(
        std::initializer_list<std::initializer_list<long long>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    Int& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Int& at(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }

    std::vector<Int> row_vector(std::size_t r) const;
    std::vector<Int> col_vector(std::size_t c) const;

    IntMatrix transposed() const;
    IntMatrix operator*(const IntMatrix& rhs) const;
    /// M x for a column vector x of size cols().
    std::vector<Int> apply(std::span<const Int> x) const;

    /// Rows of *this followed by rows of below (column counts must agree;
    /// an empty matrix concatenates as nothing).
    IntMatrix vstacked(const IntMatrix& below) const;
    void append_row(std::span<const Int> row);

    void swap_rows(std::size_t i, std::size_t j);
    void swap_cols(std::size_t i, std::size_t j);
    /// row[dst] += k * row[src]
    void add_row_multiple(std::size_t dst, std::size_t src, const Int& k);
    /// col[dst] += k * col[src]
    void add_col_multiple(std::size_t dst, std::size_t src, const Int& k);
    void negate_row(std::size_t i);

    bool operator==(const IntMatrix& rhs) const = default;

    std::string to_string() const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> data_;
};

/// U * M * V = D with U, V unimodular and D diagonal satisfying the
/// divisibility chain d1 | d2 | ... (1s first, then the invariant factors,
/// then zeros).
struct SmithDecomposition {
    IntMatrix U;
    IntMatrix D;
    IntMatrix V;
};

/// Deterministic Smith normal form: the pivot is always the entry of
/// smallest nonzero absolute value, ties broken row-major, so equal inputs
/// give bit-equal decompositions.
SmithDecomposition smith_normal_form(const IntMatrix& m);

/// Row-echelon basis of the integer row lattice of m (Hermite-style):
/// pivots positive, entries above each pivot reduced into [0, pivot).
/// Membership of any vector is then decidable by back-substitution.
IntMatrix lattice_membership_basis(const IntMatrix& m);

/// Tests v against an echelon basis produced by lattice_membership_basis.
bool lattice_contains(const IntMatrix& basis, std::span<const Int> v);

/// Rows spanning { x : m x = 0 }.
IntMatrix kernel_basis(const IntMatrix& m);

/// Finitely generated abelian group in canonical form: free rank plus
/// invariant factors d1 | d2 | ..., each >= 2. Structural equality is
/// isomorphism.
class FinGenAbGroup {
  public:
    FinGenAbGroup() = default; // trivial group
    FinGenAbGroup(std::size_t free_rank, std::vector<Int> invariant_factors);

    static FinGenAbGroup trivial() { return {}; }
    static FinGenAbGroup free_abelian(std::size_t rank) {
        return FinGenAbGroup(rank, {});
    }

    std::size_t free_rank() const noexcept { return free_rank_; }
    const std::vector<Int>& invariant_factors() const noexcept {
        return invariant_factors_;
    }
    std::size_t torsion_rank() const noexcept {
        return invariant_factors_.size();
    }
    /// Length of a coordinate vector: free coordinates first, then one
    /// coordinate mod each invariant factor.
    std::size_t rank() const noexcept {
        return free_rank_ + invariant_factors_.size();
    }

    bool is_finite() const noexcept { return free_rank_ == 0; }
    bool is_trivial() const noexcept {
        return free_rank_ == 0 && invariant_factors_.empty();
    }
    Int order() const; // infinite_group error when free_rank > 0

    bool operator==(const FinGenAbGroup& rhs) const = default;

    std::string to_string() const;

  private:
    std::size_t free_rank_ = 0;
    std::vector<Int> invariant_factors_;
};

/// Element in the canonical coordinates of its group; torsion coordinates
/// are kept reduced into [0, d_i).
struct GroupElement {
    std::vector<Int> coordinates;

    bool operator==(const GroupElement& rhs) const = default;
};

GroupElement reduce(const FinGenAbGroup& g, std::vector<Int> coordinates);
GroupElement zero_element(const FinGenAbGroup& g);
GroupElement add(const FinGenAbGroup& g, const GroupElement& a,
                 const GroupElement& b);
GroupElement negate(const FinGenAbGroup& g, const GroupElement& a);
GroupElement scaled(const FinGenAbGroup& g, const Int& k,
                    const GroupElement& a);
bool is_zero(const FinGenAbGroup& g, const GroupElement& a);

/// Homomorphism between groups in canonical coordinates. The matrix is
/// target.rank() x source.rank(); construction checks that each torsion
/// source generator of order d maps to an element killed by d.
class GroupHom {
  public:
    GroupHom(FinGenAbGroup source, FinGenAbGroup target, IntMatrix matrix);

    const FinGenAbGroup& source() const noexcept { return source_; }
    const FinGenAbGroup& target() const noexcept { return target_; }
    const IntMatrix& matrix() const noexcept { return matrix_; }

    GroupElement apply(const GroupElement& x) const;

  private:
    FinGenAbGroup source_;
    FinGenAbGroup target_;
    IntMatrix matrix_;
};

struct QuotientGroup {
    FinGenAbGroup group;
    GroupHom projection; // Z^generator_count -> group
};

/// Z^generator_count modulo the row lattice of relations, in invariant
/// factor form, together with the projection expressing each free generator
/// in canonical coordinates.
QuotientGroup group_from_relations(std::size_t generator_count,
                                   const IntMatrix& relations);

/// Z/m1 + ... + Z/mt canonicalized; the projection carries the declared
/// coordinates into canonical ones. Moduli must be >= 1.
QuotientGroup abelian_group_from_moduli(std::span<const Int> moduli);

/// Least n >= 1 with n x = 0, or nullopt when x has infinite order.
std::optional<Int> element_order(const FinGenAbGroup& g,
                                 const GroupElement& x);

/// Order of the subgroup generated by gens; G must be finite
/// (infinite_group error otherwise).
Int subgroup_order(const FinGenAbGroup& g,
                   std::span<const GroupElement> gens);

} // namespace cft3m
