#include "cft3m/abgroup.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cft3m {

using boost::multiprecision::abs;
using boost::multiprecision::gcd;
using boost::multiprecision::lcm;

Int floor_div(const Int& a, const Int& b) {
    Int q = a / b; // truncates toward zero
    if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

long long to_int64(const Int& v) {
    static const Int lo = std::numeric_limits<long long>::min();
    static const Int hi = std::numeric_limits<long long>::max();
    if (v < lo || v > hi)
        throw std::overflow_error("integer too large for a 64-bit report field: " + v.str());
    return v.convert_to<long long>();
}

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Int>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c)
            throw std::invalid_argument("ragged rows in matrix literal");
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::from_rows(
    std::initializer_list<std::initializer_list<long long>> rows) {
    std::vector<std::vector<Int>> v;
    v.reserve(rows.size());
    for (const auto& row : rows) v.emplace_back(row.begin(), row.end());
    return from_rows(v);
}

std::vector<Int> IntMatrix::row_vector(std::size_t r) const {
    std::vector<Int> out(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out[j] = at(r, j);
    return out;
}

std::vector<Int> IntMatrix::col_vector(std::size_t c) const {
    std::vector<Int> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = at(i, c);
    return out;
}

IntMatrix IntMatrix::transposed() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
    if (cols_ != rhs.rows_)
        throw std::invalid_argument("matrix product shape mismatch");
    IntMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int& a = at(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j)
                out.at(i, j) += a * rhs.at(k, j);
        }
    return out;
}

std::vector<Int> IntMatrix::apply(std::span<const Int> x) const {
    if (x.size() != cols_)
        throw std::invalid_argument("matrix-vector shape mismatch");
    std::vector<Int> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out[i] += at(i, j) * x[j];
    return out;
}

IntMatrix IntMatrix::vstacked(const IntMatrix& below) const {
    if (rows_ == 0) return below;
    if (below.rows_ == 0) return *this;
    if (cols_ != below.cols_)
        throw std::invalid_argument("vstack column mismatch");
    IntMatrix out(rows_ + below.rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.at(i, j) = at(i, j);
    for (std::size_t i = 0; i < below.rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out.at(rows_ + i, j) = below.at(i, j);
    return out;
}

void IntMatrix::append_row(std::span<const Int> row) {
    if (rows_ == 0 && cols_ == 0) cols_ = row.size();
    if (row.size() != cols_)
        throw std::invalid_argument("appended row has wrong length");
    data_.insert(data_.end(), row.begin(), row.end());
    ++rows_;
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap(at(r, i), at(r, j));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src,
                                 const Int& k) {
    if (k == 0) return;
    for (std::size_t c = 0; c < cols_; ++c) at(dst, c) += k * at(src, c);
}

void IntMatrix::add_col_multiple(std::size_t dst, std::size_t src,
                                 const Int& k) {
    if (k == 0) return;
    for (std::size_t r = 0; r < rows_; ++r) at(r, dst) += k * at(r, src);
}

void IntMatrix::negate_row(std::size_t i) {
    for (std::size_t c = 0; c < cols_; ++c) at(i, c) = -at(i, c);
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i == 0 ? "[" : " [");
        for (std::size_t j = 0; j < cols_; ++j)
            os << at(i, j) << (j + 1 < cols_ ? "," : "");
        os << ']' << (i + 1 < rows_ ? "\n" : "");
    }
    os << ']';
    return os.str();
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

// Smallest nonzero |entry| of d in the submatrix [t..)x[t..), row-major tie
// break. Returns false when the submatrix is zero.
bool locate_pivot(const IntMatrix& d, std::size_t t, std::size_t& pr,
                  std::size_t& pc) {
    bool found = false;
    Int best;
    for (std::size_t i = t; i < d.rows(); ++i)
        for (std::size_t j = t; j < d.cols(); ++j) {
            const Int& x = d.at(i, j);
            if (x == 0) continue;
            Int a = abs(x);
            if (!found || a < best) {
                found = true;
                best = a;
                pr = i;
                pc = j;
            }
        }
    return found;
}

// Clears row t and column t outside (t,t), then enforces that d(t,t)
// divides the trailing submatrix. Returns false when nothing nonzero is
// left from (t,t) on.
bool settle_pivot(IntMatrix& d, IntMatrix& u, IntMatrix& v, std::size_t t) {
    while (true) {
        std::size_t pr = t, pc = t;
        if (!locate_pivot(d, t, pr, pc)) return false;
        if (pr != t) {
            d.swap_rows(t, pr);
            u.swap_rows(t, pr);
        }
        if (pc != t) {
            d.swap_cols(t, pc);
            v.swap_cols(t, pc);
        }

        bool residue = false;
        for (std::size_t i = t + 1; i < d.rows(); ++i) {
            if (d.at(i, t) == 0) continue;
            Int q = d.at(i, t) / d.at(t, t);
            d.add_row_multiple(i, t, -q);
            u.add_row_multiple(i, t, -q);
            if (d.at(i, t) != 0) residue = true;
        }
        for (std::size_t j = t + 1; j < d.cols(); ++j) {
            if (d.at(t, j) == 0) continue;
            Int q = d.at(t, j) / d.at(t, t);
            d.add_col_multiple(j, t, -q);
            v.add_col_multiple(j, t, -q);
            if (d.at(t, j) != 0) residue = true;
        }
        if (residue) continue;

        // divisibility of the trailing block; a failing entry is pulled
        // into row t so the next pass shrinks the pivot to a gcd
        bool fixed = true;
        for (std::size_t i = t + 1; i < d.rows() && fixed; ++i)
            for (std::size_t j = t + 1; j < d.cols() && fixed; ++j)
                if (d.at(i, j) % d.at(t, t) != 0) {
                    d.add_row_multiple(t, i, 1);
                    u.add_row_multiple(t, i, 1);
                    fixed = false;
                }
        if (fixed) return true;
    }
}

} // namespace

SmithDecomposition smith_normal_form(const IntMatrix& m) {
    SmithDecomposition out{IntMatrix::identity(m.rows()), m,
                           IntMatrix::identity(m.cols())};
    const std::size_t steps = std::min(m.rows(), m.cols());
    for (std::size_t t = 0; t < steps; ++t) {
        if (!settle_pivot(out.D, out.U, out.V, t)) break;
        if (out.D.at(t, t) < 0) {
            out.D.negate_row(t);
            out.U.negate_row(t);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hermite-style row basis

IntMatrix lattice_membership_basis(const IntMatrix& m) {
    IntMatrix a = m;
    const std::size_t rows = a.rows(), cols = a.cols();
    std::size_t pivot_row = 0;
    std::vector<std::size_t> pivot_cols;

    for (std::size_t col = 0; col < cols && pivot_row < rows; ++col) {
        while (true) {
            bool found = false;
            std::size_t best_row = pivot_row;
            Int best;
            for (std::size_t i = pivot_row; i < rows; ++i) {
                if (a.at(i, col) == 0) continue;
                Int v = abs(a.at(i, col));
                if (!found || v < best) {
                    found = true;
                    best = v;
                    best_row = i;
                }
            }
            if (!found) break;
            a.swap_rows(pivot_row, best_row);
            bool cleared = true;
            for (std::size_t i = pivot_row + 1; i < rows; ++i) {
                if (a.at(i, col) == 0) continue;
                Int q = a.at(i, col) / a.at(pivot_row, col);
                a.add_row_multiple(i, pivot_row, -q);
                if (a.at(i, col) != 0) cleared = false;
            }
            if (cleared) break;
        }
        if (a.at(pivot_row, col) == 0) continue;
        if (a.at(pivot_row, col) < 0) a.negate_row(pivot_row);
        pivot_cols.push_back(col);
        ++pivot_row;
    }

    const std::size_t rank = pivot_row;
    for (std::size_t k = 0; k < rank; ++k) {
        const std::size_t c = pivot_cols[k];
        for (std::size_t i = 0; i < k; ++i) {
            Int q = floor_div(a.at(i, c), a.at(k, c));
            a.add_row_multiple(i, k, -q);
        }
    }

    IntMatrix basis(rank, cols);
    for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t j = 0; j < cols; ++j) basis.at(i, j) = a.at(i, j);
    return basis;
}

bool lattice_contains(const IntMatrix& basis, std::span<const Int> v) {
    if (v.size() != basis.cols() && !(basis.rows() == 0))
        throw std::invalid_argument("vector length does not match lattice");
    std::vector<Int> w(v.begin(), v.end());
    for (std::size_t k = 0; k < basis.rows(); ++k) {
        std::size_t pc = 0;
        while (pc < basis.cols() && basis.at(k, pc) == 0) ++pc;
        const Int& pivot = basis.at(k, pc);
        if (w[pc] % pivot != 0) return false;
        Int q = w[pc] / pivot;
        if (q != 0)
            for (std::size_t j = pc; j < basis.cols(); ++j)
                w[j] -= q * basis.at(k, j);
    }
    return std::all_of(w.begin(), w.end(),
                       [](const Int& x) { return x == 0; });
}

IntMatrix kernel_basis(const IntMatrix& m) {
    const auto s = smith_normal_form(m);
    const std::size_t cols = m.cols();
    const std::size_t diag = std::min(m.rows(), cols);
    std::size_t rank = 0;
    while (rank < diag && s.D.at(rank, rank) != 0) ++rank;
    IntMatrix k(cols - rank, cols);
    for (std::size_t j = rank; j < cols; ++j)
        for (std::size_t i = 0; i < cols; ++i)
            k.at(j - rank, i) = s.V.at(i, j);
    return k;
}

// ---------------------------------------------------------------------------
// FinGenAbGroup

FinGenAbGroup::FinGenAbGroup(std::size_t free_rank,
                             std::vector<Int> invariant_factors)
    : free_rank_(free_rank), invariant_factors_(std::move(invariant_factors)) {
    for (std::size_t i = 0; i < invariant_factors_.size(); ++i) {
        if (invariant_factors_[i] < 2)
            throw std::invalid_argument("invariant factors must be >= 2");
        if (i > 0 && invariant_factors_[i] % invariant_factors_[i - 1] != 0)
            throw std::invalid_argument(
                "invariant factors must form a divisibility chain");
    }
}

Int FinGenAbGroup::order() const {
    if (!is_finite())
        raise(ErrorCode::infinite_group, "order of an infinite group");
    Int n = 1;
    for (const Int& d : invariant_factors_) n *= d;
    return n;
}

std::string FinGenAbGroup::to_string() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (free_rank_ > 0) {
        os << "Z";
        if (free_rank_ > 1) os << "^" << free_rank_;
        first = false;
    }
    for (const Int& d : invariant_factors_) {
        if (!first) os << " + ";
        os << "Z/" << d;
        first = false;
    }
    return os.str();
}

GroupElement reduce(const FinGenAbGroup& g, std::vector<Int> coordinates) {
    if (coordinates.size() != g.rank())
        throw std::invalid_argument("coordinate length does not match group");
    const auto& factors = g.invariant_factors();
    for (std::size_t i = 0; i < factors.size(); ++i) {
        Int& c = coordinates[g.free_rank() + i];
        c %= factors[i];
        if (c < 0) c += factors[i];
    }
    return GroupElement{std::move(coordinates)};
}

GroupElement zero_element(const FinGenAbGroup& g) {
    return GroupElement{std::vector<Int>(g.rank())};
}

GroupElement add(const FinGenAbGroup& g, const GroupElement& a,
                 const GroupElement& b) {
    std::vector<Int> c(g.rank());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = a.coordinates.at(i) + b.coordinates.at(i);
    return reduce(g, std::move(c));
}

GroupElement negate(const FinGenAbGroup& g, const GroupElement& a) {
    std::vector<Int> c(g.rank());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = -a.coordinates.at(i);
    return reduce(g, std::move(c));
}

GroupElement scaled(const FinGenAbGroup& g, const Int& k,
                    const GroupElement& a) {
    std::vector<Int> c(g.rank());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = k * a.coordinates.at(i);
    return reduce(g, std::move(c));
}

bool is_zero(const FinGenAbGroup& g, const GroupElement& a) {
    (void)g;
    return std::all_of(a.coordinates.begin(), a.coordinates.end(),
                       [](const Int& x) { return x == 0; });
}

// ---------------------------------------------------------------------------
// GroupHom

GroupHom::GroupHom(FinGenAbGroup source, FinGenAbGroup target,
                   IntMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)),
      matrix_(std::move(matrix)) {
    if (matrix_.rows() != target_.rank() || matrix_.cols() != source_.rank())
        throw std::invalid_argument("homomorphism matrix shape mismatch");
    // d * (i-th torsion generator) = 0 must map to 0
    for (std::size_t i = 0; i < source_.torsion_rank(); ++i) {
        const Int& d = source_.invariant_factors()[i];
        const std::size_t col = source_.free_rank() + i;
        for (std::size_t r = 0; r < matrix_.rows(); ++r) {
            Int image = d * matrix_.at(r, col);
            if (r < target_.free_rank()) {
                if (image != 0)
                    throw std::invalid_argument(
                        "homomorphism does not respect torsion");
            } else {
                const Int& e =
                    target_.invariant_factors()[r - target_.free_rank()];
                if (image % e != 0)
                    throw std::invalid_argument(
                        "homomorphism does not respect torsion");
            }
        }
    }
}

GroupElement GroupHom::apply(const GroupElement& x) const {
    return reduce(target_, matrix_.apply(x.coordinates));
}

// ---------------------------------------------------------------------------
// Quotients

QuotientGroup group_from_relations(std::size_t generator_count,
                                   const IntMatrix& relations) {
    IntMatrix rel = relations;
    if (rel.rows() == 0) {
        rel = IntMatrix(0, generator_count);
    } else if (rel.cols() != generator_count) {
        throw std::invalid_argument(
            "relation matrix must have one column per generator");
    }

    const auto s = smith_normal_form(rel);
    const std::size_t g = generator_count;
    const std::size_t diag = std::min(rel.rows(), g);

    std::vector<std::size_t> free_idx, torsion_idx;
    std::vector<Int> factors;
    for (std::size_t i = 0; i < g; ++i) {
        Int d = i < diag ? s.D.at(i, i) : Int(0);
        if (d == 0) {
            free_idx.push_back(i);
        } else if (d != 1) {
            torsion_idx.push_back(i);
            factors.push_back(d);
        }
    }

    FinGenAbGroup group(free_idx.size(), factors);

    // Coordinates on the quotient are z = V^T x restricted to the surviving
    // positions (free rows first, then torsion rows in factor order).
    IntMatrix proj(free_idx.size() + torsion_idx.size(), g);
    std::size_t out_row = 0;
    for (std::size_t i : free_idx) {
        for (std::size_t j = 0; j < g; ++j) proj.at(out_row, j) = s.V.at(j, i);
        ++out_row;
    }
    for (std::size_t i : torsion_idx) {
        for (std::size_t j = 0; j < g; ++j) proj.at(out_row, j) = s.V.at(j, i);
        ++out_row;
    }

    GroupHom projection(FinGenAbGroup::free_abelian(g), group,
                        std::move(proj));
    return {std::move(group), std::move(projection)};
}

QuotientGroup abelian_group_from_moduli(std::span<const Int> moduli) {
    IntMatrix rel(moduli.size(), moduli.size());
    for (std::size_t i = 0; i < moduli.size(); ++i) {
        if (moduli[i] < 1)
            throw std::invalid_argument("moduli must be >= 1");
        rel.at(i, i) = moduli[i];
    }
    return group_from_relations(moduli.size(), rel);
}

std::optional<Int> element_order(const FinGenAbGroup& g,
                                 const GroupElement& x) {
    GroupElement e = reduce(g, x.coordinates);
    for (std::size_t i = 0; i < g.free_rank(); ++i)
        if (e.coordinates[i] != 0) return std::nullopt;
    Int order = 1;
    for (std::size_t i = 0; i < g.torsion_rank(); ++i) {
        const Int& d = g.invariant_factors()[i];
        order = lcm(order, d / gcd(d, e.coordinates[g.free_rank() + i]));
    }
    return order;
}

Int subgroup_order(const FinGenAbGroup& g,
                   std::span<const GroupElement> gens) {
    if (!g.is_finite())
        raise(ErrorCode::infinite_group,
              "subgroup order is only defined inside a finite group");
    const std::size_t t = g.torsion_rank();
    IntMatrix rel(gens.size() + t, t);
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const GroupElement e = reduce(g, gens[i].coordinates);
        for (std::size_t j = 0; j < t; ++j) rel.at(i, j) = e.coordinates[j];
    }
    for (std::size_t j = 0; j < t; ++j)
        rel.at(gens.size() + j, j) = g.invariant_factors()[j];
    // |<gens>| = |G| / |Z^t / (gens + relation lattice)|
    return g.order() / group_from_relations(t, rel).group.order();
}

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::symmetry_violation: return "SYMMETRY_VIOLATION";
    case ErrorCode::nonzero_diagonal: return "NONZERO_DIAGONAL";
    case ErrorCode::duplicate_name: return "DUPLICATE_NAME";
    case ErrorCode::unknown_knot: return "UNKNOWN_KNOT";
    case ErrorCode::not_surjective: return "NOT_SURJECTIVE";
    case ErrorCode::infinite_index: return "INFINITE_INDEX";
    case ErrorCode::length_mismatch: return "LENGTH_MISMATCH";
    case ErrorCode::branched_knot: return "BRANCHED_KNOT";
    case ErrorCode::infinite_group: return "INFINITE_GROUP";
    case ErrorCode::malformed_input: return "MALFORMED_INPUT";
    }
    return "UNKNOWN";
}

} // namespace cft3m
