#pragma once

#include <vector>

#include "cft3m/abgroup.hpp"

namespace cft3m {

/// Class on a boundary torus in (meridian, longitude) coordinates:
/// (q, p) = q [m] + p [l].
struct TorusClass {
    Int q{0};
    Int p{0};

    bool operator==(const TorusClass& rhs) const = default;
};

/// Finite coverings of a boundary torus are classified by subgroups of
/// Z[m] + Z[l]; stored canonically as the echelon basis of the generator
/// lattice, so subgroup equality is structural.
class TorusSubgroup {
  public:
    static TorusSubgroup full();
    /// rows: n x 2 generator matrix in (q, p) coordinates.
    static TorusSubgroup from_generators(const IntMatrix& rows);
    static TorusSubgroup from_rows(
        std::initializer_list<std::initializer_list<long long>> rows);

    const IntMatrix& basis() const noexcept { return basis_; }
    std::size_t lattice_rank() const noexcept { return basis_.rows(); }
    bool has_finite_index() const noexcept { return basis_.rows() == 2; }
    Int index() const; // infinite_index error when rank < 2

    bool contains(const TorusClass& a) const;

    bool operator==(const TorusSubgroup& rhs) const = default;
    std::string to_string() const;

  private:
    IntMatrix basis_; // canonical, k x 2
};

/// Z^2 / H, the deck group of the covering classified by H; finite exactly
/// when H has rank 2.
FinGenAbGroup deck_group(const TorusSubgroup& h);

/// True iff the covering extends unbranched over the solid torus, i.e. the
/// meridian (1,0) lies in H. Requires finite index.
bool is_unramified(const TorusSubgroup& h);

/// e = ramification order (order of the meridian image in Z^2/H),
/// f = residue degree (order of Z^2/(H + Z[m])); e f = [Z^2 : H].
struct LocalInvariants {
    Int e;
    Int f;
};
LocalInvariants local_invariants(const TorusSubgroup& h);

/// The unique index-n subgroup containing the meridian: <(1,0),(0,n)>.
TorusSubgroup unramified_cover_of_degree(const Int& n);

/// All index-n subgroups of Z^2 exactly once, sorted by canonical basis;
/// there are sigma(n) of them.
std::vector<TorusSubgroup> enumerate_subgroups(const Int& n);

} // namespace cft3m
