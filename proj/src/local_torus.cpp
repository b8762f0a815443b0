#include "cft3m/local_torus.hpp"

#include <algorithm>
#include <sstream>

namespace cft3m {

TorusSubgroup TorusSubgroup::full() {
    TorusSubgroup h;
    h.basis_ = IntMatrix::identity(2);
    return h;
}

TorusSubgroup TorusSubgroup::from_generators(const IntMatrix& rows) {
    if (rows.rows() > 0 && rows.cols() != 2)
        throw std::invalid_argument("torus subgroup generators need 2 columns");
    TorusSubgroup h;
    h.basis_ = lattice_membership_basis(
        rows.rows() == 0 ? IntMatrix(0, 2) : rows);
    return h;
}

TorusSubgroup TorusSubgroup::from_rows(
    std::initializer_list<std::initializer_list<long long>> rows) {
    return from_generators(IntMatrix::from_rows(rows));
}

Int TorusSubgroup::index() const {
    if (!has_finite_index())
        raise(ErrorCode::infinite_index,
              "subgroup of rank " + std::to_string(basis_.rows()) +
                  " has infinite index in Z^2");
    return basis_.at(0, 0) * basis_.at(1, 1);
}

bool TorusSubgroup::contains(const TorusClass& a) const {
    const std::vector<Int> v{a.q, a.p};
    return lattice_contains(basis_, v);
}

std::string TorusSubgroup::to_string() const {
    std::ostringstream os;
    os << "<";
    for (std::size_t i = 0; i < basis_.rows(); ++i)
        os << (i ? ", (" : "(") << basis_.at(i, 0) << "," << basis_.at(i, 1)
           << ")";
    os << ">";
    return os.str();
}

FinGenAbGroup deck_group(const TorusSubgroup& h) {
    return group_from_relations(2, h.basis()).group;
}

bool is_unramified(const TorusSubgroup& h) {
    if (!h.has_finite_index())
        raise(ErrorCode::infinite_index,
              "unramifiedness is defined for finite-index subgroups");
    return h.contains(TorusClass{1, 0});
}

LocalInvariants local_invariants(const TorusSubgroup& h) {
    if (!h.has_finite_index())
        raise(ErrorCode::infinite_index,
              "local invariants require a finite-index subgroup");
    const auto q = group_from_relations(2, h.basis());
    const GroupElement meridian =
        q.projection.apply(GroupElement{{Int(1), Int(0)}});
    const Int e = *element_order(q.group, meridian);

    IntMatrix extended = h.basis();
    const std::vector<Int> m_row{1, 0};
    extended.append_row(m_row);
    const Int f = group_from_relations(2, extended).group.order();
    return {e, f};
}

TorusSubgroup unramified_cover_of_degree(const Int& n) {
    if (n < 1) throw std::invalid_argument("covering degree must be >= 1");
    IntMatrix gens(2, 2);
    gens.at(0, 0) = 1;
    gens.at(1, 1) = n;
    return TorusSubgroup::from_generators(gens);
}

std::vector<TorusSubgroup> enumerate_subgroups(const Int& n) {
    if (n < 1) throw std::invalid_argument("index must be >= 1");
    // echelon bases [[a,b],[0,d]] with a d = n and 0 <= b < d, ordered by
    // (a, b); one per index-n subgroup
    std::vector<TorusSubgroup> out;
    for (Int a = 1; a <= n; ++a) {
        if (n % a != 0) continue;
        const Int d = n / a;
        for (Int b = 0; b < d; ++b) {
            IntMatrix gens(2, 2);
            gens.at(0, 0) = a;
            gens.at(0, 1) = b;
            gens.at(1, 1) = d;
            out.push_back(TorusSubgroup::from_generators(gens));
        }
    }
    return out;
}

} // namespace cft3m
