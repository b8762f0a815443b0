#pragma once

#include <vector>

#include "cft3m/hilbert.hpp"
#include "cft3m/local_torus.hpp"

namespace cft3m {

/// One boundary-torus class per knot of the truncation. The truncation
/// plays the role of finite support: outside it every component is zero,
/// so the restricted-product condition (almost all longitude components
/// vanish) holds automatically.
struct Idele {
    std::vector<TorusClass> components;

    static Idele zero(const LinkContext& ctx);
    static Idele unit_meridian(const LinkContext& ctx, std::size_t knot);
    static Idele unit_longitude(const LinkContext& ctx, std::size_t knot);

    bool operator==(const Idele& rhs) const = default;
};

/// Divisor supported on the truncation (integer per knot).
using Divisor = std::vector<Int>;

/// The vector of longitude components; its kernel is the unit idele group.
Divisor longitude_divisor(const Idele& a);

bool is_unit(const Idele& a);

/// An idele is principal when its total image vanishes in the homology of
/// every sublink exterior. Over a homology sphere this collapses to one
/// linear condition per knot j:
///   q_j + sum_{K != j} p_K lk(K, K_j) = 0,
/// because the coefficient of the j-th meridian is the same in every
/// exterior containing j.
bool is_principal(const LinkContext& ctx, const Idele& a);

/// The unique principal idele with the given longitude components:
/// q_j = -sum_{K != j} p_K lk(K, K_j).
Idele principal_from_longitudes(const LinkContext& ctx, const Divisor& p);

struct UnitPrincipalSplit {
    Idele unit;      // longitude-free part
    Idele principal; // determined by the longitude components
};

/// Exact decomposition a = unit + principal (every idele over a homology
/// sphere splits this way).
UnitPrincipalSplit split_unit_principal(const LinkContext& ctx,
                                        const Idele& a);

/// Per-knot image lattice of the covering on the boundary torus: the kernel
/// of (q, p) -> q psi(m_K) + p psi(l_K). Its index is the decomposition
/// order e f of the knot.
struct NormLattice {
    std::vector<TorusSubgroup> local;
};
NormLattice norm_lattice(const LinkContext& ctx, const CoveringSpec& spec);

/// Global reciprocity evaluated in the deck group:
/// rho(a) = sum_K [ q_K psi(m_K) + p_K psi(l_K) ].
GroupElement reciprocity(const LinkContext& ctx, const CoveringSpec& spec,
                         const Idele& a);

/// rho of the idele supported at one knot with the given torus class.
GroupElement reciprocity_at(const LinkContext& ctx, const CoveringSpec& spec,
                            std::size_t knot, const TorusClass& a);

/// Relation lattice presenting the idele class group modulo covering norms
/// on Z^(2s) with coordinates (q_K, p_K) per knot: the principal generator
/// of each unit divisor plus the local norm lattices.
struct ReciprocityInstance {
    FinGenAbGroup group;        // deck group
    IntMatrix relation_lattice; // rows in Z^(2s)
};
ReciprocityInstance reciprocity_instance(const LinkContext& ctx,
                                         const CoveringSpec& spec);

/// Z^(2s) modulo the relation lattice, in invariant factor form.
FinGenAbGroup quotient_of(const ReciprocityInstance& instance);
FinGenAbGroup idele_class_quotient(const LinkContext& ctx,
                                   const CoveringSpec& spec);

struct ReciprocityReport {
    std::vector<Int> lhs_factors; // idele class quotient
    std::vector<Int> rhs_factors; // deck group
    bool factors_match;
    bool well_defined; // rho vanishes on every relation generator
    bool surjective;   // images of the unit ideles generate the deck group
    bool pass;
};

/// Checks that reciprocity induces an isomorphism from the idele class
/// quotient onto the deck group: equal invariant factors plus a
/// well-defined surjective induced map.
ReciprocityReport verify_reciprocity_iso(const LinkContext& ctx,
                                         const CoveringSpec& spec);
ReciprocityReport verify_reciprocity_iso(const LinkContext& ctx,
                                         const CoveringSpec& spec,
                                         const ReciprocityInstance& instance);

struct KnotBehavior {
    bool completely_decomposed; // rho kills the whole boundary torus at K
    bool unbranched;            // rho kills the meridian at K
};
KnotBehavior knot_behavior(const LinkContext& ctx, const CoveringSpec& spec,
                           std::size_t knot);

/// Z^(2s) modulo units and principal ideles; trivial for every truncation
/// over a homology sphere.
FinGenAbGroup unit_principal_cokernel(const LinkContext& ctx);

/// Extends the truncation with auxiliary external knots whose linking rows
/// realize a basis of the kernel of the meridian-image map e_i -> psi(m_i).
/// This is the finite-level counterpart of closing the knot set under the
/// covering: afterwards the idele class quotient always matches the deck
/// group. Coverings with independent meridian images (the standard ones)
/// need no closure; existing knot indices keep their meaning.
LinkContext admissible_closure(const LinkContext& ctx,
                               const CoveringSpec& spec);

} // namespace cft3m
