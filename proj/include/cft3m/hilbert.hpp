#pragma once

#include <span>
#include <string>
#include <vector>

#include "cft3m/link_model.hpp"

namespace cft3m {

enum class KnotKind { branched, external };

struct KnotRef {
    std::size_t index;
    KnotKind kind;
};

KnotRef classify_knot(const LinkContext& ctx, const CoveringSpec& spec,
                      std::size_t knot);

/// Splitting invariants of a knot under a finite abelian branched covering:
/// e = |inertia|, f = |decomposition| / e, r = n / (e f), n = covering
/// degree; always n = e f r.
struct SplittingData {
    Int e;
    Int f;
    Int r;
    Int n;

    Int inertia_order() const { return e; }
    Int decomposition_order() const { return e * f; }
};

/// Inertia is generated by the meridian image, decomposition by meridian
/// and longitude images together; external knots always get e = 1.
SplittingData splitting_data(const LinkContext& ctx, const CoveringSpec& spec,
                             std::size_t knot);

/// Order of (lk_1 mod n_1, ..., lk_r mod n_r) in Z/n_1 + ... + Z/n_r; for
/// the covering sending each branch meridian to a unit vector this is the
/// covering degree f of an external knot with that linking row.
Int splitting_degree_via_linking(std::span<const Int> lk_vector,
                                 std::span<const Int> moduli);

/// r = n, i.e. the decomposition group is trivial. Defined for external
/// knots only (branched_knot error otherwise).
bool is_completely_decomposed(const LinkContext& ctx,
                              const CoveringSpec& spec, std::size_t knot);

struct EfrRow {
    std::string knot;
    bool branched;
    Int e;
    Int f;
    Int r;
    Int n;
    bool ok; // n == e f r, and e == 1 when external
};

struct EfrReport {
    bool pass;
    std::vector<EfrRow> rows;
};

/// Evaluates the splitting invariants of every knot of the truncation and
/// flags any violation of n = e f r (or a ramified external knot).
EfrReport verify_efr(const LinkContext& ctx, const CoveringSpec& spec);

} // namespace cft3m
