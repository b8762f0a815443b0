#include "cft3m/hilbert.hpp"

namespace cft3m {

using boost::multiprecision::gcd;
using boost::multiprecision::lcm;

KnotRef classify_knot(const LinkContext& ctx, const CoveringSpec& spec,
                      std::size_t knot) {
    if (knot >= ctx.size())
        raise(ErrorCode::unknown_knot,
              "knot index " + std::to_string(knot) + " out of range");
    return {knot, spec.branch().contains(knot) ? KnotKind::branched
                                               : KnotKind::external};
}

SplittingData splitting_data(const LinkContext& ctx, const CoveringSpec& spec,
                             std::size_t knot) {
    if (knot >= ctx.size())
        raise(ErrorCode::unknown_knot,
              "knot index " + std::to_string(knot) + " out of range");
    const FinGenAbGroup& a = spec.target();
    const GroupElement m = meridian_image(ctx, spec, knot);
    const GroupElement l = longitude_image(ctx, spec, knot);

    const Int n = a.order();
    const Int e = *element_order(a, m);
    const std::vector<GroupElement> dk{m, l};
    const Int d = subgroup_order(a, dk);
    return {e, d / e, n / d, n};
}

Int splitting_degree_via_linking(std::span<const Int> lk_vector,
                                 std::span<const Int> moduli) {
    if (lk_vector.size() != moduli.size())
        raise(ErrorCode::length_mismatch,
              "linking vector and moduli have different lengths");
    Int order = 1;
    for (std::size_t i = 0; i < moduli.size(); ++i) {
        if (moduli[i] < 2)
            throw std::invalid_argument("moduli must be >= 2");
        Int residue = lk_vector[i] % moduli[i];
        if (residue < 0) residue += moduli[i];
        order = lcm(order, moduli[i] / gcd(moduli[i], residue));
    }
    return order;
}

bool is_completely_decomposed(const LinkContext& ctx,
                              const CoveringSpec& spec, std::size_t knot) {
    const KnotRef ref = classify_knot(ctx, spec, knot);
    if (ref.kind == KnotKind::branched)
        raise(ErrorCode::branched_knot,
              "complete decomposition is defined for unbranched knots; '" +
                  ctx.name(knot) + "' is in the branch link");
    const SplittingData s = splitting_data(ctx, spec, knot);
    return s.r == s.n;
}

EfrReport verify_efr(const LinkContext& ctx, const CoveringSpec& spec) {
    EfrReport report{true, {}};
    for (std::size_t k = 0; k < ctx.size(); ++k) {
        const KnotRef ref = classify_knot(ctx, spec, k);
        const SplittingData s = splitting_data(ctx, spec, k);
        EfrRow row{ctx.name(k), ref.kind == KnotKind::branched,
                   s.e,         s.f,
                   s.r,         s.n,
                   true};
        if (s.e * s.f * s.r != s.n) row.ok = false;
        if (ref.kind == KnotKind::external && s.e != 1) row.ok = false;
        report.pass = report.pass && row.ok;
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace cft3m
