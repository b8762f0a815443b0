#include "cft3m/idele.hpp"

namespace cft3m {

Idele Idele::zero(const LinkContext& ctx) {
    return Idele{std::vector<TorusClass>(ctx.size())};
}

Idele Idele::unit_meridian(const LinkContext& ctx, std::size_t knot) {
    Idele a = zero(ctx);
    a.components.at(knot).q = 1;
    return a;
}

Idele Idele::unit_longitude(const LinkContext& ctx, std::size_t knot) {
    Idele a = zero(ctx);
    a.components.at(knot).p = 1;
    return a;
}

Divisor longitude_divisor(const Idele& a) {
    Divisor d(a.components.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.components[i].p;
    return d;
}

bool is_unit(const Idele& a) {
    for (const auto& c : a.components)
        if (c.p != 0) return false;
    return true;
}

namespace {

Int meridian_coefficient(const LinkContext& ctx, const Idele& a,
                         std::size_t j) {
    Int coeff = a.components[j].q;
    for (std::size_t k = 0; k < ctx.size(); ++k)
        if (k != j) coeff += a.components[k].p * ctx.lk(k, j);
    return coeff;
}

} // namespace

bool is_principal(const LinkContext& ctx, const Idele& a) {
    if (a.components.size() != ctx.size())
        throw std::invalid_argument("idele support does not match context");
    for (std::size_t j = 0; j < ctx.size(); ++j)
        if (meridian_coefficient(ctx, a, j) != 0) return false;
    return true;
}

Idele principal_from_longitudes(const LinkContext& ctx, const Divisor& p) {
    if (p.size() != ctx.size())
        throw std::invalid_argument("divisor support does not match context");
    Idele b = Idele::zero(ctx);
    for (std::size_t j = 0; j < ctx.size(); ++j) {
        b.components[j].p = p[j];
        Int q = 0;
        for (std::size_t k = 0; k < ctx.size(); ++k)
            if (k != j) q -= p[k] * ctx.lk(k, j);
        b.components[j].q = q;
    }
    return b;
}

UnitPrincipalSplit split_unit_principal(const LinkContext& ctx,
                                        const Idele& a) {
    if (a.components.size() != ctx.size())
        throw std::invalid_argument("idele support does not match context");
    const Idele b = principal_from_longitudes(ctx, longitude_divisor(a));
    Idele u = Idele::zero(ctx);
    for (std::size_t j = 0; j < ctx.size(); ++j) {
        u.components[j].q = a.components[j].q - b.components[j].q;
        u.components[j].p = a.components[j].p - b.components[j].p;
    }
    return {std::move(u), std::move(b)};
}

NormLattice norm_lattice(const LinkContext& ctx, const CoveringSpec& spec) {
    NormLattice out;
    out.local.reserve(ctx.size());
    const FinGenAbGroup& a = spec.target();
    const std::size_t t = a.torsion_rank();
    for (std::size_t k = 0; k < ctx.size(); ++k) {
        const GroupElement m = meridian_image(ctx, spec, k);
        const GroupElement l = longitude_image(ctx, spec, k);
        // kernel of (q,p) -> q m + p l inside A = Z^t / diag(d):
        // solve [m | l | diag(d)] (q,p,k)^T = 0 and project onto (q,p)
        IntMatrix e(t, 2 + t);
        for (std::size_t i = 0; i < t; ++i) {
            e.at(i, 0) = m.coordinates[i];
            e.at(i, 1) = l.coordinates[i];
            e.at(i, 2 + i) = a.invariant_factors()[i];
        }
        const IntMatrix full_kernel = kernel_basis(e);
        IntMatrix gens(full_kernel.rows(), 2);
        for (std::size_t i = 0; i < full_kernel.rows(); ++i) {
            gens.at(i, 0) = full_kernel.at(i, 0);
            gens.at(i, 1) = full_kernel.at(i, 1);
        }
        out.local.push_back(TorusSubgroup::from_generators(gens));
    }
    return out;
}

GroupElement reciprocity(const LinkContext& ctx, const CoveringSpec& spec,
                         const Idele& a) {
    if (a.components.size() != ctx.size())
        throw std::invalid_argument("idele support does not match context");
    const FinGenAbGroup& grp = spec.target();
    GroupElement acc = zero_element(grp);
    for (std::size_t k = 0; k < ctx.size(); ++k) {
        const TorusClass& c = a.components[k];
        if (c.q != 0)
            acc = add(grp, acc, scaled(grp, c.q, meridian_image(ctx, spec, k)));
        if (c.p != 0)
            acc = add(grp, acc, scaled(grp, c.p, longitude_image(ctx, spec, k)));
    }
    return acc;
}

GroupElement reciprocity_at(const LinkContext& ctx, const CoveringSpec& spec,
                            std::size_t knot, const TorusClass& a) {
    Idele single = Idele::zero(ctx);
    single.components.at(knot) = a;
    return reciprocity(ctx, spec, single);
}

ReciprocityInstance reciprocity_instance(const LinkContext& ctx,
                                         const CoveringSpec& spec) {
    const std::size_t s = ctx.size();
    IntMatrix rel(0, 2 * s);

    // principal generator of each unit divisor
    for (std::size_t t = 0; t < s; ++t) {
        Divisor unit(s, 0);
        unit[t] = 1;
        const Idele b = principal_from_longitudes(ctx, unit);
        std::vector<Int> row(2 * s);
        for (std::size_t k = 0; k < s; ++k) {
            row[2 * k] = b.components[k].q;
            row[2 * k + 1] = b.components[k].p;
        }
        rel.append_row(row);
    }

    // local norm lattices, one block per knot
    const NormLattice norms = norm_lattice(ctx, spec);
    for (std::size_t k = 0; k < s; ++k) {
        const IntMatrix& basis = norms.local[k].basis();
        for (std::size_t i = 0; i < basis.rows(); ++i) {
            std::vector<Int> row(2 * s, 0);
            row[2 * k] = basis.at(i, 0);
            row[2 * k + 1] = basis.at(i, 1);
            rel.append_row(row);
        }
    }

    return {spec.target(), std::move(rel)};
}

FinGenAbGroup quotient_of(const ReciprocityInstance& instance) {
    return group_from_relations(instance.relation_lattice.cols(),
                                instance.relation_lattice)
        .group;
}

FinGenAbGroup idele_class_quotient(const LinkContext& ctx,
                                   const CoveringSpec& spec) {
    return quotient_of(reciprocity_instance(ctx, spec));
}

ReciprocityReport verify_reciprocity_iso(const LinkContext& ctx,
                                         const CoveringSpec& spec,
                                         const ReciprocityInstance& instance) {
    ReciprocityReport report{};
    const FinGenAbGroup quotient = quotient_of(instance);
    report.lhs_factors = quotient.invariant_factors();
    report.rhs_factors = spec.target().invariant_factors();
    report.factors_match = quotient == spec.target();

    // rho must vanish on every relation generator...
    report.well_defined = true;
    const std::size_t s = ctx.size();
    for (std::size_t i = 0; i < instance.relation_lattice.rows(); ++i) {
        Idele a = Idele::zero(ctx);
        for (std::size_t k = 0; k < s; ++k) {
            a.components[k].q = instance.relation_lattice.at(i, 2 * k);
            a.components[k].p = instance.relation_lattice.at(i, 2 * k + 1);
        }
        if (!is_zero(spec.target(), reciprocity(ctx, spec, a))) {
            report.well_defined = false;
            break;
        }
    }

    // ...and the unit ideles must reach all of the deck group
    std::vector<GroupElement> images;
    for (std::size_t k = 0; k < s; ++k) {
        images.push_back(meridian_image(ctx, spec, k));
        images.push_back(longitude_image(ctx, spec, k));
    }
    report.surjective =
        subgroup_order(spec.target(), images) == spec.target().order();

    report.pass =
        report.factors_match && report.well_defined && report.surjective;
    return report;
}

ReciprocityReport verify_reciprocity_iso(const LinkContext& ctx,
                                         const CoveringSpec& spec) {
    return verify_reciprocity_iso(ctx, spec, reciprocity_instance(ctx, spec));
}

KnotBehavior knot_behavior(const LinkContext& ctx, const CoveringSpec& spec,
                           std::size_t knot) {
    if (knot >= ctx.size())
        raise(ErrorCode::unknown_knot,
              "knot index " + std::to_string(knot) + " out of range");
    const FinGenAbGroup& a = spec.target();
    const bool meridian_dies =
        is_zero(a, reciprocity_at(ctx, spec, knot, TorusClass{1, 0}));
    const bool longitude_dies =
        is_zero(a, reciprocity_at(ctx, spec, knot, TorusClass{0, 1}));
    return {meridian_dies && longitude_dies, meridian_dies};
}

LinkContext admissible_closure(const LinkContext& ctx,
                               const CoveringSpec& spec) {
    const FinGenAbGroup& a = spec.target();
    const std::size_t r = spec.branch().size();
    const std::size_t t = a.torsion_rank();

    // kernel of Z^r -> A, e_i -> psi(m_i), as a row basis over the branch
    IntMatrix e(t, r + t);
    for (std::size_t i = 0; i < t; ++i) {
        for (std::size_t j = 0; j < r; ++j)
            e.at(i, j) = spec.meridian_image_at(j).coordinates[i];
        e.at(i, r + i) = a.invariant_factors()[i];
    }
    const IntMatrix kernel = kernel_basis(e);

    LinkContext out = ctx;
    std::size_t counter = 1;
    for (std::size_t row = 0; row < kernel.rows(); ++row) {
        bool trivial = true;
        for (std::size_t j = 0; j < r; ++j)
            if (kernel.at(row, j) != 0) trivial = false;
        if (trivial) continue;

        std::vector<Int> lk_row(out.size(), 0);
        for (std::size_t j = 0; j < r; ++j)
            lk_row[spec.branch().indices()[j]] = kernel.at(row, j);

        std::string name;
        do {
            name = "A" + std::to_string(counter++);
        } while (out.index_of(name));
        out = out.with_extra_knot(std::move(name), std::move(lk_row));
    }
    return out;
}

FinGenAbGroup unit_principal_cokernel(const LinkContext& ctx) {
    const std::size_t s = ctx.size();
    IntMatrix rel(0, 2 * s);
    for (std::size_t k = 0; k < s; ++k) {
        std::vector<Int> row(2 * s, 0);
        row[2 * k] = 1; // unit meridian
        rel.append_row(row);
    }
    for (std::size_t t = 0; t < s; ++t) {
        Divisor unit(s, 0);
        unit[t] = 1;
        const Idele b = principal_from_longitudes(ctx, unit);
        std::vector<Int> row(2 * s);
        for (std::size_t k = 0; k < s; ++k) {
            row[2 * k] = b.components[k].q;
            row[2 * k + 1] = b.components[k].p;
        }
        rel.append_row(row);
    }
    return group_from_relations(2 * s, rel).group;
}

} // namespace cft3m
