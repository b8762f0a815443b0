#include <pybind11/pybind11.h>

#include "cft3m/cli.hpp"

namespace py = pybind11;

namespace pybind11::detail {

// arbitrary-precision integers cross the boundary as python ints, exactly
template <> struct type_caster<cft3m::Int> {
    PYBIND11_TYPE_CASTER(cft3m::Int, const_name("int"));

    bool load(handle src, bool) {
        if (!src || !PyLong_Check(src.ptr())) return false;
        value = cft3m::Int(static_cast<std::string>(py::str(src)));
        return true;
    }

    static handle cast(const cft3m::Int& v, return_value_policy, handle) {
        return PyLong_FromString(v.str().c_str(), nullptr, 10);
    }
};

} // namespace pybind11::detail

#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include <sstream>

namespace {

using namespace cft3m;

using Rows = std::vector<std::vector<Int>>;
using PyIdele = std::vector<std::pair<Int, Int>>;

IntMatrix to_matrix(const Rows& rows, std::size_t expected_cols = SIZE_MAX) {
    IntMatrix m = IntMatrix::from_rows(rows);
    if (expected_cols != SIZE_MAX && m.rows() == 0)
        m = IntMatrix(0, expected_cols);
    return m;
}

Rows to_rows(const IntMatrix& m) {
    Rows rows(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) rows[i] = m.row_vector(i);
    return rows;
}

Idele to_idele(const LinkContext& ctx, const PyIdele& components) {
    if (components.size() != ctx.size())
        throw std::invalid_argument("idele needs one (q, p) pair per knot");
    Idele a = Idele::zero(ctx);
    for (std::size_t i = 0; i < components.size(); ++i) {
        a.components[i].q = components[i].first;
        a.components[i].p = components[i].second;
    }
    return a;
}

PyIdele from_idele(const Idele& a) {
    PyIdele out;
    out.reserve(a.components.size());
    for (const auto& c : a.components) out.emplace_back(c.q, c.p);
    return out;
}

py::dict splitting_dict(const SplittingData& s) {
    py::dict d;
    d["e"] = s.e;
    d["f"] = s.f;
    d["r"] = s.r;
    d["n"] = s.n;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "class-field invariants of abelian branched coverings of "
              "integral homology spheres, computed from linking matrices";

    py::register_exception<Error>(m, "Error");

    // --- exact integer linear algebra ------------------------------------

    py::class_<FinGenAbGroup>(m, "FinGenAbGroup")
        .def(py::init([](std::size_t free_rank, std::vector<Int> factors) {
                 return FinGenAbGroup(free_rank, std::move(factors));
             }),
             py::arg("free_rank") = 0,
             py::arg("invariant_factors") = std::vector<Int>{})
        .def_property_readonly("free_rank", &FinGenAbGroup::free_rank)
        .def_property_readonly("invariant_factors",
                               &FinGenAbGroup::invariant_factors)
        .def("is_finite", &FinGenAbGroup::is_finite)
        .def("is_trivial", &FinGenAbGroup::is_trivial)
        .def("order", &FinGenAbGroup::order)
        .def(py::self == py::self)
        .def("__repr__", [](const FinGenAbGroup& g) {
            return "<FinGenAbGroup " + g.to_string() + ">";
        });

    m.def(
        "smith_normal_form",
        [](const Rows& rows) {
            const auto s = smith_normal_form(to_matrix(rows));
            return py::make_tuple(to_rows(s.U), to_rows(s.D), to_rows(s.V));
        },
        py::arg("matrix"),
        "U, D, V with U*M*V = D, U and V unimodular, D in Smith form");

    m.def(
        "lattice_membership_basis",
        [](const Rows& rows) {
            return to_rows(lattice_membership_basis(to_matrix(rows)));
        },
        py::arg("matrix"), "echelon row basis of the integer row lattice");

    m.def(
        "lattice_contains",
        [](const Rows& basis, const std::vector<Int>& v) {
            return lattice_contains(to_matrix(basis, v.size()), v);
        },
        py::arg("basis"), py::arg("vector"));

    m.def(
        "kernel_basis",
        [](const Rows& rows) { return to_rows(kernel_basis(to_matrix(rows))); },
        py::arg("matrix"));

    m.def(
        "group_from_relations",
        [](std::size_t generator_count, const Rows& relations) {
            auto q = group_from_relations(generator_count,
                                          to_matrix(relations, generator_count));
            return py::make_tuple(q.group, to_rows(q.projection.matrix()));
        },
        py::arg("generator_count"), py::arg("relations"),
        "the quotient group and the projection matrix onto its canonical "
        "coordinates");

    m.def(
        "abelian_group_from_moduli",
        [](const std::vector<Int>& moduli) {
            auto q = abelian_group_from_moduli(moduli);
            return py::make_tuple(q.group, to_rows(q.projection.matrix()));
        },
        py::arg("moduli"));

    m.def(
        "element_order",
        [](const FinGenAbGroup& g, const std::vector<Int>& coords) {
            return element_order(g, GroupElement{coords});
        },
        py::arg("group"), py::arg("coordinates"),
        "least n >= 1 with n*x = 0, or None for infinite order");

    m.def(
        "subgroup_order",
        [](const FinGenAbGroup& g, const Rows& gens) {
            std::vector<GroupElement> elements;
            elements.reserve(gens.size());
            for (const auto& c : gens) elements.push_back(GroupElement{c});
            return subgroup_order(g, elements);
        },
        py::arg("group"), py::arg("generators"));

    // --- boundary torus coverings ----------------------------------------

    m.def(
        "deck_group",
        [](const Rows& gens) {
            return deck_group(TorusSubgroup::from_generators(to_matrix(gens, 2)));
        },
        py::arg("subgroup"));

    m.def(
        "is_unramified",
        [](const Rows& gens) {
            return is_unramified(TorusSubgroup::from_generators(to_matrix(gens, 2)));
        },
        py::arg("subgroup"));

    m.def(
        "local_invariants",
        [](const Rows& gens) {
            const auto inv = local_invariants(
                TorusSubgroup::from_generators(to_matrix(gens, 2)));
            return py::make_tuple(inv.e, inv.f);
        },
        py::arg("subgroup"), "(e, f) with e*f the subgroup index");

    m.def(
        "unramified_cover_of_degree",
        [](const Int& n) { return to_rows(unramified_cover_of_degree(n).basis()); },
        py::arg("degree"));

    m.def(
        "enumerate_subgroups",
        [](const Int& n) {
            std::vector<Rows> out;
            for (const auto& h : enumerate_subgroups(n))
                out.push_back(to_rows(h.basis()));
            return out;
        },
        py::arg("index"), "canonical bases of all index-n subgroups of Z^2");

    // --- links and coverings ----------------------------------------------

    py::class_<LinkContext>(m, "LinkContext")
        .def(py::init([](std::vector<std::string> names, const Rows& linking) {
                 return LinkContext(std::move(names),
                                    to_matrix(linking, 0));
             }),
             py::arg("knots"), py::arg("linking"))
        .def_property_readonly("knots", &LinkContext::knot_names)
        .def_property_readonly(
            "linking",
            [](const LinkContext& ctx) { return to_rows(ctx.linking()); })
        .def("__len__", &LinkContext::size)
        .def("__repr__", [](const LinkContext& ctx) {
            return "<LinkContext with " + std::to_string(ctx.size()) +
                   " knots>";
        });

    m.def(
        "validate",
        [](const LinkContext& ctx) -> std::optional<std::string> {
            if (auto issue = validate(ctx))
                return std::string(error_code_name(issue->code)) + ": " +
                       issue->message;
            return std::nullopt;
        },
        py::arg("context"), "None when valid, else a diagnostic string");

    py::class_<CoveringSpec>(m, "CoveringSpec")
        .def_property_readonly("group", &CoveringSpec::target)
        .def_property_readonly("is_standard", &CoveringSpec::is_standard)
        .def_property_readonly(
            "meridian_images",
            [](const CoveringSpec& spec) {
                Rows out;
                for (const auto& img : spec.meridian_images())
                    out.push_back(img.coordinates);
                return out;
            })
        .def("__repr__", [](const CoveringSpec& spec) {
            return "<CoveringSpec onto " + spec.target().to_string() + ">";
        });

    m.def(
        "branch_knots",
        [](const LinkContext& ctx, const CoveringSpec& spec) {
            std::vector<std::string> names;
            for (std::size_t i : spec.branch().indices())
                names.push_back(ctx.name(i));
            return names;
        },
        py::arg("context"), py::arg("covering"));

    m.def(
        "standard_covering",
        [](const LinkContext& ctx, const std::vector<std::string>& branch,
           const std::vector<Int>& moduli) {
            return standard_covering(ctx, branch, moduli);
        },
        py::arg("context"), py::arg("branch"), py::arg("moduli"));

    m.def(
        "covering_from_moduli",
        [](const LinkContext& ctx, const std::vector<std::string>& branch,
           const std::vector<Int>& moduli, const Rows& images) {
            return covering_from_moduli(ctx, branch, moduli, images);
        },
        py::arg("context"), py::arg("branch"), py::arg("moduli"),
        py::arg("meridian_images"));

    m.def(
        "meridian_class",
        [](const LinkContext& ctx, const std::string& knot,
           const std::vector<std::string>& sublink) {
            return meridian_class(ctx, ctx.require_index(knot),
                                  SublinkRef::of(ctx, sublink));
        },
        py::arg("context"), py::arg("knot"), py::arg("sublink"));

    m.def(
        "longitude_class",
        [](const LinkContext& ctx, const std::string& knot,
           const std::vector<std::string>& sublink) {
            return longitude_class(ctx, ctx.require_index(knot),
                                   SublinkRef::of(ctx, sublink));
        },
        py::arg("context"), py::arg("knot"), py::arg("sublink"));

    // --- splitting invariants ----------------------------------------------

    m.def(
        "splitting_data",
        [](const LinkContext& ctx, const CoveringSpec& spec,
           const std::string& knot) {
            return splitting_dict(
                splitting_data(ctx, spec, ctx.require_index(knot)));
        },
        py::arg("context"), py::arg("covering"), py::arg("knot"));

    m.def("splitting_degree_via_linking",
          [](const std::vector<Int>& lk, const std::vector<Int>& moduli) {
              return splitting_degree_via_linking(lk, moduli);
          },
          py::arg("linking"), py::arg("moduli"));

    m.def(
        "is_completely_decomposed",
        [](const LinkContext& ctx, const CoveringSpec& spec,
           const std::string& knot) {
            return is_completely_decomposed(ctx, spec,
                                            ctx.require_index(knot));
        },
        py::arg("context"), py::arg("covering"), py::arg("knot"));

    m.def(
        "verify_efr",
        [](const LinkContext& ctx, const CoveringSpec& spec) {
            const auto report = verify_efr(ctx, spec);
            py::list rows;
            for (const auto& row : report.rows) {
                py::dict d;
                d["knot"] = row.knot;
                d["branched"] = row.branched;
                d["e"] = row.e;
                d["f"] = row.f;
                d["r"] = row.r;
                d["n"] = row.n;
                d["ok"] = row.ok;
                rows.append(d);
            }
            py::dict out;
            out["pass"] = report.pass;
            out["rows"] = rows;
            return out;
        },
        py::arg("context"), py::arg("covering"));

    // --- ideles -------------------------------------------------------------

    m.def(
        "longitude_divisor",
        [](const LinkContext& ctx, const PyIdele& a) {
            return longitude_divisor(to_idele(ctx, a));
        },
        py::arg("context"), py::arg("idele"));

    m.def(
        "is_principal",
        [](const LinkContext& ctx, const PyIdele& a) {
            return is_principal(ctx, to_idele(ctx, a));
        },
        py::arg("context"), py::arg("idele"));

    m.def(
        "principal_from_longitudes",
        [](const LinkContext& ctx, const std::vector<Int>& p) {
            return from_idele(principal_from_longitudes(ctx, p));
        },
        py::arg("context"), py::arg("longitudes"));

    m.def(
        "split_unit_principal",
        [](const LinkContext& ctx, const PyIdele& a) {
            const auto split = split_unit_principal(ctx, to_idele(ctx, a));
            return py::make_tuple(from_idele(split.unit),
                                  from_idele(split.principal));
        },
        py::arg("context"), py::arg("idele"),
        "(unit, principal) with unit + principal the input");

    m.def(
        "norm_lattice",
        [](const LinkContext& ctx, const CoveringSpec& spec) {
            std::vector<Rows> out;
            for (const auto& h : norm_lattice(ctx, spec).local)
                out.push_back(to_rows(h.basis()));
            return out;
        },
        py::arg("context"), py::arg("covering"));

    m.def(
        "reciprocity",
        [](const LinkContext& ctx, const CoveringSpec& spec,
           const PyIdele& a) {
            return reciprocity(ctx, spec, to_idele(ctx, a)).coordinates;
        },
        py::arg("context"), py::arg("covering"), py::arg("idele"));

    m.def(
        "idele_class_quotient",
        [](const LinkContext& ctx, const CoveringSpec& spec) {
            return idele_class_quotient(ctx, spec);
        },
        py::arg("context"), py::arg("covering"));

    m.def(
        "verify_reciprocity_iso",
        [](const LinkContext& ctx, const CoveringSpec& spec) {
            const auto report = verify_reciprocity_iso(ctx, spec);
            py::dict d;
            d["lhs_factors"] = report.lhs_factors;
            d["rhs_factors"] = report.rhs_factors;
            d["factors_match"] = report.factors_match;
            d["well_defined"] = report.well_defined;
            d["surjective"] = report.surjective;
            d["pass"] = report.pass;
            return d;
        },
        py::arg("context"), py::arg("covering"));

    m.def(
        "knot_behavior",
        [](const LinkContext& ctx, const CoveringSpec& spec,
           const std::string& knot) {
            const auto b = knot_behavior(ctx, spec, ctx.require_index(knot));
            py::dict d;
            d["completely_decomposed"] = b.completely_decomposed;
            d["unbranched"] = b.unbranched;
            return d;
        },
        py::arg("context"), py::arg("covering"), py::arg("knot"));

    m.def(
        "unit_principal_cokernel",
        [](const LinkContext& ctx) { return unit_principal_cokernel(ctx); },
        py::arg("context"));

    m.def(
        "admissible_closure",
        [](const LinkContext& ctx, const CoveringSpec& spec) {
            return admissible_closure(ctx, spec);
        },
        py::arg("context"), py::arg("covering"),
        "truncation extended with the external knots a covering with "
        "entangled meridian images needs");

    // --- files and the verification corpus ---------------------------------

    m.def(
        "load_link_file",
        [](const std::string& path) {
            auto file = load_link_file(path);
            return py::make_tuple(file.ctx, file.covering);
        },
        py::arg("path"));

    m.def(
        "parse_link_json",
        [](const std::string& text) {
            auto file = parse_link_json(text, "<string>");
            return py::make_tuple(file.ctx, file.covering);
        },
        py::arg("text"));

    m.def(
        "selftest_json",
        [](std::uint64_t seed, std::size_t cases) {
            std::ostringstream out, err;
            const int failures = run_selftest(seed, cases, out, err);
            return py::make_tuple(failures, out.str());
        },
        py::arg("seed"), py::arg("cases"),
        "(failure count, one JSON report per line)");

#ifdef CFT3M_VERSION
    m.attr("__version__") = CFT3M_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
