#include "cft3m/link_model.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cft3m {

using nlohmann::ordered_json;

LinkContext::LinkContext(std::vector<std::string> knot_names,
                         IntMatrix linking)
    : knot_names_(std::move(knot_names)), linking_(std::move(linking)) {
    if (linking_.rows() != knot_names_.size() ||
        linking_.cols() != knot_names_.size())
        throw std::invalid_argument(
            "linking matrix shape does not match the knot list");
}

std::optional<std::size_t> LinkContext::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < knot_names_.size(); ++i)
        if (knot_names_[i] == name) return i;
    return std::nullopt;
}

std::size_t LinkContext::require_index(std::string_view name) const {
    if (auto i = index_of(name)) return *i;
    raise(ErrorCode::unknown_knot,
          "unknown knot '" + std::string(name) + "'");
}

LinkContext LinkContext::with_extra_knot(std::string name,
                                         std::vector<Int> lk_row) const {
    const std::size_t s = size();
    if (lk_row.size() != s)
        throw std::invalid_argument("linking row length mismatch");
    std::vector<std::string> names = knot_names_;
    names.push_back(std::move(name));
    IntMatrix m(s + 1, s + 1);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) m.at(i, j) = linking_.at(i, j);
    for (std::size_t i = 0; i < s; ++i) {
        m.at(i, s) = lk_row[i];
        m.at(s, i) = lk_row[i];
    }
    return LinkContext(std::move(names), std::move(m));
}

std::optional<ValidationIssue> validate(const LinkContext& ctx) {
    const std::size_t s = ctx.size();
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j)
            if (ctx.lk(i, j) != ctx.lk(j, i))
                return ValidationIssue{
                    ErrorCode::symmetry_violation,
                    "linking[" + std::to_string(i) + "][" + std::to_string(j) +
                        "] != linking[" + std::to_string(j) + "][" +
                        std::to_string(i) + "]"};
    for (std::size_t i = 0; i < s; ++i)
        if (ctx.lk(i, i) != 0)
            return ValidationIssue{ErrorCode::nonzero_diagonal,
                                   "linking[" + std::to_string(i) + "][" +
                                       std::to_string(i) + "] must be 0"};
    std::set<std::string> seen;
    for (const auto& n : ctx.knot_names())
        if (!seen.insert(n).second)
            return ValidationIssue{ErrorCode::duplicate_name,
                                   "duplicate knot name '" + n + "'"};
    return std::nullopt;
}

SublinkRef SublinkRef::of(const LinkContext& ctx,
                          std::span<const std::string> names) {
    std::vector<std::size_t> idx;
    idx.reserve(names.size());
    for (const auto& n : names) idx.push_back(ctx.require_index(n));
    return of_indices(ctx, std::move(idx));
}

SublinkRef SublinkRef::of_indices(const LinkContext& ctx,
                                  std::vector<std::size_t> indices) {
    for (std::size_t i : indices)
        if (i >= ctx.size())
            raise(ErrorCode::unknown_knot,
                  "knot index " + std::to_string(i) + " out of range");
    std::sort(indices.begin(), indices.end());
    for (std::size_t i = 1; i < indices.size(); ++i)
        if (indices[i] == indices[i - 1])
            raise(ErrorCode::duplicate_name,
                  "sublink lists knot " + ctx.name(indices[i]) + " twice");
    SublinkRef ref;
    ref.indices_ = std::move(indices);
    return ref;
}

bool SublinkRef::contains(std::size_t knot) const {
    return std::binary_search(indices_.begin(), indices_.end(), knot);
}

std::optional<std::size_t> SublinkRef::position_of(std::size_t knot) const {
    const auto it = std::lower_bound(indices_.begin(), indices_.end(), knot);
    if (it == indices_.end() || *it != knot) return std::nullopt;
    return static_cast<std::size_t>(it - indices_.begin());
}

std::vector<Int> meridian_class(const LinkContext& ctx, std::size_t knot,
                                const SublinkRef& l) {
    if (knot >= ctx.size())
        raise(ErrorCode::unknown_knot,
              "knot index " + std::to_string(knot) + " out of range");
    std::vector<Int> v(l.size(), 0);
    if (auto pos = l.position_of(knot)) v[*pos] = 1;
    return v;
}

std::vector<Int> longitude_class(const LinkContext& ctx, std::size_t knot,
                                 const SublinkRef& l) {
    if (knot >= ctx.size())
        raise(ErrorCode::unknown_knot,
              "knot index " + std::to_string(knot) + " out of range");
    std::vector<Int> v(l.size());
    const auto& members = l.indices();
    for (std::size_t pos = 0; pos < members.size(); ++pos)
        v[pos] = members[pos] == knot ? Int(0) : ctx.lk(knot, members[pos]);
    return v;
}

CoveringSpec CoveringSpec::make(const LinkContext& ctx, SublinkRef branch,
                                FinGenAbGroup target,
                                std::vector<GroupElement> meridian_images) {
    (void)ctx;
    if (!target.is_finite())
        raise(ErrorCode::infinite_group,
              "covering deck groups must be finite");
    if (meridian_images.size() != branch.size())
        throw std::invalid_argument(
            "one meridian image required per branch knot");
    for (auto& img : meridian_images) img = reduce(target, img.coordinates);
    if (subgroup_order(target, meridian_images) != target.order())
        raise(ErrorCode::not_surjective,
              "meridian images do not generate the deck group " +
                  target.to_string());
    CoveringSpec spec;
    spec.branch_ = std::move(branch);
    spec.target_ = std::move(target);
    spec.meridian_images_ = std::move(meridian_images);
    return spec;
}

CoveringGroup covering_group(const LinkContext& ctx,
                             const CoveringSpec& spec) {
    const std::size_t r = spec.branch().size();
    IntMatrix m(spec.target().rank(), r);
    for (std::size_t j = 0; j < r; ++j) {
        const auto& img = spec.meridian_image_at(j).coordinates;
        for (std::size_t i = 0; i < img.size(); ++i) m.at(i, j) = img[i];
    }
    (void)ctx;
    GroupHom psi(FinGenAbGroup::free_abelian(r), spec.target(), std::move(m));
    return {spec.target(), std::move(psi)};
}

CoveringSpec covering_from_moduli(
    const LinkContext& ctx, std::span<const std::string> branch,
    std::span<const Int> moduli,
    const std::vector<std::vector<Int>>& images_in_moduli_coords) {
    if (images_in_moduli_coords.size() != branch.size())
        throw std::invalid_argument(
            "one meridian image required per branch knot");
    for (const Int& m : moduli)
        if (m < 2)
            raise(ErrorCode::malformed_input,
                  "covering moduli must be >= 2");
    const auto q = abelian_group_from_moduli(moduli);

    // the branch sublink is kept in context order; images (and, for the
    // standard form, the attached moduli) must follow their knots
    struct Entry {
        std::size_t ctx_index;
        GroupElement image;
        std::optional<std::size_t> unit_of; // which e_j the image reduces to
    };
    std::vector<Entry> entries;
    entries.reserve(branch.size());
    for (std::size_t i = 0; i < branch.size(); ++i) {
        const auto& coords = images_in_moduli_coords[i];
        if (coords.size() != moduli.size())
            raise(ErrorCode::length_mismatch,
                  "meridian image for '" + branch[i] + "' must have " +
                      std::to_string(moduli.size()) + " coordinates");
        std::optional<std::size_t> unit_of;
        bool unit_shape = true;
        for (std::size_t j = 0; j < coords.size(); ++j) {
            Int res = coords[j] % moduli[j];
            if (res < 0) res += moduli[j];
            if (res == 0) continue;
            if (res == 1 && !unit_of) {
                unit_of = j;
            } else {
                unit_shape = false;
            }
        }
        entries.push_back({ctx.require_index(branch[i]),
                           q.projection.apply(GroupElement{coords}),
                           unit_shape ? unit_of : std::nullopt});
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) {
                  return a.ctx_index < b.ctx_index;
              });

    bool standard = branch.size() == moduli.size();
    std::vector<bool> unit_used(moduli.size(), false);
    std::vector<Int> standard_moduli;
    for (const Entry& e : entries) {
        if (!standard) break;
        if (!e.unit_of || unit_used[*e.unit_of]) {
            standard = false;
            break;
        }
        unit_used[*e.unit_of] = true;
        standard_moduli.push_back(moduli[*e.unit_of]);
    }

    std::vector<GroupElement> images;
    images.reserve(entries.size());
    for (Entry& e : entries) images.push_back(std::move(e.image));

    CoveringSpec spec = CoveringSpec::make(ctx, SublinkRef::of(ctx, branch),
                                           q.group, std::move(images));
    spec.standard_ = standard;
    if (standard) spec.standard_moduli_ = std::move(standard_moduli);
    return spec;
}

CoveringSpec standard_covering(const LinkContext& ctx,
                               std::span<const std::string> branch,
                               std::span<const Int> moduli) {
    if (branch.size() != moduli.size())
        raise(ErrorCode::length_mismatch,
              "standard covering needs one modulus per branch knot");
    std::vector<std::vector<Int>> units(branch.size(),
                                        std::vector<Int>(moduli.size(), 0));
    for (std::size_t i = 0; i < branch.size(); ++i) units[i][i] = 1;
    return covering_from_moduli(ctx, branch, moduli, units);
}

GroupElement meridian_image(const LinkContext& ctx, const CoveringSpec& spec,
                            std::size_t knot) {
    if (knot >= ctx.size())
        raise(ErrorCode::unknown_knot,
              "knot index " + std::to_string(knot) + " out of range");
    if (auto pos = spec.branch().position_of(knot))
        return spec.meridian_image_at(*pos);
    return zero_element(spec.target());
}

GroupElement longitude_image(const LinkContext& ctx, const CoveringSpec& spec,
                             std::size_t knot) {
    const auto cls = longitude_class(ctx, knot, spec.branch());
    GroupElement acc = zero_element(spec.target());
    for (std::size_t pos = 0; pos < cls.size(); ++pos)
        if (cls[pos] != 0)
            acc = add(spec.target(), acc,
                      scaled(spec.target(), cls[pos],
                             spec.meridian_image_at(pos)));
    return acc;
}

// --- JSON interface -------------------------------------------------------

namespace {

[[noreturn]] void schema_error(const std::string& origin,
                               const std::string& pointer,
                               const std::string& what) {
    raise(ErrorCode::malformed_input, origin + ": " + pointer + ": " + what);
}

Int json_int(const ordered_json& v, const std::string& origin,
             const std::string& pointer) {
    if (v.is_number_integer()) return Int(v.get<long long>());
    if (v.is_number_unsigned()) return Int(v.get<unsigned long long>());
    schema_error(origin, pointer, "expected an integer");
}

const ordered_json& member(const ordered_json& obj, const char* key,
                           const std::string& origin,
                           const std::string& pointer) {
    if (!obj.is_object())
        schema_error(origin, pointer, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end())
        schema_error(origin, pointer, std::string("missing field '") + key +
                                          "'");
    return *it;
}

} // namespace

LinkFile parse_link_json(const std::string& text, const std::string& origin) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        raise(ErrorCode::malformed_input,
              origin + ": " + std::string(e.what()));
    }

    const auto& knots = member(doc, "knots", origin, "/");
    if (!knots.is_array())
        schema_error(origin, "/knots", "expected an array of strings");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!knots[i].is_string())
            schema_error(origin, "/knots/" + std::to_string(i),
                         "expected a string");
        names.push_back(knots[i].get<std::string>());
    }

    const auto& linking = member(doc, "linking", origin, "/");
    if (!linking.is_array() || linking.size() != names.size())
        schema_error(origin, "/linking",
                     "expected " + std::to_string(names.size()) +
                         " rows of integers");
    IntMatrix m(names.size(), names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto& row = linking[i];
        if (!row.is_array() || row.size() != names.size())
            schema_error(origin, "/linking/" + std::to_string(i),
                         "expected " + std::to_string(names.size()) +
                             " integers");
        for (std::size_t j = 0; j < names.size(); ++j)
            m.at(i, j) = json_int(row[j], origin,
                                  "/linking/" + std::to_string(i) + "/" +
                                      std::to_string(j));
    }

    LinkContext ctx(std::move(names), std::move(m));
    if (auto issue = validate(ctx))
        raise(issue->code, origin + ": /linking: " + issue->message);

    LinkFile out{std::move(ctx), std::nullopt};
    if (!doc.contains("covering")) return out;

    const auto& cov = doc["covering"];
    const auto& branch_json = member(cov, "branch", origin, "/covering");
    if (!branch_json.is_array())
        schema_error(origin, "/covering/branch", "expected an array");
    std::vector<std::string> branch;
    for (std::size_t i = 0; i < branch_json.size(); ++i) {
        if (!branch_json[i].is_string())
            schema_error(origin, "/covering/branch/" + std::to_string(i),
                         "expected a string");
        branch.push_back(branch_json[i].get<std::string>());
        if (!out.ctx.index_of(branch.back()))
            schema_error(origin, "/covering/branch/" + std::to_string(i),
                         "'" + branch.back() + "' is not a knot of this file");
    }

    const auto& target_json = member(cov, "target", origin, "/covering");
    if (!target_json.is_array())
        schema_error(origin, "/covering/target",
                     "expected an array of integers >= 2");
    std::vector<Int> moduli;
    for (std::size_t i = 0; i < target_json.size(); ++i) {
        Int v = json_int(target_json[i], origin,
                         "/covering/target/" + std::to_string(i));
        if (v < 2)
            schema_error(origin, "/covering/target/" + std::to_string(i),
                         "moduli must be >= 2");
        moduli.push_back(std::move(v));
    }

    const auto& images_json =
        member(cov, "meridian_images", origin, "/covering");
    if (!images_json.is_object())
        schema_error(origin, "/covering/meridian_images",
                     "expected an object mapping knots to coordinate arrays");
    std::vector<std::vector<Int>> images;
    for (std::size_t i = 0; i < branch.size(); ++i) {
        const auto it = images_json.find(branch[i]);
        if (it == images_json.end())
            schema_error(origin, "/covering/meridian_images",
                         "missing image for branch knot '" + branch[i] + "'");
        if (!it->is_array() || it->size() != moduli.size())
            schema_error(origin,
                         "/covering/meridian_images/" + branch[i],
                         "expected " + std::to_string(moduli.size()) +
                             " integers");
        std::vector<Int> coords;
        for (std::size_t j = 0; j < it->size(); ++j)
            coords.push_back(json_int((*it)[j], origin,
                                      "/covering/meridian_images/" +
                                          branch[i] + "/" +
                                          std::to_string(j)));
        images.push_back(std::move(coords));
    }
    for (const auto& [key, value] : images_json.items()) {
        (void)value;
        if (std::find(branch.begin(), branch.end(), key) == branch.end())
            schema_error(origin, "/covering/meridian_images/" + key,
                         "'" + key + "' is not a branch knot");
    }

    out.covering = covering_from_moduli(out.ctx, branch, moduli, images);
    return out;
}

LinkFile load_link_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(ErrorCode::malformed_input, path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_link_json(buf.str(), path);
}

} // namespace cft3m
