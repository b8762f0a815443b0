#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cft3m/abgroup.hpp"

namespace cft3m {

/// Finite truncation of a knot set in an integral homology sphere: named
/// knots plus their symmetric linking matrix (zero diagonal). The name order
/// is fixed and defines every coordinate convention downstream.
class LinkContext {
  public:
    LinkContext() = default;
    LinkContext(std::vector<std::string> knot_names, IntMatrix linking);

    std::size_t size() const noexcept { return knot_names_.size(); }
    const std::vector<std::string>& knot_names() const noexcept {
        return knot_names_;
    }
    const std::string& name(std::size_t i) const { return knot_names_.at(i); }
    std::optional<std::size_t> index_of(std::string_view name) const;
    std::size_t require_index(std::string_view name) const; // unknown_knot

    const IntMatrix& linking() const noexcept { return linking_; }
    const Int& lk(std::size_t i, std::size_t j) const {
        return linking_.at(i, j);
    }

    /// Extended truncation with one more knot; existing indices keep their
    /// meaning. lk_row holds the linking numbers with the existing knots.
    LinkContext with_extra_knot(std::string name,
                                std::vector<Int> lk_row) const;

  private:
    std::vector<std::string> knot_names_;
    IntMatrix linking_;
};

struct ValidationIssue {
    ErrorCode code;
    std::string message;
};

/// First violation of symmetry / zero diagonal / name uniqueness, if any.
std::optional<ValidationIssue> validate(const LinkContext& ctx);

/// Sublink of a context, stored as ascending knot indices (the order is
/// inherited from the context).
class SublinkRef {
  public:
    SublinkRef() = default;

    static SublinkRef of(const LinkContext& ctx,
                         std::span<const std::string> names);
    static SublinkRef of_indices(const LinkContext& ctx,
                                 std::vector<std::size_t> indices);

    std::size_t size() const noexcept { return indices_.size(); }
    const std::vector<std::size_t>& indices() const noexcept {
        return indices_;
    }
    bool contains(std::size_t knot) const;
    /// Position of the knot within the sublink ordering.
    std::optional<std::size_t> position_of(std::size_t knot) const;

  private:
    std::vector<std::size_t> indices_;
};

/// Class of the meridian of the given knot in H_1 of the sublink exterior
/// (free on the meridians of L): the basis vector when the knot belongs to
/// L, zero otherwise (its meridian disc misses L).
std::vector<Int> meridian_class(const LinkContext& ctx, std::size_t knot,
                                const SublinkRef& l);

/// Class of the 0-framed longitude: lk(K, K') at each K' in L \ {K}, zero
/// at K itself.
std::vector<Int> longitude_class(const LinkContext& ctx, std::size_t knot,
                                 const SublinkRef& l);

/// A finite abelian covering branched over a sublink: the deck group and
/// the image of each branch meridian. Construction enforces that the images
/// generate the whole group.
class CoveringSpec {
  public:
    static CoveringSpec make(const LinkContext& ctx, SublinkRef branch,
                             FinGenAbGroup target,
                             std::vector<GroupElement> meridian_images);

    const SublinkRef& branch() const noexcept { return branch_; }
    const FinGenAbGroup& target() const noexcept { return target_; }
    const std::vector<GroupElement>& meridian_images() const noexcept {
        return meridian_images_;
    }
    const GroupElement& meridian_image_at(std::size_t branch_pos) const {
        return meridian_images_.at(branch_pos);
    }

    /// True when the declared meridian images were distinct unit vectors of
    /// the declared moduli coordinates (one modulus per branch knot).
    bool is_standard() const noexcept { return standard_; }
    /// For standard coverings: the modulus attached to each branch knot, in
    /// branch position order. Empty otherwise.
    const std::vector<Int>& standard_moduli() const noexcept {
        return standard_moduli_;
    }

  private:
    SublinkRef branch_;
    FinGenAbGroup target_;
    std::vector<GroupElement> meridian_images_;
    std::vector<Int> standard_moduli_;
    bool standard_ = false;

    friend CoveringSpec covering_from_moduli(
        const LinkContext&, std::span<const std::string>,
        std::span<const Int>, const std::vector<std::vector<Int>>&);
};

struct CoveringGroup {
    FinGenAbGroup group;
    GroupHom psi; // H_1 of the branch exterior (free on meridians) -> group
};

/// Deck group of the covering together with the homomorphism sending each
/// branch meridian basis vector to its declared image.
CoveringGroup covering_group(const LinkContext& ctx,
                             const CoveringSpec& spec);

/// Covering with target Z/m_1 + ... + Z/m_t (canonicalized) and meridian
/// images given in the declared moduli coordinates.
CoveringSpec covering_from_moduli(
    const LinkContext& ctx, std::span<const std::string> branch,
    std::span<const Int> moduli,
    const std::vector<std::vector<Int>>& images_in_moduli_coords);

/// The covering sending the i-th branch meridian to the i-th unit vector of
/// Z/m_1 + ... + Z/m_t.
CoveringSpec standard_covering(const LinkContext& ctx,
                               std::span<const std::string> branch,
                               std::span<const Int> moduli);

/// psi applied to the meridian class of the knot (zero for knots outside
/// the branch link).
GroupElement meridian_image(const LinkContext& ctx, const CoveringSpec& spec,
                            std::size_t knot);

/// psi applied to the longitude class of the knot.
GroupElement longitude_image(const LinkContext& ctx, const CoveringSpec& spec,
                             std::size_t knot);

// --- JSON interface -------------------------------------------------------

struct LinkFile {
    LinkContext ctx;
    std::optional<CoveringSpec> covering;
};

/// Parses the link file format; schema violations raise malformed_input (or
/// the specific validation code) with a JSON-pointer-annotated message.
LinkFile parse_link_json(const std::string& text, const std::string& origin);
LinkFile load_link_file(const std::string& path);

} // namespace cft3m
