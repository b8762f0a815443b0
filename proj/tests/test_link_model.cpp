#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cft3m/link_model.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cft3m;
namespace oracle = cft3m::testing;

TEST_CASE("validation accepts the hopf context and flags violations") {
    CHECK_FALSE(validate(fixtures::hopf()).has_value());

    LinkContext asym({"K1", "K2"}, IntMatrix::from_rows({{0, 1}, {2, 0}}));
    auto issue = validate(asym);
    REQUIRE(issue.has_value());
    CHECK(issue->code == ErrorCode::symmetry_violation);

    LinkContext diag({"K1"}, IntMatrix::from_rows({{1}}));
    issue = validate(diag);
    REQUIRE(issue.has_value());
    CHECK(issue->code == ErrorCode::nonzero_diagonal);

    LinkContext dup({"K1", "K1"}, IntMatrix(2, 2));
    issue = validate(dup);
    REQUIRE(issue.has_value());
    CHECK(issue->code == ErrorCode::duplicate_name);
}

TEST_CASE("meridian classes") {
    const auto ctx = fixtures::hopf_with_probe();
    const auto l = SublinkRef::of(ctx, fixtures::names({"K1", "K2"}));

    CHECK(meridian_class(ctx, 0, l) == std::vector<Int>{1, 0});
    CHECK(meridian_class(ctx, 2, l) == std::vector<Int>{0, 0});

    const auto single = SublinkRef::of(ctx, fixtures::names({"K2"}));
    CHECK(meridian_class(ctx, 1, single) == std::vector<Int>{1});

    CHECK_THROWS_AS(meridian_class(ctx, 9, l), Error);
}

TEST_CASE("longitude classes carry the linking numbers") {
    const auto ctx = fixtures::hopf_with_probe();
    const auto l = SublinkRef::of(ctx, fixtures::names({"K1", "K2"}));

    CHECK(longitude_class(ctx, 0, l) == std::vector<Int>{0, 1});
    CHECK(longitude_class(ctx, 2, l) == std::vector<Int>{1, 0});

    const LinkContext unknot({"K1"}, IntMatrix(1, 1));
    const auto only = SublinkRef::of(unknot, fixtures::names({"K1"}));
    CHECK(longitude_class(unknot, 0, only) == std::vector<Int>{0});
}

TEST_CASE("peripheral classes ignore knots outside the sublink") {
    // locality: the class over L is unchanged by any other knot's linking
    std::mt19937_64 eng(7);
    for (int iter = 0; iter < 100; ++iter) {
        const std::size_t s = oracle::rand_range(eng, 2, 5);
        const auto ctx = fixtures::random_context(eng, s, 5);
        std::vector<std::string> sub;
        for (std::size_t i = 0; i < s; ++i)
            if (oracle::rand_range(eng, 0, 1)) sub.push_back(ctx.name(i));
        if (sub.empty()) sub.push_back(ctx.name(0));
        const auto l = SublinkRef::of(ctx, sub);

        std::vector<Int> row(s + 0);
        for (auto& v : row) v = oracle::rand_range(eng, -5, 5);
        const auto extended = ctx.with_extra_knot("Kx", row);
        const auto l2 = SublinkRef::of(extended, sub);
        for (std::size_t k = 0; k < s; ++k) {
            CHECK(meridian_class(ctx, k, l) == meridian_class(extended, k, l2));
            CHECK(longitude_class(ctx, k, l) ==
                  longitude_class(extended, k, l2));
        }
    }
}

TEST_CASE("longitude class has no self contribution") {
    std::mt19937_64 eng(8);
    for (int iter = 0; iter < 100; ++iter) {
        const std::size_t s = oracle::rand_range(eng, 1, 5);
        const auto ctx = fixtures::random_context(eng, s, 5);
        std::vector<std::size_t> all(s);
        for (std::size_t i = 0; i < s; ++i) all[i] = i;
        const auto l = SublinkRef::of_indices(ctx, all);
        for (std::size_t k = 0; k < s; ++k) {
            const auto lon = longitude_class(ctx, k, l);
            const auto mer = meridian_class(ctx, k, l);
            const auto pos = *l.position_of(k);
            CHECK(lon[pos] == 0);
            CHECK(mer[pos] == 1);
        }
    }
}

TEST_CASE("covering group of the worked examples") {
    const auto ctx = fixtures::hopf();
    const auto spec = standard_covering(ctx, fixtures::names({"K1", "K2"}),
                                        std::vector<Int>{2, 2});
    const auto cg = covering_group(ctx, spec);
    CHECK(cg.group == FinGenAbGroup(0, {Int(2), Int(2)}));
    CHECK(cg.psi.apply(GroupElement{{Int(1), Int(0)}}) ==
          spec.meridian_image_at(0));

    const LinkContext unknot({"K1"}, IntMatrix(1, 1));
    const auto z3 = standard_covering(unknot, fixtures::names({"K1"}),
                                      std::vector<Int>{3});
    CHECK(covering_group(unknot, z3).group == FinGenAbGroup(0, {Int(3)}));
    CHECK(z3.is_standard());
}

TEST_CASE("non-generating meridian images are rejected") {
    const LinkContext unknot({"K1"}, IntMatrix(1, 1));
    const std::vector<std::vector<Int>> images{{Int(2)}};
    CHECK_THROWS_AS(covering_from_moduli(unknot, fixtures::names({"K1"}),
                                         std::vector<Int>{4}, images),
                    Error);
    try {
        covering_from_moduli(unknot, fixtures::names({"K1"}),
                             std::vector<Int>{4}, images);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::not_surjective);
    }
}

TEST_CASE("moduli declarations canonicalize to invariant factors") {
    const auto ctx = fixtures::hopf();
    const auto spec = standard_covering(ctx, fixtures::names({"K1", "K2"}),
                                        std::vector<Int>{2, 3});
    CHECK(spec.target() == FinGenAbGroup(0, {Int(6)}));
    // images still generate and have the declared orders
    CHECK(*element_order(spec.target(), spec.meridian_image_at(0)) == 2);
    CHECK(*element_order(spec.target(), spec.meridian_image_at(1)) == 3);
}

TEST_CASE("branch declarations out of context order stay aligned") {
    const auto ctx = fixtures::hopf();
    const auto spec = standard_covering(ctx, fixtures::names({"K2", "K1"}),
                                        std::vector<Int>{5, 2});
    // K1 was declared second, so its meridian has order 2, K2's order 5
    CHECK(*element_order(spec.target(), meridian_image(ctx, spec, 0)) == 2);
    CHECK(*element_order(spec.target(), meridian_image(ctx, spec, 1)) == 5);
    CHECK(spec.is_standard());
    CHECK(spec.standard_moduli() == std::vector<Int>{2, 5});
}

TEST_CASE("json round trip on the hopf file") {
    const std::string text = R"({
      "knots": ["K1", "K2", "K3"],
      "linking": [[0, 1, 1], [1, 0, 0], [1, 0, 0]],
      "covering": {
        "branch": ["K1", "K2"],
        "target": [2, 2],
        "meridian_images": {"K1": [1, 0], "K2": [0, 1]}
      }
    })";
    const auto file = parse_link_json(text, "inline");
    CHECK(file.ctx.size() == 3);
    CHECK(file.ctx.lk(0, 1) == 1);
    REQUIRE(file.covering.has_value());
    CHECK(file.covering->target() == FinGenAbGroup(0, {Int(2), Int(2)}));
    CHECK(file.covering->is_standard());
    CHECK(file.covering->branch().indices() ==
          std::vector<std::size_t>{0, 1});
}

TEST_CASE("json schema violations carry position annotations") {
    const auto expect_error = [](const std::string& text,
                                 const std::string& fragment,
                                 std::optional<ErrorCode> code = {}) {
        try {
            parse_link_json(text, "t");
            FAIL_CHECK("expected a schema error for: " << text);
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find(fragment) != std::string::npos);
            if (code) CHECK(e.code() == *code);
        }
    };

    expect_error("{", "t: ");
    expect_error(R"({"linking": []})", "/", ErrorCode::malformed_input);
    expect_error(R"({"knots": ["K1"], "linking": [["x"]]})", "/linking/0/0");
    expect_error(R"({"knots": ["K1"], "linking": [[1]]})", "/linking",
                 ErrorCode::nonzero_diagonal);
    expect_error(R"({"knots": ["K1", "K2"],
                     "linking": [[0, 1], [2, 0]]})",
                 "/linking", ErrorCode::symmetry_violation);
    expect_error(R"({"knots": ["K1"], "linking": [[0]],
                     "covering": {"branch": ["K9"], "target": [2],
                                  "meridian_images": {"K9": [1]}}})",
                 "/covering/branch/0");
    expect_error(R"({"knots": ["K1"], "linking": [[0]],
                     "covering": {"branch": ["K1"], "target": [1],
                                  "meridian_images": {"K1": [1]}}})",
                 "/covering/target/0");
    expect_error(R"({"knots": ["K1"], "linking": [[0]],
                     "covering": {"branch": ["K1"], "target": [2],
                                  "meridian_images": {}}})",
                 "missing image");
}

TEST_CASE("data files on disk load and validate") {
    for (const char* name :
         {"hopf.json", "unknot3.json", "chain3.json", "torus-2-6.json"}) {
        const auto file =
            load_link_file(std::string(CFT3M_DATA_DIR "/") + name);
        CHECK_FALSE(validate(file.ctx).has_value());
        REQUIRE(file.covering.has_value());
        CHECK(file.covering->target().order() >= 2);
    }
}
