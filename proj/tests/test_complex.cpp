#include <doctest.h>

#include <random>
#include <set>

#include "hdx/complex.hpp"
#include "hdx/errors.hpp"
#include "hdx/instance_io.hpp"
#include "oracles.hpp"

using namespace hdx;

namespace {

PureSimplicialComplex two_triangles() {
    // Two triangles sharing the edge {1,2}, unequal weights.
    return build_from_top_faces(3, {{Face({0, 1, 2}), 1.0}, {Face({1, 2, 3}), 3.0}});
}

}  // namespace

TEST_CASE("faces are sorted sets") {
    const Face f({3, 1, 2});
    CHECK(f.to_string() == "{1,2,3}");
    CHECK(f.contains(2));
    CHECK_FALSE(f.contains(0));
    CHECK(f.without(2) == Face({1, 3}));
    CHECK(f.with(0) == Face({0, 1, 2, 3}));
    CHECK(Face({1}).is_subset_of(f));
    CHECK(Face({1, 2}).set_union(Face({2, 5})) == Face({1, 2, 5}));
    CHECK(f.set_difference(Face({2})) == Face({1, 3}));
    CHECK(Face().to_string() == "{}");
    CHECK(Face({0, 1}) < Face({0, 2}));
    CHECK_THROWS_AS(Face({1, 1}), InvalidParameterError);
}

TEST_CASE("complete complex n=3 d=2 follows the cover recursion") {
    const auto c = generate_complete_complex(3, 2);
    CHECK(c.face_counts() == std::vector<std::size_t>{1, 3, 3});
    for (const Face& v : c.faces(1)) CHECK(c.weight(v) == doctest::Approx(2.0));
    // Each vertex has two unit-weight covers, and ∅ has three vertices of weight 2.
    CHECK(c.total_weight() == doctest::Approx(6.0));
    const auto pi1 = level_distribution(c, 1);
    for (Eigen::Index i = 0; i < 3; ++i) CHECK(pi1.probabilities[i] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("face counts of complete complexes are binomials") {
    for (std::size_t n = 2; n <= 7; ++n)
        for (std::size_t d = 1; d <= n; ++d) {
            const auto c = generate_complete_complex(n, d);
            for (std::size_t k = 0; k <= d; ++k)
                CHECK(static_cast<double>(c.level_size(k)) == oracle::binomial(n, k));
        }
}

TEST_CASE("weights match the chain-count formula") {
    const auto c = generate_random_complex(7, 4, 0.5, 11);
    for (std::size_t k = 0; k <= c.dimension(); ++k)
        for (const Face& s : c.faces(k))
            CHECK(c.weight(s) == doctest::Approx(oracle::weight_by_chains(c, s)).epsilon(1e-12));
    CHECK(weight_recursion_residual(c) <= 1e-12);
}

TEST_CASE("marginals match direct summation over top faces") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto c = generate_random_complex(8, 3, 0.4, seed);
        for (std::size_t k = 0; k <= 3; ++k) {
            const Eigen::VectorXd direct = oracle::marginal(c, k);
            const Eigen::VectorXd lib = level_distribution(c, k).probabilities;
            CHECK((direct - lib).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK(lib.sum() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("structural errors") {
    CHECK_THROWS_AS(build_from_top_faces(2, {}), EmptyComplexError);
    CHECK_THROWS_AS(build_from_top_faces(2, {{Face({0, 1}), 1.0}, {Face({0, 1, 2}), 1.0}}), PurityError);
    CHECK_THROWS_AS(build_from_top_faces(2, {{Face({0, 1}), 1.0}, {Face({1, 0}), 1.0}}), DuplicateFaceError);
    CHECK_THROWS_AS(build_from_top_faces(2, {{Face({0, 1}), -1.0}}), InvalidParameterError);
    CHECK_THROWS_AS(build_from_top_faces(2, {{Face({0, 5}), 1.0}}, 3), InvalidParameterError);
    CHECK_THROWS_AS(generate_complete_complex(30, 15, BuildOptions{1000}), GuardrailError);

    const auto c = two_triangles();
    CHECK_THROWS_AS(c.faces(4), LevelOutOfRangeError);
    CHECK_THROWS_AS(c.index_of(Face({0, 3})), NotAFaceError);
    CHECK_THROWS_AS(c.weight(Face({0, 3})), NotAFaceError);
    CHECK_THROWS_AS(link(c, Face({0, 3})), NotAFaceError);
}

TEST_CASE("links keep labels and conditional weights") {
    const auto c = two_triangles();
    const Link lk = link(c, Face({1}));
    CHECK(lk.complex.dimension() == 2);
    CHECK(lk.complex.faces(2) == std::vector<Face>{Face({0, 2}), Face({2, 3})});
    CHECK(lk.complex.weights(2) == std::vector<double>{1.0, 3.0});
    // Vertex 2 lies in both edges of the link; 0 and 3 in one each.
    const auto pi1 = level_distribution(lk.complex, 1);
    CHECK(lk.complex.faces(1) == std::vector<Face>{Face({0}), Face({2}), Face({3})});
    CHECK(pi1.probabilities[0] == doctest::Approx(1.0 / 8.0));
    CHECK(pi1.probabilities[1] == doctest::Approx(4.0 / 8.0));
    CHECK(pi1.probabilities[2] == doctest::Approx(3.0 / 8.0));

    for (const Face& s : {Face(), Face({1}), Face({1, 2}), Face({3})})
        CHECK(link_consistency_residual(c, s) <= 1e-12);
}

TEST_CASE("mixture identity holds on random complexes") {
    for (std::uint64_t seed : {5u, 6u}) {
        const auto c = generate_random_complex(7, 4, 0.5, seed);
        for (std::size_t k = 2; k <= 4; ++k) CHECK(mixture_identity_residual(c, k) <= 1e-12);
    }
    CHECK_THROWS_AS(mixture_identity_residual(two_triangles(), 1), LevelOutOfRangeError);
}

TEST_CASE("graphic matroid bases are spanning trees") {
    // K4: Cayley's formula gives 4^2 = 16 spanning trees.
    const std::vector<std::pair<std::size_t, std::size_t>> k4 = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    const auto c = generate_graphic_matroid_bases(k4);
    CHECK(c.dimension() == 3);
    CHECK(c.level_size(3) == 16);
    // Every 3-subset of edges except the 4 triangles.
    CHECK(oracle::binomial(6, 3) - 4 == 16);

    // A triangle with a pendant edge: the pendant edge is in every tree.
    const auto t = generate_graphic_matroid_bases({{0, 1}, {1, 2}, {0, 2}, {2, 3}});
    CHECK(t.level_size(3) == 3);
    for (const Face& f : t.faces(3)) CHECK(f.contains(3));

    CHECK_THROWS_AS(generate_graphic_matroid_bases({{0, 1}, {2, 3}}), DisconnectedGraphError);
}

TEST_CASE("random complexes are reproducible") {
    const auto a = generate_random_complex(8, 3, 0.5, 7);
    const auto b = generate_random_complex(8, 3, 0.5, 7);
    CHECK(a.faces(3) == b.faces(3));
    CHECK(a.weights(3) == b.weights(3));
    for (double w : a.weights(3)) {
        CHECK(w >= 0.2);
        CHECK(w <= 2.0);
    }
    CHECK_THROWS_AS(generate_random_complex(5, 6, 0.5, 1), InvalidParameterError);
    CHECK_THROWS_AS(generate_random_complex(5, 2, 0.0, 1), InvalidParameterError);
}

TEST_CASE("instance JSON round trip") {
    const auto c = two_triangles();
    const auto back = parse_instance(dump_instance(c));
    CHECK(back.faces(3) == c.faces(3));
    CHECK(back.weights(3) == c.weights(3));
    CHECK(back.ground_set_size() == c.ground_set_size());
}

TEST_CASE("instance parse errors") {
    CHECK_THROWS_AS(parse_instance("{\"d\": 2", "broken.json"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"d": 2, "ground_set_size": 3})"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"d": 2, "ground_set_size": 3,
        "top_faces": [{"elements": [0, 1], "weight": 0}]})"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"d": 2, "ground_set_size": 3,
        "top_faces": [{"elements": [0, 7]}]})"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"d": 2, "ground_set_size": 3,
        "top_faces": [{"elements": [0, 1]}, {"elements": [0, 1, 2]}]})"), PurityError);
    CHECK_THROWS_AS(load_instance("/nonexistent/instance.json"), IoError);

    try {
        parse_instance("{\"d\": 2,\n \"ground_set_size\": }", "bad.json");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bad.json") != std::string::npos);
        CHECK(msg.find("line 2") != std::string::npos);
    }
}

TEST_CASE("generator specs") {
    CHECK(generate_instance("complete:n=6,d=4").face_counts() == std::vector<std::size_t>{1, 6, 15, 20, 15});
    CHECK(generate_instance("matroid:edges=0-1;1-2;0-2").level_size(2) == 3);
    CHECK(generate_instance("random:n=8,d=3,density=0.5,seed=7").dimension() == 3);
    CHECK_THROWS_AS(generate_instance("torus:n=3"), ParseError);
    CHECK_THROWS_AS(generate_instance("complete:n=6"), ParseError);
    CHECK_THROWS_AS(generate_instance("complete:n=x,d=2"), ParseError);
}
