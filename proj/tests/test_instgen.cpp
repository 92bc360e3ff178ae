#include <doctest.h>

#include <sstream>

#include "rflp/errors.hpp"
#include "rflp/instgen.hpp"
#include "test_util.hpp"

using namespace rflp;

TEST_SUITE_BEGIN("instgen");

TEST_CASE("same seed gives identical instances") {
    gen_params params;
    params.n = 10;
    params.seed = 42;
    CHECK(generate_instance(params) == generate_instance(params));

    params.seed = 43;
    CHECK_FALSE(generate_instance(params) == generate_instance({10, 0.0, 1.0, 0, 1000, 500, 1500,
                                                                0.05, 42}));
}

TEST_CASE("generated values stay inside the configured ranges") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        gen_params params;
        params.n = 100;
        params.seed = seed;
        const instance inst = generate_instance(params);
        CHECK(inst.n == 100);
        CHECK(inst.coords.size() == 100);
        for (const auto& c : inst.coords) {
            CHECK(c.x >= 0.0);
            CHECK(c.x < 1.0);
            CHECK(c.y >= 0.0);
            CHECK(c.y < 1.0);
        }
        for (auto h : inst.demands) {
            CHECK(h >= 0);
            CHECK(h <= 1000);
        }
        for (auto f : inst.fixed_costs) {
            CHECK(f >= 500);
            CHECK(f <= 1500);
        }
        CHECK(inst.failure_prob == 0.05);
    }
}

TEST_CASE("degenerate ranges pin the drawn values") {
    gen_params params;
    params.n = 20;
    params.demand_min = 5;
    params.demand_max = 5;
    params.seed = 7;
    const instance inst = generate_instance(params);
    for (auto h : inst.demands) CHECK(h == 5);
}

TEST_CASE("n = 0 is a usage error") {
    gen_params params;
    params.n = 0;
    CHECK_THROWS_AS(generate_instance(params), std::invalid_argument);
}

TEST_CASE("write/read round-trips exactly") {
    for (std::uint64_t seed : {1ULL, 99ULL, 123456789ULL}) {
        const instance inst = rflp_test::random_instance(30, seed);
        std::stringstream buffer;
        write_instance(inst, buffer);
        const instance back = read_instance(buffer, "buffer");
        CHECK(back == inst); // exact, including coordinate bits
    }
}

TEST_CASE("rewriting a read instance is byte-identical") {
    const instance inst = rflp_test::random_instance(12, 4);
    std::stringstream first;
    write_instance(inst, first);
    std::stringstream second;
    write_instance(read_instance(first, "first"), second);
    CHECK(first.str() == second.str());
}

TEST_CASE("metadata survives the round trip") {
    const instance inst = rflp_test::tiny3();
    std::stringstream buffer;
    write_instance(inst, buffer, {{"seed", "42"}, {"note", "hand fixture"}});
    instance_metadata meta;
    read_instance(buffer, "buffer", &meta);
    REQUIRE(meta.size() == 2);
    CHECK(meta[0] == std::pair<std::string, std::string>{"seed", "42"});
    CHECK(meta[1] == std::pair<std::string, std::string>{"note", "hand fixture"});
}

TEST_CASE("hand-written fixture file parses") {
    const std::string text =
        "rflp-instance v1\n"
        "n 3\n"
        "failure_prob 0.05\n"
        "coords\n"
        "0 0\n"
        "1 0\n"
        "0 1\n"
        "demands\n"
        "100\n"
        "0\n"
        "200\n"
        "fixed_costs\n"
        "500\n"
        "600\n"
        "700\n"
        "end\n";
    std::istringstream in(text);
    const instance inst = read_instance(in, "tiny3");
    CHECK(inst == rflp_test::tiny3());
}

TEST_CASE("malformed files raise parse errors naming the line") {
    auto expect_error = [](const std::string& text, const char* needle) {
        std::istringstream in(text);
        try {
            read_instance(in, "bad");
            FAIL("expected parse_error");
        } catch (const parse_error& e) {
            CHECK(std::string(e.what()).find("bad:") == 0);
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    SUBCASE("bad header") {
        expect_error("not-an-instance\n", "bad header");
    }
    SUBCASE("version mismatch") {
        expect_error("rflp-instance v9\nn 3\n", "unsupported format version");
    }
    SUBCASE("missing demands section") {
        expect_error(
            "rflp-instance v1\nn 2\nfailure_prob 0\ncoords\n0 0\n1 1\nfixed_costs\n500\n500\nend\n",
            "expected section 'demands'");
    }
    SUBCASE("non-numeric demand") {
        expect_error(
            "rflp-instance v1\nn 2\nfailure_prob 0\ncoords\n0 0\n1 1\ndemands\nfoo\n1\n"
            "fixed_costs\n500\n500\nend\n",
            "demands[0]");
    }
    SUBCASE("truncated file") {
        expect_error("rflp-instance v1\nn 2\nfailure_prob 0\ncoords\n0 0\n", "unexpected end");
    }
    SUBCASE("invariant violation is reported with a location") {
        expect_error(
            "rflp-instance v1\nn 2\nfailure_prob 0\ncoords\n0 0\n2 2\ndemands\n1\n1\n"
            "fixed_costs\n500\n500\nend\n",
            "unit square");
    }
}

TEST_SUITE_END();
