#include "recon/bias.hpp"
#include "recon/errors.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace recon;
using testutil::S;
using testutil::bias;

TEST_CASE("conforms checks every constraint") {
    // Length window.
    CHECK(conforms(bias(1, 2), S("p(X)")));
    CHECK_FALSE(conforms(bias(2, 3), S("p(X)")));
    CHECK_FALSE(conforms(bias(1, 2), S("p(X), q(X), r(X, Y)")));

    // Variable budget.
    CHECK(conforms(bias(1, 3, 2), S("r(X, Y)")));
    CHECK_FALSE(conforms(bias(1, 3, 1), S("r(X, Y)")));

    // Connectedness.
    CHECK_FALSE(conforms(bias(1, 3), S("p(X), q(Y)")));
    CHECK(conforms(bias(1, 3, std::nullopt, false), S("p(X), q(Y)")));

    // Variables only.
    CHECK_FALSE(conforms(bias(1, 3), S("p(a)")));
    CHECK(conforms(bias(1, 3, std::nullopt, true, false), S("p(a)")));

    // Core requirement: r(X,Y), r(X,Z) folds, so it is not a core.
    CHECK_FALSE(conforms(bias(1, 3), S("r(X, Y), r(X, Z)")));
    CHECK(conforms(bias(1, 3, std::nullopt, true, true, false), S("r(X, Y), r(X, Z)")));
    CHECK(conforms(bias(1, 3), S("r(X, Y), r(Y, Z)")));
}

TEST_CASE("bias files parse, validate and round-trip") {
    LanguageBias b = parse_bias_text("# comment\n"
                                     "min_len = 2\n"
                                     "max_len = 3\n"
                                     "max_vars = 2\n"
                                     "connected = true\n"
                                     "variables_only = true\n"
                                     "require_core = false\n");
    CHECK(b == bias(2, 3, 2, true, true, false));
    CHECK(parse_bias_text(write_bias(b)) == b);

    LanguageBias defaults = parse_bias_text("");
    CHECK(defaults == LanguageBias{});
    CHECK(parse_bias_text("max_vars = none\n").max_vars == std::nullopt);

    CHECK_THROWS_AS(parse_bias_text("min_len = 0\n"), BiasError);
    CHECK_THROWS_AS(parse_bias_text("min_len = 3\nmax_len = 2\n"), BiasError);
    CHECK_THROWS_AS(parse_bias_text("max_vars = 0\n"), BiasError);
    CHECK_THROWS_AS(parse_bias_text("nonsense = 1\n"), BiasError);
    CHECK_THROWS_AS(parse_bias_text("connected = maybe\n"), BiasError);
    CHECK_THROWS_AS(parse_bias_text("min_len two\n"), BiasError);
    CHECK_THROWS_AS(parse_bias_file("/nonexistent/path.bias"), BiasError);
}

TEST_CASE("bias headers round-trip") {
    LanguageBias b = bias(1, 2, std::nullopt, false, true, false);
    CHECK(parse_bias_header(bias_to_header(b)) == b);
    LanguageBias c = bias(2, 3, 4);
    CHECK(parse_bias_header(bias_to_header(c)) == c);
    CHECK_THROWS_AS(parse_bias_header("min_len=1 garbage"), BiasError);
}
