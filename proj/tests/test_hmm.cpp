#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "minent/hmm.hpp"
#include "minent/json_io.hpp"
#include "minent/reference.hpp"
#include "minent/rng.hpp"
#include "support/generators.hpp"

using namespace minent;
using testsupport::random_hmm;
using testsupport::symbols;
using testsupport::uninformative_hmm;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("construction rejects non-stochastic inputs") {
    Eigen::MatrixXd ok_t = Eigen::MatrixXd::Identity(2, 2);
    std::vector<Eigen::MatrixXd> ok_e{Eigen::MatrixXd::Constant(2, 2, 0.5)};
    Eigen::VectorXd ok_mu = Eigen::Vector2d(0.3, 0.7);

    CHECK_NOTHROW(Hmm({"x", "y"}, {"a"}, ok_t, ok_e, ok_mu));

    Eigen::MatrixXd bad_t = ok_t;
    bad_t(0, 0) = 0.9;
    CHECK_THROWS_AS(Hmm({"x", "y"}, {"a"}, bad_t, ok_e, ok_mu), std::invalid_argument);

    bad_t = ok_t;
    bad_t(0, 0) = -0.5;
    bad_t(1, 0) = 1.5;
    CHECK_THROWS_AS(Hmm({"x", "y"}, {"a"}, bad_t, ok_e, ok_mu), std::invalid_argument);

    std::vector<Eigen::MatrixXd> bad_e{Eigen::MatrixXd::Constant(2, 2, 0.4)};
    CHECK_THROWS_AS(Hmm({"x", "y"}, {"a"}, ok_t, bad_e, ok_mu), std::invalid_argument);

    CHECK_THROWS_AS(Hmm({"x", "y"}, {"a"}, ok_t, ok_e, Eigen::Vector2d(0.5, 0.6)),
                    std::invalid_argument);
}

TEST_CASE("initial support lists exactly the positive-mass states") {
    Eigen::MatrixXd t = Eigen::MatrixXd::Identity(3, 3);
    std::vector<Eigen::MatrixXd> e{Eigen::MatrixXd::Constant(2, 3, 0.5)};
    Hmm hmm(symbols("o", 2), {"a"}, t, e, Eigen::Vector3d(0.25, 0.0, 0.75));
    CHECK(hmm.initial_support() == std::vector<int>{0, 2});
}

TEST_CASE("observable operator equals transition when the emission is certain") {
    Pcg32 rng(11, 0);
    Eigen::MatrixXd t = testsupport::random_column_stochastic(3, 3, rng);
    std::vector<Eigen::MatrixXd> e{Eigen::MatrixXd::Ones(1, 3)};  // one symbol, always emitted
    Hmm hmm({"only"}, {"a"}, t, e, testsupport::random_distribution(3, rng));
    CHECK((observable_operator(hmm, 0, 0).matrix - t).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("observable operator on identity transition picks emission columns") {
    Eigen::MatrixXd t = Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd e(2, 2);
    e << 0.9, 0.2, 0.1, 0.8;
    Hmm hmm(symbols("o", 2), {"a"}, t, {e}, Eigen::Vector2d(0.5, 0.5));
    Eigen::MatrixXd expected(2, 2);
    expected << 0.9, 0.0, 0.0, 0.2;
    CHECK((observable_operator(hmm, 0, 0).matrix - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("observable operator matches the entrywise product oracle") {
    Pcg32 rng(17, 0);
    Hmm hmm = random_hmm(3, 2, 2, rng);
    for (int o = 0; o < 2; ++o) {
        for (int a = 0; a < 2; ++a) {
            Eigen::MatrixXd m = observable_operator(hmm, o, a).matrix;
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    CHECK(std::abs(m(i, j) - hmm.transition()(i, j) * hmm.emissions(a)(o, j)) <=
                          1e-15);
                }
            }
        }
    }
}

TEST_CASE("operators over all observations sum back to the transition") {
    Pcg32 rng(23, 0);
    for (int trial = 0; trial < 20; ++trial) {
        Hmm hmm = random_hmm(2 + trial % 3, 2 + trial % 2, 1 + trial % 3, rng);
        for (int a = 0; a < hmm.num_actions(); ++a) {
            Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(hmm.num_states(), hmm.num_states());
            for (int o = 0; o < hmm.num_observations(); ++o) {
                sum += observable_operator(hmm, o, a).matrix;
            }
            CHECK((sum - hmm.transition()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("unknown symbols are named in the error") {
    Pcg32 rng(5, 0);
    Hmm hmm = random_hmm(2, 2, 2, rng);
    CHECK_THROWS_WITH_AS(observable_operator(hmm, "bogus", "a0"),
                         "unknown observation symbol 'bogus'", std::domain_error);
    CHECK_THROWS_WITH_AS(observable_operator(hmm, "o0", "nope"),
                         "unknown action symbol 'nope'", std::domain_error);
}

TEST_CASE("one-step likelihood with symmetric mass is log(1/2)") {
    Eigen::MatrixXd t = Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd e(2, 2);
    e << 0.9, 0.1, 0.1, 0.9;
    Hmm hmm(symbols("o", 2), {"a"}, t, {e}, Eigen::Vector2d(0.5, 0.5));
    std::vector<int> o{0}, a{0};
    CHECK(sequence_log_likelihood(hmm, o, a) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
}

TEST_CASE("uninformative emissions factor into per-step uniform terms") {
    Pcg32 rng(31, 0);
    Hmm hmm = uninformative_hmm(3, 4, 2, rng);
    std::vector<int> o{0, 3, 1, 2, 2}, a{1, 0, 0, 1, 0};
    CHECK(sequence_log_likelihood(hmm, o, a) ==
          doctest::Approx(5 * std::log(0.25)).epsilon(1e-12));
}

TEST_CASE("likelihood matches exhaustive hidden-path enumeration") {
    Pcg32 rng(37, 0);
    for (int trial = 0; trial < 10; ++trial) {
        Hmm hmm = random_hmm(3, 2, 2, rng);
        std::vector<int> o{int(rng.next_u32() % 2), int(rng.next_u32() % 2),
                           int(rng.next_u32() % 2), int(rng.next_u32() % 2)};
        std::vector<int> a{int(rng.next_u32() % 2), int(rng.next_u32() % 2),
                           int(rng.next_u32() % 2), int(rng.next_u32() % 2)};
        double via_operators = std::exp(sequence_log_likelihood(hmm, o, a));
        CHECK(std::abs(via_operators - ref::path_sequence_likelihood(hmm, o, a)) <= 1e-10);
    }
}

TEST_CASE("usage errors: length mismatch and empty sequences") {
    Pcg32 rng(41, 0);
    Hmm hmm = random_hmm(2, 2, 2, rng);
    std::vector<int> o{0, 1}, a{0};
    CHECK_THROWS_AS(sequence_log_likelihood(hmm, o, a), std::invalid_argument);
    std::vector<int> empty;
    CHECK_THROWS_AS(sequence_log_likelihood(hmm, empty, empty), std::invalid_argument);
}

TEST_CASE("likelihoods over all observation sequences sum to one") {
    Pcg32 rng(43, 0);
    Hmm hmm = random_hmm(3, 3, 2, rng);
    const int steps = 4;
    std::vector<int> a{0, 1, 1, 0};
    std::vector<int> o(steps, 0);
    double total = 0.0;
    while (true) {
        total += std::exp(sequence_log_likelihood(hmm, o, a));
        int pos = steps - 1;
        while (pos >= 0 && ++o[pos] == hmm.num_observations()) {
            o[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("rescaled computation agrees with the naive operator product") {
    Pcg32 rng(47, 0);
    for (int trial = 0; trial < 10; ++trial) {
        Hmm hmm = random_hmm(3, 2, 2, rng);
        const int steps = 12;
        std::vector<int> o(steps), a(steps);
        for (int t = 0; t < steps; ++t) {
            o[t] = int(rng.next_u32() % 2);
            a[t] = int(rng.next_u32() % 2);
        }
        double naive = ref::naive_sequence_likelihood(hmm, o, a);
        REQUIRE(naive > 1e-250);
        CHECK(std::abs(std::exp(sequence_log_likelihood(hmm, o, a)) - naive) <= 1e-10);
    }
}

TEST_CASE("prefix likelihood never falls below any extension") {
    Pcg32 rng(53, 0);
    Hmm hmm = random_hmm(3, 2, 2, rng);
    std::vector<int> o{1, 0, 1, 1, 0, 0}, a{0, 1, 0, 0, 1, 1};
    double previous = 0.0;  // log 1
    for (std::size_t len = 1; len <= o.size(); ++len) {
        std::span<const int> so(o.data(), len), sa(a.data(), len);
        double current = sequence_log_likelihood(hmm, so, sa);
        CHECK(current <= previous + 1e-12);
        previous = current;
    }
}

TEST_CASE("horizons in the hundreds do not underflow") {
    Pcg32 rng(59, 0);
    Hmm hmm = uninformative_hmm(3, 4, 2, rng);
    const int steps = 600;  // 0.25^600 is far below the denormal range
    std::vector<int> o(steps), a(steps);
    for (int t = 0; t < steps; ++t) {
        o[t] = int(rng.next_u32() % 4);
        a[t] = int(rng.next_u32() % 2);
    }
    double log_prob = sequence_log_likelihood(hmm, o, a);
    CHECK(std::isfinite(log_prob));
    CHECK(log_prob == doctest::Approx(steps * std::log(0.25)).epsilon(1e-12));
    // The naive product is flushed to zero far before t = 200.
    CHECK(ref::naive_sequence_likelihood(hmm, o, a) == 0.0);
}

TEST_CASE("conditional likelihoods mix back to the marginal") {
    Pcg32 rng(61, 0);
    Hmm hmm = random_hmm(4, 2, 2, rng);
    std::vector<int> o{0, 1, 1}, a{1, 0, 1};
    double mixture = 0.0;
    for (int s0 = 0; s0 < hmm.num_states(); ++s0) {
        mixture += hmm.mu0()(s0) * std::exp(sequence_log_likelihood_from(hmm, s0, o, a));
    }
    double marginal = std::exp(sequence_log_likelihood(hmm, o, a));
    CHECK(mixture == doctest::Approx(marginal).epsilon(1e-12));
}

TEST_CASE("deterministic chain yields probability one or exactly zero") {
    // Cycle 0 -> 1 -> 2 -> 0 with state-revealing emissions.
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(3, 3);
    t(1, 0) = t(2, 1) = t(0, 2) = 1.0;
    std::vector<Eigen::MatrixXd> e{Eigen::MatrixXd::Identity(3, 3)};
    Hmm hmm(symbols("o", 3), {"a"}, t, e, Eigen::Vector3d(1.0, 0.0, 0.0));

    std::vector<int> consistent{0, 1, 2, 0}, a(4, 0);
    CHECK(sequence_log_likelihood_from(hmm, 0, consistent, a) == doctest::Approx(0.0));
    std::vector<int> broken{0, 1, 1, 0};
    CHECK(sequence_log_likelihood_from(hmm, 0, broken, a) == -kInf);
    CHECK(sequence_log_likelihood_from(hmm, 1, consistent, a) == -kInf);
}

TEST_CASE("conditional likelihood matches enumeration with the start fixed") {
    Pcg32 rng(67, 0);
    Hmm hmm = random_hmm(3, 2, 2, rng);
    std::vector<int> o{1, 0, 0}, a{0, 1, 1};
    for (int s0 = 0; s0 < 3; ++s0) {
        CHECK(std::abs(std::exp(sequence_log_likelihood_from(hmm, s0, o, a)) -
                       ref::path_sequence_likelihood_from(hmm, s0, o, a)) <= 1e-10);
    }
    CHECK_THROWS_AS(sequence_log_likelihood_from(hmm, 7, o, a), std::domain_error);
}

TEST_CASE("cehmm-v1 serialization round trips exactly") {
    Pcg32 rng(71, 0);
    Hmm hmm = random_hmm(3, 2, 2, rng);
    std::string text = io::hmm_to_json(hmm);
    Hmm back = io::hmm_from_json(text);
    CHECK(back.observations() == hmm.observations());
    CHECK(back.actions() == hmm.actions());
    CHECK((back.transition() - hmm.transition()).cwiseAbs().maxCoeff() == 0.0);
    for (int a = 0; a < 2; ++a) {
        CHECK((back.emissions(a) - hmm.emissions(a)).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK((back.mu0() - hmm.mu0()).cwiseAbs().maxCoeff() == 0.0);
    // Writing again gives identical bytes.
    CHECK(io::hmm_to_json(back) == text);

    CHECK_THROWS_AS(io::hmm_from_json("{\"format\":\"other\"}"), std::invalid_argument);
}
