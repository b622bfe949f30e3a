#include <doctest.h>

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "minent/gradient.hpp"
#include "minent/inference.hpp"
#include "minent/json_io.hpp"
#include "support/generators.hpp"

using namespace minent;
using testsupport::random_hmm;
using testsupport::random_policy;
using testsupport::revealing_hmm;
using testsupport::uninformative_hmm;

TEST_CASE("constant posterior entropy makes the exact gradient vanish") {
    Pcg32 rng(41, 0);
    Hmm hmm = uninformative_hmm(3, 2, 2, rng);
    FiniteStatePolicy policy = random_policy(hmm, 1, rng);
    GradientEstimate grad = exact_gradient(hmm, policy, 3);
    CHECK(grad.vector.cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(grad.sample_count == 0);
}

TEST_CASE("zero posterior entropy makes the exact gradient vanish") {
    Pcg32 rng(42, 0);
    Hmm hmm = revealing_hmm(3, 2, rng);
    FiniteStatePolicy policy = random_policy(hmm, 1, rng);
    GradientEstimate grad = exact_gradient(hmm, policy, 2);
    CHECK(grad.vector.cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("exact gradient matches central finite differences") {
    Pcg32 rng(43, 0);
    for (int trial = 0; trial < 5; ++trial) {
        Hmm hmm = random_hmm(2 + trial % 3, 2, 2, rng);
        FiniteStatePolicy policy = random_policy(hmm, trial % 2, rng);
        const int horizon = 2;
        GradientEstimate grad = exact_gradient(hmm, policy, horizon);
        Eigen::VectorXd fd = finite_difference_gradient(hmm, policy, horizon, 1e-5);
        CHECK((grad.vector - fd).cwiseAbs().maxCoeff() <= 1e-6);
    }
}

TEST_CASE("exact gradient respects the entropy-times-score bound") {
    Pcg32 rng(44, 0);
    Hmm hmm = random_hmm(3, 2, 2, rng);
    FiniteStatePolicy policy = random_policy(hmm, 1, rng);
    const int horizon = 3;
    GradientEstimate grad = exact_gradient(hmm, policy, horizon);
    double bound = std::log2(double(hmm.initial_support().size())) * (horizon + 1);
    CHECK(grad.vector.lpNorm<Eigen::Infinity>() <= bound);
}

TEST_CASE("every memory-state row of the gradient sums to zero") {
    Pcg32 rng(45, 0);
    Hmm hmm = random_hmm(3, 2, 2, rng);
    FiniteStatePolicy policy = random_policy(hmm, 1, rng);
    GradientEstimate exact = exact_gradient(hmm, policy, 3);
    GradientEstimate sampled = sampled_gradient(hmm, policy, 3, 2000, 9);
    for (const GradientEstimate& estimate : {exact, sampled}) {
        for (int q = 0; q < policy.num_memory_states(); ++q) {
            double row = 0.0;
            for (int a = 0; a < policy.num_actions(); ++a) {
                row += estimate.vector(policy.parameter_index(q, a));
            }
            CHECK(std::abs(row) <= 1e-8);
        }
    }
}

TEST_CASE("exact gradient is identical across execution modes and thread counts") {
    Pcg32 rng(46, 0);
    Hmm hmm = random_hmm(3, 2, 2, rng);
    FiniteStatePolicy policy = random_policy(hmm, 1, rng);
    GradientEstimate serial = exact_gradient(hmm, policy, 3, {10'000'000, ExecMode::serial});
#ifdef _OPENMP
    int saved = omp_get_max_threads();
    std::vector<Eigen::VectorXd> results;
    for (int threads : {1, 3}) {
        omp_set_num_threads(threads);
        results.push_back(exact_gradient(hmm, policy, 3).vector);
    }
    omp_set_num_threads(saved);
    CHECK((results[0] - results[1]).cwiseAbs().maxCoeff() == 0.0);
    CHECK((results[0] - serial.vector).cwiseAbs().maxCoeff() <= 1e-12);
#else
    GradientEstimate parallel = exact_gradient(hmm, policy, 3);
    CHECK((parallel.vector - serial.vector).cwiseAbs().maxCoeff() <= 1e-12);
#endif
}

TEST_CASE("sampled gradient is deterministic in the seed") {
    Pcg32 rng(47, 0);
    Hmm hmm = random_hmm(3, 2, 2, rng);
    FiniteStatePolicy policy = random_policy(hmm, 1, rng);
    GradientEstimate first = sampled_gradient(hmm, policy, 4, 500, 1001);
    GradientEstimate second = sampled_gradient(hmm, policy, 4, 500, 1001);
    CHECK((first.vector - second.vector).cwiseAbs().maxCoeff() == 0.0);
    CHECK(first.entropy_estimate == second.entropy_estimate);

    GradientEstimate serial =
        sampled_gradient(hmm, policy, 4, 500, 1001, {false, ExecMode::serial});
    CHECK((first.vector - serial.vector).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sampled gradient converges to the exact gradient") {
    Pcg32 rng(48, 0);
    Hmm hmm = random_hmm(3, 2, 2, rng);
    FiniteStatePolicy policy = random_policy(hmm, 1, rng);
    GradientEstimate exact = exact_gradient(hmm, policy, 2);
    GradientEstimate sampled = sampled_gradient(hmm, policy, 2, 100000, 313);
    REQUIRE(sampled.stderr_vector.size() == sampled.vector.size());
    for (int i = 0; i < sampled.vector.size(); ++i) {
        CHECK(std::abs(sampled.vector(i) - exact.vector(i)) <=
              3 * sampled.stderr_vector(i) + 1e-12);
    }
    CHECK(sampled.sample_count == 100000);
}

TEST_CASE("a single zero-entropy sample contributes nothing") {
    Pcg32 rng(49, 0);
    Hmm hmm = revealing_hmm(2, 2, rng);
    FiniteStatePolicy policy = random_policy(hmm, 1, rng);
    GradientEstimate grad = sampled_gradient(hmm, policy, 2, 1, 5);
    CHECK(grad.vector.cwiseAbs().maxCoeff() == 0.0);
    CHECK(grad.entropy_estimate == 0.0);
}

TEST_CASE("the estimator is unbiased over many independent seeds") {
    Pcg32 rng(50, 0);
    Hmm hmm = random_hmm(2, 2, 2, rng);
    FiniteStatePolicy policy = random_policy(hmm, 0, rng);
    const int horizon = 2;
    GradientEstimate exact = exact_gradient(hmm, policy, horizon);

    const int seeds = 200;
    const int m = 500;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(policy.num_parameters());
    Eigen::VectorXd mean_sq = Eigen::VectorXd::Zero(policy.num_parameters());
    for (int s = 0; s < seeds; ++s) {
        Eigen::VectorXd v = sampled_gradient(hmm, policy, horizon, m, 10000 + s).vector;
        mean += v;
        mean_sq += v.cwiseProduct(v);
    }
    mean /= seeds;
    mean_sq /= seeds;
    Eigen::VectorXd se =
        ((mean_sq - mean.cwiseProduct(mean)).cwiseMax(0.0) / seeds).cwiseSqrt();
    for (int i = 0; i < mean.size(); ++i) {
        CHECK(std::abs(mean(i) - exact.vector(i)) <= 4 * se(i) + 1e-12);
    }
}

TEST_CASE("the mean-entropy baseline leaves the estimator unbiased") {
    Pcg32 rng(51, 0);
    Hmm hmm = random_hmm(2, 2, 2, rng);
    FiniteStatePolicy policy = random_policy(hmm, 0, rng);
    const int horizon = 2;
    GradientEstimate exact = exact_gradient(hmm, policy, horizon);

    const int seeds = 100;
    const int m = 2000;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(policy.num_parameters());
    Eigen::VectorXd mean_sq = Eigen::VectorXd::Zero(policy.num_parameters());
    SampledGradientOptions with_baseline;
    with_baseline.mean_entropy_baseline = true;
    for (int s = 0; s < seeds; ++s) {
        Eigen::VectorXd v =
            sampled_gradient(hmm, policy, horizon, m, 20000 + s, with_baseline).vector;
        mean += v;
        mean_sq += v.cwiseProduct(v);
    }
    mean /= seeds;
    mean_sq /= seeds;
    Eigen::VectorXd se =
        ((mean_sq - mean.cwiseProduct(mean)).cwiseMax(0.0) / seeds).cwiseSqrt();
    for (int i = 0; i < mean.size(); ++i) {
        CHECK(std::abs(mean(i) - exact.vector(i)) <= 4 * se(i) + 1e-12);
    }
}

TEST_CASE("finite differences vanish when the objective is flat") {
    Pcg32 rng(52, 0);
    Hmm hmm = uninformative_hmm(2, 2, 2, rng);
    FiniteStatePolicy policy = random_policy(hmm, 1, rng);
    Eigen::VectorXd fd = finite_difference_gradient(hmm, policy, 2, 1e-5);
    CHECK(fd.cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("finite differences agree with the analytic route at O(eps^2)") {
    Pcg32 rng(53, 0);
    const double eps = 1e-3;
    Hmm hmm = random_hmm(3, 2, 2, rng);
    FiniteStatePolicy policy = random_policy(hmm, 1, rng);
    GradientEstimate grad = exact_gradient(hmm, policy, 2);
    Eigen::VectorXd fd = finite_difference_gradient(hmm, policy, 2, eps);
    CHECK((grad.vector - fd).cwiseAbs().maxCoeff() <= 10 * eps * eps + 1e-9);
}

TEST_CASE("finite-difference rows sum to zero by shift invariance") {
    Pcg32 rng(54, 0);
    Hmm hmm = random_hmm(2, 2, 2, rng);
    FiniteStatePolicy policy = random_policy(hmm, 1, rng);
    Eigen::VectorXd fd = finite_difference_gradient(hmm, policy, 2, 1e-5);
    for (int q = 0; q < policy.num_memory_states(); ++q) {
        double row = 0.0;
        for (int a = 0; a < policy.num_actions(); ++a) {
            row += fd(policy.parameter_index(q, a));
        }
        CHECK(std::abs(row) <= 1e-8);
    }
    CHECK_THROWS_AS(finite_difference_gradient(hmm, policy, 2, 0.0), std::invalid_argument);
}

TEST_CASE("gradient dumps serialize with per-memory-state rows") {
    Pcg32 rng(55, 0);
    Hmm hmm = random_hmm(2, 2, 2, rng);
    FiniteStatePolicy policy = random_policy(hmm, 1, rng);
    GradientEstimate grad = sampled_gradient(hmm, policy, 2, 100, 3);
    std::string text = io::gradient_to_json(policy, grad);
    CHECK(text.find("\"theta_grad\"") != std::string::npos);
    CHECK(text.find("\"entropy_bits\"") != std::string::npos);
    CHECK(text.find("\"M\": 100") != std::string::npos);
}
