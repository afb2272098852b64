#include "test_problems.h"

#include <sgphs/errors.h>
#include <sgphs/models.h>
#include <sgphs/policy_mixing.h>

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

namespace sgphs {
namespace {

auto random_dist(int n, std::mt19937_64 &rng) -> std::vector<double> {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> p(static_cast<std::size_t>(n));
    for (auto &v : p) {
        v = u(rng);
    }
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto &v : p) {
        v /= s;
    }
    return p;
}

TEST(Mix, TwoSubgoalsByHand) {
    const std::vector<double> high{0.5, 0.5};
    const auto out = mix(high, {{0.9, 0.1}, {0.4, 0.6}});
    EXPECT_NEAR(out.action_probs[0], 0.65, 1e-15);
    EXPECT_NEAR(out.action_probs[1], 0.35, 1e-15);
}

TEST(Mix, SingleSubgoalIsIdentity) {
    const std::vector<double> high{1.0};
    const std::vector<double> low{0.2, 0.3, 0.5};
    const auto out = mix(high, {low});
    for (std::size_t a = 0; a < low.size(); ++a) {
        EXPECT_NEAR(out.action_probs[a], low[a], 1e-15);
    }
}

TEST(Mix, IdenticalLowDistributionsIgnoreWeights) {
    const std::vector<double> low{0.1, 0.7, 0.2};
    const std::vector<double> high{0.05, 0.9, 0.05};
    const auto out = mix(high, {low, low, low});
    for (std::size_t a = 0; a < low.size(); ++a) {
        EXPECT_NEAR(out.action_probs[a], low[a], 1e-15);
    }
}

TEST(Mix, AllZeroNumeratorIsDegenerate) {
    const std::vector<double> high{0.0, 0.0};
    EXPECT_THROW((void)mix(high, {{0.5, 0.5}, {0.5, 0.5}}), DegeneratePolicyError);
}

TEST(Mix, RejectsMismatchedSizes) {
    const std::vector<double> high{1.0};
    EXPECT_THROW((void)mix(high, {{0.5, 0.5}, {0.5, 0.5}}), UsageError);
    const std::vector<double> two{0.5, 0.5};
    EXPECT_THROW((void)mix(two, {{0.5, 0.5}, {1.0}}), UsageError);
    const std::vector<double> negative{-0.5, 1.5};
    EXPECT_THROW((void)mix(negative, {{0.5, 0.5}, {0.5, 0.5}}), UsageError);
}

TEST(Mix, RandomProperties) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> k_dist(1, 8);
    std::uniform_int_distribution<int> a_dist(1, 6);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = k_dist(rng);
        const int actions = a_dist(rng);
        const auto high = random_dist(k, rng);
        std::vector<std::vector<double>> lows;
        for (int i = 0; i < k; ++i) {
            lows.push_back(random_dist(actions, rng));
        }
        const auto base = mix(high, lows).action_probs;
        EXPECT_LE(std::abs(std::accumulate(base.begin(), base.end(), 0.0) - 1.0), 1e-9);

        std::vector<int> perm(static_cast<std::size_t>(k));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<double> high_p;
        std::vector<std::vector<double>> lows_p;
        for (const int i : perm) {
            high_p.push_back(high[static_cast<std::size_t>(i)]);
            lows_p.push_back(lows[static_cast<std::size_t>(i)]);
        }
        const auto permuted = mix(high_p, lows_p).action_probs;

        const double c = scale(rng);
        std::vector<double> high_s = high;
        for (auto &w : high_s) {
            w *= c;
        }
        const auto scaled = mix(high_s, lows).action_probs;
        for (int a = 0; a < actions; ++a) {
            EXPECT_NEAR(permuted[static_cast<std::size_t>(a)], base[static_cast<std::size_t>(a)], 1e-12);
            EXPECT_NEAR(scaled[static_cast<std::size_t>(a)], base[static_cast<std::size_t>(a)], 1e-12);
        }
    }
}

TEST(MaskedSoftmax, ZeroesInapplicable) {
    const std::vector<double> logits{1.0, 50.0, 1.0};
    const bool mask[] = {true, false, true};
    const auto p = masked_softmax(logits, mask);
    EXPECT_EQ(p[1], 0.0);
    EXPECT_NEAR(p[0], 0.5, 1e-15);
}

auto tiny_config(int k) -> ModelConfig {
    ModelConfig c;
    c.hidden_width = 4;
    c.hidden_layers = 1;
    c.vqvae.codebook_size = k;
    c.vqvae.codebook_dim = 3;
    c.vqvae.hidden_width = 4;
    c.vqvae.hidden_layers = 1;
    return c;
}

// Two-action toy: vertex 0 branches to 1 and 2.
auto toy_problem() -> testing::GraphProblem {
    return {{{1, 2}, {0}, {0}}, 0, {2}};
}

TEST(SubgoalGuidedPolicy, ComposesTheThreeModels) {
    const auto problem = toy_problem();
    SubgoalPolicyBundle bundle(tiny_config(3), problem.observation_shape(), 2, 17);
    const State s = problem.initial_state();
    const bool applicable[] = {true, true};
    const auto got = subgoal_guided_policy(problem, s, bundle, applicable).action_probs;

    const Tensor enc = problem.encode(s);
    auto softmax = [](const Eigen::VectorXd &z) {
        std::vector<double> e(static_cast<std::size_t>(z.size()));
        double m = z.maxCoeff();
        double sum = 0.0;
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            e[static_cast<std::size_t>(i)] = std::exp(z(i) - m);
            sum += e[static_cast<std::size_t>(i)];
        }
        for (auto &v : e) {
            v /= sum;
        }
        return e;
    };
    auto &vq = bundle.vqvae();
    const auto high = softmax(bundle.high_policy().forward(enc.as_vector()));
    std::vector<double> expected(2, 0.0);
    for (int i = 0; i < 3; ++i) {
        Eigen::VectorXd dec_in(static_cast<Eigen::Index>(enc.size()) + 3);
        dec_in << enc.as_vector(), vq.codebook().row(i).transpose();
        const Eigen::VectorXd logits = vq.decoder().forward(dec_in);
        Eigen::VectorXd low_in(2 * static_cast<Eigen::Index>(enc.size()));
        for (Eigen::Index j = 0; j < logits.size(); ++j) {
            low_in(j) = enc.as_vector()(j);
            low_in(static_cast<Eigen::Index>(enc.size()) + j) = 1.0 / (1.0 + std::exp(-logits(j)));
        }
        const auto low = softmax(bundle.low_policy().forward(low_in));
        for (int a = 0; a < 2; ++a) {
            expected[static_cast<std::size_t>(a)] += high[static_cast<std::size_t>(i)] * low[static_cast<std::size_t>(a)];
        }
    }
    const double total = expected[0] + expected[1];
    for (int a = 0; a < 2; ++a) {
        EXPECT_NEAR(got[static_cast<std::size_t>(a)], expected[static_cast<std::size_t>(a)] / total, 1e-12);
    }
}

TEST(SubgoalGuidedPolicy, SingleCodeEqualsConditionedLowPolicy) {
    const auto problem = toy_problem();
    const SubgoalPolicyBundle bundle(tiny_config(1), problem.observation_shape(), 2, 3);
    const State s = problem.initial_state();
    const bool applicable[] = {true, true};
    const auto got = subgoal_guided_policy(problem, s, bundle, applicable).action_probs;
    const Tensor enc = problem.encode(s);
    const Eigen::VectorXd logits = bundle.low_policy_logits(enc, bundle.vqvae().generate(enc, 0));
    const auto low = masked_softmax({logits.data(), 2}, applicable);
    EXPECT_NEAR(got[0], low[0], 1e-14);
    EXPECT_NEAR(got[1], low[1], 1e-14);
}

TEST(SubgoalGuidedPolicy, RandomBundlesGiveDistributions) {
    const auto problem = toy_problem();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SubgoalPolicyBundle bundle(tiny_config(4), problem.observation_shape(), 2, seed);
        const bool applicable[] = {true, true};
        const auto p = subgoal_guided_policy(problem, problem.initial_state(), bundle, applicable).action_probs;
        EXPECT_NEAR(p[0] + p[1], 1.0, 1e-9);
        EXPECT_GT(p[0], 0.0);
        EXPECT_GT(p[1], 0.0);
    }
}

TEST(SubgoalGuidedPolicy, MasksInapplicableActions) {
    const auto problem = toy_problem();
    const SubgoalPolicyBundle bundle(tiny_config(2), problem.observation_shape(), 2, 9);
    const bool applicable[] = {false, true};
    const auto p = subgoal_guided_policy(problem, problem.initial_state(), bundle, applicable).action_probs;
    EXPECT_EQ(p[0], 0.0);
    EXPECT_NEAR(p[1], 1.0, 1e-15);
}

}  // namespace
}  // namespace sgphs
