#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cgnet/errors.hpp"
#include "cgnet/layers.hpp"
#include "cgnet/network.hpp"
#include "test_util.hpp"

using namespace cgnet;
using cgnet::tu::random_activation;

namespace {

LayerWeights random_weights(const ActivationType& in, const ActivationType& out, std::mt19937_64& rng) {
    LayerWeights w = LayerWeights::zeros(in, out);
    for (auto& m : w.per_ell) tu::fill_gaussian(m, rng);
    return w;
}

LayerWeights identity_weights(const ActivationType& t) {
    LayerWeights w = LayerWeights::zeros(t, t);
    for (auto& m : w.per_ell) m.setIdentity();
    return w;
}

NetworkSpec small_spec(int L, int layers, int tau) {
    NetworkSpec spec;
    spec.bandlimit = L;
    spec.layer_types.assign(static_cast<std::size_t>(layers), ActivationType::uniform(L, tau));
    return spec;
}

}  // namespace

TEST(CovariantLinear, IdentityAndShapes) {
    std::mt19937_64 rng(31);
    const ActivationType in({2, 3, 1});
    const auto a = random_activation(in, rng);
    const auto same = covariant_linear(a, identity_weights(in));
    EXPECT_EQ(relative_difference(same, a), 0.0);

    const ActivationType out({4, 1, 2});
    EXPECT_EQ(covariant_linear(a, random_weights(in, out, rng)).type(), out);
    EXPECT_THROW(covariant_linear(a, random_weights(ActivationType({1, 3, 1}), out, rng)), ArgumentError);
}

TEST(CovariantLinear, OuterProductGivesCorrelationComponents) {
    // One input fragment per degree and W_l = h_l^H: F_l W_l = f_l h_l^H.
    std::mt19937_64 rng(32);
    const ActivationType in({1, 1, 1, 1});
    const auto f = random_activation(in, rng);
    const auto h = random_activation(in, rng);
    LayerWeights w;
    for (int l = 0; l <= 3; ++l) w.per_ell.push_back(h[l].adjoint());
    const auto g = covariant_linear(f, w);
    for (int l = 0; l <= 3; ++l) {
        ASSERT_EQ(g[l].cols(), 2 * l + 1);
        EXPECT_LT(tu::max_abs(g[l] - f[l] * h[l].adjoint()), 1e-15);
    }
}

TEST(CovariantLinear, CommutesWithRotation) {
    std::mt19937_64 rng(33);
    const auto in = ActivationType::uniform(4, 3);
    const ActivationType out({2, 5, 1, 3, 2});
    for (int t = 0; t < 5; ++t) {
        const auto a = random_activation(in, rng);
        const auto w = random_weights(in, out, rng);
        const EulerAngles r = random_rotation(rng);
        EXPECT_LT(relative_difference(covariant_linear(rotate(a, r), w), rotate(covariant_linear(a, w), r)), 1e-12);
    }
}

TEST(CovariantNormalize, UnitScaleIsIdentity) {
    std::mt19937_64 rng(34);
    const ActivationType t({2, 2});
    const NormState norm(t);
    const auto a = random_activation(t, rng);
    EXPECT_EQ(relative_difference(covariant_normalize(a, norm), a), 0.0);
}

TEST(CovariantNormalize, EvalModeIsLinear) {
    std::mt19937_64 rng(35);
    const ActivationType t({2, 3, 1});
    NormState norm(t);
    std::vector<CovariantActivation> batch{random_activation(t, rng), random_activation(t, rng)};
    norm.update(batch);
    const auto a = random_activation(t, rng);
    CovariantActivation scaled = a;
    for (auto& p : scaled.parts) p *= 2.5;
    auto lhs = covariant_normalize(scaled, norm);
    auto rhs = covariant_normalize(a, norm);
    for (auto& p : rhs.parts) p *= 2.5;
    EXPECT_LT(relative_difference(lhs, rhs), 1e-15);
}

TEST(CovariantNormalize, ExpandingAverage) {
    const ActivationType t({1});
    NormState norm(t);
    auto make = [&](double v) {
        CovariantActivation a = CovariantActivation::zeros(t);
        a[0](0, 0) = v;
        return a;
    };
    std::vector<CovariantActivation> first{make(3.0), make(3.0)};
    norm.update(first);
    EXPECT_DOUBLE_EQ(norm.raw_scale(0, 0), 3.0);
    std::vector<CovariantActivation> second{make(6.0), make(6.0), make(6.0), make(6.0)};
    norm.update(second);
    EXPECT_DOUBLE_EQ(norm.raw_scale(0, 0), (2 * 3.0 + 4 * 6.0) / 6.0);
    EXPECT_EQ(norm.examples_seen(), 6u);

    // Training mode folds the batch in first; eval mode leaves the state alone.
    NormState other(t);
    const auto out = covariant_normalize(make(4.0), other, true);
    EXPECT_DOUBLE_EQ(out[0](0, 0).real(), 1.0);
    covariant_normalize(make(8.0), other, false);
    EXPECT_DOUBLE_EQ(other.raw_scale(0, 0), 4.0);
}

TEST(CovariantNormalize, ZeroHistoryIsFloored) {
    const ActivationType t({1, 1});
    NormState norm(t);
    std::vector<CovariantActivation> zeros{CovariantActivation::zeros(t)};
    norm.update(zeros);
    EXPECT_EQ(norm.raw_scale(1, 0), 0.0);
    EXPECT_EQ(norm.divisor(1, 0), NormState::kEpsilon);
    const auto out = covariant_normalize(zeros[0], norm);
    EXPECT_TRUE(out.all_finite());
    EXPECT_EQ(out.squared_norm(), 0.0);
}

TEST(CovariantNormalize, CommutesWithRotation) {
    std::mt19937_64 rng(36);
    const auto t = ActivationType::uniform(4, 3);
    NormState norm(t);
    std::vector<CovariantActivation> batch{random_activation(t, rng), random_activation(t, rng)};
    norm.update(batch);
    const auto a = random_activation(t, rng);
    const EulerAngles r = random_rotation(rng);
    EXPECT_LT(relative_difference(covariant_normalize(rotate(a, r), norm), rotate(covariant_normalize(a, norm), r)), 1e-12);
}

TEST(LayerForward, IdentityMixingAndShape) {
    std::mt19937_64 rng(37);
    const auto in = ActivationType::uniform(2, 2);
    const CGTable table(2);
    const CGLayout layout(in, 2);
    const auto a = random_activation(in, rng);
    const auto cg = cg_product(a, table, layout);
    EXPECT_EQ(relative_difference(layer_forward(a, identity_weights(layout.output_type()), table, layout), cg), 0.0);

    const ActivationType out({3, 1, 4});
    EXPECT_EQ(layer_forward(a, random_weights(layout.output_type(), out, rng), table, layout).type(), out);
}

TEST(LayerForward, Equivariance) {
    std::mt19937_64 rng(38);
    const auto in = ActivationType::uniform(4, 2);
    const CGTable table(4);
    const CGLayout layout(in, 4);
    const auto w = random_weights(layout.output_type(), ActivationType::uniform(4, 3), rng);
    NormState norm(layout.output_type());
    std::vector<CovariantActivation> warm{cg_product(random_activation(in, rng), table, layout)};
    norm.update(warm);
    for (int t = 0; t < 5; ++t) {
        const auto a = random_activation(in, rng);
        const EulerAngles r = random_rotation(rng);
        const auto lhs = layer_forward(rotate(a, r), w, table, layout, &norm);
        const auto rhs = rotate(layer_forward(a, w, table, layout, &norm), r);
        EXPECT_LT(relative_difference(lhs, rhs), 1e-9);
    }
}

TEST(InvariantHead, WidthMatchesFiveLayerConfiguration) {
    const std::vector<int> tau0(5, 12);
    EXPECT_EQ(invariant_head_width(tau0, 1), 122u);
    NetworkSpec spec;
    spec.bandlimit = 2;
    spec.layer_types.assign(5, ActivationType({12, 2, 2}));
    EXPECT_EQ(spec.head_width(), 122u);
    const CGNetwork net(spec);
    const auto w = init_weights(net, 3);
    std::mt19937_64 rng(39);
    EXPECT_EQ(network_forward(net, w, nullptr, random_activation(spec.input_type(), rng)).size(), 122u);
}

TEST(InvariantHead, ZeroInputGivesZeroFeatures) {
    const CGNetwork net(small_spec(3, 2, 2));
    const auto w = init_weights(net, 4);
    for (double v : network_forward(net, w, nullptr, CovariantActivation::zeros(net.spec().input_type()))) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(InvariantHead, SkipsCollectDegreeZeroParts) {
    // With W = h^H the layer's l = 0 output is the correlation component f_0 conj(h_0).
    std::mt19937_64 rng(40);
    const ActivationType in({1, 1});
    const auto f = random_activation(in, rng);
    const auto h = random_activation(in, rng);
    LayerWeights w;
    for (int l = 0; l <= 1; ++l) w.per_ell.push_back(h[l].adjoint());
    const std::vector<CovariantActivation> outs{covariant_linear(f, w)};
    const auto head = invariant_head(outs, f[0]);
    ASSERT_EQ(head.size(), 4u);
    const Complex corr = f[0](0, 0) * std::conj(h[0](0, 0));
    EXPECT_EQ(head[0], f[0](0, 0).real());
    EXPECT_EQ(head[1], f[0](0, 0).imag());
    EXPECT_NEAR(head[2], corr.real(), 1e-15);
    EXPECT_NEAR(head[3], corr.imag(), 1e-15);
    EXPECT_THROW(invariant_head({}, f[0]), ArgumentError);
}

TEST(Network, EndToEndInvariance) {
    const CGNetwork net(small_spec(5, 3, 3));
    const auto w = init_weights(net, 5);
    const auto norms = make_norm_states(net);
    std::mt19937_64 rng(41);
    for (int t = 0; t < 20; ++t) {
        const auto a = random_activation(net.spec().input_type(), rng);
        const auto r = random_rotation(rng);
        const auto f = network_forward(net, w, &norms, a);
        const auto g = network_forward(net, w, &norms, rotate(a, r));
        double diff = 0.0, ref = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            diff += (f[i] - g[i]) * (f[i] - g[i]);
            ref += f[i] * f[i];
        }
        EXPECT_LT(std::sqrt(diff / ref), 1e-9);
    }
}

TEST(Network, DeterministicForSeedAndInput) {
    const CGNetwork net(small_spec(3, 2, 2));
    const auto w1 = init_weights(net, 77);
    const auto w2 = init_weights(net, 77);
    EXPECT_EQ(w1.pack(), w2.pack());
    EXPECT_NE(init_weights(net, 78).pack(), w1.pack());
    std::mt19937_64 rng(42);
    const auto a = random_activation(net.spec().input_type(), rng);
    EXPECT_EQ(network_forward(net, w1, nullptr, a), network_forward(net, w2, nullptr, a));
}

TEST(Network, LastLayerProducesOnlyDegreeZero) {
    const CGNetwork net(small_spec(3, 2, 2));
    EXPECT_EQ(net.output_type(1).bandlimit(), 0);
    EXPECT_EQ(net.output_type(0), ActivationType::uniform(3, 2));
}

TEST(Network, SpecValidation) {
    NetworkSpec spec = small_spec(3, 2, 2);
    spec.layer_types[1] = ActivationType::uniform(2, 2);
    EXPECT_THROW(CGNetwork{spec}, ArgumentError);
    EXPECT_THROW(CGNetwork{small_spec(3, 0, 2)}, ArgumentError);
}

TEST(Init, EntryScaleMatchesFanIn) {
    // Eight scalar inputs give 64 degree-0 CG fragments, so W_0 is 64 x 64.
    NetworkSpec spec;
    spec.bandlimit = 0;
    spec.n_in = 8;
    spec.layer_types = {ActivationType({64})};
    const CGNetwork net(spec);
    ASSERT_EQ(net.layout(0).output_type()[0], 64);
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto w = init_weights(net, seed);
        const ComplexMatrix& m = w.layers[0].per_ell[0];
        ASSERT_EQ(m.rows(), 64);
        ASSERT_EQ(m.cols(), 64);
        const double rms = std::sqrt(m.squaredNorm() / static_cast<double>(m.size()));
        EXPECT_NEAR(rms * std::sqrt(64.0), 1.0, 0.1);
    }
}
