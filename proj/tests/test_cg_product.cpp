#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cgnet/cg_product.hpp"
#include "cgnet/errors.hpp"
#include "test_util.hpp"

using namespace cgnet;
using cgnet::tu::random_activation;

TEST(CgProduct, ScalarSquare) {
    CovariantActivation a = CovariantActivation::zeros(ActivationType({1}));
    a[0](0, 0) = Complex(1.5, -0.5);
    const CGTable table(0);
    const auto out = cg_nonlinearity(a, table, PairPolicy::Unordered);
    ASSERT_EQ(out.type(), ActivationType({1}));
    EXPECT_LT(std::abs(out[0](0, 0) - a[0](0, 0) * a[0](0, 0)), 1e-15);
}

TEST(CgProduct, OutputTypeBookkeeping) {
    const CGLayout layout(ActivationType({1, 1, 0}), 2, PairPolicy::Unordered);
    EXPECT_EQ(layout.output_type(), ActivationType({2, 2, 1}));
    const CGLayout wide(ActivationType({1, 1, 0, 0}), 3, PairPolicy::Unordered);
    EXPECT_EQ(wide.output_type(), ActivationType({2, 2, 1, 0}));
    const CGLayout ordered(ActivationType({1, 1, 0}), 2, PairPolicy::Ordered);
    EXPECT_EQ(ordered.output_type(), ActivationType({2, 3, 1}));
    // Clipping at a lower output band limit.
    const CGLayout clipped(ActivationType({2, 2, 2}), 1, PairPolicy::Unordered);
    // l=0 from (0,0), (1,1), (2,2); l=1 from (0,1), (1,1), (1,2), (2,2).
    EXPECT_EQ(clipped.output_type(), ActivationType({12, 16}));
}

TEST(CgProduct, Equivariance) {
    std::mt19937_64 rng(21);
    const CGTable table(3);
    for (auto policy : {PairPolicy::Unordered, PairPolicy::Ordered}) {
        for (int t = 0; t < 5; ++t) {
            const auto a = random_activation(ActivationType({2, 3, 1, 2}), rng);
            const EulerAngles r = random_rotation(rng);
            const auto lhs = cg_nonlinearity(rotate(a, r), table, policy);
            const auto rhs = rotate(cg_nonlinearity(a, table, policy), r);
            EXPECT_LT(relative_difference(lhs, rhs), 1e-10);
        }
    }
}

TEST(CgProduct, SparseMatchesDense) {
    std::mt19937_64 rng(22);
    for (int L : {1, 3, 5}) {
        const CGTable table(L);
        for (auto policy : {PairPolicy::Unordered, PairPolicy::Ordered}) {
            const auto type = ActivationType::uniform(L, 3);
            const auto a = random_activation(type, rng);
            const CGLayout layout(type, L, policy);
            const auto sparse = cg_product(a, table, layout);
            const auto dense = cg_product_dense(a, layout);
            for (int l = 0; l <= L; ++l) EXPECT_LT(tu::max_abs(sparse[l] - dense[l]), 1e-13) << "L=" << L;
        }
    }
}

TEST(CgProduct, SelfProductColumnsAtOddDegreeVanish) {
    std::mt19937_64 rng(23);
    const auto type = ActivationType::uniform(2, 2);
    const auto a = random_activation(type, rng);
    const CGTable table(2);
    const CGLayout layout(type, 2, PairPolicy::Unordered);
    const auto sparse = cg_product(a, table, layout);
    const auto dense = cg_product_dense(a, layout);
    int checked = 0;
    for (const auto& seg : layout.segments()) {
        EXPECT_EQ(seg.zero_diagonal, seg.ell1 == seg.ell2 && seg.ell % 2 == 1);
        if (!seg.zero_diagonal) continue;
        for (int i = 0; i < seg.tau1; ++i) {
            const int col = seg.col_offset + i * seg.tau2 + i;
            EXPECT_EQ(tu::max_abs(sparse[seg.ell].col(col)), 0.0);
            EXPECT_LT(tu::max_abs(dense[seg.ell].col(col)), 1e-15);
            ++checked;
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(CgProduct, MultiplyAddCountScalesQuadratically) {
    const int L = 3;
    const CGTable table(L);
    std::mt19937_64 rng(24);
    double first_ratio = 0.0;
    for (int tau : {2, 4, 8}) {
        const auto type = ActivationType::uniform(L, tau);
        const double n = static_cast<double>(type.scalar_count());
        const CGLayout layout(type, L, PairPolicy::Unordered);
        std::uint64_t madds = 0;
        cg_product(random_activation(type, rng), table, layout, &madds);
        const double ratio = static_cast<double>(madds) / (n * n);
        if (first_ratio == 0.0) first_ratio = ratio;
        EXPECT_NEAR(ratio / first_ratio, 1.0, 0.15) << "tau=" << tau;
        EXPECT_LE(static_cast<double>(madds), n * n * (L + 1));
    }
}

TEST(CgProduct, RejectsMismatchedType) {
    const CGTable table(2);
    const CGLayout layout(ActivationType({1, 1, 1}), 2);
    EXPECT_THROW(cg_product(CovariantActivation::zeros(ActivationType({1, 2, 1})), table, layout), ArgumentError);
}
