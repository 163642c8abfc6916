#include "cgnet/cg_product.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "cgnet/errors.hpp"

namespace cgnet {

namespace {

void check_input(const CovariantActivation& input, const CGLayout& layout, const char* what) {
    if (input.type() != layout.input_type()) {
        throw ArgumentError(std::string(what) + ": activation type does not match CG layout");
    }
}

}  // namespace

CGLayout::CGLayout(const ActivationType& input, int out_max_ell, PairPolicy policy)
    : input_(input), policy_(policy) {
    const int L = input.bandlimit();
    if (out_max_ell < 0) throw ArgumentError("CGLayout: negative output band limit");
    std::vector<int> out_tau(static_cast<std::size_t>(out_max_ell + 1), 0);
    for (int l1 = 0; l1 <= L; ++l1) {
        const int l2_start = policy == PairPolicy::Unordered ? l1 : 0;
        for (int l2 = l2_start; l2 <= L; ++l2) {
            const int t1 = input[l1];
            const int t2 = input[l2];
            if (t1 == 0 || t2 == 0) continue;
            for (int l = std::abs(l1 - l2); l <= std::min(l1 + l2, out_max_ell); ++l) {
                auto& count = out_tau[static_cast<std::size_t>(l)];
                segments_.push_back({l1, l2, l, t1, t2, count, l1 == l2 && l % 2 == 1});
                count += t1 * t2;
            }
        }
    }
    output_ = ActivationType(std::move(out_tau));
}

CovariantActivation cg_product(const CovariantActivation& input, const CGTable& table, const CGLayout& layout,
                               std::uint64_t* madds) {
    check_input(input, layout, "cg_product");
    CovariantActivation out = CovariantActivation::zeros(layout.output_type());
    std::uint64_t count = 0;
    for (const auto& seg : layout.segments()) {
        const CGBlock& block = table.block(seg.ell1, seg.ell2, seg.ell);
        const ComplexMatrix& f1 = input[seg.ell1];
        const ComplexMatrix& f2 = input[seg.ell2];
        ComplexMatrix& g = out[seg.ell];
        for (const auto& e : block.entries) {
            const int row = e.m + seg.ell;
            for (int i = 0; i < seg.tau1; ++i) {
                const Complex a = e.value * f1(e.m1 + seg.ell1, i);
                const int base = seg.col_offset + i * seg.tau2;
                for (int j = 0; j < seg.tau2; ++j) {
                    if (seg.zero_diagonal && i == j) continue;
                    g(row, base + j) += a * f2(e.m2 + seg.ell2, j);
                }
            }
            count += static_cast<std::uint64_t>(seg.tau1) * static_cast<std::uint64_t>(seg.tau2) -
                     (seg.zero_diagonal ? static_cast<std::uint64_t>(seg.tau1) : 0);
        }
    }
    if (madds) *madds += count;
    return out;
}

CovariantActivation cg_nonlinearity(const CovariantActivation& input, const CGTable& table, PairPolicy policy) {
    const CGLayout layout(input.type(), input.bandlimit(), policy);
    return cg_product(input, table, layout);
}

CovariantActivation cg_product_dense(const CovariantActivation& input, const CGLayout& layout) {
    check_input(input, layout, "cg_product_dense");
    CovariantActivation out = CovariantActivation::zeros(layout.output_type());
    for (const auto& seg : layout.segments()) {
        const int d1 = 2 * seg.ell1 + 1;
        const int d2 = 2 * seg.ell2 + 1;
        const int d = 2 * seg.ell + 1;
        RealMatrix c = RealMatrix::Zero(d1 * d2, d);
        for (int a = 0; a < d1; ++a) {
            for (int b = 0; b < d2; ++b) {
                for (int k = 0; k < d; ++k) {
                    const int m1 = a - seg.ell1, m2 = b - seg.ell2, m = k - seg.ell;
                    c(a * d2 + b, k) = clebsch_gordan_coeff(seg.ell1, seg.ell2, seg.ell, m1, m2, m);
                }
            }
        }
        const ComplexMatrix& f1 = input[seg.ell1];
        const ComplexMatrix& f2 = input[seg.ell2];
        ComplexMatrix kron(d1 * d2, seg.tau1 * seg.tau2);
        for (int a = 0; a < d1; ++a) {
            for (int i = 0; i < seg.tau1; ++i) {
                kron.block(a * d2, i * seg.tau2, d2, seg.tau2) = f1(a, i) * f2;
            }
        }
        out[seg.ell].middleCols(seg.col_offset, seg.tau1 * seg.tau2) = c.transpose().cast<Complex>() * kron;
    }
    return out;
}

CovariantActivation backward_cg(const CovariantActivation& output_adjoint, const CovariantActivation& input,
                                const CGTable& table, const CGLayout& layout) {
    check_input(input, layout, "backward_cg");
    if (output_adjoint.type() != layout.output_type()) {
        throw ArgumentError("backward_cg: adjoint type does not match CG layout output");
    }
    CovariantActivation grad = CovariantActivation::zeros(layout.input_type());
    for (const auto& seg : layout.segments()) {
        const CGBlock& block = table.block(seg.ell1, seg.ell2, seg.ell);
        const ComplexMatrix& f1 = input[seg.ell1];
        const ComplexMatrix& f2 = input[seg.ell2];
        const ComplexMatrix& gbar = output_adjoint[seg.ell];
        ComplexMatrix& g1 = grad[seg.ell1];
        ComplexMatrix& g2 = grad[seg.ell2];
        for (const auto& e : block.entries) {
            const int row = e.m + seg.ell;
            const int r1 = e.m1 + seg.ell1;
            const int r2 = e.m2 + seg.ell2;
            for (int i = 0; i < seg.tau1; ++i) {
                const int base = seg.col_offset + i * seg.tau2;
                const Complex f1c = std::conj(f1(r1, i));
                Complex acc1 = 0.0;
                for (int j = 0; j < seg.tau2; ++j) {
                    if (seg.zero_diagonal && i == j) continue;
                    const Complex gb = e.value * gbar(row, base + j);
                    acc1 += std::conj(f2(r2, j)) * gb;
                    g2(r2, j) += f1c * gb;
                }
                g1(r1, i) += acc1;
            }
        }
    }
    return grad;
}

}  // namespace cgnet
