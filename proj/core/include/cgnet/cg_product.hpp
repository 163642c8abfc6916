#pragma once

#include <cstdint>
#include <vector>

#include "cgnet/activation.hpp"
#include "cgnet/so3.hpp"

namespace cgnet {

/// Which degree pairs (l1, l2) enter the product. Unordered keeps l1 <= l2;
/// Ordered also includes the swapped pairs.
enum class PairPolicy { Unordered, Ordered };

/// One horizontal slice of an output part: C_{l1,l2,l}^T (F_l1 (x) F_l2)
/// occupying columns [col_offset, col_offset + tau1 * tau2) of output degree l.
struct CGSegment {
    int ell1 = 0;
    int ell2 = 0;
    int ell = 0;
    int tau1 = 0;
    int tau2 = 0;
    int col_offset = 0;
    /// l1 == l2 with l odd: column (i, i) vanishes identically (the block is
    /// antisymmetric under swapping its factors) and is left at exact zero.
    bool zero_diagonal = false;
};

/// Column bookkeeping for the CG product of a given input type. Segments are
/// ordered by l1, then l2; outputs above `out_max_ell` are discarded.
class CGLayout {
public:
    CGLayout(const ActivationType& input, int out_max_ell, PairPolicy policy = PairPolicy::Unordered);

    const ActivationType& input_type() const { return input_; }
    const ActivationType& output_type() const { return output_; }
    int out_max_ell() const { return output_.bandlimit(); }
    PairPolicy policy() const { return policy_; }
    const std::vector<CGSegment>& segments() const { return segments_; }

private:
    ActivationType input_;
    ActivationType output_;
    PairPolicy policy_;
    std::vector<CGSegment> segments_;
};

/// Sparse CG nonlinearity over the m1 + m2 = m pattern of each block.
/// If `madds` is non-null, the number of complex multiply-adds is added to it.
CovariantActivation cg_product(const CovariantActivation& input, const CGTable& table, const CGLayout& layout,
                               std::uint64_t* madds = nullptr);

/// Convenience overload: all outputs up to the input band limit.
CovariantActivation cg_nonlinearity(const CovariantActivation& input, const CGTable& table,
                                    PairPolicy policy = PairPolicy::Unordered);

/// Reference route: explicit Kronecker products projected by dense CG
/// matrices built entry by entry from clebsch_gordan_coeff.
CovariantActivation cg_product_dense(const CovariantActivation& input, const CGLayout& layout);

/// Adjoint of cg_product under the (d/dRe + i d/dIm) convention. Both factors
/// of every segment receive their branch, so self-pairs accumulate twice.
CovariantActivation backward_cg(const CovariantActivation& output_adjoint, const CovariantActivation& input,
                                const CGTable& table, const CGLayout& layout);

}  // namespace cgnet
