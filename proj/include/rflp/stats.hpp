#ifndef RFLP_STATS_HPP
#define RFLP_STATS_HPP

#include <cstddef>
#include <span>

namespace rflp {

struct wilcoxon_result {
    double statistic = 0.0;    // W = min(W+, W-)
    double p_value = 1.0;      // two-sided
    bool significant = false;  // p < 0.05
    std::size_t pairs_used = 0; // after dropping zero differences
    bool exact = true;         // exact distribution vs normal approximation
};

// Wilcoxon signed rank test on paired samples. Zero differences are dropped;
// absolute differences receive mean ranks on ties. Up to 25 non-zero pairs
// the two-sided p-value is exact over all 2^n equally likely sign
// assignments (p = min(1, 2*min(P(W+ <= w), P(W+ >= w)))); above that a
// normal approximation with tie correction is used. All differences zero
// gives W = 0, p = 1.
wilcoxon_result wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> values);

} // namespace rflp

#endif
