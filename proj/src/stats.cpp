#include "rflp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rflp {

double mean(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean: empty sample");
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

namespace {

// Mean ranks of |d|, doubled so that tied ranks stay integral. Also returns
// the tie correction term sum(t^3 - t) over tie groups.
void doubled_ranks(const std::vector<double>& abs_diffs, std::vector<std::int64_t>& ranks2,
                   double& tie_term) {
    const std::size_t n = abs_diffs.size();
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return abs_diffs[a] < abs_diffs[b]; });
    ranks2.assign(n, 0);
    tie_term = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && abs_diffs[idx[j + 1]] == abs_diffs[idx[i]]) ++j;
        // positions i..j share the mean rank; doubled it is (i+1) + (j+1)
        const std::int64_t r2 = static_cast<std::int64_t>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k) ranks2[idx[k]] = r2;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

} // namespace

wilcoxon_result wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("wilcoxon: length mismatch");
    if (x.empty()) throw std::invalid_argument("wilcoxon: empty samples");

    std::vector<double> abs_diffs;
    std::vector<bool> positive;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        if (d == 0.0) continue;
        abs_diffs.push_back(std::fabs(d));
        positive.push_back(d > 0.0);
    }

    wilcoxon_result result;
    result.pairs_used = abs_diffs.size();
    if (abs_diffs.empty()) {
        return result; // W = 0, p = 1
    }

    std::vector<std::int64_t> ranks2;
    double tie_term = 0.0;
    doubled_ranks(abs_diffs, ranks2, tie_term);

    const std::size_t n = abs_diffs.size();
    std::int64_t w2_plus = 0;
    std::int64_t total2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total2 += ranks2[i];
        if (positive[i]) w2_plus += ranks2[i];
    }
    const std::int64_t w2_minus = total2 - w2_plus;
    result.statistic = static_cast<double>(std::min(w2_plus, w2_minus)) / 2.0;

    if (n <= 25) {
        // Exact distribution of W+ over all 2^n sign assignments, counted on
        // the doubled ranks.
        std::vector<std::uint64_t> ways(static_cast<std::size_t>(total2) + 1, 0);
        ways[0] = 1;
        for (std::int64_t r2 : ranks2) {
            for (std::int64_t s = total2; s >= r2; --s) {
                ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - r2)];
            }
        }
        std::uint64_t count_le = 0;
        std::uint64_t count_ge = 0;
        for (std::int64_t s = 0; s <= total2; ++s) {
            if (s <= w2_plus) count_le += ways[static_cast<std::size_t>(s)];
            if (s >= w2_plus) count_ge += ways[static_cast<std::size_t>(s)];
        }
        const double denom = std::ldexp(1.0, static_cast<int>(n)); // 2^n
        const double p_le = static_cast<double>(count_le) / denom;
        const double p_ge = static_cast<double>(count_ge) / denom;
        result.p_value = std::min(1.0, 2.0 * std::min(p_le, p_ge));
        result.exact = true;
    } else {
        const double dn = static_cast<double>(n);
        const double mu = dn * (dn + 1.0) / 4.0;
        const double var = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0 - tie_term / 48.0;
        result.exact = false;
        if (var <= 0.0) {
            result.p_value = 1.0;
        } else {
            const double z = (result.statistic - mu) / std::sqrt(var);
            result.p_value = std::min(1.0, 2.0 * normal_cdf(z)); // z <= 0 since W is the min side
        }
    }
    result.significant = result.p_value < 0.05;
    return result;
}

} // namespace rflp
