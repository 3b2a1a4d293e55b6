#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace rtb {

// One logged market price observation, in integer price units
// (micro-currency per impression).
struct PriceSample {
    std::int64_t price = 0;
};

// Market price distribution p_z(z).
//
// Two representations:
//   - LongTail: parametric density p_z(z) = l / (l + z)^2 with scale l > 0,
//     giving the winning probability w(b) = b / (b + l) in closed form.
//   - Empirical: normalized histogram over integer prices, exact finite sums.
//
// A bid wins iff b > z (strict), so win_prob(0) == 0 even with an atom at 0.
// Immutable after construction; safe to share across threads.
class MarketModel {
public:
    enum class Kind { LongTail, Empirical };

    static MarketModel long_tail(double l);
    static MarketModel empirical(std::map<std::int64_t, std::uint64_t> buckets);

    // Maximum-likelihood fit of the long-tail scale l by golden-section search
    // on the exact log-likelihood sum(ln l - 2 ln(l + z_i)).
    static MarketModel fit_long_tail(const std::vector<PriceSample>& samples);

    // Histogram over integer prices; total = sample count.
    static MarketModel empirical_from_samples(const std::vector<PriceSample>& samples);

    Kind kind() const { return kind_; }
    bool is_long_tail() const { return kind_ == Kind::LongTail; }

    // LongTail only.
    double scale() const;

    // Empirical only.
    const std::map<std::int64_t, std::uint64_t>& buckets() const;
    std::uint64_t total_count() const { return total_; }

    // Density p_z(z). Empirical uses the unit-width floor bucket of z.
    double density(double z) const;

    // w(b) = P[z < b], the probability the bid wins.
    double win_prob(double b) const;

    // Partial first moment: integral of z p_z(z) over [0, b).
    // This is c2(b) * w(b), the expected second-price spend per auction entered.
    double win_cost_integral(double b) const;

    // c2(b): expected market price conditional on winning.
    // Requires win_prob(b) > 0; throws otherwise (never silently returns 0).
    double expected_second_price_cost(double b) const;

    // Inverse CDF; u in [0, 1). Empirical returns an integer bucket price.
    double quantile(double u) const;

    // Distinct prices of the empirical support, ascending. Empirical only.
    const std::vector<std::int64_t>& support() const;

private:
    MarketModel() = default;

    Kind kind_ = Kind::LongTail;
    double scale_l_ = 0.0;

    std::map<std::int64_t, std::uint64_t> buckets_;
    std::uint64_t total_ = 0;
    // Parallel to support_: cumulative count and cumulative price*count,
    // inclusive of the entry itself.
    std::vector<std::int64_t> support_;
    std::vector<double> cum_count_;
    std::vector<double> cum_price_mass_;

    void build_empirical_index();
};

}  // namespace rtb
