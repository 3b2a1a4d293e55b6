#pragma once

#include <cstdint>
#include <vector>

#include "rtb/bidding.hpp"
#include "rtb/market_model.hpp"
#include "rtb/utility.hpp"

namespace rtb {

// Empirical distribution of predicted CTRs p_r(r): a weighted sample multiset.
class PctrDistribution {
public:
    struct WeightedSample {
        double r;
        double weight;
    };

    static PctrDistribution from_samples(const std::vector<double>& rs);
    static PctrDistribution from_weighted(std::vector<WeightedSample> samples);

    const std::vector<WeightedSample>& samples() const { return samples_; }
    double total_weight() const { return total_weight_; }
    double mean() const { return mean_; }

    // Weighted draw; u in [0, 1).
    double pick(double u) const;

private:
    std::vector<WeightedSample> samples_;
    std::vector<double> cum_weight_;
    double total_weight_ = 0.0;
    double mean_ = 0.0;
};

enum class StrategyFamily { FirstPriceOptimal, SecondPriceLinear, GeneralNumeric };

// Solved budget constraint: lambda such that the expected spend per
// impression equals budget / volume.
struct BudgetPlan {
    double budget = 0.0;
    std::int64_t volume = 0;
    CostKind cost_kind = CostKind::Second;
    StrategyFamily family = StrategyFamily::SecondPriceLinear;
    double lambda = 0.0;
    double spend_rate = 0.0;  // expected spend per impression at the solved lambda
    double residual = 0.0;    // spend_rate - budget/volume
    double max_bid = kDefaultMaxBid;
};

// E_r[c(b(r)) * w(b(r))]: expected spend per impression. Compensated
// summation in sample order, so results are reproducible to 1e-12.
double expected_spend_rate(const BidStrategy& strategy, const MarketModel& model,
                           const PctrDistribution& pctr, CostKind cost_kind);

// Spend rate when every impression bids the cap; the feasibility ceiling.
double max_spend_rate(const MarketModel& model, CostKind cost_kind,
                      double max_bid = kDefaultMaxBid);

// Instantiate the family at a given multiplier.
BidStrategy make_strategy(StrategyFamily family, const MarketModel& model, CostKind cost_kind,
                          double lambda, double max_bid = kDefaultMaxBid);

// Solve the budget constraint for lambda: bracket by geometric expansion from
// lambda_0 = mean(r) / (B/T), then bisect to 1e-9 relative. The constraint is
// an equality; an unattainable B/T raises InfeasibleBudgetError (never capped
// silently). Only click utility is admissible here; NetProfit is rejected.
BudgetPlan solve_lambda(const MarketModel& model, const PctrDistribution& pctr,
                        CostKind cost_kind, const UtilitySpec& utility, double budget,
                        std::int64_t volume, StrategyFamily family,
                        double max_bid = kDefaultMaxBid);

}  // namespace rtb
