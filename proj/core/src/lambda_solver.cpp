#include "rtb/lambda_solver.hpp"

#include <algorithm>
#include <cmath>

#include "rtb/errors.hpp"

namespace rtb {

PctrDistribution PctrDistribution::from_samples(const std::vector<double>& rs) {
    std::vector<WeightedSample> ws;
    ws.reserve(rs.size());
    for (double r : rs) ws.push_back({r, 1.0});
    return from_weighted(std::move(ws));
}

PctrDistribution PctrDistribution::from_weighted(std::vector<WeightedSample> samples) {
    if (samples.empty()) throw DomainError("pCTR distribution needs at least one sample");
    PctrDistribution d;
    double cum = 0.0, wmean = 0.0;
    d.cum_weight_.reserve(samples.size());
    for (const auto& s : samples) {
        if (!(s.r >= 0.0 && s.r <= 1.0)) throw DomainError("pCTR r must be in [0, 1]");
        if (!(s.weight > 0.0)) throw DomainError("pCTR sample weight must be positive");
        cum += s.weight;
        wmean += s.r * s.weight;
        d.cum_weight_.push_back(cum);
    }
    d.samples_ = std::move(samples);
    d.total_weight_ = cum;
    d.mean_ = wmean / cum;
    return d;
}

double PctrDistribution::pick(double u) const {
    if (!(u >= 0.0) || u >= 1.0) throw DomainError("pick: u must be in [0, 1)");
    const double target = u * total_weight_;
    auto it = std::upper_bound(cum_weight_.begin(), cum_weight_.end(), target);
    if (it == cum_weight_.end()) it = cum_weight_.end() - 1;
    return samples_[static_cast<std::size_t>(it - cum_weight_.begin())].r;
}

namespace {

// Spend contribution c(b)*w(b) of one impression. For the second-price cost
// this is the partial moment integral directly, so w(b) = 0 contributes 0
// without evaluating the undefined conditional.
double spend_at_bid(const MarketModel& model, CostKind cost_kind, double b) {
    if (b <= 0.0) return 0.0;
    return cost_kind == CostKind::First ? b * model.win_prob(b) : model.win_cost_integral(b);
}

}  // namespace

double expected_spend_rate(const BidStrategy& strategy, const MarketModel& model,
                           const PctrDistribution& pctr, CostKind cost_kind) {
    // Kahan summation; fixed sample order keeps results partition-independent.
    double sum = 0.0, comp = 0.0;
    for (const auto& s : pctr.samples()) {
        const double term = s.weight * spend_at_bid(model, cost_kind, strategy.bid(s.r));
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum / pctr.total_weight();
}

double max_spend_rate(const MarketModel& model, CostKind cost_kind, double max_bid) {
    return spend_at_bid(model, cost_kind, max_bid);
}

BidStrategy make_strategy(StrategyFamily family, const MarketModel& model, CostKind cost_kind,
                          double lambda, double max_bid) {
    switch (family) {
        case StrategyFamily::FirstPriceOptimal:
            if (!model.is_long_tail())
                throw ConfigError("first_price_optimal strategy requires a long-tail model");
            return BidStrategy::first_price_optimal(model.scale(), lambda, max_bid);
        case StrategyFamily::SecondPriceLinear:
            return BidStrategy::second_price_linear(lambda, max_bid);
        case StrategyFamily::GeneralNumeric:
            return BidStrategy::general_numeric(model, cost_kind, lambda, max_bid);
    }
    throw ConfigError("unknown strategy family");
}

BudgetPlan solve_lambda(const MarketModel& model, const PctrDistribution& pctr,
                        CostKind cost_kind, const UtilitySpec& utility, double budget,
                        std::int64_t volume, StrategyFamily family, double max_bid) {
    if (utility.kind != UtilitySpec::Kind::Click)
        throw ConfigError("budget-constrained solving admits only click utility");
    if (!(budget > 0.0)) throw DomainError("budget must be positive");
    if (volume < 1) throw DomainError("volume must be at least 1");

    const double target = budget / static_cast<double>(volume);
    if (!(target > 0.0)) throw DomainError("degenerate budget: B/T is zero");
    const double ceiling = max_spend_rate(model, cost_kind, max_bid);
    if (target >= ceiling * (1.0 - 1e-12))
        throw InfeasibleBudgetError(
            "budget rate B/T exceeds the maximum attainable spend rate", ceiling);

    auto spend_at = [&](double lambda) {
        return expected_spend_rate(make_strategy(family, model, cost_kind, lambda, max_bid),
                                   model, pctr, cost_kind);
    };

    // Spend is decreasing in lambda. Bracket from the heuristic scale
    // lambda_0 = mean utility / target bid rate, expanding by 4x.
    double lo = pctr.mean() / target;
    if (!(lo > 0.0) || !std::isfinite(lo)) lo = 1.0;
    double hi = lo;
    if (spend_at(lo) > target) {
        // Need a larger lambda on the high side.
        for (int i = 0; i < 600 && spend_at(hi) > target; ++i) hi *= 4.0;
    } else {
        for (int i = 0; i < 600 && spend_at(lo) < target; ++i) lo /= 4.0;
    }
    if (spend_at(lo) < target || spend_at(hi) > target)
        throw NumericError("failed to bracket lambda for the budget constraint");

    while (hi - lo > 1e-9 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (spend_at(mid) > target)
            lo = mid;
        else
            hi = mid;
    }

    BudgetPlan plan;
    plan.budget = budget;
    plan.volume = volume;
    plan.cost_kind = cost_kind;
    plan.family = family;
    plan.lambda = 0.5 * (lo + hi);
    plan.max_bid = max_bid;
    plan.spend_rate = spend_at(plan.lambda);
    plan.residual = plan.spend_rate - target;
    if (std::abs(plan.residual) > 1e-6 * target)
        throw NumericError("budget constraint residual above tolerance; spend rate is not "
                           "continuous at the solution");
    return plan;
}

}  // namespace rtb
