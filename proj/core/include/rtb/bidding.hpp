#pragma once

#include <memory>
#include <string>

#include "rtb/market_model.hpp"

namespace rtb {

inline constexpr double kDefaultMaxBid = 10000.0;

// Which cost function prices a won auction: pay the bid (first price) or the
// market price (second price, expected cost c2).
enum class CostKind { First, Second };

// b = v*r, clamped to [0, max_bid]. Optimal without a budget constraint.
double bid_truthful(double v, double r, double max_bid = kDefaultMaxBid);

// First-price closed form under the long-tail model:
// b = sqrt(u*l/lambda + l^2) - l, clamped. Non-positive utility bids 0.
double bid_first_price_optimal(double l, double lambda, double u,
                               double max_bid = kDefaultMaxBid);

// Second-price closed form, b = u/lambda clamped; holds for any p_z.
double bid_second_price_linear(double lambda, double u, double max_bid = kDefaultMaxBid);

// Numeric solution of the stationarity condition
//   lambda * c'(b) * w(b) = (u - lambda * c(b)) * w'(b)
// on [0, max_bid]. Sign change located by geometric probing then bisection;
// when the condition has no sign change in the bracket (or the density is
// discrete), returns the candidate maximizing u*w(b) - lambda*c(b)*w(b).
double bid_general_numeric(const MarketModel& model, CostKind cost_kind, double lambda,
                           double u, double max_bid = kDefaultMaxBid);

// A parametrized bid function r -> price. Constrained families (first-price
// optimal, second-price linear, general numeric) use click utility u = r.
// Immutable; bid() is pure and reentrant.
class BidStrategy {
public:
    static BidStrategy truthful(double v, double max_bid = kDefaultMaxBid);
    static BidStrategy first_price_optimal(double l, double lambda,
                                           double max_bid = kDefaultMaxBid);
    static BidStrategy second_price_linear(double lambda, double max_bid = kDefaultMaxBid);
    static BidStrategy general_numeric(MarketModel model, CostKind cost_kind, double lambda,
                                       double max_bid = kDefaultMaxBid);
    // Fixed bid regardless of r; baseline for strategy comparisons.
    static BidStrategy constant(double bid, double max_bid = kDefaultMaxBid);

    double bid(double r) const;
    double max_bid() const { return max_bid_; }
    const std::string& name() const { return name_; }

private:
    enum class Family { Truthful, FirstPriceOptimal, SecondPriceLinear, GeneralNumeric, Constant };

    BidStrategy(Family family, std::string name, double max_bid)
        : family_(family), name_(std::move(name)), max_bid_(max_bid) {}

    Family family_;
    std::string name_;
    double max_bid_;
    double value_ = 0.0;   // v (Truthful) or the fixed bid (Constant)
    double scale_ = 0.0;   // l (FirstPriceOptimal)
    double lambda_ = 0.0;
    std::shared_ptr<const MarketModel> model_;  // GeneralNumeric
    CostKind cost_kind_ = CostKind::First;
};

}  // namespace rtb
