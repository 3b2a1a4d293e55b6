#include "rtb/bidding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rtb/errors.hpp"

namespace rtb {

namespace {

double clamp_bid(double b, double max_bid) { return std::clamp(b, 0.0, max_bid); }

void check_max_bid(double max_bid) {
    if (!(max_bid > 0.0) || !std::isfinite(max_bid))
        throw DomainError("max_bid must be positive and finite");
}

void check_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw DomainError("lambda must be positive and finite");
}

// Pointwise Lagrangian integrand u*w(b) - lambda*c(b)*w(b).
double lagrangian_value(const MarketModel& model, CostKind cost_kind, double lambda, double u,
                        double b) {
    const double w = model.win_prob(b);
    const double cost_side =
        cost_kind == CostKind::First ? b * w : model.win_cost_integral(b);
    return u * w - lambda * cost_side;
}

// Residual of the stationarity condition; a root is an interior optimum.
// First price: lambda*w(b) - (u - lambda*b)*p_z(b).
// Second price, in the simplified form lambda*(b - c2(b)) - (u - lambda*c2(b)),
// which avoids dividing by w(b)^2 near b = 0.
double stationarity_residual(const MarketModel& model, CostKind cost_kind, double lambda,
                             double u, double b) {
    double f;
    if (cost_kind == CostKind::First) {
        f = lambda * model.win_prob(b) - (u - lambda * b) * model.density(b);
    } else {
        const double w = model.win_prob(b);
        const double c = w > 0.0 ? model.win_cost_integral(b) / w : 0.0;
        f = lambda * (b - c) - (u - lambda * c);
    }
    if (!std::isfinite(f))
        throw NumericError("non-finite stationarity residual at b = " + std::to_string(b));
    return f;
}

double bisect_root(const MarketModel& model, CostKind cost_kind, double lambda, double u,
                   double lo, double hi, double f_lo, double max_bid) {
    for (int i = 0; i < 300 && hi - lo > 1e-14 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = stationarity_residual(model, cost_kind, lambda, u, mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return clamp_bid(0.5 * (lo + hi), max_bid);
}

double boundary_by_lagrangian(const MarketModel& model, CostKind cost_kind, double lambda,
                              double u, double max_bid) {
    const double at_cap = lagrangian_value(model, cost_kind, lambda, u, max_bid);
    return at_cap > 0.0 ? max_bid : 0.0;
}

// Empirical density is discrete, so the smooth condition degenerates for the
// first-price cost: scan bucket upper edges and keep the best Lagrangian value.
double best_bucket_boundary(const MarketModel& model, CostKind cost_kind, double lambda,
                            double u, double max_bid) {
    double best_b = 0.0;
    double best_v = 0.0;  // L(0) = 0
    for (std::int64_t p : model.support()) {
        const double b = std::min(static_cast<double>(p) + 1.0, max_bid);
        const double v = lagrangian_value(model, cost_kind, lambda, u, b);
        if (v > best_v) {
            best_v = v;
            best_b = b;
        }
        if (b >= max_bid) break;
    }
    return best_b;
}

}  // namespace

double bid_truthful(double v, double r, double max_bid) {
    check_max_bid(max_bid);
    if (!(v > 0.0)) throw DomainError("click value v must be positive");
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("pCTR r must be in [0, 1]");
    return clamp_bid(v * r, max_bid);
}

double bid_first_price_optimal(double l, double lambda, double u, double max_bid) {
    check_max_bid(max_bid);
    if (!(l > 0.0)) throw DomainError("long-tail scale l must be positive");
    check_lambda(lambda);
    if (u <= 0.0) return 0.0;
    return clamp_bid(std::sqrt(u * l / lambda + l * l) - l, max_bid);
}

double bid_second_price_linear(double lambda, double u, double max_bid) {
    check_max_bid(max_bid);
    check_lambda(lambda);
    if (u <= 0.0) return 0.0;
    return clamp_bid(u / lambda, max_bid);
}

double bid_general_numeric(const MarketModel& model, CostKind cost_kind, double lambda,
                           double u, double max_bid) {
    check_max_bid(max_bid);
    check_lambda(lambda);
    if (u <= 0.0) return 0.0;

    if (!model.is_long_tail() && cost_kind == CostKind::First)
        return best_bucket_boundary(model, cost_kind, lambda, u, max_bid);

    double prev_b = max_bid;
    double prev_f = stationarity_residual(model, cost_kind, lambda, u, prev_b);
    if (prev_f == 0.0) return prev_b;
    if (prev_f < 0.0) {
        // Condition still pushing upward at the cap.
        return boundary_by_lagrangian(model, cost_kind, lambda, u, max_bid);
    }
    // Geometric probing b = max_bid * 2^-k for the sign change, then bisection.
    for (int k = 1; k <= 1080; ++k) {
        const double b = std::ldexp(max_bid, -k);
        if (b == 0.0) break;
        const double f = stationarity_residual(model, cost_kind, lambda, u, b);
        if (f == 0.0) return b;
        if ((f < 0.0) != (prev_f < 0.0))
            return bisect_root(model, cost_kind, lambda, u, b, prev_b, f, max_bid);
        prev_b = b;
        prev_f = f;
    }
    const double f0 = stationarity_residual(model, cost_kind, lambda, u, 0.0);
    if ((f0 < 0.0) != (prev_f < 0.0))
        return bisect_root(model, cost_kind, lambda, u, 0.0, prev_b, f0, max_bid);
    return boundary_by_lagrangian(model, cost_kind, lambda, u, max_bid);
}

BidStrategy BidStrategy::truthful(double v, double max_bid) {
    check_max_bid(max_bid);
    if (!(v > 0.0)) throw DomainError("click value v must be positive");
    BidStrategy s(Family::Truthful, "truthful", max_bid);
    s.value_ = v;
    return s;
}

BidStrategy BidStrategy::first_price_optimal(double l, double lambda, double max_bid) {
    check_max_bid(max_bid);
    if (!(l > 0.0)) throw DomainError("long-tail scale l must be positive");
    check_lambda(lambda);
    BidStrategy s(Family::FirstPriceOptimal, "first_price_optimal", max_bid);
    s.scale_ = l;
    s.lambda_ = lambda;
    return s;
}

BidStrategy BidStrategy::second_price_linear(double lambda, double max_bid) {
    check_max_bid(max_bid);
    check_lambda(lambda);
    BidStrategy s(Family::SecondPriceLinear, "second_price_linear", max_bid);
    s.lambda_ = lambda;
    return s;
}

BidStrategy BidStrategy::general_numeric(MarketModel model, CostKind cost_kind, double lambda,
                                         double max_bid) {
    check_max_bid(max_bid);
    check_lambda(lambda);
    BidStrategy s(Family::GeneralNumeric, "general_numeric", max_bid);
    s.model_ = std::make_shared<const MarketModel>(std::move(model));
    s.cost_kind_ = cost_kind;
    s.lambda_ = lambda;
    return s;
}

BidStrategy BidStrategy::constant(double bid, double max_bid) {
    check_max_bid(max_bid);
    if (!(bid >= 0.0) || !std::isfinite(bid)) throw DomainError("constant bid must be non-negative");
    BidStrategy s(Family::Constant, "constant_" + std::to_string(bid), max_bid);
    s.value_ = bid;
    return s;
}

double BidStrategy::bid(double r) const {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("pCTR r must be in [0, 1]");
    switch (family_) {
        case Family::Truthful:
            return bid_truthful(value_, r, max_bid_);
        case Family::FirstPriceOptimal:
            return bid_first_price_optimal(scale_, lambda_, r, max_bid_);
        case Family::SecondPriceLinear:
            return bid_second_price_linear(lambda_, r, max_bid_);
        case Family::GeneralNumeric:
            return bid_general_numeric(*model_, cost_kind_, lambda_, r, max_bid_);
        case Family::Constant:
            return clamp_bid(value_, max_bid_);
    }
    throw NumericError("unreachable strategy family");
}

}  // namespace rtb
