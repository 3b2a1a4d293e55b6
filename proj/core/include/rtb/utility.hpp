#pragma once

#include <cmath>
#include <optional>

#include "rtb/errors.hpp"

namespace rtb {

// Campaign KPI: click count (u = r) or net profit (u = v*r - z, with
// per-click value v in price units).
struct UtilitySpec {
    enum class Kind { Click, NetProfit };

    Kind kind = Kind::Click;
    double click_value = 0.0;  // v, NetProfit only

    static UtilitySpec click() { return {Kind::Click, 0.0}; }

    static UtilitySpec net_profit(double v) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw DomainError("net-profit click value v must be positive");
        return {Kind::NetProfit, v};
    }
};

// Click -> r; NetProfit -> v*r - z (may be negative).
inline double eval_utility(const UtilitySpec& spec, double r,
                           std::optional<double> z = std::nullopt) {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("pCTR r must be in [0, 1]");
    if (spec.kind == UtilitySpec::Kind::Click) return r;
    if (!z.has_value())
        throw ArgumentError("net-profit utility requires the market price z");
    if (*z < 0.0) throw DomainError("market price z must be non-negative");
    return spec.click_value * r - *z;
}

}  // namespace rtb
