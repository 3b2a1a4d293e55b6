#include "rtb/market_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rtb/errors.hpp"

namespace rtb {

namespace {

// Maximize f on [lo, hi] by golden-section search, relative tolerance rel_tol.
template <typename F>
double golden_section_max(F f, double lo, double hi, double rel_tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > rel_tol * std::max(1.0, std::abs(a) + std::abs(b))) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2.0;
}

}  // namespace

MarketModel MarketModel::long_tail(double l) {
    if (!(l > 0.0) || !std::isfinite(l))
        throw DomainError("long-tail scale l must be positive and finite");
    MarketModel m;
    m.kind_ = Kind::LongTail;
    m.scale_l_ = l;
    return m;
}

MarketModel MarketModel::empirical(std::map<std::int64_t, std::uint64_t> buckets) {
    MarketModel m;
    m.kind_ = Kind::Empirical;
    m.buckets_ = std::move(buckets);
    m.build_empirical_index();
    return m;
}

void MarketModel::build_empirical_index() {
    total_ = 0;
    support_.clear();
    cum_count_.clear();
    cum_price_mass_.clear();
    double cc = 0.0, cpm = 0.0;
    for (const auto& [price, count] : buckets_) {
        if (price < 0) throw DomainError("empirical bucket price must be non-negative");
        if (count == 0) continue;
        total_ += count;
        cc += static_cast<double>(count);
        cpm += static_cast<double>(price) * static_cast<double>(count);
        support_.push_back(price);
        cum_count_.push_back(cc);
        cum_price_mass_.push_back(cpm);
    }
    if (total_ == 0) throw DomainError("empirical model needs at least one observation");
}

MarketModel MarketModel::fit_long_tail(const std::vector<PriceSample>& samples) {
    if (samples.empty()) throw FitError("cannot fit long-tail model from empty sample set");
    std::int64_t max_z = 0;
    bool any_positive = false;
    for (const auto& s : samples) {
        if (s.price < 0) throw DomainError("market price must be non-negative");
        max_z = std::max(max_z, s.price);
        any_positive |= s.price > 0;
    }
    if (!any_positive)
        throw FitError("cannot fit long-tail model: all observed prices are zero");

    // Log-likelihood of l under p_z(z) = l/(l+z)^2, up to the constant n.
    auto log_lik = [&](double l) {
        double ll = static_cast<double>(samples.size()) * std::log(l);
        for (const auto& s : samples) ll -= 2.0 * std::log(l + static_cast<double>(s.price));
        return ll;
    };
    const double hi = 10.0 * static_cast<double>(max_z) + 1.0;
    const double l_hat = golden_section_max(log_lik, 1e-6, hi, 1e-6);
    return long_tail(l_hat);
}

MarketModel MarketModel::empirical_from_samples(const std::vector<PriceSample>& samples) {
    if (samples.empty()) throw FitError("cannot build empirical model from empty sample set");
    std::map<std::int64_t, std::uint64_t> buckets;
    for (const auto& s : samples) {
        if (s.price < 0) throw DomainError("market price must be non-negative");
        ++buckets[s.price];
    }
    return empirical(std::move(buckets));
}

double MarketModel::scale() const {
    if (kind_ != Kind::LongTail) throw ArgumentError("scale() requires a long-tail model");
    return scale_l_;
}

const std::map<std::int64_t, std::uint64_t>& MarketModel::buckets() const {
    if (kind_ != Kind::Empirical) throw ArgumentError("buckets() requires an empirical model");
    return buckets_;
}

const std::vector<std::int64_t>& MarketModel::support() const {
    if (kind_ != Kind::Empirical) throw ArgumentError("support() requires an empirical model");
    return support_;
}

double MarketModel::density(double z) const {
    if (z < 0.0 || !std::isfinite(z)) throw DomainError("density: z must be non-negative");
    if (kind_ == Kind::LongTail) {
        const double d = scale_l_ + z;
        return scale_l_ / (d * d);
    }
    const auto bucket = static_cast<std::int64_t>(std::floor(z));
    auto it = buckets_.find(bucket);
    if (it == buckets_.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(total_);
}

double MarketModel::win_prob(double b) const {
    if (b < 0.0 || std::isnan(b)) throw DomainError("win_prob: bid must be non-negative");
    if (kind_ == Kind::LongTail) return b / (b + scale_l_);
    // Mass strictly below b.
    auto it = std::lower_bound(support_.begin(), support_.end(), b,
                               [](std::int64_t p, double v) { return static_cast<double>(p) < v; });
    if (it == support_.begin()) return 0.0;
    const auto idx = static_cast<std::size_t>(it - support_.begin()) - 1;
    return cum_count_[idx] / static_cast<double>(total_);
}

double MarketModel::win_cost_integral(double b) const {
    if (b < 0.0 || std::isnan(b)) throw DomainError("win_cost_integral: bid must be non-negative");
    if (kind_ == Kind::LongTail) {
        // integral of z * l/(l+z)^2 over [0,b] = l * (ln(1 + b/l) - b/(l+b))
        return scale_l_ * (std::log1p(b / scale_l_) - b / (scale_l_ + b));
    }
    auto it = std::lower_bound(support_.begin(), support_.end(), b,
                               [](std::int64_t p, double v) { return static_cast<double>(p) < v; });
    if (it == support_.begin()) return 0.0;
    const auto idx = static_cast<std::size_t>(it - support_.begin()) - 1;
    return cum_price_mass_[idx] / static_cast<double>(total_);
}

double MarketModel::expected_second_price_cost(double b) const {
    if (!(b > 0.0)) throw DomainError("expected_second_price_cost: bid must be positive");
    const double w = win_prob(b);
    if (w <= 0.0)
        throw DomainError("expected_second_price_cost undefined: win probability is zero");
    return win_cost_integral(b) / w;
}

double MarketModel::quantile(double u) const {
    if (!(u >= 0.0) || u >= 1.0) throw DomainError("quantile: u must be in [0, 1)");
    if (kind_ == Kind::LongTail) return scale_l_ * u / (1.0 - u);
    const double target = u * static_cast<double>(total_);
    auto it = std::upper_bound(cum_count_.begin(), cum_count_.end(), target);
    if (it == cum_count_.end()) it = cum_count_.end() - 1;
    return static_cast<double>(support_[static_cast<std::size_t>(it - cum_count_.begin())]);
}

}  // namespace rtb
