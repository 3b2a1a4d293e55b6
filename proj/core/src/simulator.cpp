#include "rtb/simulator.hpp"

#include <cmath>
#include <cstdio>

#include "rtb/errors.hpp"
#include "rtb/random.hpp"

namespace rtb {

namespace {

constexpr std::uint64_t kPriceStream = 1;
constexpr std::uint64_t kPctrStream = 2;
constexpr std::uint64_t kClickStream = 3;
constexpr std::uint64_t kTrialStream = 1000;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

SimulationReport run_campaign(const CampaignConfig& config, const BidStrategy& strategy,
                              std::span<const Impression> stream) {
    if (!(config.budget > 0.0)) throw DomainError("campaign budget must be positive");
    if (config.volume < 1) throw DomainError("campaign volume must be at least 1");
    if (static_cast<std::int64_t>(stream.size()) > config.volume)
        throw DomainError("impression stream longer than campaign volume");

    Rng click_rng(mix_seed(config.seed, kClickStream));
    SimulationReport rep;
    double remaining = config.budget;

    for (std::size_t i = 0; i < stream.size(); ++i) {
        const Impression& imp = stream[i];
        if (!(imp.r >= 0.0 && imp.r <= 1.0) || !(imp.z >= 0.0) || !std::isfinite(imp.z))
            throw DataError("invalid impression (r outside [0,1] or negative price)",
                            static_cast<long>(i + 1));
        const double b = strategy.bid(imp.r);
        if (b <= 0.0) {
            ++rep.impressions_seen;
            continue;
        }
        if (b > remaining) {
            // Worst-case payment no longer affordable: stop bidding here.
            rep.exhausted_at = static_cast<std::int64_t>(i);
            ++rep.impressions_seen;
            break;
        }
        ++rep.impressions_seen;
        if (b > imp.z) {
            ++rep.auctions_won;
            const double payment = config.auction == AuctionKind::First ? b : imp.z;
            remaining -= payment;
            rep.spend += payment;
            const bool clicked =
                imp.clicked.has_value() ? *imp.clicked : click_rng.bernoulli(imp.r);
            if (clicked) ++rep.clicks;
        }
    }

    if (rep.impressions_seen > 0)
        rep.realized_win_rate =
            static_cast<double>(rep.auctions_won) / static_cast<double>(rep.impressions_seen);
    if (rep.clicks > 0) rep.realized_cpc = rep.spend / static_cast<double>(rep.clicks);
    if (config.utility.kind == UtilitySpec::Kind::NetProfit)
        rep.profit = config.utility.click_value * static_cast<double>(rep.clicks) - rep.spend;
    return rep;
}

std::vector<Impression> sample_impressions(const MarketModel& model,
                                           const PctrDistribution& pctr, std::int64_t n,
                                           std::uint64_t seed, bool with_clicks) {
    if (n < 1) throw DomainError("sample_impressions: n must be at least 1");
    Rng price_rng(mix_seed(seed, kPriceStream));
    Rng pctr_rng(mix_seed(seed, kPctrStream));
    Rng click_rng(mix_seed(seed, kClickStream));

    std::vector<Impression> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        Impression imp;
        imp.z = model.quantile(price_rng.next_double());
        imp.r = pctr.pick(pctr_rng.next_double());
        if (with_clicks) imp.clicked = click_rng.bernoulli(imp.r);
        out.push_back(imp);
    }
    return out;
}

ExhaustionEstimate exhaustion_probability(const CampaignConfig& config, const BudgetPlan& plan,
                                          const MarketModel& model,
                                          const PctrDistribution& pctr, int trials) {
    if (trials < 100) throw DomainError("exhaustion_probability requires at least 100 trials");
    const BidStrategy strategy =
        make_strategy(plan.family, model, plan.cost_kind, plan.lambda, plan.max_bid);

    CampaignConfig trial_config = config;
    trial_config.budget = plan.budget;
    trial_config.volume = plan.volume;

    int exhausted = 0;
    for (int t = 0; t < trials; ++t) {
        trial_config.seed = mix_seed(config.seed, kTrialStream + static_cast<std::uint64_t>(t));
        const auto stream =
            sample_impressions(model, pctr, plan.volume, trial_config.seed, true);
        const auto rep = run_campaign(trial_config, strategy, stream);
        if (rep.exhausted_at.has_value()) ++exhausted;
    }

    ExhaustionEstimate est;
    est.trials = trials;
    est.frequency = static_cast<double>(exhausted) / static_cast<double>(trials);
    est.half_width =
        1.96 * std::sqrt(est.frequency * (1.0 - est.frequency) / static_cast<double>(trials));
    return est;
}

std::vector<StrategyStats> compare_strategies(const std::vector<BidStrategy>& candidates,
                                              const CampaignConfig& config,
                                              const MarketModel& model,
                                              const PctrDistribution& pctr, int replications) {
    if (candidates.size() < 2)
        throw DomainError("compare_strategies needs at least two candidates");
    if (replications < 1) throw DomainError("replications must be at least 1");

    const std::size_t k = candidates.size();
    std::vector<std::vector<double>> clicks(k), spend(k), profit(k), win_rate(k);
    std::vector<int> exhausted(k, 0);

    for (int rep = 0; rep < replications; ++rep) {
        // Clicks are pre-sampled into the stream, so every candidate sees the
        // identical realization (common random numbers).
        const std::uint64_t rep_seed = mix_seed(config.seed, static_cast<std::uint64_t>(rep));
        const auto stream = sample_impressions(model, pctr, config.volume, rep_seed, true);
        for (std::size_t c = 0; c < k; ++c) {
            const auto r = run_campaign(config, candidates[c], stream);
            clicks[c].push_back(static_cast<double>(r.clicks));
            spend[c].push_back(r.spend);
            profit[c].push_back(r.profit.value_or(0.0));
            win_rate[c].push_back(r.realized_win_rate);
            if (r.exhausted_at.has_value()) ++exhausted[c];
        }
    }

    auto mean_of = [](const std::vector<double>& xs) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s / static_cast<double>(xs.size());
    };
    auto se_of = [&](const std::vector<double>& xs, double mean) {
        if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        return std::sqrt(ss / static_cast<double>(xs.size() - 1) /
                         static_cast<double>(xs.size()));
    };

    std::vector<StrategyStats> out;
    out.reserve(k);
    for (std::size_t c = 0; c < k; ++c) {
        StrategyStats st;
        st.strategy = candidates[c].name();
        st.replications = replications;
        st.mean_clicks = mean_of(clicks[c]);
        st.se_clicks = se_of(clicks[c], st.mean_clicks);
        st.mean_spend = mean_of(spend[c]);
        st.se_spend = se_of(spend[c], st.mean_spend);
        st.mean_profit = mean_of(profit[c]);
        st.se_profit = se_of(profit[c], st.mean_profit);
        st.mean_win_rate = mean_of(win_rate[c]);
        st.exhaustion_frequency =
            static_cast<double>(exhausted[c]) / static_cast<double>(replications);
        out.push_back(std::move(st));
    }
    return out;
}

std::string report_to_kv(const SimulationReport& r) {
    std::string s;
    s += "impressions = " + std::to_string(r.impressions_seen) + "\n";
    s += "wins = " + std::to_string(r.auctions_won) + "\n";
    s += "clicks = " + std::to_string(r.clicks) + "\n";
    s += "spend = " + fmt_double(r.spend) + "\n";
    if (r.profit.has_value()) s += "profit = " + fmt_double(*r.profit) + "\n";
    if (r.exhausted_at.has_value())
        s += "exhausted_at = " + std::to_string(*r.exhausted_at) + "\n";
    s += "win_rate = " + fmt_double(r.realized_win_rate) + "\n";
    s += "cpc = " + fmt_double(r.realized_cpc) + "\n";
    return s;
}

std::string report_to_csv_row(const std::string& strategy, int replication,
                              const SimulationReport& r) {
    std::string row = strategy + "," + std::to_string(replication) + "," +
                      std::to_string(r.impressions_seen) + "," +
                      std::to_string(r.auctions_won) + "," + std::to_string(r.clicks) + "," +
                      fmt_double(r.spend) + ",";
    if (r.profit.has_value()) row += fmt_double(*r.profit);
    row += ",";
    if (r.exhausted_at.has_value()) row += std::to_string(*r.exhausted_at);
    return row;
}

}  // namespace rtb
