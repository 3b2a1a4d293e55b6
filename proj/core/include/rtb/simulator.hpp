#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtb/bidding.hpp"
#include "rtb/lambda_solver.hpp"
#include "rtb/market_model.hpp"
#include "rtb/utility.hpp"

namespace rtb {

enum class AuctionKind { First, Second };

struct CampaignConfig {
    double budget = 0.0;
    std::int64_t volume = 0;
    AuctionKind auction = AuctionKind::Second;
    UtilitySpec utility = UtilitySpec::click();
    double max_bid = kDefaultMaxBid;
    std::uint64_t seed = 0;
};

struct Impression {
    double r = 0.0;                       // pCTR
    double z = 0.0;                       // market price
    std::optional<bool> clicked;          // logged outcome; sampled if absent
};

struct SimulationReport {
    std::int64_t impressions_seen = 0;
    std::int64_t auctions_won = 0;
    std::int64_t clicks = 0;
    double spend = 0.0;
    std::optional<double> profit;         // only under net-profit utility
    std::optional<std::int64_t> exhausted_at;  // index of the first skipped auction
    double realized_win_rate = 0.0;
    double realized_cpc = 0.0;            // spend / clicks, 0 when no clicks
};

// Replay a campaign over the impression stream. Per impression: bid b =
// strategy(r); win iff b > z; pay b (first price) or z (second price).
// Bidding stops at the first auction whose worst-case payment (the bid)
// exceeds the remaining budget; that index is recorded as exhausted_at.
// Clicks come from the logged flag or a Bernoulli(r) draw seeded from
// config.seed.
SimulationReport run_campaign(const CampaignConfig& config, const BidStrategy& strategy,
                              std::span<const Impression> stream);

// Draw n impressions: z by inverse CDF of the market model, r by weighted
// choice from the pCTR distribution, click by Bernoulli(r). The three draws
// use independent sub-streams of the seed, so identical streams can be shared
// across strategies. Deterministic given the seed.
std::vector<Impression> sample_impressions(const MarketModel& model,
                                           const PctrDistribution& pctr, std::int64_t n,
                                           std::uint64_t seed, bool with_clicks = true);

struct ExhaustionEstimate {
    double frequency = 0.0;
    double half_width = 0.0;  // 95% binomial confidence half-width
    int trials = 0;
};

// Fraction of independent volume-length replays that hit the budget before
// the end of the stream. Trial i uses the sub-seed mix(config.seed, i).
ExhaustionEstimate exhaustion_probability(const CampaignConfig& config, const BudgetPlan& plan,
                                          const MarketModel& model,
                                          const PctrDistribution& pctr, int trials);

struct StrategyStats {
    std::string strategy;
    int replications = 0;
    double mean_clicks = 0.0, se_clicks = 0.0;
    double mean_spend = 0.0, se_spend = 0.0;
    double mean_profit = 0.0, se_profit = 0.0;
    double mean_win_rate = 0.0;
    double exhaustion_frequency = 0.0;
};

// Run every candidate on identical impression streams (common random numbers
// per replication) and report per-strategy means with standard errors.
std::vector<StrategyStats> compare_strategies(const std::vector<BidStrategy>& candidates,
                                              const CampaignConfig& config,
                                              const MarketModel& model,
                                              const PctrDistribution& pctr, int replications);

// Line-oriented key=value rendering of a report.
std::string report_to_kv(const SimulationReport& report);

inline constexpr const char* kCsvHeader =
    "strategy,replication,impressions,wins,clicks,spend,profit,exhausted_at";

// One CSV row in the kCsvHeader schema; profit and exhausted_at render empty
// when absent.
std::string report_to_csv_row(const std::string& strategy, int replication,
                              const SimulationReport& report);

}  // namespace rtb
