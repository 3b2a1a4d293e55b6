#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtb/lambda_solver.hpp"
#include "rtb/market_model.hpp"
#include "rtb/simulator.hpp"

namespace rtb::io {

// Flat `key = value` file, one pair per line; blank lines and '#' comments
// ignored. Empirical model buckets nest as `bucket.<price> = count`.
std::map<std::string, std::string> parse_kv_file(const std::string& path);

MarketModel read_model_file(const std::string& path);
void write_model_file(const std::string& path, const MarketModel& model);

// One campaign log record: `click<TAB>market_price<TAB>pctr`, header-less.
struct BidLogRecord {
    bool click = false;
    std::int64_t market_price = 0;
    double pctr = 0.0;
};

// Strict parse; any malformed line raises DataError with its line number.
std::vector<BidLogRecord> read_bid_log(const std::string& path);

// Market prices for model fitting. Accepts either bare one-column price logs
// or full three-column campaign logs (the market_price field is taken).
std::vector<PriceSample> read_price_log(const std::string& path);

PctrDistribution pctr_from_log(const std::vector<BidLogRecord>& records);
std::vector<Impression> impressions_from_log(const std::vector<BidLogRecord>& records);

struct PlanFile {
    double lambda = 0.0;
    double spend_rate = 0.0;
    double residual = 0.0;
    double budget = 0.0;
    std::int64_t volume = 0;
    CostKind cost_kind = CostKind::Second;
    StrategyFamily family = StrategyFamily::SecondPriceLinear;
    double max_bid = kDefaultMaxBid;
};

void write_plan_file(const std::string& path, const BudgetPlan& plan);
PlanFile read_plan_file(const std::string& path);

// Parsed campaign config file with CLI-level fields. Cross-field rules
// (truthful needs net_profit; constrained strategies need click utility) are
// enforced at parse time, before any computation.
struct CliConfig {
    CampaignConfig campaign;
    CostKind cost_accounting = CostKind::Second;
    std::string strategy;       // truthful | first_price_optimal | second_price_linear | general_numeric
    std::string price_unit = "micro";
    std::optional<double> pctr_const;  // single-atom pCTR for synthetic runs without a log
};

CliConfig read_config_file(const std::string& path);

}  // namespace rtb::io
