#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rtb/errors.hpp"
#include "rtb/io.hpp"
#include "rtb/random.hpp"
#include "rtb/simulator.hpp"

namespace {

using namespace rtb;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitMissingDependency = 4;

int cmd_fit(const std::string& log_path, const std::string& out_path,
            const std::string& kind) {
    const auto samples = io::read_price_log(log_path);
    if (samples.empty()) throw DataError("empty market price log: " + log_path, 0);
    MarketModel model = kind == "empirical" ? MarketModel::empirical_from_samples(samples)
                                            : MarketModel::fit_long_tail(samples);
    io::write_model_file(out_path, model);
    if (model.is_long_tail())
        std::printf("fitted long_tail l = %.6f from %zu samples\n", model.scale(),
                    samples.size());
    else
        std::printf("built empirical model with %zu buckets from %zu samples\n",
                    model.buckets().size(), samples.size());
    return kExitOk;
}

StrategyFamily family_from_name(const std::string& name) {
    if (name == "first_price_optimal") return StrategyFamily::FirstPriceOptimal;
    if (name == "second_price_linear") return StrategyFamily::SecondPriceLinear;
    if (name == "general_numeric") return StrategyFamily::GeneralNumeric;
    throw ConfigError("strategy '" + name + "' has no budget plan (use a constrained strategy)");
}

int cmd_plan(const std::string& config_path, const std::string& model_path,
             const std::string& log_path, const std::string& out_path) {
    const auto cfg = io::read_config_file(config_path);
    const auto model = io::read_model_file(model_path);
    const auto pctr = io::pctr_from_log(io::read_bid_log(log_path));
    const auto family = family_from_name(cfg.strategy);

    const auto plan =
        solve_lambda(model, pctr, cfg.cost_accounting, cfg.campaign.utility,
                     cfg.campaign.budget, cfg.campaign.volume, family, cfg.campaign.max_bid);
    io::write_plan_file(out_path, plan);
    std::printf("lambda = %.10g  expected_spend_rate = %.10g  residual = %.3g\n", plan.lambda,
                plan.spend_rate, plan.residual);
    return kExitOk;
}

BidStrategy build_strategy(const io::CliConfig& cfg, const std::optional<MarketModel>& model,
                           const std::optional<io::PlanFile>& plan) {
    if (cfg.strategy == "truthful")
        return BidStrategy::truthful(cfg.campaign.utility.click_value, cfg.campaign.max_bid);
    if (!plan.has_value())
        throw ConfigError("constrained strategy '" + cfg.strategy + "' needs --plan");
    const auto family = family_from_name(cfg.strategy);
    if (family == StrategyFamily::SecondPriceLinear)
        return BidStrategy::second_price_linear(plan->lambda, cfg.campaign.max_bid);
    if (!model.has_value())
        throw ConfigError("strategy '" + cfg.strategy + "' needs --model");
    return make_strategy(family, *model, plan->cost_kind, plan->lambda, cfg.campaign.max_bid);
}

int cmd_simulate(const std::string& config_path, const std::string& model_path,
                 const std::string& log_path, const std::string& plan_path,
                 const std::string& csv_out, int trials, std::optional<std::uint64_t> seed) {
    auto cfg = io::read_config_file(config_path);
    if (seed.has_value()) cfg.campaign.seed = *seed;

    std::optional<MarketModel> model;
    if (!model_path.empty()) model = io::read_model_file(model_path);
    std::optional<io::PlanFile> plan;
    if (!plan_path.empty()) plan = io::read_plan_file(plan_path);

    const bool constrained = cfg.strategy != "truthful";
    if (constrained && !plan.has_value()) {
        std::fprintf(stderr, "error: strategy '%s' requires a plan file (--plan)\n",
                     cfg.strategy.c_str());
        return kExitMissingDependency;
    }
    const BidStrategy strategy = build_strategy(cfg, model, plan);

    // Impression source: replay a log, or sample synthetically from a model.
    std::vector<Impression> logged;
    std::optional<PctrDistribution> pctr;
    if (!log_path.empty()) {
        const auto records = io::read_bid_log(log_path);
        if (records.empty()) throw DataError("empty campaign log: " + log_path, 0);
        if (model.has_value())
            pctr = io::pctr_from_log(records);
        else
            logged = io::impressions_from_log(records);
    } else if (model.has_value()) {
        if (!cfg.pctr_const.has_value())
            throw ConfigError("synthetic simulation needs a --log for pCTRs or 'pctr' in config");
        pctr = PctrDistribution::from_samples({*cfg.pctr_const});
    } else {
        throw ConfigError("simulate needs --model or --log as the impression source");
    }

    const bool fresh = !std::filesystem::exists(csv_out) ||
                       std::filesystem::file_size(csv_out) == 0;
    std::ofstream csv(csv_out, std::ios::app);
    if (!csv) throw DataError("cannot write file: " + csv_out, 0);
    if (fresh) csv << kCsvHeader << "\n";

    for (int t = 0; t < trials; ++t) {
        CampaignConfig run_cfg = cfg.campaign;
        run_cfg.seed = mix_seed(cfg.campaign.seed, static_cast<std::uint64_t>(t));
        SimulationReport rep;
        if (model.has_value()) {
            const std::int64_t n =
                logged.empty() ? cfg.campaign.volume : static_cast<std::int64_t>(logged.size());
            const auto stream = sample_impressions(*model, *pctr, n, run_cfg.seed, true);
            rep = run_campaign(run_cfg, strategy, stream);
        } else {
            rep = run_campaign(run_cfg, strategy, logged);
        }
        std::printf("# replication %d\n%s", t, report_to_kv(rep).c_str());
        csv << report_to_csv_row(cfg.strategy, t, rep) << "\n";
    }
    return kExitOk;
}

struct CsvRow {
    std::string strategy;
    double clicks, spend, wins, impressions;
    std::optional<double> profit;
    bool exhausted;
};

std::vector<CsvRow> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path, 0);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw DataError("malformed CSV header in " + path, 1);
    std::vector<CsvRow> rows;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) f.push_back(field);
        if (line.back() == ',') f.push_back("");
        if (f.size() != 8) throw DataError("expected 8 CSV fields", lineno);
        CsvRow row;
        row.strategy = f[0];
        try {
            row.impressions = std::stod(f[2]);
            row.wins = std::stod(f[3]);
            row.clicks = std::stod(f[4]);
            row.spend = std::stod(f[5]);
            if (!f[6].empty()) row.profit = std::stod(f[6]);
            row.exhausted = !f[7].empty();
        } catch (const std::exception&) {
            throw DataError("malformed CSV row", lineno);
        }
        rows.push_back(row);
    }
    if (rows.empty()) throw DataError("no data rows in " + path, 0);
    return rows;
}

std::string mean_se(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    char buf[64];
    if (xs.size() < 2) {
        std::snprintf(buf, sizeof(buf), "%11.2f (se -)", mean);
        return buf;
    }
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double se = std::sqrt(ss / static_cast<double>(xs.size() - 1) /
                                static_cast<double>(xs.size()));
    std::snprintf(buf, sizeof(buf), "%11.2f (se %.2f)", mean, se);
    return buf;
}

int cmd_report(const std::string& csv_in) {
    const auto rows = read_csv(csv_in);
    std::map<std::string, std::vector<CsvRow>> by_strategy;
    for (const auto& row : rows) by_strategy[row.strategy].push_back(row);

    std::printf("%-22s %4s %24s %24s %24s %9s %9s\n", "strategy", "n", "clicks", "spend",
                "profit", "win_rate", "exhaust");
    for (const auto& [name, group] : by_strategy) {
        std::vector<double> clicks, spend, profit;
        double wins = 0.0, imps = 0.0;
        int exhausted = 0;
        bool any_profit = false;
        for (const auto& row : group) {
            clicks.push_back(row.clicks);
            spend.push_back(row.spend);
            if (row.profit.has_value()) {
                profit.push_back(*row.profit);
                any_profit = true;
            }
            wins += row.wins;
            imps += row.impressions;
            exhausted += row.exhausted ? 1 : 0;
        }
        const std::string profit_col = any_profit ? mean_se(profit) : std::string("-");
        std::printf("%-22s %4zu %24s %24s %24s %9.4f %9.3f\n", name.c_str(), group.size(),
                    mean_se(clicks).c_str(), mean_se(spend).c_str(), profit_col.c_str(),
                    imps > 0 ? wins / imps : 0.0,
                    static_cast<double>(exhausted) / static_cast<double>(group.size()));
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal real-time bidding toolkit"};
    app.require_subcommand(1);

    std::string config_path, model_path, log_path, plan_path, out_path, kind = "long_tail";
    int trials = 1;
    std::optional<std::uint64_t> seed;

    auto* fit = app.add_subcommand("fit", "fit a market price model from a log");
    fit->add_option("--log", log_path, "market price log")->required();
    fit->add_option("--out", out_path, "model file to write")->required();
    fit->add_option("--kind", kind, "long_tail | empirical")
        ->check(CLI::IsMember({"long_tail", "empirical"}));

    auto* plan = app.add_subcommand("plan", "solve the budget constraint for lambda");
    plan->add_option("--config", config_path, "campaign config")->required();
    plan->add_option("--model", model_path, "market model file")->required();
    plan->add_option("--log", log_path, "campaign log supplying pCTRs")->required();
    plan->add_option("--out", out_path, "plan file to write")->required();

    auto* simulate = app.add_subcommand("simulate", "run a Monte Carlo campaign replay");
    simulate->add_option("--config", config_path, "campaign config")->required();
    simulate->add_option("--model", model_path, "market model file (synthetic source)");
    simulate->add_option("--log", log_path, "campaign log (replay source or pCTR pool)");
    simulate->add_option("--plan", plan_path, "plan file for constrained strategies");
    simulate->add_option("--out", out_path, "CSV file to append reports to")->required();
    simulate->add_option("--trials", trials, "number of replications");
    simulate->add_option("--seed", seed, "override the config seed");

    auto* report = app.add_subcommand("report", "summarize a simulation CSV");
    report->add_option("--in", log_path, "CSV produced by simulate")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed()) return cmd_fit(log_path, out_path, kind);
        if (plan->parsed()) return cmd_plan(config_path, model_path, log_path, out_path);
        if (simulate->parsed())
            return cmd_simulate(config_path, model_path, log_path, plan_path, out_path, trials,
                                seed);
        if (report->parsed()) return cmd_report(log_path);
    } catch (const rtb::InfeasibleBudgetError& e) {
        std::fprintf(stderr, "error: %s (max attainable spend rate = %.10g)\n", e.what(),
                     e.max_spend_rate);
        return kExitInfeasible;
    } catch (const rtb::DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const rtb::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return kExitOk;
}
