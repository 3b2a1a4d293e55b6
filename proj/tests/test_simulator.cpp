#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "rtb/errors.hpp"
#include "rtb/random.hpp"
#include "rtb/simulator.hpp"

using namespace rtb;

namespace {

PctrDistribution heterogeneous_pctr(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> rs;
    rs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = -2e-3 * std::log(1.0 - rng.next_double());
        rs.push_back(std::clamp(r, 1e-5, 0.05));
    }
    return PctrDistribution::from_samples(rs);
}

CampaignConfig basic_config() {
    CampaignConfig cfg;
    cfg.budget = 1e12;
    cfg.volume = 1000000;
    cfg.auction = AuctionKind::Second;
    cfg.utility = UtilitySpec::click();
    cfg.seed = 2024;
    return cfg;
}

}  // namespace

TEST_CASE("zero bids never win or spend") {
    auto cfg = basic_config();
    cfg.volume = 100;
    const std::vector<Impression> stream(100, Impression{0.01, 5.0, false});
    const auto rep = run_campaign(cfg, BidStrategy::constant(0.0), stream);
    CHECK(rep.auctions_won == 0);
    CHECK(rep.spend == 0.0);
    CHECK(rep.clicks == 0);
    CHECK_FALSE(rep.exhausted_at.has_value());
    CHECK(rep.impressions_seen == 100);
}

TEST_CASE("deterministic single-impression path") {
    auto cfg = basic_config();
    cfg.budget = 100.0;
    cfg.volume = 1;
    const std::vector<Impression> stream{{1.0, 10.0, std::nullopt}};
    const auto rep = run_campaign(cfg, BidStrategy::constant(20.0), stream);
    CHECK(rep.auctions_won == 1);
    CHECK(rep.spend == doctest::Approx(10.0));
    CHECK(rep.clicks == 1);  // Bernoulli(1) clicks with certainty
}

TEST_CASE("first-price payment is the bid") {
    auto cfg = basic_config();
    cfg.auction = AuctionKind::First;
    cfg.budget = 100.0;
    cfg.volume = 1;
    const std::vector<Impression> stream{{0.5, 10.0, true}};
    const auto rep = run_campaign(cfg, BidStrategy::constant(20.0), stream);
    CHECK(rep.spend == doctest::Approx(20.0));
    CHECK(rep.clicks == 1);
}

TEST_CASE("budget exhaustion stops bidding and never overdraws") {
    auto cfg = basic_config();
    cfg.auction = AuctionKind::First;
    cfg.budget = 45.0;
    cfg.volume = 100;
    const std::vector<Impression> stream(100, Impression{0.01, 5.0, false});
    const auto rep = run_campaign(cfg, BidStrategy::constant(10.0), stream);
    CHECK(rep.auctions_won == 4);
    CHECK(rep.spend == doctest::Approx(40.0));
    REQUIRE(rep.exhausted_at.has_value());
    CHECK(*rep.exhausted_at == 4);
    CHECK(rep.spend <= cfg.budget);
}

TEST_CASE("profit reported only under net-profit utility") {
    auto cfg = basic_config();
    cfg.volume = 1;
    const std::vector<Impression> stream{{0.5, 10.0, true}};
    CHECK_FALSE(run_campaign(cfg, BidStrategy::constant(20.0), stream).profit.has_value());
    cfg.utility = UtilitySpec::net_profit(100.0);
    const auto rep = run_campaign(cfg, BidStrategy::constant(20.0), stream);
    REQUIRE(rep.profit.has_value());
    CHECK(*rep.profit == doctest::Approx(100.0 - 10.0));
}

TEST_CASE("invalid impression reports its index") {
    auto cfg = basic_config();
    cfg.volume = 10;
    std::vector<Impression> stream(3, Impression{0.01, 5.0, false});
    stream[2].z = -1.0;
    try {
        run_campaign(cfg, BidStrategy::constant(10.0), stream);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("stream longer than the volume is rejected") {
    auto cfg = basic_config();
    cfg.volume = 2;
    const std::vector<Impression> stream(3, Impression{0.01, 5.0, false});
    CHECK_THROWS_AS(run_campaign(cfg, BidStrategy::constant(10.0), stream), DomainError);
}

TEST_CASE("realized win rate and payment match the analytic landscape") {
    const auto model = MarketModel::long_tail(50.0);
    const auto pctr = PctrDistribution::from_samples({0.001});
    auto cfg = basic_config();
    cfg.volume = 200000;
    const auto stream = sample_impressions(model, pctr, cfg.volume, 77);
    const auto rep = run_campaign(cfg, BidStrategy::constant(50.0), stream);

    const double n = static_cast<double>(rep.impressions_seen);
    const double sigma_w = std::sqrt(0.25 / n);
    CHECK(std::abs(rep.realized_win_rate - 0.5) <= 3.0 * sigma_w);

    const double c2 = oracle::second_price_cost_quad(50.0, 50.0);
    const double ez2 =
        oracle::integrate([](double z) { return z * z * oracle::long_tail_density(50.0, z); },
                          0.0, 50.0) /
        oracle::win_prob_quad(50.0, 50.0);
    const double sigma_pay = std::sqrt((ez2 - c2 * c2) / static_cast<double>(rep.auctions_won));
    const double mean_pay = rep.spend / static_cast<double>(rep.auctions_won);
    CHECK(std::abs(mean_pay - c2) <= 3.0 * sigma_pay);
}

TEST_CASE("sample_impressions determinism and validation") {
    const auto model = MarketModel::long_tail(50.0);
    const auto pctr = heterogeneous_pctr(100, 4);
    CHECK_THROWS_AS(sample_impressions(model, pctr, 0, 1), DomainError);
    const auto a = sample_impressions(model, pctr, 1000, 5);
    const auto b = sample_impressions(model, pctr, 1000, 5);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].z == b[i].z);
        CHECK(a[i].r == b[i].r);
        CHECK(a[i].clicked == b[i].clicked);
    }
    const auto c = sample_impressions(model, pctr, 1000, 6);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) differs |= a[i].z != c[i].z;
    CHECK(differs);
}

TEST_CASE("sampled market prices track the analytic median") {
    const auto model = MarketModel::long_tail(50.0);
    const auto pctr = PctrDistribution::from_samples({0.01});
    auto stream = sample_impressions(model, pctr, 100000, 13);
    std::vector<double> zs;
    zs.reserve(stream.size());
    for (const auto& imp : stream) zs.push_back(imp.z);
    std::nth_element(zs.begin(), zs.begin() + zs.size() / 2, zs.end());
    // Median of the long-tail CDF b/(b+l) is exactly l; se ~ 2l/sqrt(n).
    CHECK(std::abs(zs[zs.size() / 2] - 50.0) <= 3.0 * 100.0 / std::sqrt(100000.0));
}

TEST_CASE("run_campaign is deterministic") {
    const auto model = MarketModel::long_tail(50.0);
    const auto pctr = heterogeneous_pctr(200, 8);
    auto cfg = basic_config();
    cfg.volume = 50000;
    const auto stream = sample_impressions(model, pctr, cfg.volume, cfg.seed, false);
    const auto s = BidStrategy::second_price_linear(3e-5);
    const auto a = run_campaign(cfg, s, stream);
    const auto b = run_campaign(cfg, s, stream);
    CHECK(a.spend == b.spend);
    CHECK(a.clicks == b.clicks);
    CHECK(a.auctions_won == b.auctions_won);
}

TEST_CASE("exhaustion frequency is zero with an effectively infinite budget") {
    const auto model = MarketModel::long_tail(50.0);
    const auto pctr = heterogeneous_pctr(200, 15);
    auto cfg = basic_config();
    BudgetPlan plan;
    plan.budget = 1e12;
    plan.volume = 2000;
    plan.cost_kind = CostKind::Second;
    plan.family = StrategyFamily::SecondPriceLinear;
    plan.lambda = 3e-5;
    const auto est = exhaustion_probability(cfg, plan, model, pctr, 100);
    CHECK(est.frequency == 0.0);
    CHECK(est.trials == 100);
    CHECK_THROWS_AS(exhaustion_probability(cfg, plan, model, pctr, 50), DomainError);
}

TEST_CASE("compare_strategies preconditions and common random numbers") {
    const auto model = MarketModel::long_tail(50.0);
    const auto pctr = heterogeneous_pctr(200, 16);
    auto cfg = basic_config();
    cfg.volume = 20000;
    CHECK_THROWS_AS(
        compare_strategies({BidStrategy::constant(10.0)}, cfg, model, pctr, 5), DomainError);
    // Two copies of the same strategy must see identical streams.
    const auto stats = compare_strategies(
        {BidStrategy::constant(30.0), BidStrategy::constant(30.0)}, cfg, model, pctr, 5);
    REQUIRE(stats.size() == 2);
    CHECK(stats[0].mean_clicks == stats[1].mean_clicks);
    CHECK(stats[0].mean_spend == stats[1].mean_spend);
    CHECK(stats[0].se_clicks == stats[1].se_clicks);
}

TEST_CASE("truth-telling beats an overbidding variant on realized profit") {
    const auto model = MarketModel::long_tail(50.0);
    Rng rng(31);
    std::vector<double> rs;
    for (int i = 0; i < 300; ++i) rs.push_back(0.002 + 0.018 * rng.next_double());
    const auto pctr = PctrDistribution::from_samples(rs);

    auto cfg = basic_config();
    cfg.volume = 200000;
    cfg.utility = UtilitySpec::net_profit(1000.0);
    const auto stats = compare_strategies(
        {BidStrategy::truthful(1000.0), BidStrategy::truthful(1500.0)}, cfg, model, pctr, 10);
    CHECK(stats[0].mean_profit >= stats[1].mean_profit);
}

TEST_CASE("report rendering") {
    SimulationReport rep;
    rep.impressions_seen = 10;
    rep.auctions_won = 4;
    rep.clicks = 1;
    rep.spend = 12.5;
    rep.realized_win_rate = 0.4;
    rep.realized_cpc = 12.5;
    const auto kv = report_to_kv(rep);
    CHECK(kv.find("impressions = 10") != std::string::npos);
    CHECK(kv.find("spend = 12.5") != std::string::npos);
    CHECK(kv.find("exhausted_at") == std::string::npos);
    CHECK(report_to_csv_row("constant", 0, rep) == "constant,0,10,4,1,12.5,,");
    rep.exhausted_at = 7;
    rep.profit = -2.0;
    CHECK(report_to_csv_row("constant", 1, rep) == "constant,1,10,4,1,12.5,-2,7");
}
