#include <benchmark/benchmark.h>

#include "rtb/bidding.hpp"
#include "rtb/lambda_solver.hpp"
#include "rtb/random.hpp"
#include "rtb/simulator.hpp"

using namespace rtb;

static void BM_FirstPriceClosedForm(benchmark::State& state) {
    Rng rng(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bid_first_price_optimal(50.0, 1e-5, 0.05 * rng.next_double()));
    }
}
BENCHMARK(BM_FirstPriceClosedForm);

static void BM_FirstPriceGeneralNumeric(benchmark::State& state) {
    const auto model = MarketModel::long_tail(50.0);
    Rng rng(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            bid_general_numeric(model, CostKind::First, 1e-5, 0.05 * rng.next_double()));
    }
}
BENCHMARK(BM_FirstPriceGeneralNumeric);

static void BM_SecondPriceGeneralNumeric(benchmark::State& state) {
    const auto model = MarketModel::long_tail(50.0);
    Rng rng(3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            bid_general_numeric(model, CostKind::Second, 1e-5, 0.05 * rng.next_double()));
    }
}
BENCHMARK(BM_SecondPriceGeneralNumeric);

static void BM_CampaignReplay(benchmark::State& state) {
    const auto model = MarketModel::long_tail(50.0);
    const auto pctr = PctrDistribution::from_samples({0.001, 0.005, 0.01});
    CampaignConfig cfg;
    cfg.budget = 1e12;
    cfg.volume = state.range(0);
    cfg.seed = 4;
    const auto stream = sample_impressions(model, pctr, cfg.volume, cfg.seed);
    const auto strategy = BidStrategy::second_price_linear(2e-4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_campaign(cfg, strategy, stream));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CampaignReplay)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
