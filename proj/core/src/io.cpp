#include "rtb/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rtb/errors.hpp"

namespace rtb::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::int64_t parse_int(const std::string& s, long line) {
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw DataError("expected integer, got '" + s + "'", line);
    return v;
}

double parse_real(const std::string& s, long line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError("expected number, got '" + s + "'", line);
    }
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path, 0);
    return in;
}

const std::string& require_key(const std::map<std::string, std::string>& kv,
                               const std::string& key, const std::string& path) {
    auto it = kv.find(key);
    if (it == kv.end()) throw DataError("missing key '" + key + "' in " + path, 0);
    return it->second;
}

CostKind parse_cost_kind(const std::string& s, long line) {
    if (s == "first") return CostKind::First;
    if (s == "second") return CostKind::Second;
    throw DataError("expected 'first' or 'second', got '" + s + "'", line);
}

StrategyFamily parse_family(const std::string& s, long line) {
    if (s == "first_price_optimal") return StrategyFamily::FirstPriceOptimal;
    if (s == "second_price_linear") return StrategyFamily::SecondPriceLinear;
    if (s == "general_numeric") return StrategyFamily::GeneralNumeric;
    throw DataError("unknown strategy family '" + s + "'", line);
}

const char* family_name(StrategyFamily f) {
    switch (f) {
        case StrategyFamily::FirstPriceOptimal: return "first_price_optimal";
        case StrategyFamily::SecondPriceLinear: return "second_price_linear";
        case StrategyFamily::GeneralNumeric: return "general_numeric";
    }
    return "?";
}

}  // namespace

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
    auto in = open_or_throw(path);
    std::map<std::string, std::string> kv;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw DataError("expected 'key = value'", lineno);
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw DataError("empty key", lineno);
        kv[key] = value;
    }
    return kv;
}

MarketModel read_model_file(const std::string& path) {
    const auto kv = parse_kv_file(path);
    const std::string& kind = require_key(kv, "kind", path);
    if (kind == "long_tail") {
        return MarketModel::long_tail(parse_real(require_key(kv, "l", path), 0));
    }
    if (kind == "empirical") {
        std::map<std::int64_t, std::uint64_t> buckets;
        for (const auto& [key, value] : kv) {
            if (key.rfind("bucket.", 0) != 0) continue;
            const std::int64_t price = parse_int(key.substr(7), 0);
            const std::int64_t count = parse_int(value, 0);
            if (count < 0) throw DataError("negative bucket count for " + key, 0);
            buckets[price] = static_cast<std::uint64_t>(count);
        }
        auto model = MarketModel::empirical(std::move(buckets));
        const auto total = parse_int(require_key(kv, "total", path), 0);
        if (static_cast<std::uint64_t>(total) != model.total_count())
            throw DataError("model file total does not match bucket counts", 0);
        return model;
    }
    throw DataError("unknown model kind '" + kind + "'", 0);
}

void write_model_file(const std::string& path, const MarketModel& model) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path, 0);
    if (model.is_long_tail()) {
        out << "kind = long_tail\n";
        out << "l = " << fmt_double(model.scale()) << "\n";
    } else {
        out << "kind = empirical\n";
        out << "total = " << model.total_count() << "\n";
        for (const auto& [price, count] : model.buckets())
            out << "bucket." << price << " = " << count << "\n";
    }
}

std::vector<BidLogRecord> read_bid_log(const std::string& path) {
    auto in = open_or_throw(path);
    std::vector<BidLogRecord> records;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::istringstream fields(line);
        std::string click_s, price_s, pctr_s, extra;
        if (!std::getline(fields, click_s, '\t') || !std::getline(fields, price_s, '\t') ||
            !std::getline(fields, pctr_s, '\t'))
            throw DataError("expected 'click<TAB>market_price<TAB>pctr'", lineno);
        if (std::getline(fields, extra, '\t'))
            throw DataError("trailing fields after pctr", lineno);
        BidLogRecord rec;
        const std::int64_t click = parse_int(trim(click_s), lineno);
        if (click != 0 && click != 1) throw DataError("click must be 0 or 1", lineno);
        rec.click = click == 1;
        rec.market_price = parse_int(trim(price_s), lineno);
        if (rec.market_price < 0) throw DataError("negative market price", lineno);
        rec.pctr = parse_real(trim(pctr_s), lineno);
        if (!(rec.pctr >= 0.0 && rec.pctr <= 1.0))
            throw DataError("pctr outside [0, 1]", lineno);
        records.push_back(rec);
    }
    return records;
}

std::vector<PriceSample> read_price_log(const std::string& path) {
    auto in = open_or_throw(path);
    std::vector<PriceSample> samples;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        std::string price_s = t;
        const auto tab1 = t.find('\t');
        if (tab1 != std::string::npos) {
            // Three-column campaign log; take the market_price field.
            const auto tab2 = t.find('\t', tab1 + 1);
            if (tab2 == std::string::npos)
                throw DataError("expected one price or a full campaign record", lineno);
            price_s = trim(t.substr(tab1 + 1, tab2 - tab1 - 1));
        }
        const std::int64_t price = parse_int(price_s, lineno);
        if (price < 0) throw DataError("negative market price", lineno);
        samples.push_back({price});
    }
    return samples;
}

PctrDistribution pctr_from_log(const std::vector<BidLogRecord>& records) {
    std::vector<double> rs;
    rs.reserve(records.size());
    for (const auto& rec : records) rs.push_back(rec.pctr);
    return PctrDistribution::from_samples(rs);
}

std::vector<Impression> impressions_from_log(const std::vector<BidLogRecord>& records) {
    std::vector<Impression> out;
    out.reserve(records.size());
    for (const auto& rec : records)
        out.push_back({rec.pctr, static_cast<double>(rec.market_price), rec.click});
    return out;
}

void write_plan_file(const std::string& path, const BudgetPlan& plan) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path, 0);
    out << "lambda = " << fmt_double(plan.lambda) << "\n";
    out << "expected_spend_rate = " << fmt_double(plan.spend_rate) << "\n";
    out << "residual = " << fmt_double(plan.residual) << "\n";
    out << "budget = " << fmt_double(plan.budget) << "\n";
    out << "volume = " << plan.volume << "\n";
    out << "cost_accounting = " << (plan.cost_kind == CostKind::First ? "first" : "second")
        << "\n";
    out << "strategy = " << family_name(plan.family) << "\n";
    out << "max_bid = " << fmt_double(plan.max_bid) << "\n";
}

PlanFile read_plan_file(const std::string& path) {
    const auto kv = parse_kv_file(path);
    PlanFile plan;
    plan.lambda = parse_real(require_key(kv, "lambda", path), 0);
    plan.spend_rate = parse_real(require_key(kv, "expected_spend_rate", path), 0);
    plan.residual = parse_real(require_key(kv, "residual", path), 0);
    plan.budget = parse_real(require_key(kv, "budget", path), 0);
    plan.volume = parse_int(require_key(kv, "volume", path), 0);
    plan.cost_kind = parse_cost_kind(require_key(kv, "cost_accounting", path), 0);
    plan.family = parse_family(require_key(kv, "strategy", path), 0);
    plan.max_bid = parse_real(require_key(kv, "max_bid", path), 0);
    return plan;
}

CliConfig read_config_file(const std::string& path) {
    const auto kv = parse_kv_file(path);
    CliConfig cfg;
    cfg.campaign.budget = parse_real(require_key(kv, "budget", path), 0);
    cfg.campaign.volume = parse_int(require_key(kv, "volume", path), 0);

    const std::string& auction = require_key(kv, "auction", path);
    if (auction == "first")
        cfg.campaign.auction = AuctionKind::First;
    else if (auction == "second")
        cfg.campaign.auction = AuctionKind::Second;
    else
        throw DataError("auction must be 'first' or 'second'", 0);

    const std::string& utility = require_key(kv, "utility", path);
    if (utility == "click") {
        cfg.campaign.utility = UtilitySpec::click();
    } else if (utility == "net_profit") {
        cfg.campaign.utility = UtilitySpec::net_profit(parse_real(require_key(kv, "value", path), 0));
    } else {
        throw DataError("utility must be 'click' or 'net_profit'", 0);
    }

    if (auto it = kv.find("max_bid"); it != kv.end())
        cfg.campaign.max_bid = parse_real(it->second, 0);
    if (auto it = kv.find("seed"); it != kv.end())
        cfg.campaign.seed = static_cast<std::uint64_t>(parse_int(it->second, 0));
    if (auto it = kv.find("cost_accounting"); it != kv.end())
        cfg.cost_accounting = parse_cost_kind(it->second, 0);
    if (auto it = kv.find("price_unit"); it != kv.end()) cfg.price_unit = it->second;
    if (auto it = kv.find("pctr"); it != kv.end()) cfg.pctr_const = parse_real(it->second, 0);

    cfg.strategy = require_key(kv, "strategy", path);
    const bool constrained = cfg.strategy == "first_price_optimal" ||
                             cfg.strategy == "second_price_linear" ||
                             cfg.strategy == "general_numeric";
    if (cfg.strategy == "truthful") {
        if (cfg.campaign.utility.kind != UtilitySpec::Kind::NetProfit)
            throw ConfigError("truthful strategy requires net_profit utility");
    } else if (constrained) {
        if (cfg.campaign.utility.kind != UtilitySpec::Kind::Click)
            throw ConfigError("budget-constrained strategies require click utility");
    } else {
        throw ConfigError("unknown strategy '" + cfg.strategy + "'");
    }
    return cfg;
}

}  // namespace rtb::io
