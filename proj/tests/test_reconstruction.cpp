#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rentsim/errors.hpp"
#include "rentsim/reconstruction.hpp"

using namespace rentsim;

namespace {

MineYearRecord reported(int year, double revenue, double opcost, double gav, double pretax, double production) {
    MineYearRecord r;
    r.year = year;
    r.revenue = revenue;
    r.operating_cost = opcost;
    r.admin_sales_expense = gav;
    r.pretax_result = pretax;
    r.depreciation_amortization = 10.0;
    r.fixed_asset_additions = 30.0;
    r.net_loan_payments = 5.0;
    r.production = production;
    r.exports = production;
    return r;
}

MineYearRecord physical(int year, double production, double exports) {
    MineYearRecord r;
    r.year = year;
    r.production = production;
    r.exports = exports;
    r.reported = false;
    return r;
}

MarketSeries flat_market(int first, int last, double price, double gdp = 75000.0, double pct = 0.004) {
    MarketSeries m;
    for (int y = first; y <= last; ++y) m.years[y] = {y, price, gdp, pct};
    return m;
}

MineDataset cohort_mine(const std::string& id, int opening, double production) {
    MineDataset m;
    m.mine_id = id;
    m.opening_year = opening;
    m.first_reported_year = opening;
    m.capital_paid_first_year = 100.0;
    m.records.push_back({.year = opening, .production = production, .exports = production});
    return m;
}

}  // namespace

TEST_CASE("baseline: unit cost and GAV ratio averages") {
    std::vector<MineYearRecord> recs{reported(2001, 400, 200, 20, 150, 100), reported(2002, 450, 220, 22, 170, 110)};
    const auto stats = compute_baseline_stats(recs, {2001, 2002});
    CHECK(stats.avg_unit_cost == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(stats.gav_ratio == doctest::Approx(0.10).epsilon(1e-12));
    CHECK(stats.usable_years == 2);

    std::vector<MineYearRecord> gav_recs{reported(2001, 400, 200, 20, 150, 100), reported(2002, 500, 300, 30, 150, 150)};
    CHECK(compute_baseline_stats(gav_recs, {2001, 2002}).gav_ratio == doctest::Approx(0.10).epsilon(1e-12));
}

TEST_CASE("baseline: single year is verbatim; zero production excluded; empty window throws") {
    std::vector<MineYearRecord> recs{reported(2003, 500, 300, 45, 120, 150)};
    const auto one = compute_baseline_stats(recs, {2001, 2005});
    CHECK(one.avg_unit_cost == 2.0);
    CHECK(one.gav_ratio == 0.15);
    // non-operating = 120 - (500 - 300 - 45) = -35
    CHECK(one.avg_nonoperating == doctest::Approx(-35.0));
    CHECK(one.avg_dep_amort == 10.0);

    recs.push_back(reported(2004, 0, 50, 5, -60, 0));
    CHECK(compute_baseline_stats(recs, {2001, 2005}).avg_unit_cost == 2.0);

    CHECK_THROWS_AS(compute_baseline_stats(recs, {1990, 1995}), BaselineUnavailable);
    std::vector<MineYearRecord> idle{reported(2001, 0, 50, 5, -60, 0)};
    CHECK_THROWS_AS(compute_baseline_stats(idle, {2001, 2005}), BaselineUnavailable);
}

TEST_CASE("reconstruct_year: revenue is the smaller of the two estimates") {
    MineDataset mine;
    mine.mine_id = "m";
    mine.opening_year = 1995;
    mine.first_reported_year = 2001;
    mine.capital_paid_first_year = 500;
    mine.records = {physical(1999, 100000, 90000), physical(2000, 100000, 100000),
                    reported(2001, 400, 200, 20, 150, 100)};
    const auto market = flat_market(1995, 2005, 2000.0);
    BaselineStats base;
    base.avg_unit_cost = 0.001;
    base.gav_ratio = 0.05;
    base.avg_nonoperating = -4.0;
    base.avg_dep_amort = 11.0;
    base.avg_fixed_asset_additions = 12.0;
    base.avg_net_loan_payments = 3.0;

    AuditLog audit;
    const auto r99 = reconstruct_year(mine, 1999, market, base, &audit);
    CHECK(r99.revenue == doctest::Approx(180.0));
    CHECK(r99.operating_cost == doctest::Approx(100.0));
    CHECK(r99.admin_sales_expense == doctest::Approx(5.0));
    CHECK(r99.pretax_result == doctest::Approx(180.0 - 100.0 - 5.0 - 4.0));
    CHECK(r99.depreciation_amortization == 11.0);
    CHECK(r99.fixed_asset_additions == 12.0);
    CHECK(r99.net_loan_payments == 3.0);
    CHECK(r99.taxes_paid == 0.0);
    CHECK(r99.reconstructed);
    CHECK(audit.size() == 9);
    CHECK(audit.front().field == "revenue");

    const auto r00 = reconstruct_year(mine, 2000, market, base);
    CHECK(r00.revenue == doctest::Approx(200.0));
}

TEST_CASE("reconstruct_year: tax rule, refusals and coverage") {
    MineDataset mine;
    mine.mine_id = "m";
    mine.opening_year = 1995;
    mine.first_reported_year = 2001;
    mine.capital_paid_first_year = 500;
    auto taxed = physical(1999, 1000, 1000);
    taxed.taxes_supplied = true;
    taxed.taxes_paid = 7.5;
    mine.records = {physical(1997, 1000, 1000), taxed, reported(2001, 1, 1, 0, 0, 1)};
    BaselineStats base;
    base.avg_unit_cost = 0.001;
    auto market = flat_market(1995, 2005, 2000.0);

    CHECK(reconstruct_year(mine, 1999, market, base).taxes_paid == 0.0);
    mine.escondida_tax_rule = true;
    CHECK(reconstruct_year(mine, 1999, market, base).taxes_paid == 7.5);
    CHECK(reconstruct_year(mine, 1997, market, base).taxes_paid == 0.0);

    CHECK_THROWS_AS(reconstruct_year(mine, 2001, market, base), ReconstructionRefused);
    CHECK_THROWS_AS(reconstruct_year(mine, 1996, market, base), InvalidArgument);
    market.years.erase(1997);
    CHECK_THROWS_AS(reconstruct_year(mine, 1997, market, base), CoverageError);
}

TEST_CASE("reconstruct_year: revenue never exceeds either estimate") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> q(0.0, 1e6), price(500.0, 10000.0);
    BaselineStats base;
    base.avg_unit_cost = 0.0012;
    for (int i = 0; i < 500; ++i) {
        MineDataset mine;
        mine.mine_id = "p";
        mine.opening_year = 1990;
        mine.first_reported_year = 2001;
        mine.capital_paid_first_year = 1;
        mine.records = {physical(1995, q(rng), q(rng))};
        const double p = price(rng);
        const auto rec = reconstruct_year(mine, 1995, flat_market(1995, 1995, p), base);
        CHECK(rec.revenue <= p * rec.production / 1e6);
        CHECK(rec.revenue <= p * rec.exports / 1e6);
    }
}

TEST_CASE("reconstruct_mine replaces physical rows only") {
    MineDataset mine;
    mine.mine_id = "m";
    mine.opening_year = 1999;
    mine.first_reported_year = 2001;
    mine.capital_paid_first_year = 500;
    mine.records = {physical(1999, 100, 100), physical(2000, 100, 100), reported(2001, 400, 200, 20, 150, 100)};
    const auto out = reconstruct_mine(mine, flat_market(1999, 2001, 2000.0));
    CHECK(out.records[0].reconstructed);
    CHECK(out.records[1].reconstructed);
    CHECK_FALSE(out.records[2].reconstructed);
    CHECK(out.records[2] == mine.records[2]);
}

TEST_CASE("impute_exploration: proration by mean production") {
    MarketSeries market = flat_market(1990, 1990, 2000.0, 75000.0, 0.004);
    std::vector<MineDataset> cohort{cohort_mine("big", 1992, 200000), cohort_mine("small", 1993, 100000)};
    ExplorationConfig config;
    config.spend_window = {1990, 1990};
    const auto out = impute_exploration(market, cohort, Rate(0.0), config);
    CHECK(out.private_spend.at(1990) == doctest::Approx(200.0));
    CHECK(out.per_mine.at("big").allocations.at(1990) == doctest::Approx(400.0 / 3.0));
    CHECK(out.per_mine.at("small").allocations.at(1990) == doctest::Approx(200.0 / 3.0));
    CHECK(out.allocated("big") == doctest::Approx(133.3333333333));
}

TEST_CASE("impute_exploration: single mine, capitalization, window edges") {
    MarketSeries market = flat_market(1980, 1999, 2000.0, 75000.0, 0.004);
    ExplorationConfig config;
    config.spend_window = {1990, 1990};

    auto solo = impute_exploration(market, {cohort_mine("solo", 1990, 5000)}, Rate(0.10), config);
    CHECK(solo.allocated("solo") == doctest::Approx(200.0));

    // Allocation of 100 made three years before opening, at 10%.
    MarketSeries hundred = flat_market(1990, 1990, 2000.0, 37500.0, 0.004);
    auto capitalized = impute_exploration(hundred, {cohort_mine("c", 1993, 10)}, Rate(0.10), config);
    CHECK(capitalized.per_mine.at("c").allocations.at(1990) == doctest::Approx(100.0));
    CHECK(capitalized.allocated("c") == doctest::Approx(133.1));

    // Eligible exactly at opening - 5 and at opening; not at opening - 6 or opening + 1.
    CHECK(impute_exploration(market, {cohort_mine("e", 1995, 10)}, Rate(0.0), config).allocated("e") > 0.0);
    CHECK(impute_exploration(market, {cohort_mine("e", 1990, 10)}, Rate(0.0), config).allocated("e") > 0.0);
    auto early = impute_exploration(market, {cohort_mine("e", 1996, 10)}, Rate(0.0), config);
    CHECK(early.allocated("e") == 0.0);
    CHECK(early.unallocated_years == std::vector<int>{1990});
    CHECK(early.warnings.size() == 1);
    CHECK(impute_exploration(market, {cohort_mine("e", 1989, 10)}, Rate(0.0), config).allocated("e") == 0.0);

    ExplorationConfig full;
    CHECK_THROWS_AS(impute_exploration(flat_market(1985, 1999, 1.0), {}, Rate(0.0), full), CoverageError);
}

TEST_CASE("impute_exploration: conservation and scale covariance") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> opening(1984, 2004);
    std::uniform_real_distribution<double> prod(1.0, 1e6), pct(0.0, 0.01), gdp(1e4, 3e5);
    for (int trial = 0; trial < 200; ++trial) {
        MarketSeries market;
        for (int y = 1984; y <= 1999; ++y) market.years[y] = {y, 2000.0, gdp(rng), pct(rng)};
        std::vector<MineDataset> cohort, doubled;
        const int n = 1 + trial % 6;
        for (int i = 0; i < n; ++i) {
            auto m = cohort_mine("m" + std::to_string(i), opening(rng), prod(rng));
            cohort.push_back(m);
            m.records[0].production *= 2.0;
            doubled.push_back(m);
        }
        const auto a = impute_exploration(market, cohort, Rate(0.07));
        const auto b = impute_exploration(market, doubled, Rate(0.07));
        for (const auto& [year, spend] : a.private_spend) {
            if (std::find(a.unallocated_years.begin(), a.unallocated_years.end(), year) != a.unallocated_years.end()) {
                continue;
            }
            double sum = 0.0;
            for (const auto& [id, e] : a.per_mine) {
                if (auto it = e.allocations.find(year); it != e.allocations.end()) sum += it->second;
            }
            CHECK(oracle::close_rel(sum, spend, 1e-9));
        }
        for (const auto& [id, e] : a.per_mine) {
            CHECK(oracle::close_rel(e.capitalized, b.per_mine.at(id).capitalized, 1e-12));
        }
        CHECK(a.total_allocated <= a.total_private_spend * (1 + 1e-12));
    }
}

TEST_CASE("exploration equivalence: total cohort spend equals per-deposit spend times T/n") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> campaigns(1, 60);
    std::uniform_real_distribution<double> spend(0.1, 50.0);
    for (int i = 0; i < 200; ++i) {
        const int total = campaigns(rng);
        const int successful = std::uniform_int_distribution<int>(1, total)(rng);
        const double per_campaign = spend(rng);
        // Uniform spend: the cohort spends T * g; each discovery carries 1/n of it.
        const double cohort_total = per_campaign * total;
        const double per_discovery = cohort_total / successful;
        CHECK(oracle::close_rel(exploration_investment(per_campaign, successful, total), per_discovery, 1e-9));
    }
    CHECK_THROWS_AS(exploration_investment(1.0, 0, 5), InvalidArgument);
    CHECK_THROWS_AS(exploration_investment(1.0, 6, 5), InvalidArgument);
}
