#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rentsim/errors.hpp"
#include "rentsim/rent_analysis.hpp"

using namespace rentsim;

namespace {

InitialInvestment investment(double total) {
    InitialInvestment i;
    i.extraction = total;
    i.total = total;
    return i;
}

const CashFlowSeries kFixture{2000, {{2001, 60.0}, {2002, 60.5}}};

}  // namespace

TEST_CASE("rvp_series: two-year fixture at 10%") {
    const auto s = rvp_series(kFixture, investment(100.0), Rate(0.10));
    REQUIRE(s.points.size() == 2);
    CHECK(s.points[0].rvp == doctest::Approx(-45.4545454545).epsilon(1e-9));
    CHECK(s.points[1].rvp == doctest::Approx(4.5454545455).epsilon(1e-9));
    REQUIRE(s.momento_x);
    CHECK(*s.momento_x == 2002);
    CHECK(s.rent_pv == doctest::Approx(4.5454545455).epsilon(1e-9));
}

TEST_CASE("rvp_series: same fixture at 25% shows no rent") {
    const auto s = rvp_series(kFixture, investment(100.0), Rate(0.25));
    CHECK(s.points.back().rvp == doctest::Approx(-13.28).epsilon(1e-9));
    CHECK_FALSE(s.momento_x);
    CHECK(s.rent_pv == 0.0);
}

TEST_CASE("rvp_series: zero flows and empty flows") {
    const auto zeros = rvp_series({2000, {{2001, 0.0}, {2002, 0.0}, {2003, 0.0}}}, investment(80.0), Rate(0.1));
    for (const auto& p : zeros.points) CHECK(p.rvp == -80.0);
    CHECK_FALSE(zeros.momento_x);

    const auto empty = rvp_series({2000, {}}, investment(80.0), Rate(0.1));
    CHECK(empty.points.empty());
    CHECK_FALSE(empty.momento_x);
    CHECK(empty.rent_pv == 0.0);

    CHECK_THROWS_AS(rvp_series(kFixture, investment(0.0), Rate(0.1)), InvalidArgument);
}

TEST_CASE("momento_x: strict inequality") {
    RvpSeries s;
    s.points = {{2001, -45.45}, {2002, 4.55}};
    CHECK(momento_x(s) == 2002);
    s.points = {{2001, -3.0}, {2002, -1.0}};
    CHECK_FALSE(momento_x(s));
    s.points = {{2001, -10.0}, {2002, 0.0}, {2003, 5.0}};
    CHECK(momento_x(s) == 2003);
    s.points = {{2001, 5e-10}, {2002, 2e-9}};
    CHECK(momento_x(s) == 2002);
}

TEST_CASE("rent_forward_value: compounding at the fund rate") {
    const Rate fund(0.0507);
    CHECK(rent_forward_value({2000, {{2010, 100.0}}}, 2009, fund, 2012) == doctest::Approx(110.39704900).epsilon(1e-9));
    CHECK(rent_forward_value({2000, {{2012, 42.0}}}, 2011, fund, 2012) == 42.0);
    CHECK(rent_forward_value({2000, {{2011, 50.0}, {2012, 50.0}}}, 2010, fund, 2012) ==
          doctest::Approx(102.535).epsilon(1e-9));
    // Flows at or before x are excluded; payback in the last flow year leaves nothing.
    CHECK(rent_forward_value({2000, {{2010, 10.0}, {2011, 20.0}}}, 2011, fund, 2012) == 0.0);
    CHECK(rent_forward_value({2000, {{2010, 10.0}}}, std::nullopt, fund, 2012) == 0.0);
    CHECK_THROWS_AS(rent_forward_value({2000, {{2013, 1.0}}}, 2010, fund, 2012), InvalidArgument);
}

TEST_CASE("rvp_series: matches the from-scratch oracle") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> len(0, 30);
    std::uniform_real_distribution<double> amount(-200.0, 800.0), rate(0.0, 0.35), i0(1.0, 3000.0);
    for (int trial = 0; trial < 500; ++trial) {
        CashFlowSeries s{1990, {}};
        std::vector<oracle::Flow> flows;
        const int n = len(rng);
        for (int k = 1; k <= n; ++k) {
            const double a = amount(rng);
            s.flows.push_back({1990 + k, a});
            flows.push_back({1990 + k, a});
        }
        const double r = rate(rng), inv = i0(rng);
        const auto got = rvp_series(s, investment(inv), Rate(r));
        const auto want = oracle::rvp(flows, 1990, inv, r);
        REQUIRE(got.points.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i) CHECK(oracle::close_rel(got.points[i].rvp, want[i], 1e-9, 1e-9));
        CHECK(got.momento_x == oracle::first_positive(flows, want));

        // Consecutive differences are the discounted flows.
        for (std::size_t i = 1; i < got.points.size(); ++i) {
            const double diff = got.points[i].rvp - got.points[i - 1].rvp;
            const double flow = s.flows[i].amount / std::pow(1.0 + r, s.flows[i].year - 1990);
            CHECK(oracle::close_rel(diff, flow, 1e-9, 1e-9));
        }
        // rent_pv reconciles with present value less I0.
        if (!got.points.empty()) {
            const double final_rvp = present_value(s, Rate(r)) - inv;
            CHECK(oracle::close_rel(got.rent_pv + std::min(final_rvp, 0.0), final_rvp, 1e-9, 1e-9));
        }
    }
}

TEST_CASE("rvp_series: shifting nonnegative flows later lowers every rvp") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> amount(0.1, 500.0), rate(0.01, 0.3);
    for (int trial = 0; trial < 300; ++trial) {
        CashFlowSeries early{2000, {}}, late{2000, {}};
        for (int k = 1; k <= 12; ++k) {
            const double a = amount(rng);
            early.flows.push_back({2000 + k, a});
            late.flows.push_back({2001 + k, a});
        }
        const Rate r(rate(rng));
        const auto e = rvp_series(early, investment(1000.0), r);
        const auto l = rvp_series(late, investment(1000.0), r);
        for (std::size_t i = 0; i < e.points.size(); ++i) CHECK(l.points[i].rvp <= e.points[i].rvp);
    }
}

TEST_CASE("sensitivity_report: synthetic mine with rent only at the lower rate") {
    MineDataset mine;
    mine.mine_id = "flip";
    mine.opening_year = 2000;
    mine.first_reported_year = 2001;
    mine.capital_paid_first_year = 100.0;
    for (int y = 2001; y <= 2002; ++y) {
        MineYearRecord r;
        r.year = y;
        r.pretax_result = y == 2001 ? 60.0 : 60.5;
        r.production = 1000;
        r.exports = 1000;
        mine.records.push_back(r);
    }
    MarketSeries market;
    for (int y = 1984; y <= 2012; ++y) market.years[y] = {y, 2000.0, 1000.0, 0.0};

    const auto report = sensitivity_report({mine}, market, {{"low", Rate(0.10)}, {"high", Rate(0.25)}});
    REQUIRE(report.rows.size() == 1);
    const auto& row = report.rows[0];
    CHECK(row.by_rate[0].series.momento_x == 2002);
    CHECK_FALSE(row.by_rate[1].series.momento_x);

    std::ostringstream csv;
    write_summary_csv(csv, report);
    CHECK(csv.str() ==
          "mine,momento_x_low,momento_x_high,rent_pv_t0_low,rent_pv_t0_high,rent_forward_low,rent_forward_high\n"
          "flip,2002,-,4.545455,-,0.000000,-\n");

    const auto same = sensitivity_report({mine}, market, {{"a", Rate(0.1)}, {"b", Rate(0.1)}});
    CHECK(same.rows[0].by_rate[0].series.rent_pv == same.rows[0].by_rate[1].series.rent_pv);
    CHECK(same.rows[0].by_rate[0].series.momento_x == same.rows[0].by_rate[1].series.momento_x);
}

TEST_CASE("rvp monotone in rate for nonnegative flows") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> amount(0.0, 400.0), rate(0.0, 0.3), bump(0.0, 0.2);
    for (int trial = 0; trial < 300; ++trial) {
        CashFlowSeries s{2000, {}};
        for (int k = 1; k <= 15; ++k) s.flows.push_back({2000 + k, amount(rng)});
        const double lo = rate(rng), hi = lo + bump(rng);
        const auto a = rvp_series(s, investment(1500.0), Rate(lo));
        const auto b = rvp_series(s, investment(1500.0), Rate(hi));
        for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(b.points[i].rvp <= a.points[i].rvp + 1e-9);
        if (b.momento_x) {
            REQUIRE(a.momento_x);
            CHECK(*b.momento_x >= *a.momento_x);
        }
    }
}

TEST_CASE("plot data: two columns") {
    const auto s = rvp_series(kFixture, investment(100.0), Rate(0.10));
    std::ostringstream out;
    write_rvp_plot_data(out, s);
    CHECK(out.str() == "year,rvp\n2001,-45.454545\n2002,4.545455\n");
}
