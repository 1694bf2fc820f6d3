#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rentsim/errors.hpp"
#include "rentsim/reconstruction.hpp"
#include "rentsim/valuation.hpp"

using namespace rentsim;

namespace {

MineYearRecord cuadro_record(double pretax, double dep, double cap, double taxes, double fixed, double loans) {
    MineYearRecord r;
    r.year = 2005;
    r.pretax_result = pretax;
    r.depreciation_amortization = dep;
    r.capital_paid_increase = cap;
    r.taxes_paid = taxes;
    r.fixed_asset_additions = fixed;
    r.net_loan_payments = loans;
    return r;
}

}  // namespace

TEST_CASE("discount_rate: presets and zero-beta case") {
    CHECK(discount_rate(DiscountSpec::conservative()).value() == doctest::Approx(0.18788).epsilon(1e-12));
    CHECK(discount_rate(DiscountSpec::base()).value() == doctest::Approx(0.1216899).epsilon(1e-12));
    CHECK(discount_rate({0.05, 0.0, 0.07, 0.0}).value() == doctest::Approx(0.05));
    CHECK_THROWS_AS(discount_rate({-0.01, 1.0, 0.05, 0.0}), InvalidArgument);
}

TEST_CASE("discount_rate: strictly increasing in each parameter") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 0.2), b(0.01, 3.0), bump(1e-4, 0.05);
    for (int i = 0; i < 300; ++i) {
        DiscountSpec s{u(rng), b(rng), u(rng) + 1e-3, u(rng)};
        const double base = discount_rate(s).value();
        for (int k = 0; k < 4; ++k) {
            DiscountSpec t = s;
            double* fields[] = {&t.risk_free, &t.beta, &t.equity_premium, &t.country_risk};
            *fields[k] += bump(rng);
            CHECK(discount_rate(t).value() > base);
        }
    }
}

TEST_CASE("annual_cash_flow: line items") {
    CHECK(annual_cash_flow(cuadro_record(100, 20, 5, 10, 30, 15)) == doctest::Approx(60.0));
    CHECK(annual_cash_flow(cuadro_record(0, 0, 0, 0, 0, 0)) == 0.0);
    CHECK(annual_cash_flow(cuadro_record(50, 10, 0, 60, 0, 0)) == 0.0);

    // Revenue and costs enter only through the pre-tax result.
    auto r = cuadro_record(100, 20, 5, 10, 30, 15);
    r.revenue = 1e6;
    r.operating_cost = 123.0;
    CHECK(annual_cash_flow(r) == doctest::Approx(60.0));
}

TEST_CASE("annual_cash_flow: linear in the money fields") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> m(-1000.0, 1000.0), scale(-5.0, 5.0);
    for (int i = 0; i < 300; ++i) {
        auto r = cuadro_record(m(rng), m(rng), m(rng), m(rng), m(rng), m(rng));
        const double a = scale(rng);
        auto s = cuadro_record(a * r.pretax_result, a * r.depreciation_amortization, a * r.capital_paid_increase,
                               a * r.taxes_paid, a * r.fixed_asset_additions, a * r.net_loan_payments);
        CHECK(annual_cash_flow(s) == doctest::Approx(a * annual_cash_flow(r)).epsilon(1e-9));
    }
}

TEST_CASE("initial_investment: extraction plus exploration") {
    MineDataset mine;
    mine.mine_id = "m";
    mine.capital_paid_first_year = 1000.0;
    ExplorationImputation exploration;
    exploration.per_mine["m"].capitalized = 250.0;
    auto i0 = initial_investment(mine, exploration);
    CHECK(i0.total == 1250.0);
    CHECK(i0.extraction == 1000.0);
    CHECK(i0.exploration == 250.0);
    CHECK(i0.warnings.empty());

    exploration.per_mine["m"].capitalized = 0.0;
    CHECK(initial_investment(mine, exploration).total == 1000.0);

    ExplorationImputation none;
    auto absent = initial_investment(mine, none);
    CHECK(absent.total == 1000.0);
    CHECK(absent.warnings.size() == 1);
}

TEST_CASE("present_value: basics") {
    CHECK(present_value({2000, {{2001, 110.0}}}, Rate(0.10)) == doctest::Approx(100.0));
    CashFlowSeries s{2000, {{2001, 5.0}, {2002, -3.0}, {2005, 10.0}}};
    CHECK(present_value(s, Rate(0.0)) == doctest::Approx(12.0));
    CHECK(present_value({2000, {}}, Rate(0.3)) == 0.0);
    CHECK_THROWS_AS(Rate(-1.0), InvalidArgument);
    CHECK_THROWS_AS(Rate(std::nan("")), InvalidArgument);
    CashFlowSeries bad{2000, {{2002, 1.0}, {2001, 1.0}}};
    CHECK_THROWS_AS(bad.check(), InvalidArgument);
}

TEST_CASE("present_value: monotone in rate and additive over disjoint series") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> amount(0.0, 500.0), rate(0.0, 0.4);
    for (int i = 0; i < 300; ++i) {
        CashFlowSeries a{1990, {}}, b{1990, {}}, joined{1990, {}};
        for (int y = 1991; y <= 2005; ++y) {
            const CashFlow f{y, amount(rng)};
            (y <= 1998 ? a : b).flows.push_back(f);
            joined.flows.push_back(f);
        }
        const double r1 = rate(rng), r2 = r1 + rate(rng);
        CHECK(present_value(joined, Rate(r2)) <= present_value(joined, Rate(r1)) + 1e-9);
        CHECK(present_value(joined, Rate(0.0)) == doctest::Approx(joined.total()));
        CHECK(present_value(joined, Rate(r1)) ==
              doctest::Approx(present_value(a, Rate(r1)) + present_value(b, Rate(r1))).epsilon(1e-12));
    }
}
