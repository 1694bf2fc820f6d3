#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rentsim/data_model.hpp"
#include "rentsim/valuation.hpp"

namespace rentsim {

/// A firm competing for a least-present-value-of-revenue concession.
///
/// The revenue path is the bidder's own certainty-equivalent forecast; its
/// base_year is the concession start and flows are dated from the first
/// operating year. Risk lives entirely in `cost_of_capital`.
struct Bidder {
    std::string bidder_id;
    Money investment = 0.0;
    Rate cost_of_capital;
    CashFlowSeries expected_revenue_path;
    /// Reported operating cost. Informational only: the bid never reads it.
    Money reported_operating_cost = 0.0;
};

struct EquilibriumBid {
    Money vpi = 0.0;
    /// First period whose accrued revenue reaches the bid under annual settlement.
    int stopping_period = 0;
    /// Bidder's PV of revenue collected through stopping_period.
    Money bidder_pv_at_stop = 0.0;
};

inline constexpr double kBidRelativeTolerance = 1e-6;

/// Smallest present value of revenue the bidder can ask for and still
/// recover its investment at its own cost of capital.
///
/// Revenue is truncated at the instant the announced-rate accrual reaches
/// the bid, accruing linearly within a period. Returns nullopt when the
/// whole path cannot repay the investment (no bid).
std::optional<EquilibriumBid> equilibrium_bid(const Bidder& bidder, Rate announced_rate);

struct SealedBid {
    std::string bidder_id;
    Money vpi = 0.0;
};

struct AuctionResult {
    std::string winner;
    Money vpi = 0.0;
};

/// Lowest bid wins; ties go to the lexicographically smallest bidder_id.
AuctionResult run_auction(const std::vector<SealedBid>& bids);

enum class ConcessionStatus { active, expired, expropriated };

const char* to_string(ConcessionStatus status);

struct ConcessionPeriod {
    int period = 0;  ///< 1-based
    Money gross_revenue = 0.0;
    Money voluntary_tax = 0.0;
    Money counted_revenue = 0.0;
    Money counted_pv = 0.0;
    Money accrued_pv = 0.0;
    ConcessionStatus status = ConcessionStatus::active;
};

struct ConcessionState {
    Money vpi_target = 0.0;
    Rate announced_rate;
    int current_year = 0;  ///< periods elapsed since the start
    Money accrued_pv = 0.0;
    std::vector<ConcessionPeriod> log;
    ConcessionStatus status = ConcessionStatus::active;

    static ConcessionState start(Money vpi_target, Rate announced_rate);
};

/// Advances one year. The voluntary tax reduces counted revenue one for one.
/// The whole final period counts, so the concession may overshoot its target.
ConcessionState step_concession(const ConcessionState& state, Money gross_revenue, Money voluntary_tax = 0.0);

ConcessionState expropriate(const ConcessionState& state);

struct Indemnity {
    Money at_start = 0.0;            ///< PV at concession start
    Money at_expropriation = 0.0;    ///< compounded to the expropriation date
};

/// Unrecovered part of the bid: target less accrued PV. Zero once expired.
Indemnity expropriation_indemnity(const ConcessionState& state);

struct PricePathParams {
    double initial_price = 0.0;  ///< USD per tonne
    double drift = 0.0;
    double volatility = 0.0;
    int horizon = 1;
    std::uint64_t seed = 0;
};

/// Annual geometric Brownian steps. Element t-1 is the price in year t.
/// Normals come from Box-Muller over a 64-bit Mersenne Twister rather than
/// std::normal_distribution, whose output differs between standard libraries.
std::vector<double> generate_price_path(const PricePathParams& params);

struct TaxPolicy {
    enum class Kind { none, fixed, fraction, schedule };
    Kind kind = Kind::none;
    double amount = 0.0;             ///< fixed money per year, or fraction of gross
    std::vector<Money> schedule;     ///< per-period amounts; missing periods pay 0

    /// Tax for a 1-based period, clamped into [0, gross].
    Money tax_for(int period, Money gross) const;
    static TaxPolicy none_policy() { return {}; }
};

struct ConcessionOutcome {
    std::optional<int> duration;  ///< absent when the horizon ends first
    ConcessionState final_state;
    std::vector<double> prices;
    std::vector<std::string> warnings;
};

/// Drives step_concession with revenue = price * quantity (in million USD).
ConcessionOutcome simulate_concession(Money vpi, const std::vector<double>& price_path, double quantity_per_year,
                                      Rate announced_rate, const TaxPolicy& tax_policy = {});

struct Replication {
    int index = 0;
    std::uint64_t seed = 0;
    std::optional<int> duration;
};

/// Replication i uses seed params.seed + i.
std::vector<Replication> monte_carlo_durations(Money vpi, const PricePathParams& params, double quantity_per_year,
                                               Rate announced_rate, const TaxPolicy& tax_policy, int replications);

/// Per-year table: period, price, revenue, tax, counted, accrued PV, status.
void write_outcome_csv(std::ostream& out, const ConcessionOutcome& outcome);

}  // namespace rentsim
