#include "rentsim/concession.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

#include "rentsim/errors.hpp"

namespace rentsim {

namespace {

struct AccrualPrefix {
    std::vector<Money> announced;  // cumulative PV at the announced rate, [0] = 0
    std::vector<Money> bidder;     // cumulative PV at the bidder's rate
};

AccrualPrefix build_prefix(const Bidder& bidder, Rate announced_rate) {
    const auto& path = bidder.expected_revenue_path;
    path.check();
    AccrualPrefix prefix;
    prefix.announced.reserve(path.flows.size() + 1);
    prefix.bidder.reserve(path.flows.size() + 1);
    prefix.announced.push_back(0.0);
    prefix.bidder.push_back(0.0);
    for (const auto& f : path.flows) {
        if (!(f.amount >= 0.0)) throw InvalidArgument("revenue path must be nonnegative");
        const int period = f.year - path.base_year;
        prefix.announced.push_back(prefix.announced.back() + f.amount * announced_rate.discount(period));
        prefix.bidder.push_back(prefix.bidder.back() + f.amount * bidder.cost_of_capital.discount(period));
    }
    return prefix;
}

// Bidder's PV when revenue stops the instant the announced accrual reaches `vpi`.
Money truncated_bidder_pv(const AccrualPrefix& prefix, Money vpi) {
    if (vpi <= 0.0) return 0.0;
    const auto& a = prefix.announced;
    auto it = std::lower_bound(a.begin() + 1, a.end(), vpi);
    if (it == a.end()) return prefix.bidder.back();
    const auto k = static_cast<std::size_t>(it - a.begin());
    const Money theta = (vpi - a[k - 1]) / (a[k] - a[k - 1]);
    return prefix.bidder[k - 1] + theta * (prefix.bidder[k] - prefix.bidder[k - 1]);
}

double unit_uniform(std::mt19937_64& engine) {
    // 53 high bits -> [0, 1)
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& engine) {
    const double u1 = 1.0 - unit_uniform(engine);  // (0, 1]
    const double u2 = unit_uniform(engine);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::optional<EquilibriumBid> equilibrium_bid(const Bidder& bidder, Rate announced_rate) {
    if (!(bidder.investment > 0.0)) throw InvalidArgument("bidder investment must be > 0");
    const AccrualPrefix prefix = build_prefix(bidder, announced_rate);
    if (prefix.bidder.back() < bidder.investment) return std::nullopt;

    // The truncated PV is continuous and non-decreasing in the bid.
    Money lo = 0.0;
    Money hi = prefix.announced.back();
    for (int iter = 0; iter < 400 && hi - lo > 1e-14 * std::max(1.0, hi); ++iter) {
        const Money mid = 0.5 * (lo + hi);
        if (truncated_bidder_pv(prefix, mid) >= bidder.investment) {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    EquilibriumBid bid;
    bid.vpi = hi;
    const auto& a = prefix.announced;
    // hi sits within bisection precision above the exact bid; a bid landing on
    // a period boundary stops in that period, not the next.
    auto it = std::lower_bound(a.begin() + 1, a.end(), hi - 1e-12 * std::max(1.0, hi));
    const auto k = it == a.end() ? a.size() - 1 : static_cast<std::size_t>(it - a.begin());
    bid.stopping_period = static_cast<int>(k);
    bid.bidder_pv_at_stop = prefix.bidder[k];
    return bid;
}

AuctionResult run_auction(const std::vector<SealedBid>& bids) {
    if (bids.empty()) throw AuctionFailed("auction failed: no bids");
    const auto best = std::min_element(bids.begin(), bids.end(), [](const SealedBid& x, const SealedBid& y) {
        if (x.vpi != y.vpi) return x.vpi < y.vpi;
        return x.bidder_id < y.bidder_id;
    });
    return {best->bidder_id, best->vpi};
}

const char* to_string(ConcessionStatus status) {
    switch (status) {
        case ConcessionStatus::active: return "active";
        case ConcessionStatus::expired: return "expired";
        case ConcessionStatus::expropriated: return "expropriated";
    }
    return "unknown";
}

ConcessionState ConcessionState::start(Money vpi_target, Rate announced_rate) {
    if (!(vpi_target >= 0.0)) throw InvalidArgument("VPI target must be >= 0");
    ConcessionState s;
    s.vpi_target = vpi_target;
    s.announced_rate = announced_rate;
    return s;
}

ConcessionState step_concession(const ConcessionState& state, Money gross_revenue, Money voluntary_tax) {
    if (state.status != ConcessionStatus::active) {
        throw StateMachineViolation(std::string("cannot step a concession that is ") + to_string(state.status));
    }
    if (!(gross_revenue >= 0.0)) throw InvalidArgument("gross revenue must be >= 0");
    if (!(voluntary_tax >= 0.0 && voluntary_tax <= gross_revenue)) {
        throw InvalidArgument("voluntary tax must lie in [0, gross revenue]");
    }

    ConcessionState next = state;
    const Money counted = gross_revenue - voluntary_tax;
    next.current_year += 1;
    const Money counted_pv = counted * next.announced_rate.discount(next.current_year);
    next.accrued_pv += counted_pv;
    if (next.accrued_pv >= next.vpi_target) next.status = ConcessionStatus::expired;
    next.log.push_back({next.current_year, gross_revenue, voluntary_tax, counted, counted_pv, next.accrued_pv,
                        next.status});
    return next;
}

ConcessionState expropriate(const ConcessionState& state) {
    if (state.status != ConcessionStatus::active) {
        throw StateMachineViolation(std::string("cannot expropriate a concession that is ") + to_string(state.status));
    }
    ConcessionState next = state;
    next.status = ConcessionStatus::expropriated;
    return next;
}

Indemnity expropriation_indemnity(const ConcessionState& state) {
    if (state.status == ConcessionStatus::expired) return {};
    Indemnity out;
    out.at_start = std::max(state.vpi_target - state.accrued_pv, 0.0);
    out.at_expropriation = out.at_start * state.announced_rate.growth(state.current_year);
    return out;
}

std::vector<double> generate_price_path(const PricePathParams& params) {
    if (!(params.initial_price > 0.0)) throw InvalidArgument("initial price must be > 0");
    if (!(params.volatility >= 0.0)) throw InvalidArgument("volatility must be >= 0");
    if (params.horizon < 1) throw InvalidArgument("horizon must be >= 1");

    std::mt19937_64 engine(params.seed);
    const double drift_term = params.drift - 0.5 * params.volatility * params.volatility;
    std::vector<double> path;
    path.reserve(static_cast<std::size_t>(params.horizon));
    double log_price = std::log(params.initial_price);
    for (int t = 1; t <= params.horizon; ++t) {
        const double z = standard_normal(engine);
        log_price += drift_term + params.volatility * z;
        path.push_back(params.volatility == 0.0 ? params.initial_price * std::exp(drift_term * t)
                                                : std::exp(log_price));
    }
    return path;
}

Money TaxPolicy::tax_for(int period, Money gross) const {
    Money tax = 0.0;
    switch (kind) {
        case Kind::none: break;
        case Kind::fixed: tax = amount; break;
        case Kind::fraction: tax = amount * gross; break;
        case Kind::schedule:
            if (period >= 1 && static_cast<std::size_t>(period) <= schedule.size()) tax = schedule[period - 1];
            break;
    }
    return std::clamp(tax, 0.0, std::max(gross, 0.0));
}

ConcessionOutcome simulate_concession(Money vpi, const std::vector<double>& price_path, double quantity_per_year,
                                      Rate announced_rate, const TaxPolicy& tax_policy) {
    if (!(quantity_per_year >= 0.0)) throw InvalidArgument("quantity must be >= 0");
    ConcessionOutcome outcome;
    outcome.final_state = ConcessionState::start(vpi, announced_rate);
    if (vpi <= 0.0) {
        outcome.final_state.status = ConcessionStatus::expired;
        outcome.duration = 0;
        return outcome;
    }
    for (double price : price_path) {
        const int period = outcome.final_state.current_year + 1;
        const Money gross = price * quantity_per_year / kUsdPerMillion;
        outcome.final_state = step_concession(outcome.final_state, gross, tax_policy.tax_for(period, gross));
        outcome.prices.push_back(price);
        if (outcome.final_state.status == ConcessionStatus::expired) {
            outcome.duration = outcome.final_state.current_year;
            break;
        }
    }
    if (!outcome.duration) {
        outcome.warnings.push_back("concession still active at the end of the " +
                                   std::to_string(price_path.size()) + "-year price path");
    }
    return outcome;
}

std::vector<Replication> monte_carlo_durations(Money vpi, const PricePathParams& params, double quantity_per_year,
                                               Rate announced_rate, const TaxPolicy& tax_policy, int replications) {
    if (replications < 0) throw InvalidArgument("replications must be >= 0");
    std::vector<Replication> out(static_cast<std::size_t>(replications));
    for (int i = 0; i < replications; ++i) {
        PricePathParams p = params;
        p.seed = params.seed + static_cast<std::uint64_t>(i);
        const auto path = generate_price_path(p);
        out[i] = {i, p.seed, simulate_concession(vpi, path, quantity_per_year, announced_rate, tax_policy).duration};
    }
    return out;
}

void write_outcome_csv(std::ostream& out, const ConcessionOutcome& outcome) {
    out << "period,price_usd_per_t,gross_revenue,voluntary_tax,counted_revenue,accrued_pv,status\n";
    const auto& log = outcome.final_state.log;
    for (std::size_t i = 0; i < log.size(); ++i) {
        const auto& e = log[i];
        const double price = i < outcome.prices.size() ? outcome.prices[i] : 0.0;
        out << e.period << ',' << num(price) << ',' << num(e.gross_revenue) << ',' << num(e.voluntary_tax) << ','
            << num(e.counted_revenue) << ',' << num(e.accrued_pv) << ',' << to_string(e.status) << '\n';
    }
}

}  // namespace rentsim
