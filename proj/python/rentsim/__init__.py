"""Resource-rent valuation and least-present-value concession simulator."""

from ._core import (
    AuctionFailed,
    BaselineUnavailable,
    ConcessionState,
    CoverageError,
    DiscountSpec,
    Indemnity,
    InvalidArgument,
    IoError,
    MarketSeries,
    MineDataset,
    MineYearRecord,
    ParseError,
    ReconstructionRefused,
    RentsimError,
    SchemaError,
    StateMachineViolation,
    __version__,
    analyze,
    annual_cash_flow,
    discount_rate,
    equilibrium_bid,
    generate_price_path,
    impute_exploration,
    load_market_series,
    load_mine_dataset,
    load_mine_directory,
    momento_x,
    present_value,
    rent_forward_value,
    run_auction,
    run_cli,
    rvp_series,
    simulate_concession,
    validate_dataset,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
