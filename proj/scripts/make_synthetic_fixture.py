"""Generate the synthetic three-mine fixture under data/synthetic/.

The numbers are invented. They exercise every reconstruction rule, the
exploration imputation window and a momento x that appears under the base
rate but not the conservative one.
"""
import pathlib

ROOT = pathlib.Path(__file__).resolve().parents[1] / "data" / "synthetic"

PRICES = {  # USD per tonne
    1984: 1380, 1985: 1420, 1986: 1370, 1987: 1780, 1988: 2600, 1989: 2850,
    1990: 2660, 1991: 2340, 1992: 2280, 1993: 1910, 1994: 2310, 1995: 2930,
    1996: 2290, 1997: 2280, 1998: 1650, 1999: 1570, 2000: 1810, 2001: 1580,
    2002: 1560, 2003: 1780, 2004: 2870, 2005: 3680, 2006: 6720, 2007: 7120,
    2008: 6960, 2009: 5150, 2010: 7540, 2011: 8820, 2012: 7960,
}

HEADER = ("year,revenue,operating_cost,admin_sales_expense,pretax_result,dep_amort,"
          "capital_paid_increase,taxes_paid,fixed_asset_additions,net_loan_payments,"
          "production_t,exports_t")


def market_rows():
    gdp = 20000.0
    rows = []
    for year in range(1984, 2013):
        pct = 0.0030 + 0.0002 * ((year * 7) % 5)
        rows.append((year, PRICES[year], round(gdp, 1), round(pct, 5)))
        gdp *= 1.085
    return rows


MINES = {
    "alpha": dict(opening=1990, capital=2000.0, tax_rule=True, base_prod=620_000.0,
                  growth=0.02, unit_cost=1250.0, gav=0.07, nonop=-35.0, dep=95.0,
                  fixed=140.0, loans=60.0, tax_rate=0.20),
    "bravo": dict(opening=1994, capital=850.0, tax_rule=False, base_prod=215_000.0,
                  growth=0.015, unit_cost=1250.0, gav=0.09, nonop=-20.0, dep=40.0,
                  fixed=95.0, loans=35.0, tax_rate=0.20),
    "charlie": dict(opening=1997, capital=1400.0, tax_rule=False, base_prod=120_000.0,
                    growth=0.01, unit_cost=1750.0, gav=0.10, nonop=-15.0, dep=30.0,
                    fixed=70.0, loans=25.0, tax_rate=0.20),
}


def fmt(v):
    return f"{v:.1f}"


def mine_lines(mine_id, m):
    lines = [f"# mine_id={mine_id}", f"# opening_year={m['opening']}",
             f"# capital_paid_first_year={m['capital']}",
             f"# escondida_tax_rule={'true' if m['tax_rule'] else 'false'}", HEADER]
    for year in range(m["opening"], 2012):
        k = year - m["opening"]
        prod = round(m["base_prod"] * (1 + m["growth"]) ** k, -2)
        exports = round(prod * (0.97 if k % 3 == 0 else 1.0), -2)
        if year < 2001:
            taxes = ""
            if m["tax_rule"] and year >= 1995:
                taxes = fmt(12.0 + 3.0 * (year - 1995))
            lines.append(f"{year},,,,,,,{taxes},,,{prod:.0f},{exports:.0f}")
            continue
        price = PRICES[year]
        revenue = price * min(prod, exports) / 1e6
        unit = m["unit_cost"] * (1 + 0.03 * (year - 2001))
        opcost = unit * prod / 1e6
        gav = m["gav"] * opcost * (1 + 0.01 * (year % 3))
        pretax = revenue - opcost - gav + m["nonop"] * (1 + 0.1 * (year % 2))
        taxes = max(pretax, 0.0) * m["tax_rate"] * (1.4 if year >= 2006 else 1.0)
        cap_inc = 25.0 if year == 2004 else 0.0
        row = [year, fmt(revenue), fmt(opcost), fmt(gav), fmt(pretax), fmt(m["dep"]),
               fmt(cap_inc), fmt(taxes), fmt(m["fixed"] * (1 + 0.02 * (year - 2001))),
               fmt(m["loans"]), f"{prod:.0f}", f"{exports:.0f}"]
        lines.append(",".join(str(c) for c in row))
    return lines


def main():
    (ROOT / "mines").mkdir(parents=True, exist_ok=True)
    with open(ROOT / "market.csv", "w") as f:
        f.write("# fund_rate=0.0507\n")
        f.write("year,copper_price_usd_per_t,gdp_usd_m,exploration_pct_gdp\n")
        for row in market_rows():
            f.write(",".join(str(c) for c in row) + "\n")
    for mine_id, m in MINES.items():
        with open(ROOT / "mines" / f"{mine_id}.csv", "w") as f:
            f.write("\n".join(mine_lines(mine_id, m)) + "\n")


if __name__ == "__main__":
    main()
