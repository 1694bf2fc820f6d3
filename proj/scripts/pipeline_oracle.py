"""Independent pure-Python recomputation of the rent pipeline.

Reads the fixture CSVs directly and recomputes reconstruction, exploration
imputation, I0, the RVP trajectory (each cumulative sum rebuilt from
scratch), momento x and the forward value. Used to freeze expected values
for the C++ acceptance suite.
"""
import csv
import json
import pathlib
import sys

MONEY = ["revenue", "operating_cost", "admin_sales_expense", "pretax_result", "dep_amort",
         "capital_paid_increase", "taxes_paid", "fixed_asset_additions", "net_loan_payments"]


def load_mine(path):
    meta, rows = {}, []
    with open(path) as f:
        lines = [l.rstrip("\n") for l in f if l.strip()]
    body_start = next(i for i, l in enumerate(lines) if l.startswith("year,"))
    for l in lines[:body_start]:
        k, v = l.lstrip("# ").split("=", 1)
        meta[k.strip()] = v.strip()
    for rec in csv.DictReader(lines[body_start:]):
        row = {"year": int(rec["year"]), "production": float(rec["production_t"]),
               "exports": float(rec["exports_t"] or rec["production_t"])}
        reported = all(rec[k] != "" for k in MONEY)
        row["reported"] = reported
        for k in MONEY:
            row[k] = float(rec[k]) if rec[k] != "" else None
        rows.append(row)
    first_reported = min(r["year"] for r in rows if r["reported"])
    return dict(id=meta["mine_id"], opening=int(meta["opening_year"]),
                capital=float(meta["capital_paid_first_year"]),
                tax_rule=meta.get("escondida_tax_rule", "false") == "true",
                first_reported=first_reported, rows=rows)


def load_market(path):
    out, fund = {}, 0.0507
    with open(path) as f:
        lines = [l.rstrip("\n") for l in f if l.strip()]
    for l in lines:
        if l.startswith("# fund_rate="):
            fund = float(l.split("=")[1])
    body = [l for l in lines if not l.startswith("#")]
    for rec in csv.DictReader(body):
        out[int(rec["year"])] = (float(rec["copper_price_usd_per_t"]), float(rec["gdp_usd_m"]),
                                 float(rec["exploration_pct_gdp"]))
    return out, fund


def cash_flows(mine, market):
    base = [r for r in mine["rows"] if r["reported"] and 2001 <= r["year"] <= 2005]
    unit = sum(r["operating_cost"] / r["production"] for r in base if r["production"] > 0) / \
        len([r for r in base if r["production"] > 0])
    gav_rows = [r for r in base if r["operating_cost"] > 0]
    gav = sum(r["admin_sales_expense"] / r["operating_cost"] for r in gav_rows) / len(gav_rows)
    n = len(base)
    nonop = sum(r["pretax_result"] - (r["revenue"] - r["operating_cost"] - r["admin_sales_expense"])
                for r in base) / n
    dep = sum(r["dep_amort"] for r in base) / n
    fixed = sum(r["fixed_asset_additions"] for r in base) / n
    loans = sum(r["net_loan_payments"] for r in base) / n
    flows = []
    for r in mine["rows"]:
        if r["year"] < mine["opening"]:
            continue
        if r["reported"]:
            cf = (r["pretax_result"] + r["dep_amort"] - r["capital_paid_increase"] - r["taxes_paid"]
                  - r["fixed_asset_additions"] - r["net_loan_payments"])
        else:
            price = market[r["year"]][0]
            revenue = min(price * r["production"], price * r["exports"]) / 1e6
            op = unit * r["production"]
            adm = gav * op
            pretax = revenue - op - adm + nonop
            tax = r["taxes_paid"] if (mine["tax_rule"] and r["taxes_paid"] is not None) else 0.0
            cf = pretax + dep - 0.0 - tax - fixed - loans
        flows.append((r["year"], cf))
    return flows


def exploration(mines, market, rate):
    alloc = {m["id"]: 0.0 for m in mines}
    means = {m["id"]: sum(r["production"] for r in m["rows"]) / len(m["rows"]) for m in mines}
    for t in range(1984, 2000):
        _, gdp, pct = market[t]
        private = gdp * pct * 2.0 / 3.0
        elig = [m for m in mines if m["opening"] - 5 <= t <= m["opening"]]
        total = sum(means[m["id"]] for m in elig)
        for m in elig:
            alloc[m["id"]] += private * means[m["id"]] / total * (1 + rate) ** (m["opening"] - t)
    return alloc


def analyze(mines, market, fund, rate, valuation_year=2012):
    expl = exploration(mines, market, rate)
    out = {}
    for m in mines:
        i0 = m["capital"] + expl[m["id"]]
        flows = cash_flows(m, market)
        rvp = []
        for k in range(len(flows)):
            s = 0.0
            for j in range(k + 1):
                y, cf = flows[j]
                s += cf / (1 + rate) ** (y - m["opening"])
            rvp.append((flows[k][0], s - i0))
        x = next((y for y, v in rvp if v > 1e-9), None)
        fwd = 0.0
        if x is not None:
            fwd = sum(cf * (1 + fund) ** (valuation_year - y) for y, cf in flows if y > x)
        out[m["id"]] = dict(i0=i0, exploration=expl[m["id"]], rvp=rvp, momento_x=x,
                            rent_pv=max(rvp[-1][1], 0.0), rent_forward=fwd)
    return out


def main(root):
    root = pathlib.Path(root)
    market, fund = load_market(root / "market.csv")
    mines = sorted((load_mine(p) for p in (root / "mines").glob("*.csv")), key=lambda m: m["id"])
    rates = {"base": 0.069 + 0.91 * 0.03889 + 0.0173, "conservative": 0.069 + 2.0 * 0.03889 + 0.0411}
    result = {label: analyze(mines, market, fund, r) for label, r in rates.items()}
    for label, res in result.items():
        for mid, v in res.items():
            print(label, mid, "I0=%.10f" % v["i0"], "x=", v["momento_x"], "rent_pv=%.10f" % v["rent_pv"],
                  "fwd=%.10f" % v["rent_forward"], "final_rvp=%.10f" % v["rvp"][-1][1])
    if len(sys.argv) > 2:
        json.dump(result, open(sys.argv[2], "w"), indent=1)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parents[1] / "data" / "synthetic")
