#include "rentsim/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "rentsim/errors.hpp"

namespace rentsim {

namespace {

constexpr std::size_t kMineColumns = 12;
constexpr std::size_t kMarketColumns = 4;

std::string trim(std::string_view s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& text, const std::string& file, std::size_t line,
                    const char* column) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError(file, line, std::string("non-numeric value '") + text + "' in column " + column);
    }
    return value;
}

int parse_int(const std::string& text, const std::string& file, std::size_t line, const char* column) {
    int value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError(file, line, std::string("non-integer value '") + text + "' in column " + column);
    }
    return value;
}

bool parse_bool(const std::string& text, const std::string& file, std::size_t line) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ParseError(file, line, "expected boolean, got '" + text + "'");
}

// Shortest text that parses back to the same double.
std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

bool is_blank_line(const std::string& line) { return trim(line).empty(); }

struct MetadataLine {
    std::string key;
    std::string value;
};

std::optional<MetadataLine> parse_metadata(const std::string& raw) {
    std::string line = trim(raw);
    if (!line.empty() && line.front() == '#') line = trim(line.substr(1));
    auto eq = line.find('=');
    if (eq == std::string::npos) return std::nullopt;
    return MetadataLine{trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
}

}  // namespace

const MineYearRecord* MineDataset::find(int year) const {
    auto it = std::lower_bound(records.begin(), records.end(), year,
                               [](const MineYearRecord& r, int y) { return r.year < y; });
    return (it != records.end() && it->year == year) ? &*it : nullptr;
}

double MineDataset::mean_production() const {
    if (records.empty()) return 0.0;
    double total = 0.0;
    for (const auto& r : records) total += r.production;
    return total / static_cast<double>(records.size());
}

const MarketYear* MarketSeries::find(int year) const {
    auto it = years.find(year);
    return it == years.end() ? nullptr : &it->second;
}

const MarketYear& MarketSeries::at(int year) const {
    if (const auto* entry = find(year)) return *entry;
    throw CoverageError("market series has no entry for year " + std::to_string(year));
}

DiscountSpec DiscountSpec::base() { return {0.069, 0.91, 0.03889, 0.0173, "base"}; }

DiscountSpec DiscountSpec::conservative() { return {0.069, 2.0, 0.03889, 0.0411, "conservative"}; }

std::ostream& operator<<(std::ostream& os, const ValidationReport& report) {
    for (const auto& e : report.errors) os << "error " << e.locator << " [" << e.rule << "] " << e.message << '\n';
    for (const auto& w : report.warnings) os << "warning " << w.locator << " [" << w.rule << "] " << w.message << '\n';
    return os;
}

MineDataset parse_mine_dataset(std::istream& in, const std::string& source_name) {
    MineDataset mine;
    std::optional<int> first_reported_override;
    bool have_id = false, have_opening = false, have_capital = false;
    bool header_seen = false;
    std::map<int, std::size_t> seen_years;
    std::string raw;
    std::size_t line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        if (is_blank_line(raw)) continue;
        if (!header_seen) {
            if (trim(raw) == kMineHeader) {
                header_seen = true;
                continue;
            }
            auto meta = parse_metadata(raw);
            if (!meta) {
                std::string t = trim(raw);
                if (!t.empty() && t.front() == '#') continue;
                throw SchemaError(source_name, line_no, "expected metadata or header row '" + std::string(kMineHeader) + "'");
            }
            if (meta->key == "mine_id") {
                mine.mine_id = meta->value;
                have_id = true;
            } else if (meta->key == "opening_year") {
                mine.opening_year = parse_int(meta->value, source_name, line_no, "opening_year");
                have_opening = true;
            } else if (meta->key == "capital_paid_first_year") {
                mine.capital_paid_first_year = parse_double(meta->value, source_name, line_no, "capital_paid_first_year");
                have_capital = true;
            } else if (meta->key == "escondida_tax_rule") {
                mine.escondida_tax_rule = parse_bool(meta->value, source_name, line_no);
            } else if (meta->key == "first_reported_year") {
                first_reported_override = parse_int(meta->value, source_name, line_no, "first_reported_year");
            } else {
                throw SchemaError(source_name, line_no, "unknown metadata key '" + meta->key + "'");
            }
            continue;
        }

        auto cells = split_csv(raw);
        if (cells.size() != kMineColumns) {
            throw ParseError(source_name, line_no,
                             "expected " + std::to_string(kMineColumns) + " columns, found " + std::to_string(cells.size()));
        }
        MineYearRecord rec;
        rec.year = parse_int(cells[0], source_name, line_no, "year");
        if (auto [it, inserted] = seen_years.emplace(rec.year, line_no); !inserted) {
            throw SchemaError(source_name, line_no,
                              "duplicate year " + std::to_string(rec.year) + " (first listed on line " +
                                  std::to_string(it->second) + ")");
        }

        static constexpr const char* names[] = {"revenue", "operating_cost", "admin_sales_expense",
                                                "pretax_result", "dep_amort", "capital_paid_increase",
                                                "taxes_paid", "fixed_asset_additions", "net_loan_payments"};
        Money* fields[] = {&rec.revenue,       &rec.operating_cost,        &rec.admin_sales_expense,
                           &rec.pretax_result, &rec.depreciation_amortization, &rec.capital_paid_increase,
                           &rec.taxes_paid,    &rec.fixed_asset_additions, &rec.net_loan_payments};
        std::size_t blanks = 0;
        for (std::size_t i = 0; i < 9; ++i) {
            if (cells[i + 1].empty()) {
                ++blanks;
            } else {
                *fields[i] = parse_double(cells[i + 1], source_name, line_no, names[i]);
            }
        }
        rec.reported = blanks == 0;
        if (!rec.reported) {
            // Physical-only row: only an explicit tax figure may be kept.
            rec.taxes_supplied = !cells[7].empty();
            for (std::size_t i = 0; i < 9; ++i) {
                if (i != 6) *fields[i] = 0.0;
            }
            if (!rec.taxes_supplied) rec.taxes_paid = 0.0;
        }
        if (cells[10].empty()) throw ParseError(source_name, line_no, "production_t is required");
        rec.production = parse_double(cells[10], source_name, line_no, "production_t");
        rec.exports = cells[11].empty() ? rec.production : parse_double(cells[11], source_name, line_no, "exports_t");
        mine.records.push_back(rec);
    }

    if (!header_seen) throw SchemaError(source_name, line_no, "missing header row");
    if (!have_id) throw SchemaError(source_name, 0, "missing metadata key 'mine_id'");
    if (!have_opening) throw SchemaError(source_name, 0, "missing metadata key 'opening_year'");
    if (!have_capital) throw SchemaError(source_name, 0, "missing metadata key 'capital_paid_first_year'");

    std::sort(mine.records.begin(), mine.records.end(),
              [](const MineYearRecord& a, const MineYearRecord& b) { return a.year < b.year; });

    if (first_reported_override) {
        mine.first_reported_year = *first_reported_override;
    } else {
        auto it = std::find_if(mine.records.begin(), mine.records.end(),
                               [](const MineYearRecord& r) { return r.reported; });
        mine.first_reported_year = it != mine.records.end() ? it->year : mine.opening_year;
    }
    if (mine.records.empty()) mine.load_warnings.emplace_back("no history; reconstruction required");
    return mine;
}

MineDataset load_mine_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mine file " + path.string());
    return parse_mine_dataset(in, path.string());
}

void write_mine_dataset(std::ostream& out, const MineDataset& mine) {
    out << "# mine_id=" << mine.mine_id << '\n';
    out << "# opening_year=" << mine.opening_year << '\n';
    out << "# first_reported_year=" << mine.first_reported_year << '\n';
    out << "# capital_paid_first_year=" << format_number(mine.capital_paid_first_year) << '\n';
    out << "# escondida_tax_rule=" << (mine.escondida_tax_rule ? "true" : "false") << '\n';
    out << kMineHeader << '\n';
    for (const auto& r : mine.records) {
        const Money fields[] = {r.revenue,       r.operating_cost,  r.admin_sales_expense,
                                r.pretax_result, r.depreciation_amortization, r.capital_paid_increase,
                                r.taxes_paid,    r.fixed_asset_additions, r.net_loan_payments};
        out << r.year;
        for (std::size_t i = 0; i < 9; ++i) {
            out << ',';
            bool keep = r.reported || r.reconstructed || (i == 6 && r.taxes_supplied);
            if (keep) out << format_number(fields[i]);
        }
        out << ',' << format_number(r.production) << ',' << format_number(r.exports) << '\n';
    }
}

std::vector<MineDataset> load_mine_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<MineDataset> mines;
    mines.reserve(files.size());
    for (const auto& f : files) mines.push_back(load_mine_dataset(f));
    std::sort(mines.begin(), mines.end(),
              [](const MineDataset& a, const MineDataset& b) { return a.mine_id < b.mine_id; });
    return mines;
}

MarketSeries parse_market_series(std::istream& in, const std::string& source_name) {
    MarketSeries market;
    bool header_seen = false;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (is_blank_line(raw)) continue;
        if (!header_seen) {
            if (trim(raw) == kMarketHeader) {
                header_seen = true;
                continue;
            }
            auto meta = parse_metadata(raw);
            if (meta && meta->key == "fund_rate") {
                market.fund_rate = parse_double(meta->value, source_name, line_no, "fund_rate");
                continue;
            }
            if (!trim(raw).empty() && trim(raw).front() == '#') continue;
            throw SchemaError(source_name, line_no, "expected header row '" + std::string(kMarketHeader) + "'");
        }
        auto cells = split_csv(raw);
        if (cells.size() != kMarketColumns) {
            throw ParseError(source_name, line_no,
                             "expected " + std::to_string(kMarketColumns) + " columns, found " + std::to_string(cells.size()));
        }
        MarketYear y;
        y.year = parse_int(cells[0], source_name, line_no, "year");
        y.copper_price = parse_double(cells[1], source_name, line_no, "copper_price_usd_per_t");
        y.gdp = parse_double(cells[2], source_name, line_no, "gdp_usd_m");
        y.exploration_pct_gdp = parse_double(cells[3], source_name, line_no, "exploration_pct_gdp");
        if (!market.years.emplace(y.year, y).second) {
            throw SchemaError(source_name, line_no, "duplicate year " + std::to_string(y.year));
        }
    }
    if (!header_seen) throw SchemaError(source_name, line_no, "missing header row");
    return market;
}

MarketSeries load_market_series(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open market file " + path.string());
    return parse_market_series(in, path.string());
}

void write_market_series(std::ostream& out, const MarketSeries& market) {
    out << "# fund_rate=" << format_number(market.fund_rate) << '\n';
    out << kMarketHeader << '\n';
    for (const auto& [year, y] : market.years) {
        out << year << ',' << format_number(y.copper_price) << ',' << format_number(y.gdp) << ','
            << format_number(y.exploration_pct_gdp) << '\n';
    }
}

ValidationReport validate_mine(const MineDataset& mine) {
    ValidationReport report;
    const std::string prefix = "mine:" + mine.mine_id;
    auto error = [&](std::string loc, std::string rule, std::string msg) {
        report.errors.push_back({std::move(loc), std::move(rule), std::move(msg)});
    };
    auto warn = [&](std::string loc, std::string rule, std::string msg) {
        report.warnings.push_back({std::move(loc), std::move(rule), std::move(msg)});
    };

    if (mine.capital_paid_first_year <= 0.0 || !std::isfinite(mine.capital_paid_first_year)) {
        error(prefix, "capital_paid_positive", "capital_paid_first_year must be > 0");
    }
    if (mine.first_reported_year < mine.opening_year) {
        error(prefix, "first_reported_after_opening", "first_reported_year precedes opening_year");
    }
    if (mine.records.empty()) warn(prefix, "no_history", "no history; reconstruction required");

    auto sorted = mine.records;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const MineYearRecord& a, const MineYearRecord& b) { return a.year < b.year; });

    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const auto& r = sorted[i];
        const std::string loc = prefix + "/year:" + std::to_string(r.year);
        if (i > 0 && sorted[i - 1].year == r.year) {
            error(loc, "unique_year", "duplicate year");
        }
        if (r.year < kEarliestRecordYear || r.year > kLatestRecordYear) {
            error(loc, "year_range", "year outside [1984, 2012]");
        }
        if (!(r.production >= 0.0)) error(loc, "production_nonnegative", "production must be >= 0");
        if (!(r.exports >= 0.0)) error(loc, "exports_nonnegative", "exports must be >= 0");
        const Money money[] = {r.revenue,       r.operating_cost,  r.admin_sales_expense,
                               r.pretax_result, r.depreciation_amortization, r.capital_paid_increase,
                               r.taxes_paid,    r.fixed_asset_additions, r.net_loan_payments};
        if (!std::all_of(std::begin(money), std::end(money), [](double v) { return std::isfinite(v); })) {
            error(loc, "money_finite", "money fields must be finite");
        }
        if (r.production >= 0.0 && r.exports > 1.1 * r.production) {
            warn(loc, "exports_exceed_production", "exports exceed production by more than 10% (inventory draw-down)");
        }
    }
    std::sort(report.errors.begin(), report.errors.end());
    std::sort(report.warnings.begin(), report.warnings.end());
    return report;
}

ValidationReport validate_market(const MarketSeries& market) {
    ValidationReport report;
    std::optional<int> previous;
    for (const auto& [year, y] : market.years) {
        const std::string loc = "market/year:" + std::to_string(year);
        if (!(y.copper_price > 0.0)) report.errors.push_back({loc, "price_positive", "copper_price must be > 0"});
        if (!(y.exploration_pct_gdp >= 0.0 && y.exploration_pct_gdp < 1.0)) {
            report.errors.push_back({loc, "exploration_fraction", "exploration_pct_gdp must lie in [0, 1)"});
        }
        if (previous && year != *previous + 1) {
            for (int gap = *previous + 1; gap < year; ++gap) {
                report.errors.push_back({"market/year:" + std::to_string(gap), "contiguous_coverage",
                                         "non-contiguous market coverage"});
            }
        }
        previous = year;
    }
    std::sort(report.errors.begin(), report.errors.end());
    return report;
}

ValidationReport validate_dataset(const MineDataset& mine, const MarketSeries& market) {
    ValidationReport report = validate_mine(mine);
    ValidationReport market_report = validate_market(market);

    std::set<ValidationIssue> errors(report.errors.begin(), report.errors.end());
    errors.insert(market_report.errors.begin(), market_report.errors.end());

    if (!mine.records.empty()) {
        auto [lo, hi] = std::minmax_element(mine.records.begin(), mine.records.end(),
                                            [](const MineYearRecord& a, const MineYearRecord& b) { return a.year < b.year; });
        for (int year = lo->year; year <= hi->year; ++year) {
            if (!market.find(year)) {
                errors.insert({"market/year:" + std::to_string(year), "contiguous_coverage",
                               "non-contiguous market coverage"});
            }
        }
    }
    report.errors.assign(errors.begin(), errors.end());
    return report;
}

}  // namespace rentsim
