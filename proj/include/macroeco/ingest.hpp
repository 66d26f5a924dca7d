#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "macroeco/csv.hpp"
#include "macroeco/date.hpp"
#include "macroeco/error.hpp"

namespace macroeco::ingest {

/// One (week, asset) observation as read from a snapshot file.
struct SnapshotRow {
  Date date;
  std::string asset_id;
  std::string name;
  double market_cap = 0.0;  // US dollars, >= 0
};

struct Asset {
  std::string id;
  std::string name;
};

/// Capitalization value meaning "not listed this week".
inline constexpr double kAbsent = 0.0;

inline bool is_present(double cap) { return cap > 0.0; }

/// Rectangular week x asset capitalization table on a uniform 7-day grid.
/// Absent entries are stored as kAbsent (0); every stored value is >= 0.
class MarketPanel {
 public:
  MarketPanel() = default;

  MarketPanel(std::vector<Date> weeks, std::vector<Asset> assets, std::vector<double> cap)
      : weeks_(std::move(weeks)), assets_(std::move(assets)), cap_(std::move(cap)) {
    if (cap_.size() != weeks_.size() * assets_.size()) {
      fail(Errc::InvalidArgument, "panel matrix does not match weeks x assets");
    }
    for (std::size_t i = 1; i < weeks_.size(); ++i) {
      if (days_between(weeks_[i - 1], weeks_[i]) != 7) {
        fail(Errc::NonUniformGrid, "panel weeks must be 7 days apart");
      }
    }
    for (double& v : cap_) {
      if (!(v >= 0.0) || !std::isfinite(v)) fail(Errc::InvalidArgument, "capitalization must be finite, >= 0");
    }
  }

  std::size_t num_weeks() const { return weeks_.size(); }
  std::size_t num_assets() const { return assets_.size(); }
  bool empty() const { return weeks_.empty() || assets_.empty(); }

  const std::vector<Date>& weeks() const { return weeks_; }
  const std::vector<Asset>& assets() const { return assets_; }

  double cap(std::size_t week, std::size_t asset) const { return cap_[week * assets_.size() + asset]; }
  bool present(std::size_t week, std::size_t asset) const { return is_present(cap(week, asset)); }
  void set_cap(std::size_t week, std::size_t asset, double v) { cap_[week * assets_.size() + asset] = v; }

  std::span<const double> week_row(std::size_t week) const {
    return std::span(cap_).subspan(week * assets_.size(), assets_.size());
  }

  std::vector<double> asset_column(std::size_t asset) const {
    std::vector<double> out(weeks_.size());
    for (std::size_t w = 0; w < weeks_.size(); ++w) out[w] = cap(w, asset);
    return out;
  }

  std::optional<std::size_t> week_index(Date d) const {
    if (weeks_.empty()) return std::nullopt;
    const long off = days_between(weeks_.front(), d);
    if (off < 0 || off % 7 != 0) return std::nullopt;
    const auto idx = static_cast<std::size_t>(off / 7);
    if (idx >= weeks_.size()) return std::nullopt;
    return idx;
  }

  /// Half-open [begin, end) week indices falling inside `period`.
  std::pair<std::size_t, std::size_t> week_range(const DateInterval& period) const {
    std::size_t begin = weeks_.size();
    std::size_t end = 0;
    for (std::size_t w = 0; w < weeks_.size(); ++w) {
      if (period.contains(weeks_[w])) {
        begin = std::min(begin, w);
        end = w + 1;
      }
    }
    if (begin >= end) fail(Errc::EmptyPeriod, "no panel week falls inside the requested period");
    return {begin, end};
  }

  double total_cap(std::size_t week) const {
    double sum = 0.0;
    for (double v : week_row(week)) sum += v;
    return sum;
  }

  std::size_t active_count(std::size_t week) const {
    std::size_t n = 0;
    for (double v : week_row(week)) n += is_present(v) ? 1 : 0;
    return n;
  }

  friend bool operator==(const MarketPanel&, const MarketPanel&) = default;

 private:
  std::vector<Date> weeks_;
  std::vector<Asset> assets_;
  std::vector<double> cap_;
};

inline bool operator==(const Asset& a, const Asset& b) { return a.id == b.id && a.name == b.name; }

inline std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

/// Trim and case-fold a ticker symbol.
inline std::string normalize_id(std::string_view raw) {
  std::string id = trim(raw);
  for (char& c : id) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return id;
}

/// Trim and collapse internal whitespace runs to one space.
inline std::string normalize_name(std::string_view raw) {
  std::string out;
  bool in_space = false;
  for (char c : trim(raw)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_space = true;
      continue;
    }
    if (in_space) out.push_back(' ');
    in_space = false;
    out.push_back(c);
  }
  return out;
}

/// Reads delimited snapshot rows. Required header columns: date, asset_id,
/// name, market_cap (any order); other columns are ignored. Row numbers in
/// diagnostics are 1-based file line numbers.
inline std::vector<SnapshotRow> read_snapshots(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::vector<std::string>> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = csv::split(line);
      break;
    }
  }
  if (!header) fail(Errc::EmptyPanel, "input has no header row");
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header->size(); ++i) col[normalize_id((*header)[i])] = i;
  for (const char* need : {"date", "asset_id", "name", "market_cap"}) {
    if (!col.contains(need)) fail(Errc::MalformedRow, "line 1: header lacks column '" + std::string(need) + "'");
  }
  const std::size_t c_date = col["date"];
  const std::size_t c_id = col["asset_id"];
  const std::size_t c_name = col["name"];
  const std::size_t c_cap = col["market_cap"];
  const std::size_t width = std::max({c_date, c_id, c_name, c_cap}) + 1;

  std::vector<SnapshotRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    auto fields = csv::split(line);
    if (!fields) fail(Errc::MalformedRow, where + "unterminated quote");
    if (fields->size() < width) fail(Errc::MalformedRow, where + "too few columns");
    SnapshotRow row;
    const auto date = parse_date(trim((*fields)[c_date]));
    if (!date) fail(Errc::MalformedRow, where + "bad date '" + (*fields)[c_date] + "'");
    row.date = *date;
    row.asset_id = (*fields)[c_id];
    if (normalize_id(row.asset_id).empty()) fail(Errc::MalformedRow, where + "empty asset_id");
    row.name = (*fields)[c_name];
    const auto cap = csv::parse_number((*fields)[c_cap]);
    if (!cap || !std::isfinite(*cap) || *cap < 0.0) {
      fail(Errc::MalformedRow, where + "bad market_cap '" + (*fields)[c_cap] + "'");
    }
    row.market_cap = *cap;
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Builds a panel on the uniform weekly grid spanned by the rows. Assets are
/// ordered by normalized id; assets never present and empty leading/trailing
/// weeks are dropped.
inline MarketPanel load_panel(std::span<const SnapshotRow> rows) {
  struct Cell {
    Date date;
    std::size_t asset;
    double cap;
  };
  std::map<std::string, std::string> names;
  std::set<std::pair<long, std::string>> seen;
  std::optional<Date> first;
  std::optional<Date> last;
  for (const auto& r : rows) {
    const auto id = normalize_id(r.asset_id);
    if (id.empty()) fail(Errc::MalformedRow, "empty asset_id");
    if (!seen.emplace(r.date.time_since_epoch().count(), id).second) {
      fail(Errc::DuplicateKey, "duplicate row for (" + format_date(r.date) + ", " + id + ")");
    }
    if (!is_present(r.market_cap)) continue;
    auto name = normalize_name(r.name);
    auto [it, inserted] = names.emplace(id, name);
    if (!inserted && it->second.empty()) it->second = name;
    first = first ? std::min(*first, r.date) : r.date;
    last = last ? std::max(*last, r.date) : r.date;
  }
  if (!first) fail(Errc::EmptyPanel, "no week with a positive capitalization");
  for (const auto& r : rows) {
    if (days_between(*first, r.date) % 7 != 0) {
      fail(Errc::NonUniformGrid, format_date(r.date) + " is not on the 7-day grid starting " +
                                     format_date(*first));
    }
  }
  std::vector<Asset> assets;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& [id, name] : names) {
    index.emplace(id, assets.size());
    assets.push_back({id, name});
  }
  const auto n_weeks = static_cast<std::size_t>(days_between(*first, *last) / 7 + 1);
  std::vector<Date> weeks(n_weeks);
  for (std::size_t w = 0; w < n_weeks; ++w) weeks[w] = *first + std::chrono::days{7 * static_cast<long>(w)};
  std::vector<double> cap(n_weeks * assets.size(), kAbsent);
  for (const auto& r : rows) {
    if (!is_present(r.market_cap) || r.date < *first || r.date > *last) continue;
    const auto w = static_cast<std::size_t>(days_between(*first, r.date) / 7);
    cap[w * assets.size() + index.at(normalize_id(r.asset_id))] = r.market_cap;
  }
  return MarketPanel(std::move(weeks), std::move(assets), std::move(cap));
}

inline MarketPanel load_panel(std::istream& in) {
  const auto rows = read_snapshots(in);
  return load_panel(rows);
}

/// Serializes present entries in the snapshot format, week-major.
inline void write_panel(std::ostream& out, const MarketPanel& panel) {
  out << "date,asset_id,name,market_cap\n";
  for (std::size_t w = 0; w < panel.num_weeks(); ++w) {
    const auto date = format_date(panel.weeks()[w]);
    for (std::size_t a = 0; a < panel.num_assets(); ++a) {
      if (!panel.present(w, a)) continue;
      out << date << ',' << csv::quote(panel.assets()[a].id) << ','
          << csv::quote(panel.assets()[a].name) << ',' << csv::number(panel.cap(w, a)) << '\n';
    }
  }
}

enum class GapFill {
  Constant,  // mean of the two bounding values across the whole gap
  Linear,    // linear interpolation between the bounding values
};

/// Fills every internal run of absent weeks (present before and after) of
/// each asset. Leading and trailing absences are left alone.
inline MarketPanel fill_gaps(MarketPanel panel, GapFill mode = GapFill::Constant) {
  for (std::size_t a = 0; a < panel.num_assets(); ++a) {
    std::optional<std::size_t> prev;
    for (std::size_t w = 0; w < panel.num_weeks(); ++w) {
      if (!panel.present(w, a)) continue;
      if (prev && w > *prev + 1) {
        const double left = panel.cap(*prev, a);
        const double right = panel.cap(w, a);
        const auto span = static_cast<double>(w - *prev);
        for (std::size_t g = *prev + 1; g < w; ++g) {
          const double frac = static_cast<double>(g - *prev) / span;
          panel.set_cap(g, a, mode == GapFill::Constant ? 0.5 * (left + right)
                                                        : left + frac * (right - left));
        }
      }
      prev = w;
    }
  }
  return panel;
}

/// Unsmoothed per-week activity counts.
struct WeekActivity {
  Date week;
  std::size_t n_active = 0;
  std::size_t speciations = 0;  // active now, inactive the week before
  std::size_t extinctions = 0;  // active the week before, inactive now
  double total_cap = 0.0;
};

inline std::vector<WeekActivity> activity(const MarketPanel& panel) {
  if (panel.empty()) fail(Errc::EmptyPanel, "activity of an empty panel");
  std::vector<WeekActivity> out(panel.num_weeks());
  for (std::size_t w = 0; w < panel.num_weeks(); ++w) {
    auto& row = out[w];
    row.week = panel.weeks()[w];
    row.n_active = panel.active_count(w);
    row.total_cap = panel.total_cap(w);
    if (w == 0) continue;
    for (std::size_t a = 0; a < panel.num_assets(); ++a) {
      const bool now = panel.present(w, a);
      const bool before = panel.present(w - 1, a);
      row.speciations += (now && !before) ? 1 : 0;
      row.extinctions += (!now && before) ? 1 : 0;
    }
  }
  return out;
}

struct RateSeries {
  Date week;
  std::size_t n_active = 0;
  std::size_t speciations = 0;  // raw counts for this week
  std::size_t extinctions = 0;
  double speciation_rate = 0.0;
  double extinction_rate = 0.0;
  double total_cap = 0.0;
};

enum class RateDenominator {
  Current,   // n_active(t)
  Previous,  // n_active(t - 1)
};

/// Speciation/extinction rates normalized by the active count, then smoothed
/// with a trailing mean over `smooth_weeks` (shorter prefix at the start).
/// A zero denominator gives a zero rate.
inline std::vector<RateSeries> activity_and_rates(const MarketPanel& panel, std::size_t smooth_weeks,
                                                  RateDenominator denom = RateDenominator::Current) {
  if (smooth_weeks < 1) fail(Errc::InvalidArgument, "smooth_weeks must be >= 1");
  const auto act = activity(panel);
  std::vector<RateSeries> raw(act.size());
  for (std::size_t w = 0; w < act.size(); ++w) {
    raw[w].week = act[w].week;
    raw[w].n_active = act[w].n_active;
    raw[w].speciations = act[w].speciations;
    raw[w].extinctions = act[w].extinctions;
    raw[w].total_cap = act[w].total_cap;
    const std::size_t d = denom == RateDenominator::Current ? act[w].n_active
                                                            : (w > 0 ? act[w - 1].n_active : 0);
    if (d > 0) {
      raw[w].speciation_rate = static_cast<double>(act[w].speciations) / static_cast<double>(d);
      raw[w].extinction_rate = static_cast<double>(act[w].extinctions) / static_cast<double>(d);
    }
  }
  if (smooth_weeks == 1) return raw;
  std::vector<RateSeries> out(raw);
  for (std::size_t w = 0; w < raw.size(); ++w) {
    const std::size_t lo = w + 1 >= smooth_weeks ? w + 1 - smooth_weeks : 0;
    double s = 0.0;
    double e = 0.0;
    double c = 0.0;
    for (std::size_t k = lo; k <= w; ++k) {
      s += raw[k].speciation_rate;
      e += raw[k].extinction_rate;
      c += raw[k].total_cap;
    }
    const auto len = static_cast<double>(w - lo + 1);
    out[w].speciation_rate = s / len;
    out[w].extinction_rate = e / len;
    out[w].total_cap = c / len;
  }
  return out;
}

inline void write_rates(std::ostream& out, std::span<const RateSeries> rates) {
  out << "week,n_active,speciations,extinctions,speciation_rate,extinction_rate,total_cap\n";
  for (const auto& r : rates) {
    out << format_date(r.week) << ',' << r.n_active << ',' << r.speciations << ',' << r.extinctions << ','
        << csv::number(r.speciation_rate) << ','
        << csv::number(r.extinction_rate) << ',' << csv::number(r.total_cap) << '\n';
  }
}

/// Radiation / stationary / growth phase boundaries.
struct RegimeSegmentation {
  Date radiation_end;
  Date stationary_start;
  Date stationary_end;
  Date growth_start;

  DateInterval stationary() const { return {stationary_start, stationary_end}; }

  friend bool operator==(const RegimeSegmentation&, const RegimeSegmentation&) = default;
};

inline RegimeSegmentation default_regimes() {
  return {make_date(2014, 6, 1), make_date(2014, 11, 2), make_date(2017, 4, 30),
          make_date(2017, 5, 7)};
}

/// Returns the default phase dates unless all four are overridden.
inline RegimeSegmentation segment_regimes(std::optional<std::array<Date, 4>> overrides = {}) {
  if (!overrides) return default_regimes();
  const auto& d = *overrides;
  if (!(d[0] <= d[1] && d[1] < d[2] && d[2] < d[3])) {
    fail(Errc::BadOrdering,
         "need radiation_end <= stationary_start < stationary_end < growth_start");
  }
  return {d[0], d[1], d[2], d[3]};
}

}  // namespace macroeco::ingest
