#include "cgeem/fleet.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cgeem/errors.hpp"

namespace cgeem::fleet {

namespace {

std::optional<int> index_of(const std::vector<std::string>& names, std::string_view name) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<int>(it - names.begin());
}

}  // namespace

std::vector<std::string> FlightResult::param_names() const {
  std::vector<std::string> out;
  for (const auto& p : report.params) out.push_back(p.name);
  return out;
}

const ParamStats& TypeSummary::at(std::string_view name) const {
  for (const auto& p : params) {
    if (p.name == name) return p;
  }
  throw ConfigError("no parameter named '" + std::string(name) + "'");
}

FleetSummary aggregate(std::vector<FlightResult> results) {
  std::sort(results.begin(), results.end(), [](const FlightResult& a, const FlightResult& b) {
    if (a.flight_id != b.flight_id) return a.flight_id < b.flight_id;
    return a.tail_id < b.tail_id;
  });

  FleetSummary summary;
  std::map<std::string, std::vector<const FlightResult*>> by_type;
  for (const auto& r : results) {
    if (r.converged()) {
      by_type[r.aircraft_type].push_back(&r);
    } else {
      summary.flagged.push_back({r.flight_id, r.aircraft_type, r.report.failing()});
    }
  }

  for (const auto& [type, flights] : by_type) {
    if (flights.size() < kMinFlightsPerType) {
      summary.notes.push_back("type " + type + " omitted: " + std::to_string(flights.size()) +
                              " converged flight(s), at least " +
                              std::to_string(kMinFlightsPerType) + " required");
      continue;
    }
    const auto names = flights.front()->param_names();
    for (const auto* f : flights) {
      if (f->param_names() != names) {
        throw ConfigError("flights of type " + type + " use different parameter sets");
      }
    }

    TypeSummary ts;
    ts.aircraft_type = type;
    ts.count = flights.size();
    const double n = static_cast<double>(flights.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
      ParamStats ps;
      ps.name = names[i];
      ps.count = flights.size();
      ps.min = ps.max = flights.front()->representative()[static_cast<int>(i)];
      double sum = 0.0;
      for (const auto* f : flights) {
        const double v = f->representative()[static_cast<int>(i)];
        sum += v;
        ps.min = std::min(ps.min, v);
        ps.max = std::max(ps.max, v);
      }
      ps.mean = std::clamp(sum / n, ps.min, ps.max);
      double ss = 0.0;
      for (const auto* f : flights) {
        const double d = f->representative()[static_cast<int>(i)] - ps.mean;
        ss += d * d;
      }
      ps.std = std::sqrt(ss / (n - 1.0));
      ts.params.push_back(ps);
    }

    const auto i_cd0 = index_of(names, "C_D0");
    const auto i_cdl = index_of(names, "C_DL");
    if (i_cd0 && i_cdl && flights.size() >= 3) {
      std::vector<double> x, y;
      for (const auto* f : flights) {
        x.push_back(f->representative()[*i_cd0]);
        y.push_back(f->representative()[*i_cdl]);
      }
      try {
        ts.pearson_cd0_cdl = pearson(x, y);
      } catch (const DegenerateError&) {
      }
    }
    summary.types.push_back(std::move(ts));
  }
  return summary;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("correlation needs paired samples");
  if (x.size() < 3) throw ConfigError("correlation needs at least three pairs");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw DegenerateError("zero variance in correlation input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double correlation_cd0_cdl(const std::vector<FlightResult>& results) {
  std::vector<const FlightResult*> sorted;
  for (const auto& r : results) {
    if (r.converged()) sorted.push_back(&r);
  }
  std::sort(sorted.begin(), sorted.end(), [](const FlightResult* a, const FlightResult* b) {
    return a->flight_id < b->flight_id;
  });
  std::vector<double> x, y;
  for (const auto* r : sorted) {
    const auto names = r->param_names();
    const auto i_cd0 = index_of(names, "C_D0");
    const auto i_cdl = index_of(names, "C_DL");
    if (!i_cd0 || !i_cdl) continue;
    x.push_back(r->representative()[*i_cd0]);
    y.push_back(r->representative()[*i_cdl]);
  }
  return pearson(x, y);
}

std::size_t sturges_bins(std::size_t n) {
  if (n <= 1) return 1;
  return static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n)))) + 1;
}

Histogram histogram(std::span<const double> values, std::size_t bin_count) {
  if (values.empty()) throw ConfigError("histogram needs at least one value");
  if (bin_count == 0) throw ConfigError("histogram needs at least one bin");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  Histogram h;
  if (!(hi > lo)) {
    h.edges = {lo, hi};
    h.counts = {values.size()};
    return h;
  }
  const double width = (hi - lo) / static_cast<double>(bin_count);
  h.edges.resize(bin_count + 1);
  for (std::size_t i = 0; i <= bin_count; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges.back() = hi;
  h.counts.assign(bin_count, 0);
  for (double v : values) {
    auto idx = static_cast<std::size_t>(std::floor((v - lo) / width));
    idx = std::min(idx, bin_count - 1);
    // keep bins consistent with the stored edges despite rounding
    while (idx > 0 && v < h.edges[idx]) --idx;
    while (idx + 1 < bin_count && v >= h.edges[idx + 1]) ++idx;
    ++h.counts[idx];
  }
  return h;
}

std::vector<TypeComparison> type_table(const FleetSummary& summary) {
  std::vector<TypeComparison> rows;
  for (const auto& t : summary.types) {
    TypeComparison row;
    row.aircraft_type = t.aircraft_type;
    row.flights = t.count;
    const auto& cd0 = t.at("C_D0");
    row.mean_cd0 = cd0.mean;
    row.std_cd0 = cd0.std;
    for (const auto& p : t.params) {
      if (p.name == "C_DL") {
        row.mean_cdl = p.mean;
        row.std_cdl = p.std;
      }
    }
    rows.push_back(row);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const TypeComparison& a, const TypeComparison& b) {
    if (a.mean_cd0 != b.mean_cd0) return a.mean_cd0 > b.mean_cd0;
    return a.aircraft_type < b.aircraft_type;
  });
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    rows[i].tie_with_next = rows[i].mean_cd0 == rows[i + 1].mean_cd0;
  }
  return rows;
}

std::vector<TypeComparison> cross_type_compare(const FleetSummary& summary) {
  if (summary.types.size() < 2) throw ConfigError("cross-type comparison needs two types");
  return type_table(summary);
}

}  // namespace cgeem::fleet
