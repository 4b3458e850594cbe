#include "greenpod/impact.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "format_util.hpp"
#include "greenpod/error.hpp"

namespace greenpod::impact {

namespace {

using detail::fixed;
using detail::grouped;
using detail::round_to;

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidAssumptions, what);
}

std::string dollars(double v) { return "$" + grouped(v); }

// Small amounts keep their cents.
std::string credit(double v) { return std::abs(v) < 100.0 ? "$" + fixed(v, 2) : dollars(v); }

std::string mwh(double v, int decimals) { return fixed(v, decimals) + " MWh"; }

}  // namespace

void ImpactAssumptions::validate() const {
  require(finite_nonneg(jobs_per_day), "jobs_per_day must be >= 0");
  require(finite_nonneg(job_kwh), "job_kwh must be >= 0");
  require(finite_nonneg(optimization_rate) && optimization_rate <= 1.0,
          "optimization_rate must lie in [0, 1]");
  require(finite_pos(co2_lb_per_kwh), "co2_lb_per_kwh must be > 0");
  require(finite_pos(lb_to_kg), "lb_to_kg must be > 0");
  require(!co2_kg_per_mwh || finite_pos(*co2_kg_per_mwh), "co2_kg_per_mwh must be > 0");
  require(finite_pos(vehicle_tons_per_year), "vehicle_tons_per_year must be > 0");
  require(finite_pos(electricity_usd_per_kwh), "electricity_usd_per_kwh must be > 0");
  require(finite_pos(credit_usd_per_ton_min), "credit_usd_per_ton_min must be > 0");
  require(finite_pos(credit_usd_per_ton_max), "credit_usd_per_ton_max must be > 0");
  require(credit_usd_per_ton_min <= credit_usd_per_ton_max,
          "credit_usd_per_ton_min must not exceed credit_usd_per_ton_max");
  require(clusters >= 1, "clusters must be >= 1");
  require(days_per_month >= 1 && days_per_year >= 1, "day counts must be >= 1");
}

double ImpactAssumptions::co2_tons_per_mwh() const {
  return co2_kg_per_mwh ? *co2_kg_per_mwh / 1000.0 : co2_lb_per_kwh * lb_to_kg;
}

ImpactFigures ImpactFigures::scaled(double f) const {
  return {daily_mwh * f,      monthly_mwh * f,    annual_mwh * f,     co2_tons * f,
          vehicles * f,       annual_usd * f,     credit_usd_min * f, credit_usd_max * f,
          total_1y_min * f,   total_1y_max * f,   total_5y_min * f,   total_5y_max * f};
}

ImpactReport compute_impact(const ImpactAssumptions& a) {
  a.validate();
  ImpactFigures s;
  s.daily_mwh = a.job_kwh * a.jobs_per_day * a.optimization_rate / 1000.0;
  s.monthly_mwh = s.daily_mwh * a.days_per_month;
  s.annual_mwh = s.daily_mwh * a.days_per_year;
  s.co2_tons = s.annual_mwh * a.co2_tons_per_mwh();
  s.vehicles = s.co2_tons / a.vehicle_tons_per_year;
  s.annual_usd = s.annual_mwh * 1000.0 * a.electricity_usd_per_kwh;
  s.credit_usd_min = s.co2_tons * a.credit_usd_per_ton_min;
  s.credit_usd_max = s.co2_tons * a.credit_usd_per_ton_max;
  s.total_1y_min = s.annual_usd + s.credit_usd_min;
  s.total_1y_max = s.annual_usd + s.credit_usd_max;
  s.total_5y_min = 5.0 * s.total_1y_min;
  s.total_5y_max = 5.0 * s.total_1y_max;
  return {a, s, s.scaled(a.clusters)};
}

std::vector<TableRow> table_rows(const ImpactReport& r) {
  const auto& s = r.single;
  const auto& f = r.fleet;
  // The fleet vehicle count is printed as clusters times the rounded
  // single-cluster count, so the two columns read as exact multiples.
  const double fleet_vehicles = round_to(s.vehicles, 2) * r.assumptions.clusters;
  return {
      {"Daily Energy Savings", mwh(s.daily_mwh, 4), mwh(f.daily_mwh, 2)},
      {"Monthly Energy Savings", mwh(s.monthly_mwh, 2), mwh(f.monthly_mwh, 2)},
      {"Annual Energy Savings", mwh(s.annual_mwh, 2), mwh(f.annual_mwh, 2)},
      {"Annual CO2 Reduction", fixed(s.co2_tons, 2) + " metric tons",
       fixed(f.co2_tons, 2) + " metric tons"},
      {"Vehicles Removed", fixed(s.vehicles, 2) + " vehicles",
       fixed(fleet_vehicles, 2) + " vehicles"},
      {"Annual Cost Savings", dollars(s.annual_usd), dollars(f.annual_usd)},
      {"Carbon Credit Value", credit(s.credit_usd_min) + " - " + credit(s.credit_usd_max),
       credit(f.credit_usd_min) + " - " + credit(f.credit_usd_max)},
      {"Total Savings (1 Yr, Min)", dollars(s.total_1y_min), dollars(f.total_1y_min)},
      {"Total Savings (1 Yr, Max)", dollars(s.total_1y_max), dollars(f.total_1y_max)},
      {"Total Savings (5 Yrs, Min)", dollars(s.total_5y_min), dollars(f.total_5y_min)},
      {"Total Savings (5 Yrs, Max)", dollars(s.total_5y_max), dollars(f.total_5y_max)},
  };
}

std::string render_table(const ImpactReport& report) {
  const auto rows = table_rows(report);
  const std::string fleet_header = std::to_string(report.assumptions.clusters) + " Clusters";
  std::size_t w0 = 6, w1 = 14, w2 = fleet_header.size();
  for (const auto& r : rows) {
    w0 = std::max(w0, r.metric.size());
    w1 = std::max(w1, r.single.size());
    w2 = std::max(w2, r.fleet.size());
  }
  std::ostringstream out;
  auto line = [&](const std::string& a, const std::string& b, const std::string& c) {
    out << a << std::string(w0 - a.size() + 2, ' ') << b << std::string(w1 - b.size() + 2, ' ')
        << c << '\n';
  };
  line("Metric", "Single Cluster", fleet_header);
  line(std::string(w0, '-'), std::string(w1, '-'), std::string(w2, '-'));
  for (const auto& r : rows) line(r.metric, r.single, r.fleet);
  return out.str();
}

void write_csv(std::ostream& out, const ImpactReport& report) {
  auto q = [](const std::string& s) { return "\"" + s + "\""; };
  out << "metric,single,fleet\n";
  for (const auto& r : table_rows(report)) {
    out << q(r.metric) << ',' << q(r.single) << ',' << q(r.fleet) << '\n';
  }
}

namespace {

nlohmann::json figures_json(const ImpactFigures& f) {
  return {{"daily_mwh", f.daily_mwh},
          {"monthly_mwh", f.monthly_mwh},
          {"annual_mwh", f.annual_mwh},
          {"co2_tons", f.co2_tons},
          {"vehicles", f.vehicles},
          {"annual_usd", f.annual_usd},
          {"credit_usd_min", f.credit_usd_min},
          {"credit_usd_max", f.credit_usd_max},
          {"total_1y_min", f.total_1y_min},
          {"total_1y_max", f.total_1y_max},
          {"total_5y_min", f.total_5y_min},
          {"total_5y_max", f.total_5y_max}};
}

}  // namespace

nlohmann::json to_json(const ImpactAssumptions& a) {
  nlohmann::json j{{"jobs_per_day", a.jobs_per_day},
                   {"job_kwh", a.job_kwh},
                   {"optimization_rate", a.optimization_rate},
                   {"co2_lb_per_kwh", a.co2_lb_per_kwh},
                   {"lb_to_kg", a.lb_to_kg},
                   {"co2_kg_per_mwh", nullptr},
                   {"vehicle_tons_per_year", a.vehicle_tons_per_year},
                   {"electricity_usd_per_kwh", a.electricity_usd_per_kwh},
                   {"credit_usd_per_ton_min", a.credit_usd_per_ton_min},
                   {"credit_usd_per_ton_max", a.credit_usd_per_ton_max},
                   {"clusters", a.clusters},
                   {"days_per_month", a.days_per_month},
                   {"days_per_year", a.days_per_year}};
  if (a.co2_kg_per_mwh) j["co2_kg_per_mwh"] = *a.co2_kg_per_mwh;
  return j;
}

nlohmann::json to_json(const ImpactReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table_rows(r)) {
    rows.push_back({{"metric", row.metric}, {"single", row.single}, {"fleet", row.fleet}});
  }
  return {{"assumptions", to_json(r.assumptions)},
          {"single", figures_json(r.single)},
          {"fleet", figures_json(r.fleet)},
          {"table", rows}};
}

ImpactAssumptions assumptions_from_json(const nlohmann::json& doc) {
  ImpactAssumptions a;
  if (!doc.is_object()) throw Error(ErrorCode::kConfigError, "impact assumptions must be an object");
  auto num = [&](const char* key, double& field) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number()) throw Error(ErrorCode::kConfigError, std::string(key) + " must be a number");
    field = doc[key].get<double>();
  };
  auto integer = [&](const char* key, int& field) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number_integer()) {
      throw Error(ErrorCode::kConfigError, std::string(key) + " must be an integer");
    }
    field = doc[key].get<int>();
  };
  num("jobs_per_day", a.jobs_per_day);
  num("job_kwh", a.job_kwh);
  num("optimization_rate", a.optimization_rate);
  num("co2_lb_per_kwh", a.co2_lb_per_kwh);
  num("lb_to_kg", a.lb_to_kg);
  if (doc.contains("co2_kg_per_mwh")) {
    const auto& v = doc["co2_kg_per_mwh"];
    if (v.is_null()) {
      a.co2_kg_per_mwh.reset();
    } else if (v.is_number()) {
      a.co2_kg_per_mwh = v.get<double>();
    } else {
      throw Error(ErrorCode::kConfigError, "co2_kg_per_mwh must be a number or null");
    }
  }
  num("vehicle_tons_per_year", a.vehicle_tons_per_year);
  num("electricity_usd_per_kwh", a.electricity_usd_per_kwh);
  num("credit_usd_per_ton_min", a.credit_usd_per_ton_min);
  num("credit_usd_per_ton_max", a.credit_usd_per_ton_max);
  integer("clusters", a.clusters);
  integer("days_per_month", a.days_per_month);
  integer("days_per_year", a.days_per_year);
  return a;
}

}  // namespace greenpod::impact
