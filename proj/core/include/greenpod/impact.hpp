#pragma once

// Scales a per-job energy saving to cluster and data-center totals, then to
// CO2, vehicle equivalents and dollars.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace greenpod::impact {

struct ImpactAssumptions {
  double jobs_per_day = 6304;
  double job_kwh = 0.024;
  double optimization_rate = 0.1938;
  double co2_lb_per_kwh = 0.823;
  double lb_to_kg = 0.4536;
  /// Rounded grid factor. When empty, co2_lb_per_kwh * lb_to_kg * 1000 is used.
  std::optional<double> co2_kg_per_mwh = 373.2;
  double vehicle_tons_per_year = 4.6;
  double electricity_usd_per_kwh = 0.1289;
  double credit_usd_per_ton_min = 0.46;
  double credit_usd_per_ton_max = 167.0;
  int clusters = 10;
  int days_per_month = 30;
  int days_per_year = 365;

  /// Throws Error(kInvalidAssumptions). Volume inputs (jobs, kWh, rate) may
  /// be zero; conversion constants must be positive.
  void validate() const;
  double co2_tons_per_mwh() const;
};

/// One column of the report, unrounded.
struct ImpactFigures {
  double daily_mwh = 0.0;
  double monthly_mwh = 0.0;
  double annual_mwh = 0.0;
  double co2_tons = 0.0;
  double vehicles = 0.0;
  double annual_usd = 0.0;
  double credit_usd_min = 0.0;
  double credit_usd_max = 0.0;
  double total_1y_min = 0.0;
  double total_1y_max = 0.0;
  double total_5y_min = 0.0;
  double total_5y_max = 0.0;

  ImpactFigures scaled(double factor) const;
};

struct ImpactReport {
  ImpactAssumptions assumptions;
  ImpactFigures single;
  ImpactFigures fleet;  // single * clusters
};

ImpactReport compute_impact(const ImpactAssumptions& assumptions);

struct TableRow {
  std::string metric;
  std::string single;
  std::string fleet;
};

/// The eleven display rows at their printed precision.
std::vector<TableRow> table_rows(const ImpactReport& report);
std::string render_table(const ImpactReport& report);
void write_csv(std::ostream& out, const ImpactReport& report);

nlohmann::json to_json(const ImpactReport& report);
nlohmann::json to_json(const ImpactAssumptions& assumptions);
/// Overlays `doc` on the defaults; throws Error(kConfigError) on mistyped keys.
ImpactAssumptions assumptions_from_json(const nlohmann::json& doc);

}  // namespace greenpod::impact
