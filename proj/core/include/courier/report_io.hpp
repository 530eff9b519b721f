#pragma once

#include <string>
#include <string_view>

#include "courier/engine.hpp"
#include "courier/geo_city.hpp"
#include "courier/study.hpp"

namespace courier {

/// Summary tables: one block per criterion with distance bins as rows and
/// time buckets as columns (cells read "car->car->car (0.623)"), then the
/// mean best delivery time in minutes. Columns:
/// table,row,early_morning,morning_early_afternoon,late_afternoon_evening,night,all
std::string report_csv(const StudyReport& report);

/// Full report: metadata, raw win counts, modal winners and shares per cell,
/// mean-time series per bucket and bin, and the per-zone mode map.
std::string report_json(const StudyReport& report);
/// Reads report_json output back. Throws Error(config_error) on bad input.
StudyReport report_from_json(std::string_view text);

std::string comparison_csv(const Comparison& cmp);
std::string comparison_json(const Comparison& cmp);

/// Winners plus the per-alternative evaluation table.
std::string recommendation_json(const Recommendation& rec, const CityModel& city);

/// "report_<scenario>_<seed>"
std::string report_basename(const StudyReport& report);

}  // namespace courier
