#pragma once

#include <string>
#include <vector>

#include "courier/engine.hpp"
#include "courier/geo_city.hpp"
#include "courier/study.hpp"

namespace courier::cli {

/// Column-aligned plain-text table; widths count UTF-8 code points.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header);
  void add(std::vector<std::string> row);
  std::string render() const;

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string format_recommendation(const Recommendation& rec, const CityModel& city);
std::string format_report(const StudyReport& report);
std::string format_comparison(const Comparison& cmp);

}  // namespace courier::cli
