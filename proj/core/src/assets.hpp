#pragma once

#include <string_view>

namespace courier::assets {

extern const std::string_view kCityDataset;
extern const std::string_view kCatalogCsv;

}  // namespace courier::assets
