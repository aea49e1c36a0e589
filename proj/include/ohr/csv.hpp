#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "ohr/series.hpp"

namespace ohr {

struct CsvOptions {
    std::string date_column = "Date";
    std::string spot_column = "Spot";
    std::string futures_column = "Futures";
    /// strftime-style format; the default also accepts a trailing time part.
    std::string date_format = "%Y-%m-%d";
    char delimiter = ',';
};

struct IngestResult {
    PriceSeries prices;
    std::size_t total_rows = 0;
    std::size_t dropped_rows = 0;  // missing or non-numeric fields
};

/// Reads a header-row CSV of dates, spot and futures closes. Rows with a
/// missing, "null"/"NA"/"NaN" or non-numeric field are dropped and counted.
/// A missing column is a Config error naming the column; duplicate or
/// decreasing dates are InvalidInput errors naming the date.
IngestResult parse_csv(std::istream& in, const CsvOptions& options);
IngestResult ingest_csv(const std::filesystem::path& path, const CsvOptions& options);

/// Reads the named numeric columns of a header-row CSV. Unlike price files,
/// any missing or non-numeric value is an InvalidInput error naming the line.
std::vector<std::vector<double>> read_numeric_columns(std::istream& in, const std::vector<std::string>& names,
                                                      char delimiter = ',');

/// Component series stored directly (columns ds_pos, ds_neg, df_pos, df_neg),
/// as written by the simulator. Sign constraints are validated.
ComponentSeries parse_components_csv(std::istream& in, char delimiter = ',');
ComponentSeries ingest_components_csv(const std::filesystem::path& path, char delimiter = ',');

/// Splits one CSV record, honoring double-quoted fields.
std::vector<std::string> split_csv_line(const std::string& line, char delimiter);

}  // namespace ohr
