#pragma once

// CSV ingestion for paired measurements.  Parsing policy:
//   - the first non-empty line is the header; columns are matched by name
//   - blank, "NA", "NaN", "nan" and "." cells count as missing
//   - rows with a missing or unparseable x or y are dropped and counted;
//     with strict parsing an unparseable (as opposed to missing) cell is
//     an error instead
//   - quoted fields are unquoted; embedded commas inside quotes survive

#include <string>
#include <vector>

#include "tailrisk/errors.hpp"

namespace tailrisk::app {

struct ColumnSpec {
    std::string x = "x";
    std::string y = "y";
    std::string id;  // empty means no id column
};

/** Parses "x,y" or "x,y,id" as used by the --columns flag. */
ColumnSpec parse_columns(const std::string& text);

struct IngestOptions {
    ColumnSpec columns;
    bool strict = false;
};

struct InputTable {
    std::string path;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<std::string> ids;  // parallel to x/y when an id column is set
    std::size_t rows_read = 0;     // data rows encountered
    std::size_t rows_dropped = 0;  // rows skipped for missing/bad values
};

InputTable ingest_csv(const std::string& path, const IngestOptions& options);

namespace detail {

std::vector<std::string> split_csv_line(const std::string& line);
bool is_missing_token(const std::string& token);

}  // namespace detail

}  // namespace tailrisk::app
