#pragma once
// Headered CSV ingestion. Cells stay as text until a column is selected, so
// non-numeric label columns are fine as long as they are not used.

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "gammadep/data_model.hpp"

namespace gammadep::cli {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

/// Throws PARSE (with line number) on ragged rows or unterminated quotes.
CsvTable read_csv(std::istream& in);
/// Throws IO if the file cannot be opened.
CsvTable read_csv_file(const std::string& path);

/// Column selector: "0..5" (half-open), "2", "a,b,c" (header names) or any
/// comma-separated mix. Throws COLUMN_NOT_FOUND.
std::vector<std::size_t> parse_column_selector(std::string_view text, const std::vector<std::string>& header);

/// Numeric matrix of the selected columns, in row order. Numbers use '.' as
/// the decimal point regardless of locale. Throws PARSE with line and column.
Matrix extract_columns(const CsvTable& table, const std::vector<std::size_t>& columns);

}  // namespace gammadep::cli
