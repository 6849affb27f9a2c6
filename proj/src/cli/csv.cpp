#include "gammadep/cli/csv.hpp"

#include <charconv>
#include <fstream>

namespace gammadep::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_record(std::string_view line, std::size_t line_no) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.emplace_back(trim(cell));
            cell.clear();
        } else {
            cell += ch;
        }
    }
    if (quoted) throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": unterminated quote");
    out.emplace_back(trim(cell));
    return out;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        if (trim(view).empty()) continue;
        auto record = split_record(view, line_no);
        if (!have_header) {
            table.header = std::move(record);
            have_header = true;
            continue;
        }
        if (record.size() != table.header.size()) {
            throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(table.header.size()) + " fields, found " +
                                              std::to_string(record.size()));
        }
        table.rows.push_back(std::move(record));
        table.line_numbers.push_back(line_no);
    }
    if (!have_header) throw Error(ErrorCode::parse, "input has no header line");
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
    return read_csv(in);
}

std::vector<std::size_t> parse_column_selector(std::string_view text, const std::vector<std::string>& header) {
    std::vector<std::size_t> out;
    auto parse_index = [&](std::string_view tok, std::size_t& value) {
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        return ec == std::errc{} && ptr == tok.data() + tok.size();
    };
    auto check = [&](std::size_t idx, std::string_view tok) {
        if (idx >= header.size()) {
            throw Error(ErrorCode::column_not_found, "column " + std::string(tok) + " out of range (table has " +
                                                         std::to_string(header.size()) + " columns)");
        }
        out.push_back(idx);
    };
    while (true) {
        const auto comma = text.find(',');
        const auto tok = trim(text.substr(0, comma));
        if (!tok.empty()) {
            bool named = false;
            for (std::size_t k = 0; k < header.size(); ++k)
                if (header[k] == tok) {
                    out.push_back(k);
                    named = true;
                    break;
                }
            if (!named) {
                const auto dots = tok.find("..");
                std::size_t lo = 0;
                std::size_t hi = 0;
                if (dots != std::string_view::npos && parse_index(tok.substr(0, dots), lo) &&
                    parse_index(tok.substr(dots + 2), hi)) {
                    if (hi <= lo) throw Error(ErrorCode::column_not_found, "empty column range '" + std::string(tok) + "'");
                    for (std::size_t k = lo; k < hi; ++k) check(k, tok);
                } else if (parse_index(tok, lo)) {
                    check(lo, tok);
                } else {
                    throw Error(ErrorCode::column_not_found, "no column named '" + std::string(tok) + "'");
                }
            }
        }
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    if (out.empty()) throw Error(ErrorCode::column_not_found, "column selector selects nothing");
    return out;
}

Matrix extract_columns(const CsvTable& table, const std::vector<std::size_t>& columns) {
    Matrix out(table.rows.size(), columns.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            const std::string& cell = table.rows[i][columns[j]];
            std::string_view s(cell);
            if (!s.empty() && s.front() == '+') s.remove_prefix(1);
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
            if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
                throw Error(ErrorCode::parse, "line " + std::to_string(table.line_numbers[i]) + ", column '" +
                                                  table.header[columns[j]] + "': cannot parse '" + cell + "'");
            }
            out(i, j) = value;
        }
    }
    return out;
}

}  // namespace gammadep::cli
