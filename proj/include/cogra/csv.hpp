#pragma once

// CSV with RFC 4180 quoting and locale-independent number formatting, so the
// same rows always serialize to the same bytes.

#include <string>
#include <string_view>
#include <vector>

namespace cogra {

std::string csv_escape(std::string_view field);

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> row);
    const std::vector<std::string>& header() const { return header_; }
    std::size_t rows() const { return rows_.size(); }

    std::string str() const;
    void write(const std::string& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Splits CSV text back into rows (quotes honored).
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace cogra
