#include "kvn/csv.hpp"

#include <charconv>
#include <cmath>

#include "kvn/error.hpp"

namespace kvn {

std::string format_double(double v) {
    if (!std::isfinite(v)) throw Error("csv: non-finite value");
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (ec != std::errc()) throw Error("csv: number formatting failed");
    return {buf, end};
}

CsvWriter::CsvWriter(const std::string& path, std::initializer_list<std::string> header)
    : out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw Error("cannot open " + path + " for writing");
    row(std::vector<std::string>(header));
}

void CsvWriter::row(std::initializer_list<double> values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw Error("csv: row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw Error("csv: write failed");
}

}  // namespace kvn
