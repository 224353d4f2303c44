#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace kvn {

// General format with 17 significant digits (round-trips every double).
std::string format_double(double v);

// Comma-separated file with one header row; numbers via format_double.
class CsvWriter {
public:
    CsvWriter(const std::string& path, std::initializer_list<std::string> header);
    void row(std::initializer_list<double> values);
    void row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
    std::size_t columns_;
};

}  // namespace kvn
