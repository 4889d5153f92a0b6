#ifndef ECHOMAP_IO_CSV_HPP
#define ECHOMAP_IO_CSV_HPP

#include <string>
#include <vector>

namespace echomap::io {

// Shortest representation that round-trips a double exactly.
std::string format_double(double value);

std::vector<std::string> split_csv_line(const std::string& line);

double parse_double(const std::string& token, const std::string& context);
long parse_long(const std::string& token, const std::string& context);

// Whole-file reader that drops the \r of CRLF line endings.
std::vector<std::string> read_lines(const std::string& path);

} // namespace echomap::io

#endif
