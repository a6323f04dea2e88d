// series_csv.hpp — Versioned time-series CSV
//
//   # oscibath-csv v1
//   t,n1,v1,lambda1,D1[,n2,v2,lambda2,D2,...]
//   <rows, 17 significant digits>

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "oscibath/model.hpp"

namespace oscibath {

inline constexpr const char* kCsvMagic = "# oscibath-csv";
inline constexpr const char* kCsvVersion = "v1";

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_series_csv(const SeriesData& series, std::ostream& out);
void write_series_csv(const SeriesData& series, const std::string& path);

// Throws SchemaError on a wrong version line, header or row shape, or a
// non-uniform time grid.
SeriesData read_series_csv(std::istream& in, const std::string& origin = "<csv>");
SeriesData read_series_csv(const std::string& path);

}  // namespace oscibath
