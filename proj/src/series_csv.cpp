#include "oscibath/series_csv.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "text_util.hpp"

namespace oscibath {

namespace {

std::vector<std::string> expected_header(std::size_t oscillators) {
    std::vector<std::string> cols{"t"};
    for (std::size_t i = 1; i <= oscillators; ++i) {
        const auto idx = std::to_string(i);
        for (const char* name : {"n", "v", "lambda", "D"}) cols.push_back(name + idx);
    }
    return cols;
}

}  // namespace

void write_series_csv(const SeriesData& series, std::ostream& out) {
    out << kCsvMagic << ' ' << kCsvVersion << '\n';
    const auto header = expected_header(series.channels.size());
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
    for (std::size_t k = 0; k < series.t.size(); ++k) {
        out << detail::format_double(series.t[k]);
        for (const auto& ch : series.channels) {
            out << ',' << detail::format_double(ch.n[k]) << ',' << detail::format_double(ch.v[k]) << ','
                << detail::format_double(ch.lambda[k]) << ',' << detail::format_double(ch.diffusion[k]);
        }
        out << '\n';
    }
}

void write_series_csv(const SeriesData& series, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    write_series_csv(series, out);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

SeriesData read_series_csv(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError(origin + ": empty file");
    const std::string magic = detail::trim(line);
    const std::string prefix = std::string(kCsvMagic) + ' ';
    if (magic.rfind(prefix, 0) != 0) throw SchemaError(origin + ": missing '# oscibath-csv' version line");
    const std::string version = detail::trim(magic.substr(prefix.size()));
    if (version != kCsvVersion) throw SchemaError(origin + ": unsupported CSV version '" + version + "'");

    if (!std::getline(in, line)) throw SchemaError(origin + ": missing header line");
    auto columns = detail::split(detail::trim(line), ',');
    for (auto& c : columns) c = detail::trim(c);
    if (columns.size() < 5 || (columns.size() - 1) % 4 != 0)
        throw SchemaError(origin + ": header must be t followed by groups n,v,lambda,D");
    const std::size_t oscillators = (columns.size() - 1) / 4;
    if (columns != expected_header(oscillators)) throw SchemaError(origin + ": unexpected header '" + line + "'");

    SeriesData series;
    series.channels.resize(oscillators);
    std::size_t row = 2;
    while (std::getline(in, line)) {
        ++row;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split(line, ',');
        if (fields.size() != columns.size())
            throw SchemaError(origin + ":" + std::to_string(row) + ": expected " + std::to_string(columns.size()) +
                              " fields");
        std::vector<double> values(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto v = detail::parse_double(detail::trim(fields[c]));
            if (!v) throw SchemaError(origin + ":" + std::to_string(row) + ": malformed number '" + fields[c] + "'");
            values[c] = *v;
        }
        series.t.push_back(values[0]);
        for (std::size_t i = 0; i < oscillators; ++i) {
            auto& ch = series.channels[i];
            ch.n.push_back(values[1 + 4 * i]);
            ch.v.push_back(values[2 + 4 * i]);
            ch.lambda.push_back(values[3 + 4 * i]);
            ch.diffusion.push_back(values[4 + 4 * i]);
        }
    }
    if (series.t.size() < 2) throw SchemaError(origin + ": fewer than two rows");

    series.dt = (series.t.back() - series.t.front()) / static_cast<double>(series.t.size() - 1);
    for (std::size_t k = 0; k < series.t.size(); ++k) {
        const double expected = series.t.front() + static_cast<double>(k) * series.dt;
        if (std::abs(series.t[k] - expected) > 1e-9 * std::max(1.0, std::abs(expected)))
            throw SchemaError(origin + ": time grid is not uniform at row " + std::to_string(k + 3));
    }
    return series;
}

SeriesData read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    return read_series_csv(in, path);
}

}  // namespace oscibath
