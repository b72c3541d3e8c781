#include "wsabi/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wsabi {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

static const char* kTraceHeader = "n_samples,wall_clock_s,z_mean,z_variance,log_z_mean";

void write_trace_csv(const std::string& path, const RunTrace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path);
    out << kTraceHeader << "\n";
    for (const TraceRecord& r : trace.records) {
        out << r.n_samples << ',' << format_double(r.wall_clock_s) << ','
            << format_double(r.z_mean) << ',' << format_double(r.z_variance) << ','
            << format_double(r.z_mean > 0.0 ? std::log(r.z_mean)
                                            : -std::numeric_limits<double>::infinity())
            << "\n";
    }
    if (!out) throw std::runtime_error("write_trace_csv: write failed for " + path);
}

RunTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_trace_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader)
        throw std::runtime_error("read_trace_csv: bad header in " + path);
    RunTrace trace;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 5)
            throw std::runtime_error("read_trace_csv: malformed row at line " +
                                     std::to_string(line_no) + " in " + path);
        TraceRecord r;
        try {
            std::size_t pos = 0;
            r.n_samples = std::stoll(cells[0], &pos);
            if (pos != cells[0].size()) throw std::invalid_argument("trailing");
            r.wall_clock_s = std::stod(cells[1]);
            r.z_mean = std::stod(cells[2]);
            r.z_variance = std::stod(cells[3]);
            (void)std::stod(cells[4]);
        } catch (const std::exception&) {
            throw std::runtime_error("read_trace_csv: malformed row at line " +
                                     std::to_string(line_no) + " in " + path);
        }
        if (!trace.records.empty()) {
            if (r.n_samples <= trace.records.back().n_samples)
                throw std::runtime_error("read_trace_csv: non-increasing n_samples at line " +
                                         std::to_string(line_no) + " in " + path);
            if (r.wall_clock_s < trace.records.back().wall_clock_s)
                throw std::runtime_error("read_trace_csv: decreasing wall clock at line " +
                                         std::to_string(line_no) + " in " + path);
        }
        trace.records.push_back(r);
    }
    return trace;
}

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_json: cannot open " + path);
    out << j.dump(2) << "\n";
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_json: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

}  // namespace wsabi
