#include "latlab/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "latlab/errors.hpp"

namespace latlab {

using nlohmann::json;

std::string format_double17(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    double out = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{})
        throw ConfigError("parse_double: cannot parse '" + text + "'");
    return out;
}

std::string window_to_json(const LatticeWindow& w) {
    std::ostringstream os;
    os << "{\"offset\": " << w.offset() << ", \"values\": [";
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) os << ", ";
        os << format_double17(w.values()[i]);
    }
    os << "]}";
    return os.str();
}

LatticeWindow window_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("window_from_json: ") + e.what());
    }
    if (!j.is_object() || !j.contains("offset") || !j.contains("values"))
        throw ConfigError("window_from_json: need {offset, values}");
    long offset = j.at("offset").get<long>();
    std::vector<double> values = j.at("values").get<std::vector<double>>();
    return LatticeWindow(offset, std::move(values));
}

std::string window_to_csv_row(const LatticeWindow& w) {
    std::ostringstream os;
    os << w.offset();
    for (double v : w.values()) os << ',' << format_double17(v);
    return os.str();
}

namespace {

std::vector<std::string> split_csv(const std::string& row) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : row) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

LatticeWindow window_from_csv_row(const std::string& row) {
    auto fields = split_csv(row);
    if (fields.size() < 2) throw ConfigError("window_from_csv_row: need offset and values");
    long offset = static_cast<long>(parse_double(fields[0]));
    std::vector<double> values;
    values.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) values.push_back(parse_double(fields[i]));
    return LatticeWindow(offset, std::move(values));
}

std::string trajectory_to_csv(const TrajectorySample& traj, long site_lo, long site_hi) {
    if (site_hi < site_lo) throw ConfigError("trajectory_to_csv: empty site range");
    std::ostringstream os;
    os << "t,norm";
    for (long i = site_lo; i <= site_hi; ++i) os << ",u_" << i;
    os << '\n';
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        os << format_double17(traj.times[k]) << ',' << format_double17(norm(traj.states[k]));
        for (long i = site_lo; i <= site_hi; ++i)
            os << ',' << format_double17(traj.states[k].at_site(i));
        os << '\n';
    }
    return os.str();
}

std::string trajectory_to_csv(const TrajectorySample& traj) {
    if (traj.states.empty()) throw ConfigError("trajectory_to_csv: empty trajectory");
    return trajectory_to_csv(traj, traj.states.front().first_site(),
                             traj.states.front().last_site());
}

TrajectorySample trajectory_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("trajectory_from_csv: empty input");
    auto header = split_csv(line);
    if (header.size() < 3 || header[0] != "t" || header[1] != "norm")
        throw ConfigError("trajectory_from_csv: bad header (want t,norm,u_<i>,...)");
    std::vector<long> sites;
    for (std::size_t c = 2; c < header.size(); ++c) {
        if (header[c].rfind("u_", 0) != 0)
            throw ConfigError("trajectory_from_csv: bad column name '" + header[c] + "'");
        sites.push_back(std::stol(header[c].substr(2)));
    }
    for (std::size_t c = 1; c < sites.size(); ++c) {
        if (sites[c] != sites[c - 1] + 1)
            throw ConfigError("trajectory_from_csv: site columns must be consecutive");
    }
    TrajectorySample traj;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != header.size())
            throw ConfigError("trajectory_from_csv: ragged row");
        traj.times.push_back(parse_double(fields[0]));
        std::vector<double> vals;
        vals.reserve(sites.size());
        for (std::size_t c = 2; c < fields.size(); ++c) vals.push_back(parse_double(fields[c]));
        traj.states.emplace_back(sites.front(), std::move(vals));
    }
    if (traj.times.empty()) throw ConfigError("trajectory_from_csv: no samples");
    return traj;
}

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path dir = path.parent_path();
    if (!dir.empty()) fs::create_directories(dir);
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw NumericalError("atomic_write_file: cannot open " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw NumericalError("atomic_write_file: write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw NumericalError("atomic_write_file: rename failed for " + path.string());
    }
}

std::string content_hash_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace latlab
