#pragma once

// JSON channel-file ingestion. File tolerance for row sums is 1e-9; rows
// are renormalized exactly before the stricter in-memory validation runs.

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "relay/discrete_primitive.hpp"
#include "relay/iid_output.hpp"

namespace relay::io {

class ChannelFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline nlohmann::json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ChannelFormatError("cannot open channel file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ChannelFormatError("channel file is not valid JSON: " + std::string(e.what()));
    }
    return j;
}

}  // namespace detail

/// {"nx": int, "ny1": int, "nyr": int, "c0": float, "p": [x][y1][yr]}
inline discrete::PrimitiveChannel load_primitive_channel(const std::string& path) {
    nlohmann::json j = detail::parse_file(path);
    discrete::PrimitiveChannel ch;
    try {
        ch.nx = j.at("nx").get<std::size_t>();
        ch.ny1 = j.at("ny1").get<std::size_t>();
        ch.nyr = j.at("nyr").get<std::size_t>();
        ch.c0 = j.at("c0").get<double>();
    } catch (const std::exception& e) {
        throw ChannelFormatError("missing or malformed field: " + std::string(e.what()));
    }
    if (ch.nx < 2 || ch.ny1 < 2 || ch.nyr < 2)
        throw ChannelFormatError("alphabet sizes nx, ny1, nyr must be >= 2");
    if (!(ch.c0 >= 0.0)) throw ChannelFormatError("c0 must be nonnegative");
    const auto& p = j.at("p");
    if (!p.is_array() || p.size() != ch.nx)
        throw ChannelFormatError("p must be an [nx][ny1][nyr] array");
    ch.cond.assign(ch.nx * ch.ny1 * ch.nyr, 0.0);
    for (std::size_t x = 0; x < ch.nx; ++x) {
        if (!p[x].is_array() || p[x].size() != ch.ny1)
            throw ChannelFormatError("p[" + std::to_string(x) + "] must have ny1 rows");
        double slice = 0.0;
        for (std::size_t y1 = 0; y1 < ch.ny1; ++y1) {
            if (!p[x][y1].is_array() || p[x][y1].size() != ch.nyr)
                throw ChannelFormatError("p[" + std::to_string(x) + "][" +
                                         std::to_string(y1) + "] must have nyr entries");
            for (std::size_t yr = 0; yr < ch.nyr; ++yr) {
                double v = p[x][y1][yr].get<double>();
                if (v < 0.0)
                    throw ChannelFormatError("negative probability at p[" + std::to_string(x) +
                                             "][" + std::to_string(y1) + "][" +
                                             std::to_string(yr) + "]");
                ch.cond[(x * ch.ny1 + y1) * ch.nyr + yr] = v;
                slice += v;
            }
        }
        if (std::abs(slice - 1.0) > 1e-9)
            throw ChannelFormatError("p[" + std::to_string(x) + "] sums to " +
                                     std::to_string(slice) + ", not 1 (tolerance 1e-9)");
        for (std::size_t i = 0; i < ch.ny1 * ch.nyr; ++i)
            ch.cond[x * ch.ny1 * ch.nyr + i] /= slice;
    }
    ch.validate();
    return ch;
}

/// {"pyr": [...], "c0": float, "p": [x][yr][y1]}
inline iid::IidDiscreteChannel load_iid_channel(const std::string& path) {
    nlohmann::json j = detail::parse_file(path);
    iid::IidDiscreteChannel ch;
    try {
        ch.c0 = j.at("c0").get<double>();
        const auto& pyr = j.at("pyr");
        if (!pyr.is_array()) throw ChannelFormatError("pyr must be an array");
        ch.nyr = pyr.size();
        ch.pyr.resize(ch.nyr);
        double s = 0.0;
        for (std::size_t i = 0; i < ch.nyr; ++i) {
            ch.pyr[i] = pyr[i].get<double>();
            if (ch.pyr[i] < 0.0) throw ChannelFormatError("negative entry in pyr");
            s += ch.pyr[i];
        }
        if (std::abs(s - 1.0) > 1e-9)
            throw ChannelFormatError("pyr sums to " + std::to_string(s) +
                                     ", not 1 (tolerance 1e-9)");
        for (auto& v : ch.pyr) v /= s;
    } catch (const ChannelFormatError&) {
        throw;
    } catch (const std::exception& e) {
        throw ChannelFormatError("missing or malformed field: " + std::string(e.what()));
    }
    const auto& p = j.at("p");
    if (!p.is_array() || p.empty()) throw ChannelFormatError("p must be an [nx][nyr][ny1] array");
    ch.nx = p.size();
    if (!p[0].is_array() || p[0].size() != ch.nyr)
        throw ChannelFormatError("p rows must match the pyr alphabet");
    if (!p[0][0].is_array() || p[0][0].empty())
        throw ChannelFormatError("p must be an [nx][nyr][ny1] array");
    ch.ny1 = p[0][0].size();
    if (ch.nx < 2 || ch.nx > 3 || ch.nyr < 2 || ch.nyr > 3 || ch.ny1 < 2 || ch.ny1 > 3)
        throw ChannelFormatError("alphabets must have size 2 or 3");
    if (!(ch.c0 >= 0.0)) throw ChannelFormatError("c0 must be nonnegative");
    ch.cond.assign(ch.nx * ch.nyr * ch.ny1, 0.0);
    for (std::size_t x = 0; x < ch.nx; ++x) {
        if (!p[x].is_array() || p[x].size() != ch.nyr)
            throw ChannelFormatError("p[" + std::to_string(x) + "] must have nyr rows");
        for (std::size_t yr = 0; yr < ch.nyr; ++yr) {
            if (!p[x][yr].is_array() || p[x][yr].size() != ch.ny1)
                throw ChannelFormatError("p[" + std::to_string(x) + "][" +
                                         std::to_string(yr) + "] must have ny1 entries");
            double row = 0.0;
            for (std::size_t y1 = 0; y1 < ch.ny1; ++y1) {
                double v = p[x][yr][y1].get<double>();
                if (v < 0.0)
                    throw ChannelFormatError("negative probability at p[" + std::to_string(x) +
                                             "][" + std::to_string(yr) + "][" +
                                             std::to_string(y1) + "]");
                ch.cond[(x * ch.nyr + yr) * ch.ny1 + y1] = v;
                row += v;
            }
            if (std::abs(row - 1.0) > 1e-9)
                throw ChannelFormatError("p[" + std::to_string(x) + "][" + std::to_string(yr) +
                                         "] sums to " + std::to_string(row) +
                                         ", not 1 (tolerance 1e-9)");
            for (std::size_t y1 = 0; y1 < ch.ny1; ++y1)
                ch.cond[(x * ch.nyr + yr) * ch.ny1 + y1] /= row;
        }
    }
    ch.validate();
    return ch;
}

}  // namespace relay::io
