// SPDX-License-Identifier: Apache-2.0
//
// thz-gbsm: space-time-frequency non-stationary channel simulator for
// terahertz ultra-massive MIMO systems
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef THZGBSM_IO_HPP
#define THZGBSM_IO_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "thzgbsm/constants.hpp"

namespace thzgbsm {

inline std::string sha256_hex(const std::string& bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256: digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

inline std::string sha256_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("sha256: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

/// Shortest round-trip decimal form of a double.
inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

using CellValue = std::variant<long long, double, std::string>;

/// Common header of every artifact: version, seed, and the hash of the
/// canonical serialized configuration.
struct OutputMeta {
    std::uint64_t seed = 0;
    std::string config_sha256;
    std::vector<std::pair<std::string, std::string>> extra; // free-form annotations

    std::string header_line() const
    {
        std::string line = "# thz-gbsm v";
        line += version;
        line += " seed=" + std::to_string(seed);
        line += " config_sha256=" + config_sha256;
        return line;
    }
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<CellValue>> rows;
};

inline std::string cell_to_string(const CellValue& cell)
{
    if (std::holds_alternative<long long>(cell))
        return std::to_string(std::get<long long>(cell));
    if (std::holds_alternative<double>(cell))
        return format_double(std::get<double>(cell));
    return std::get<std::string>(cell);
}

inline void write_table_csv(const std::string& path, const OutputMeta& meta,
                            const Table& table)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    out << meta.header_line() << "\n";
    for (const auto& [key, value] : meta.extra)
        out << "# " << key << "=" << value << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << cell_to_string(row[i]);
        out << "\n";
    }
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

inline void write_table_json(const std::string& path, const OutputMeta& meta,
                             const Table& table)
{
    nlohmann::json j;
    j["meta"]["version"] = version;
    j["meta"]["seed"] = meta.seed;
    j["meta"]["config_sha256"] = meta.config_sha256;
    for (const auto& [key, value] : meta.extra)
        j["meta"][key] = value;
    j["columns"] = table.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json jr = nlohmann::json::array();
        for (const auto& cell : row) {
            if (std::holds_alternative<long long>(cell))
                jr.push_back(std::get<long long>(cell));
            else if (std::holds_alternative<double>(cell))
                jr.push_back(std::get<double>(cell));
            else
                jr.push_back(std::get<std::string>(cell));
        }
        rows.push_back(std::move(jr));
    }
    j["data"] = std::move(rows);
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    out << j.dump(2) << "\n";
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

/// Run fn(i) for i in [0, n) on up to `threads` workers. Work items must be
/// independent; callers collect results by index so output order never
/// depends on scheduling.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn)
{
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t workers = std::min(static_cast<std::size_t>(threads), n);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

/// Two-column (x, y) CSV reader for fit targets; '#' lines are skipped.
inline std::pair<std::vector<double>, std::vector<double>>
read_xy_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open target file: " + path);
    std::vector<double> xs, ys;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double x, y;
        if (ss >> x >> y) {
            xs.push_back(x);
            ys.push_back(y);
        }
    }
    if (xs.empty())
        throw std::invalid_argument("target file has no (x, y) rows: " + path);
    return {xs, ys};
}

} // namespace thzgbsm

#endif
