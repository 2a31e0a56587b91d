// SPDX-License-Identifier: Apache-2.0
//
// riscatter: joint primary/backscatter rate characterization for scatter-assisted links
// Copyright (C) 2026 riscatter contributors
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

#include "riscatter/io.hpp"

#include <array>
#include <atomic>
#include <bit>
#include <complex>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "riscatter/units.hpp"

namespace riscatter
{

namespace
{

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Runs body(r) for r in [0, count); worker results must land in
// pre-allocated per-index slots so the later reduction order is fixed.
template <typename F>
void parallel_realizations(int count, int threads, F&& body)
{
    int workers = std::min(threads, count);
    if (workers <= 1)
    {
        for (int r = 0; r < count; r++)
            body(r);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_lock;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; t++)
        pool.emplace_back([&]() {
            while (true)
            {
                int r = next.fetch_add(1);
                if (r >= count)
                    return;
                try
                {
                    body(r);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> hold(error_lock);
                    if (!error)
                        error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

std::string hash_hex(std::uint64_t h)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string manifest_json(const ExperimentConfig& cfg, const std::string& command,
                          const std::vector<std::string>& outputs)
{
    nlohmann::ordered_json j;
    j["command"] = command;
    j["config_hash"] = hash_hex(config_hash(cfg));
    j["seed"] = cfg.seed;
    j["realizations"] = cfg.realizations;
    nlohmann::ordered_json c = nlohmann::ordered_json::object();
    std::stringstream canon(canonical_config(cfg));
    std::string line;
    while (std::getline(canon, line))
    {
        std::size_t eq = line.find('=');
        if (eq != std::string::npos)
            c[line.substr(0, eq)] = line.substr(eq + 1);
    }
    j["config"] = c;
    j["outputs"] = outputs;
    j["units"] = "rates emitted in bits; internal computation in nats";
    return j.dump(2) + "\n";
}

void append_manifest(RunOutput& out, const ExperimentConfig& cfg, const std::string& command)
{
    std::vector<std::string> names;
    names.reserve(out.files.size());
    for (const auto& f : out.files)
        names.push_back(f.first);
    out.files.emplace_back("manifest.json", manifest_json(cfg, command, names));
}

std::string trace_csv(const std::vector<double>& trace)
{
    std::string csv = "iteration,objective_nats,objective_bits\n";
    for (std::size_t i = 0; i < trace.size(); i++)
        csv += std::to_string(i) + "," + fmt(trace[i]) + "," + fmt(nats_to_bits(trace[i])) + "\n";
    return csv;
}

// Little-endian binary helpers for the channel cache.

void put_u16(std::string& s, std::uint16_t v)
{
    s.push_back(static_cast<char>(v & 0xff));
    s.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& s, std::uint32_t v)
{
    for (int i = 0; i < 4; i++)
        s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& s, std::uint64_t v)
{
    for (int i = 0; i < 8; i++)
        s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& s, double v) { put_u64(s, std::bit_cast<std::uint64_t>(v)); }

void put_c128(std::string& s, std::complex<double> v)
{
    put_f64(s, v.real());
    put_f64(s, v.imag());
}

struct Reader
{
    const std::string& data;
    std::size_t pos = 0;

    void need(std::size_t n) const
    {
        if (pos + n > data.size())
            throw std::runtime_error("channel cache: truncated file");
    }
    std::uint16_t u16()
    {
        need(2);
        std::uint16_t v = 0;
        for (int i = 0; i < 2; i++)
            v = static_cast<std::uint16_t>(v | (static_cast<std::uint16_t>(
                                                    static_cast<unsigned char>(data[pos + i]))
                                                << (8 * i)));
        pos += 2;
        return v;
    }
    std::uint32_t u32()
    {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; i++)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64()
    {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; i++)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
        pos += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::complex<double> c128()
    {
        double re = f64();
        double im = f64();
        return {re, im};
    }
};

} // namespace

std::vector<ChannelDraw> generate_all_channels(const ExperimentConfig& cfg)
{
    std::vector<ChannelDraw> draws;
    draws.reserve(static_cast<std::size_t>(cfg.realizations));
    for (int r = 0; r < cfg.realizations; r++)
        draws.push_back(generate_channels(cfg.fading, cfg.geometry, cfg.num_antennas,
                                          cfg.num_nodes, cfg.seed,
                                          static_cast<std::uint64_t>(r)));
    return draws;
}

RunOutput run_region(const ExperimentConfig& cfg)
{
    validate_config(cfg);
    std::vector<ChannelDraw> draws = generate_all_channels(cfg);
    std::vector<RegionResult> results(static_cast<std::size_t>(cfg.realizations));
    parallel_realizations(cfg.realizations, cfg.threads, [&](int r) {
        results[static_cast<std::size_t>(r)] =
            rate_region(draws[static_cast<std::size_t>(r)], cfg, static_cast<std::uint64_t>(r));
    });

    const std::size_t grid = cfg.rho_grid.size();
    std::vector<double> primary(grid, 0.0), backscatter(grid, 0.0);
    for (const RegionResult& res : results)
        for (std::size_t g = 0; g < grid; g++)
        {
            primary[g] += res.points[g].info.primary;
            backscatter[g] += res.points[g].info.backscatter;
        }
    for (std::size_t g = 0; g < grid; g++)
    {
        primary[g] /= cfg.realizations;
        backscatter[g] /= cfg.realizations;
    }

    std::string csv = "rho,primary_bits_per_s_hz,backscatter_bits_per_BB,backscatter_bits_per_PB,"
                      "n_realizations\n";
    for (std::size_t g = 0; g < grid; g++)
        csv += fmt(cfg.rho_grid[g]) + "," + fmt(nats_to_bits(primary[g])) + "," +
               fmt(nats_to_bits(backscatter[g])) + "," +
               fmt(nats_to_bits(backscatter[g]) / cfg.spreading) + "," +
               std::to_string(cfg.realizations) + "\n";

    // Closure of the region polygon: the averaged operating points plus the
    // two axis projections, in plot order.
    std::string poly = "primary_bits_per_s_hz,backscatter_bits_per_BB,kind\n";
    poly += "0," + fmt(nats_to_bits(backscatter.front())) + ",projection\n";
    for (std::size_t g = 0; g < grid; g++)
        poly += fmt(nats_to_bits(primary[g])) + "," + fmt(nats_to_bits(backscatter[g])) +
                ",operating\n";
    poly += fmt(nats_to_bits(primary.back())) + ",0,projection\n";

    RunOutput out;
    out.files.emplace_back("region.csv", std::move(csv));
    out.files.emplace_back("region_polygon.csv", std::move(poly));
    append_manifest(out, cfg, "region");
    return out;
}

RunOutput run_convergence(const ExperimentConfig& cfg, double rho)
{
    validate_config(cfg);
    if (!(rho >= 0.0) || !(rho <= 1.0))
        throw std::invalid_argument("convergence: rho must lie in [0, 1]");
    ChannelDraw draw =
        generate_channels(cfg.fading, cfg.geometry, cfg.num_antennas, cfg.num_nodes, cfg.seed, 0);
    BcdState st = bcd_solve(draw, cfg, rho, nullptr);

    RunOutput out;
    out.files.emplace_back("converge_input.csv", trace_csv(st.input_trace));
    out.files.emplace_back("converge_beam.csv", trace_csv(st.beam_trace));
    out.files.emplace_back("converge_bcd.csv", trace_csv(st.trace));
    append_manifest(out, cfg, "converge");
    return out;
}

RunOutput run_distribution(const ExperimentConfig& cfg)
{
    validate_config(cfg);
    ChannelDraw draw =
        generate_channels(cfg.fading, cfg.geometry, cfg.num_antennas, cfg.num_nodes, cfg.seed, 0);
    RegionResult res = rate_region(draw, cfg, 0);

    std::string csv = "rho,node,state,probability\n";
    for (std::size_t g = 0; g < cfg.rho_grid.size(); g++)
    {
        const InputDistribution& input = res.states[g].input;
        for (std::size_t k = 0; k < input.per_node.size(); k++)
            for (Eigen::Index m = 0; m < input.per_node[k].size(); m++)
                csv += fmt(cfg.rho_grid[g]) + "," + std::to_string(k) + "," + std::to_string(m) +
                       "," + fmt(input.per_node[k](m)) + "\n";
    }

    RunOutput out;
    out.files.emplace_back("distribution.csv", std::move(csv));
    append_manifest(out, cfg, "distribution");
    return out;
}

RunOutput run_benchmark(const ExperimentConfig& cfg)
{
    validate_config(cfg);
    std::vector<ChannelDraw> draws = generate_all_channels(cfg);
    const int schemes = 5;
    std::vector<std::array<BenchmarkResult, 5>> per(static_cast<std::size_t>(cfg.realizations));
    parallel_realizations(cfg.realizations, cfg.threads, [&](int r) {
        const ChannelDraw& d = draws[static_cast<std::size_t>(r)];
        per[static_cast<std::size_t>(r)] = {benchmark_legacy(d, cfg), benchmark_bbc(d, cfg),
                                            benchmark_ambc(d, cfg), benchmark_sr(d, cfg),
                                            benchmark_ris(d, cfg)};
    });
    std::array<BenchmarkResult, 5> avg{};
    for (const auto& row : per)
        for (int s = 0; s < schemes; s++)
        {
            avg[static_cast<std::size_t>(s)].primary += row[static_cast<std::size_t>(s)].primary;
            avg[static_cast<std::size_t>(s)].backscatter +=
                row[static_cast<std::size_t>(s)].backscatter;
        }
    const char* names[5] = {"legacy", "bbc", "ambc", "sr", "ris"};
    std::string csv = "scheme,primary_bits_per_s_hz,backscatter_bits_per_BB,"
                      "backscatter_bits_per_PB,n_realizations\n";
    for (int s = 0; s < schemes; s++)
    {
        double p = avg[static_cast<std::size_t>(s)].primary / cfg.realizations;
        double b = avg[static_cast<std::size_t>(s)].backscatter / cfg.realizations;
        csv += std::string(names[s]) + "," + fmt(nats_to_bits(p)) + "," + fmt(nats_to_bits(b)) +
               "," + fmt(nats_to_bits(b) / cfg.spreading) + "," + std::to_string(cfg.realizations) +
               "\n";
    }

    RunOutput out;
    out.files.emplace_back("benchmark.csv", std::move(csv));
    append_manifest(out, cfg, "benchmark");
    return out;
}

void write_outputs(const RunOutput& out, const std::string& dir)
{
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : out.files)
    {
        std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write output file: " + name);
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
    }
}

void save_channel_cache(const std::string& path, const ExperimentConfig& cfg,
                        const std::vector<ChannelDraw>& draws)
{
    std::string blob = "RISC";
    put_u16(blob, 1);
    put_u64(blob, config_hash(cfg));
    put_u32(blob, static_cast<std::uint32_t>(draws.size()));
    put_u32(blob, static_cast<std::uint32_t>(cfg.num_antennas));
    put_u32(blob, static_cast<std::uint32_t>(cfg.num_nodes));
    for (const ChannelDraw& d : draws)
    {
        for (Eigen::Index q = 0; q < d.direct.size(); q++)
            put_c128(blob, d.direct(q));
        for (int k = 0; k < cfg.num_nodes; k++)
        {
            const auto& f = d.forward[static_cast<std::size_t>(k)];
            for (Eigen::Index q = 0; q < f.size(); q++)
                put_c128(blob, f(q));
            put_c128(blob, d.backward[static_cast<std::size_t>(k)]);
        }
        for (int k = 0; k < cfg.num_nodes; k++)
            put_f64(blob, d.ap_node_distances[static_cast<std::size_t>(k)]);
        for (int k = 0; k < cfg.num_nodes; k++)
            put_f64(blob, d.node_user_distances[static_cast<std::size_t>(k)]);
        for (int k = 0; k < cfg.num_nodes; k++)
            put_f64(blob, d.cascaded_loss[static_cast<std::size_t>(k)]);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write channel cache: " + path);
    f.write(blob.data(), static_cast<std::streamsize>(blob.size()));
}

std::vector<ChannelDraw> load_channel_cache(const std::string& path, const ExperimentConfig& cfg)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open channel cache: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    std::string data = ss.str();

    Reader r{data};
    r.need(4);
    if (data.compare(0, 4, "RISC") != 0)
        throw std::runtime_error("channel cache: bad magic bytes");
    r.pos = 4;
    std::uint16_t version = r.u16();
    if (version != 1)
        throw std::runtime_error("channel cache: unsupported version " + std::to_string(version));
    std::uint64_t stored = r.u64();
    std::uint64_t live = config_hash(cfg);
    if (stored != live)
        throw std::runtime_error("channel cache: config hash mismatch (file " + hash_hex(stored) +
                                 ", config " + hash_hex(live) + "); refusing to load");
    std::uint32_t count = r.u32();
    std::uint32_t antennas = r.u32();
    std::uint32_t nodes = r.u32();
    if (antennas != static_cast<std::uint32_t>(cfg.num_antennas) ||
        nodes != static_cast<std::uint32_t>(cfg.num_nodes))
        throw std::runtime_error("channel cache: dimension mismatch");

    std::vector<ChannelDraw> draws(count);
    for (std::uint32_t i = 0; i < count; i++)
    {
        ChannelDraw& d = draws[i];
        d.direct.resize(antennas);
        for (std::uint32_t q = 0; q < antennas; q++)
            d.direct(q) = r.c128();
        d.forward.resize(nodes);
        d.backward.resize(nodes);
        d.cascaded.resize(nodes);
        for (std::uint32_t k = 0; k < nodes; k++)
        {
            d.forward[k].resize(antennas);
            for (std::uint32_t q = 0; q < antennas; q++)
                d.forward[k](q) = r.c128();
            d.backward[k] = r.c128();
            d.cascaded[k] = std::conj(d.backward[k]) * d.forward[k];
        }
        d.ap_node_distances.resize(nodes);
        d.node_user_distances.resize(nodes);
        d.cascaded_loss.resize(nodes);
        for (std::uint32_t k = 0; k < nodes; k++)
            d.ap_node_distances[k] = r.f64();
        for (std::uint32_t k = 0; k < nodes; k++)
            d.node_user_distances[k] = r.f64();
        for (std::uint32_t k = 0; k < nodes; k++)
            d.cascaded_loss[k] = r.f64();
    }
    if (r.pos != data.size())
        throw std::runtime_error("channel cache: trailing bytes");
    return draws;
}

} // namespace riscatter
