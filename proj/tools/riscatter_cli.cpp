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

#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "riscatter/config.hpp"
#include "riscatter/io.hpp"
#include "riscatter/validate.hpp"

namespace
{

struct CommonFlags
{
    std::string config_path;
    std::string out_dir = "out";
    std::string seed;
    std::string realizations;
    std::string threads;
    std::string input_scheme;
    std::string beam_scheme;
    std::string threshold_scheme;
};

void add_common(CLI::App* sub, CommonFlags& f)
{
    sub->add_option("--config", f.config_path, "config file (key = value lines)");
    sub->add_option("--out", f.out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", f.seed, "root seed override");
    sub->add_option("--realizations", f.realizations, "channel realization count override");
    sub->add_option("--threads", f.threads, "worker thread count override");
    sub->add_option("--input-scheme", f.input_scheme,
                    "kkt | cooperative | exhaustive | equiprobable");
    sub->add_option("--beam-scheme", f.beam_scheme, "pga | ergodicMrt | directMrt");
    sub->add_option("--threshold-scheme", f.threshold_scheme, "dp | smawk | bisect | ml");
}

// Throws std::invalid_argument on any bad value; the caller maps that to
// exit code 2.
riscatter::ExperimentConfig build_config(const CommonFlags& f)
{
    riscatter::ExperimentConfig cfg;
    if (!f.config_path.empty())
        cfg = riscatter::load_config_file(f.config_path);
    if (!f.seed.empty())
        riscatter::apply_config_entry(cfg, "seed", f.seed);
    if (!f.realizations.empty())
        riscatter::apply_config_entry(cfg, "realizations", f.realizations);
    if (!f.threads.empty())
        riscatter::apply_config_entry(cfg, "threads", f.threads);
    if (!f.input_scheme.empty())
        riscatter::apply_config_entry(cfg, "input_scheme", f.input_scheme);
    if (!f.beam_scheme.empty())
        riscatter::apply_config_entry(cfg, "beam_scheme", f.beam_scheme);
    if (!f.threshold_scheme.empty())
        riscatter::apply_config_entry(cfg, "threshold_scheme", f.threshold_scheme);
    riscatter::validate_config(cfg);
    return cfg;
}

void report_files(const riscatter::RunOutput& out, const std::string& dir)
{
    for (const auto& file : out.files)
        std::printf("wrote %s\n", (std::filesystem::path(dir) / file.first).string().c_str());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"riscatter: primary/backscatter rate-region characterization"};
    app.require_subcommand(1);

    CommonFlags region_flags, converge_flags, distribution_flags, benchmark_flags, validate_flags,
        cache_flags;
    double converge_rho = 0.0;

    CLI::App* region = app.add_subcommand("region", "averaged rate-region sweep");
    add_common(region, region_flags);
    CLI::App* converge = app.add_subcommand("converge", "solver iteration traces");
    add_common(converge, converge_flags);
    converge->add_option("--rho", converge_rho, "weight of the primary rate")
        ->capture_default_str();
    CLI::App* distribution = app.add_subcommand("distribution", "converged input distributions");
    add_common(distribution, distribution_flags);
    CLI::App* benchmark = app.add_subcommand("benchmark", "reference scheme rates");
    add_common(benchmark, benchmark_flags);
    CLI::App* validate = app.add_subcommand("validate", "numerical oracle checks");
    add_common(validate, validate_flags);
    CLI::App* cache = app.add_subcommand("cache", "write and verify the channel cache");
    add_common(cache, cache_flags);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try
    {
        riscatter::ExperimentConfig cfg;
        std::string out_dir;
        try
        {
            if (region->parsed())
            {
                cfg = build_config(region_flags);
                out_dir = region_flags.out_dir;
            }
            else if (converge->parsed())
            {
                cfg = build_config(converge_flags);
                out_dir = converge_flags.out_dir;
                if (!(converge_rho >= 0.0) || !(converge_rho <= 1.0))
                    throw std::invalid_argument("--rho must lie in [0, 1]");
            }
            else if (distribution->parsed())
            {
                cfg = build_config(distribution_flags);
                out_dir = distribution_flags.out_dir;
            }
            else if (benchmark->parsed())
            {
                cfg = build_config(benchmark_flags);
                out_dir = benchmark_flags.out_dir;
            }
            else if (validate->parsed())
            {
                cfg = build_config(validate_flags);
            }
            else if (cache->parsed())
            {
                cfg = build_config(cache_flags);
                out_dir = cache_flags.out_dir;
            }
        }
        catch (const std::invalid_argument& e)
        {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 2;
        }

        if (validate->parsed())
        {
            auto checks = riscatter::run_validation(cfg.seed);
            std::fputs(riscatter::format_validation(checks).c_str(), stdout);
            return riscatter::all_passed(checks) ? 0 : 3;
        }

        riscatter::RunOutput out;
        if (region->parsed())
            out = riscatter::run_region(cfg);
        else if (converge->parsed())
            out = riscatter::run_convergence(cfg, converge_rho);
        else if (distribution->parsed())
            out = riscatter::run_distribution(cfg);
        else if (benchmark->parsed())
            out = riscatter::run_benchmark(cfg);
        else if (cache->parsed())
        {
            std::filesystem::create_directories(out_dir);
            std::string path = (std::filesystem::path(out_dir) / "channels.bin").string();
            auto draws = riscatter::generate_all_channels(cfg);
            riscatter::save_channel_cache(path, cfg, draws);
            auto loaded = riscatter::load_channel_cache(path, cfg);
            std::printf("wrote %s (%zu realizations, verified round trip, config hash %016llx)\n",
                        path.c_str(), loaded.size(),
                        static_cast<unsigned long long>(riscatter::config_hash(cfg)));
            return 0;
        }
        riscatter::write_outputs(out, out_dir);
        report_files(out, out_dir);
        return 0;
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    }
}
