#pragma once

#include <string>

#include <CLI11.hpp>

// exit codes shared by all subcommands
constexpr int kExitPass = 0;
constexpr int kExitMathFailure = 2;
constexpr int kExitResource = 3;
constexpr int kExitUsage = 4;

struct CommonOpts {
    std::string out_dir = "sp4_reports";
    std::string cache_dir;  // empty = resolve via SP4_CACHE_DIR / XDG / ~/.cache
    std::uint64_t seed = 20240817;
};

void add_common(CLI::App* app, CommonOpts& opts);
std::string resolve_cache_dir(const CommonOpts& opts);

int run_hecke(CLI::App* app, const CommonOpts& opts);
int run_spherical(CLI::App* app, const CommonOpts& opts);
int run_count(CLI::App* app, const CommonOpts& opts);
int run_exponent(CLI::App* app, const CommonOpts& opts);

void register_hecke(CLI::App& app, CommonOpts& opts);
void register_spherical(CLI::App& app, CommonOpts& opts);
void register_count(CLI::App& app, CommonOpts& opts);
void register_exponent(CLI::App& app, CommonOpts& opts);
