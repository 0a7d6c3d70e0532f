// commands.hpp: run configuration and subcommand handlers for the starkspec CLI

#pragma once

#include <string>

namespace starkspec::cli {

// Exit codes
inline constexpr int kOk = 0;
inline constexpr int kSoftFailure = 1;
inline constexpr int kUsage = 2;
inline constexpr int kDomain = 3;

inline constexpr const char* kVersion = "1.0.0";

struct RunConfig {
    std::string subcommand;

    double delta = 0.4;
    double gamma = 0.5;
    double g = 0.4;
    double g_min = 0.0, g_max = 1.6;
    int g_steps = 400;

    // gfun window, either in x = E + g² or in E
    double x_min = -1.0, x_max = 2.0;
    double e_min = 0.0, e_max = 0.0;
    bool energy_window = false;
    int grid = 600;

    int n_terms = 12;
    bool fixed_terms = false;
    bool strict = false;

    int levels = 0;  // 0: per-subcommand default
    int n_max = 5;
    int cutoff = 200;
    double tol = 1e-6;
    double threshold = 4e-5;
    double e_step = 0.01;
    double tol_e = 1e-10;
    double pole_halfwidth = 1e-4;
    double graze = 1e-5;
    double tol_v = 1e-8;
    int threads = 0;

    std::string format = "csv";
    std::string out = "-";
};

int run_gfun(const RunConfig& c);
int run_spectrum(const RunConfig& c);
int run_poles(const RunConfig& c);
int run_crossings(const RunConfig& c);
int run_oracle(const RunConfig& c);
int run_compare(const RunConfig& c);

}  // namespace starkspec::cli
