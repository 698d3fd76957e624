#pragma once

#include "waveinv/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace waveinv {

struct SourceSpec {
    double x = 0, y = 0;
    double a = 0, h = 0, t0 = 0; // Ricker amplitude, frequency, delay
    std::string placement = "interior";
};

struct BoxSpec {
    Rect rect;
    double value = 0;
};

struct NoiseSpec {
    std::string kind = "none"; // none | gaussian_relative | structured_cosine
    double level = 0;          // gaussian level resp. cosine delta
    int terms = 10;            // cosine term count M
    std::uint64_t seed = 0;
    std::string generator = "mt19937-64";
};

struct PdpsConfig {
    double alpha = 0;
    double beta = 0;
    double gamma_f = 0.1;
    double gamma_g = 1e3;
    double tol = 1e-6;
    int max_iter = 20000;
    int check_every = 10;
    int norm_check_iters = 10; // 0 disables the step-size diagnostic
    bool lumped_riesz = true;
};

/// Full description of one experiment; everything a run needs is derived
/// from this value, so a config plus a seed reproduces all outputs.
struct ScenarioConfig {
    std::string name = "custom";
    Rect domain;
    double T = 1;
    int nx = 2, ny = 2, nt = 1;
    double sigma = 0.25;
    bool snap_geometry = false;
    bool cfl_override = false;

    double offset = 1.0;
    std::vector<double> levels;

    Rect control_rect;

    std::string obs_kind = "restriction"; // restriction | patch_mean
    Rect obs_rect;
    std::vector<Rect> patches;

    std::vector<BoxSpec> exact;
    std::vector<SourceSpec> sources;

    NoiseSpec noise;
    PdpsConfig pdps;
};

ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_string(const std::string& text);
ScenarioConfig load_config(const std::string& path);
std::string serialize_config(const ScenarioConfig& cfg);
void save_config(const ScenarioConfig& cfg, const std::string& path);

/// FNV-1a over the canonical serialization.
std::uint64_t config_hash(const ScenarioConfig& cfg);
/// Hash over the data-determining part only (everything except [pdps]), so
/// runs that differ only in solver parameters accept the same data files.
std::uint64_t data_hash(const ScenarioConfig& cfg);

std::uint64_t fnv1a(const std::string& bytes);

ScenarioConfig preset_transmission();    // alpha 1e-5, beta 1e-4
ScenarioConfig preset_transmission_mb(); // alpha 1e-5, beta 0
ScenarioConfig preset_reflection();
ScenarioConfig preset_by_name(const std::string& name);

} // namespace waveinv
