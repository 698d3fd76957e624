#include "support/test_scenarios.hpp"

namespace waveinv::testing {

ScenarioConfig tiny(double sigma) {
    ScenarioConfig c;
    c.name = "tiny";
    c.domain = {0, 1, 0, 1};
    c.T = 1;
    c.nx = 3;
    c.ny = 3;
    c.nt = 4;
    c.sigma = sigma;
    c.offset = 1.0;
    c.levels = {0.0, 0.1, 0.2, 0.3, 0.4};
    c.control_rect = {0, 1, 0, 1};
    c.obs_kind = "restriction";
    c.obs_rect = {0, 1, 0.5, 1};
    c.sources = {{0.25, 0.25, 2.0, 2.0, 0.2, "interior"},
                 {0.75, 0.5, 1.5, 3.0, 0.3, "interior"}};
    c.noise = {"none", 0.0, 10, 7ull, "mt19937-64"};
    c.pdps = {1e-5, 1e-4, 0.1, 1e3, 1e-6, 200, 10, 5, true};
    return c;
}

ScenarioConfig small9(double sigma) {
    ScenarioConfig c;
    c.name = "small9";
    c.domain = {0, 1, 0, 1};
    c.T = 1;
    c.nx = 9;
    c.ny = 9;
    c.nt = 8;
    c.sigma = sigma;
    c.offset = 1.0;
    c.levels = {0.0, 0.1, 0.2, 0.3, 0.4};
    c.control_rect = {0, 1, 0, 0.5};
    c.obs_kind = "restriction";
    c.obs_rect = {0, 1, 0.75, 1};
    c.exact = {{{0.25, 0.625, 0.125, 0.375}, 0.3}};
    c.sources = {{0.25, 0.625, 2.0, 3.0, 0.15, "interior"},
                 {0.625, 0.625, 2.0, 4.0, 0.1, "interior"},
                 {0.5, 1.0, 1.0, 3.0, 0.2, "boundary"}};
    c.noise = {"gaussian_relative", 0.05, 10, 11ull, "mt19937-64"};
    // step size sized for this coarse control mesh (lumped weights ~ 1/64)
    c.pdps = {1e-5, 1e-4, 0.1, 1.0, 1e-6, 500, 10, 5, true};
    return c;
}

ScenarioConfig small9_patches(double sigma) {
    ScenarioConfig c = small9(sigma);
    c.name = "small9-patches";
    c.obs_kind = "patch_mean";
    c.obs_rect = {};
    c.patches = {{0.0, 0.5, 0.75, 1.0}, {0.5, 1.0, 0.75, 1.0}};
    c.noise = {"structured_cosine", 0.05, 10, 11ull, "mt19937-64"};
    return c;
}

ScenarioConfig transmission_small(int nx, int ny, int nt) {
    ScenarioConfig c = preset_transmission();
    c.name = "transmission-small";
    // ny-1 must be divisible by 3 so the band interfaces stay on mesh lines
    c.nx = nx;
    c.ny = ny;
    c.nt = nt;
    c.pdps.max_iter = 400;
    return c;
}

ScenarioConfig reflection_small(int nx, int ny, int nt) {
    ScenarioConfig c = preset_reflection();
    c.name = "reflection-small";
    c.nx = nx;
    c.ny = ny;
    c.nt = nt;
    c.pdps.max_iter = 400;
    return c;
}

} // namespace waveinv::testing
