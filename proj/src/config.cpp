#include "waveinv/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace waveinv {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config: bad number '" + s + "' for " + what);
    }
}

long to_long(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config: bad integer '" + s + "' for " + what);
    }
}

bool to_bool(const std::string& s, const std::string& what) {
    if (s == "true" || s == "1")
        return true;
    if (s == "false" || s == "0")
        return false;
    throw ValidationError("config: bad boolean '" + s + "' for " + what);
}

std::vector<double> to_doubles(const std::string& s, const std::string& what) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty())
            out.push_back(to_double(item, what));
    }
    return out;
}

struct KV {
    std::string section, key, value;
};

std::vector<KV> tokenize(std::istream& in) {
    std::vector<KV> out;
    std::string line, section;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';')
            continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config: expected 'key = value', got '" + line + "'");
        out.push_back({section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    }
    return out;
}

} // namespace

ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig cfg;
    cfg.levels.clear();
    bool have_levels = false;
    for (const auto& [sec, key, val] : tokenize(in)) {
        const std::string what = sec.empty() ? key : sec + "." + key;
        if (sec.empty()) {
            if (key == "name") cfg.name = val;
            else throw ValidationError("config: unknown key " + what);
        } else if (sec == "domain") {
            if (key == "x0") cfg.domain.x0 = to_double(val, what);
            else if (key == "x1") cfg.domain.x1 = to_double(val, what);
            else if (key == "y0") cfg.domain.y0 = to_double(val, what);
            else if (key == "y1") cfg.domain.y1 = to_double(val, what);
            else if (key == "T") cfg.T = to_double(val, what);
            else throw ValidationError("config: unknown key " + what);
        } else if (sec == "mesh") {
            if (key == "nx") cfg.nx = static_cast<int>(to_long(val, what));
            else if (key == "ny") cfg.ny = static_cast<int>(to_long(val, what));
            else if (key == "nt") cfg.nt = static_cast<int>(to_long(val, what));
            else if (key == "sigma") cfg.sigma = to_double(val, what);
            else if (key == "snap_geometry") cfg.snap_geometry = to_bool(val, what);
            else if (key == "cfl_override") cfg.cfl_override = to_bool(val, what);
            else throw ValidationError("config: unknown key " + what);
        } else if (sec == "coefficient") {
            if (key == "offset") cfg.offset = to_double(val, what);
            else if (key == "levels") { cfg.levels = to_doubles(val, what); have_levels = true; }
            else throw ValidationError("config: unknown key " + what);
        } else if (sec == "control") {
            if (key == "x0") cfg.control_rect.x0 = to_double(val, what);
            else if (key == "x1") cfg.control_rect.x1 = to_double(val, what);
            else if (key == "y0") cfg.control_rect.y0 = to_double(val, what);
            else if (key == "y1") cfg.control_rect.y1 = to_double(val, what);
            else throw ValidationError("config: unknown key " + what);
        } else if (sec == "observation") {
            if (key == "kind") cfg.obs_kind = val;
            else if (key == "x0") cfg.obs_rect.x0 = to_double(val, what);
            else if (key == "x1") cfg.obs_rect.x1 = to_double(val, what);
            else if (key == "y0") cfg.obs_rect.y0 = to_double(val, what);
            else if (key == "y1") cfg.obs_rect.y1 = to_double(val, what);
            else if (key == "patch") {
                const auto v = to_doubles(val, what);
                if (v.size() != 4)
                    throw ValidationError("config: patch needs x0,x1,y0,y1");
                cfg.patches.push_back({v[0], v[1], v[2], v[3]});
            } else throw ValidationError("config: unknown key " + what);
        } else if (sec == "exact") {
            if (key == "box") {
                const auto v = to_doubles(val, what);
                if (v.size() != 5)
                    throw ValidationError("config: box needs x0,x1,y0,y1,value");
                cfg.exact.push_back({{v[0], v[1], v[2], v[3]}, v[4]});
            } else throw ValidationError("config: unknown key " + what);
        } else if (sec == "forcing") {
            if (key == "source") {
                // x, y, a, h, t0 [, placement]
                std::string rest = val, placement = "interior";
                const auto lastcomma = rest.find_last_of(',');
                if (lastcomma != std::string::npos) {
                    const std::string tail = trim(rest.substr(lastcomma + 1));
                    if (tail == "interior" || tail == "boundary") {
                        placement = tail;
                        rest = rest.substr(0, lastcomma);
                    }
                }
                const auto v = to_doubles(rest, what);
                if (v.size() != 5)
                    throw ValidationError("config: source needs x,y,a,h,t0[,placement]");
                cfg.sources.push_back({v[0], v[1], v[2], v[3], v[4], placement});
            } else throw ValidationError("config: unknown key " + what);
        } else if (sec == "noise") {
            if (key == "kind") cfg.noise.kind = val;
            else if (key == "level") cfg.noise.level = to_double(val, what);
            else if (key == "terms") cfg.noise.terms = static_cast<int>(to_long(val, what));
            else if (key == "seed") cfg.noise.seed = static_cast<std::uint64_t>(to_long(val, what));
            else if (key == "generator") {
                if (val != "mt19937-64")
                    throw ValidationError("config: unsupported generator '" + val + "'");
                cfg.noise.generator = val;
            } else throw ValidationError("config: unknown key " + what);
        } else if (sec == "pdps") {
            if (key == "alpha") cfg.pdps.alpha = to_double(val, what);
            else if (key == "beta") cfg.pdps.beta = to_double(val, what);
            else if (key == "gamma_f") cfg.pdps.gamma_f = to_double(val, what);
            else if (key == "gamma_g") cfg.pdps.gamma_g = to_double(val, what);
            else if (key == "tol") cfg.pdps.tol = to_double(val, what);
            else if (key == "max_iter") cfg.pdps.max_iter = static_cast<int>(to_long(val, what));
            else if (key == "check_every") cfg.pdps.check_every = static_cast<int>(to_long(val, what));
            else if (key == "norm_check_iters") cfg.pdps.norm_check_iters = static_cast<int>(to_long(val, what));
            else if (key == "lumped_riesz") cfg.pdps.lumped_riesz = to_bool(val, what);
            else throw ValidationError("config: unknown key " + what);
        } else {
            throw ValidationError("config: unknown section [" + sec + "]");
        }
    }
    if (!have_levels)
        throw ValidationError("config: missing [coefficient] levels");
    return cfg;
}

ScenarioConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("config: cannot open " + path);
    return parse_config(in);
}

namespace {

void serialize_body(std::ostream& os, const ScenarioConfig& c, bool include_pdps,
                    bool include_name) {
    if (include_name)
        os << "name = " << c.name << "\n\n";
    os << "[domain]\n";
    os << "x0 = " << fmt(c.domain.x0) << "\n";
    os << "x1 = " << fmt(c.domain.x1) << "\n";
    os << "y0 = " << fmt(c.domain.y0) << "\n";
    os << "y1 = " << fmt(c.domain.y1) << "\n";
    os << "T = " << fmt(c.T) << "\n\n";
    os << "[mesh]\n";
    os << "nx = " << c.nx << "\n";
    os << "ny = " << c.ny << "\n";
    os << "nt = " << c.nt << "\n";
    os << "sigma = " << fmt(c.sigma) << "\n";
    os << "snap_geometry = " << (c.snap_geometry ? "true" : "false") << "\n";
    os << "cfl_override = " << (c.cfl_override ? "true" : "false") << "\n\n";
    os << "[coefficient]\n";
    os << "offset = " << fmt(c.offset) << "\n";
    os << "levels = ";
    for (std::size_t i = 0; i < c.levels.size(); ++i)
        os << (i ? ", " : "") << fmt(c.levels[i]);
    os << "\n\n";
    os << "[control]\n";
    os << "x0 = " << fmt(c.control_rect.x0) << "\n";
    os << "x1 = " << fmt(c.control_rect.x1) << "\n";
    os << "y0 = " << fmt(c.control_rect.y0) << "\n";
    os << "y1 = " << fmt(c.control_rect.y1) << "\n\n";
    os << "[observation]\n";
    os << "kind = " << c.obs_kind << "\n";
    if (c.obs_kind == "restriction") {
        os << "x0 = " << fmt(c.obs_rect.x0) << "\n";
        os << "x1 = " << fmt(c.obs_rect.x1) << "\n";
        os << "y0 = " << fmt(c.obs_rect.y0) << "\n";
        os << "y1 = " << fmt(c.obs_rect.y1) << "\n";
    }
    for (const auto& p : c.patches)
        os << "patch = " << fmt(p.x0) << ", " << fmt(p.x1) << ", " << fmt(p.y0) << ", "
           << fmt(p.y1) << "\n";
    os << "\n[exact]\n";
    for (const auto& b : c.exact)
        os << "box = " << fmt(b.rect.x0) << ", " << fmt(b.rect.x1) << ", " << fmt(b.rect.y0)
           << ", " << fmt(b.rect.y1) << ", " << fmt(b.value) << "\n";
    os << "\n[forcing]\n";
    for (const auto& s : c.sources)
        os << "source = " << fmt(s.x) << ", " << fmt(s.y) << ", " << fmt(s.a) << ", "
           << fmt(s.h) << ", " << fmt(s.t0) << ", " << s.placement << "\n";
    os << "\n[noise]\n";
    os << "kind = " << c.noise.kind << "\n";
    os << "level = " << fmt(c.noise.level) << "\n";
    os << "terms = " << c.noise.terms << "\n";
    os << "seed = " << c.noise.seed << "\n";
    os << "generator = " << c.noise.generator << "\n";
    if (include_pdps) {
        os << "\n[pdps]\n";
        os << "alpha = " << fmt(c.pdps.alpha) << "\n";
        os << "beta = " << fmt(c.pdps.beta) << "\n";
        os << "gamma_f = " << fmt(c.pdps.gamma_f) << "\n";
        os << "gamma_g = " << fmt(c.pdps.gamma_g) << "\n";
        os << "tol = " << fmt(c.pdps.tol) << "\n";
        os << "max_iter = " << c.pdps.max_iter << "\n";
        os << "check_every = " << c.pdps.check_every << "\n";
        os << "norm_check_iters = " << c.pdps.norm_check_iters << "\n";
        os << "lumped_riesz = " << (c.pdps.lumped_riesz ? "true" : "false") << "\n";
    }
}

} // namespace

std::string serialize_config(const ScenarioConfig& cfg) {
    std::ostringstream os;
    serialize_body(os, cfg, true, true);
    return os.str();
}

void save_config(const ScenarioConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ValidationError("config: cannot write " + path);
    out << serialize_config(cfg);
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
    return fnv1a(serialize_config(cfg));
}

std::uint64_t data_hash(const ScenarioConfig& cfg) {
    // solver parameters and the cosmetic name do not identify the data
    std::ostringstream os;
    serialize_body(os, cfg, false, false);
    return fnv1a(os.str());
}

ScenarioConfig preset_transmission() {
    ScenarioConfig c;
    c.name = "transmission";
    c.domain = {-1, 1, -1, 2};
    c.T = 3;
    c.nx = 64;
    c.ny = 64;
    c.nt = 128;
    c.sigma = 0.25;
    c.offset = 1.0;
    c.levels = {0.0, 0.1, 0.2, 0.3, 0.4};
    c.control_rect = {-1, 1, 0, 1};
    c.obs_kind = "restriction";
    c.obs_rect = {-1, 1, 1, 2};
    c.exact = {
        {{-0.75, -0.25, 0.60, 0.85}, 0.2},
        {{-0.60, 0.00, 0.15, 0.40}, 0.4},
        {{0.20, 0.70, 0.55, 0.80}, 0.1},
        {{0.25, 0.75, 0.10, 0.35}, 0.3},
    };
    for (int i = -9; i <= 9; ++i) {
        c.sources.push_back({i / 10.0, -0.9, 2.0, 5.0, 0.1, "interior"});
        c.sources.push_back({0.05 + i / 10.0, -0.8, 2.0, 5.0, 0.1, "interior"});
    }
    c.noise = {"gaussian_relative", 0.1, 10, 20260810ull, "mt19937-64"};
    // gamma_g is sized for the literal (Euclidean) gradient vectors; the
    // lumped-Riesz geometry needs gamma_g scaled down by the node weights
    c.pdps = {1e-5, 1e-4, 0.1, 1e3, 1e-6, 20000, 10, 10, false};
    return c;
}

ScenarioConfig preset_transmission_mb() {
    ScenarioConfig c = preset_transmission();
    c.name = "transmission-mb";
    c.pdps.beta = 0.0;
    return c;
}

ScenarioConfig preset_reflection() {
    ScenarioConfig c;
    c.name = "reflection";
    c.domain = {-1, 1, -1, 1};
    c.T = 3;
    c.nx = 129;
    c.ny = 129;
    c.nt = 129;
    c.sigma = 0.25;
    c.snap_geometry = true; // 0.2-wide patches cannot align with a 128-cell grid
    c.offset = 1.0;
    c.levels = {0.0, 1.0, 2.0, 3.0};
    c.control_rect = {-1, 1, -1, 0.7};
    c.obs_kind = "patch_mean";
    for (int k = 0; k < 10; ++k) {
        const double o = -1.0 + 0.2 * k;
        c.patches.push_back({o, o + 0.2, 0.8, 1.0});
    }
    c.exact = {
        {{0.4, 0.6, 0.1, 0.4}, 3.0},
        {{-0.8, -0.5, 0.2, 0.6}, 2.0},
        {{-0.2, 0.2, 0.3, 0.5}, 1.0},
    };
    for (int k = 0; k <= 20; ++k)
        c.sources.push_back({-1.0 + 0.1 * k, 1.0, 2.0, 5.0, 0.1, "boundary"});
    c.noise = {"structured_cosine", 0.05, 10, 20260810ull, "mt19937-64"};
    c.pdps = {0.0, 1e-4, 0.1, 1e3, 1e-4, 20000, 10, 10, false};
    return c;
}

ScenarioConfig preset_by_name(const std::string& name) {
    if (name == "transmission")
        return preset_transmission();
    if (name == "transmission-mb")
        return preset_transmission_mb();
    if (name == "reflection")
        return preset_reflection();
    throw ValidationError("unknown preset '" + name +
                          "' (available: transmission, transmission-mb, reflection)");
}

} // namespace waveinv
