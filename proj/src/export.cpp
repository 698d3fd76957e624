#include "waveinv/export.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace waveinv {

std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

namespace {

void write_header(std::ostream& os, const FileHeader& hdr) {
    os << "# " << hdr.tool << " " << hdr.kind << "\n";
    os << "# config_hash=" << std::hex << hdr.config_hash << std::dec << "\n";
    os << "# data_hash=" << std::hex << hdr.data_hash << std::dec << "\n";
    os << "# seed=" << hdr.seed << "\n";
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ValidationError("cannot write " + path);
    return out;
}

} // namespace

void write_observation_csv(const std::string& path, const FileHeader& hdr, const TimeGrid& grid,
                           const Observation& o) {
    auto out = open_out(path);
    FileHeader h = hdr;
    h.kind = "observation";
    write_header(out, h);
    out << "# obs_kind=" << (o.kind == ObsKind::restriction ? "restriction" : "patch_mean") << "\n";
    out << "# columns=time," << o.cols() << " values\n";
    for (int i = 0; i < o.time_nodes(); ++i) {
        out << format_double(grid.time(i));
        for (int c = 0; c < o.cols(); ++c)
            out << ',' << format_double(o.data(i, c));
        out << '\n';
    }
}

Observation read_observation_csv(const std::string& path, ObsKind kind, FileHeader* hdr) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot read " + path);
    Observation o;
    o.kind = kind;
    std::vector<std::vector<double>> rows;
    std::string line;
    FileHeader h;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            const auto grab = [&](const std::string& key) -> std::string {
                const auto pos = line.find(key + "=");
                if (pos == std::string::npos)
                    return {};
                return line.substr(pos + key.size() + 1);
            };
            if (auto v = grab("config_hash"); !v.empty())
                h.config_hash = std::stoull(v, nullptr, 16);
            if (auto v = grab("data_hash"); !v.empty())
                h.data_hash = std::stoull(v, nullptr, 16);
            if (auto v = grab("seed"); !v.empty())
                h.seed = std::stoull(v);
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ','))
            row.push_back(std::stod(item));
        if (row.size() < 2)
            throw ValidationError("observation csv: malformed row in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw ValidationError("observation csv: no data rows in " + path);
    const std::size_t cols = rows.front().size() - 1; // first column is time
    o.data.resize(static_cast<int>(rows.size()), static_cast<int>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols + 1)
            throw ValidationError("observation csv: ragged rows in " + path);
        for (std::size_t c = 0; c < cols; ++c)
            o.data(static_cast<int>(i), static_cast<int>(c)) = rows[i][c + 1];
    }
    if (hdr)
        *hdr = h;
    return o;
}

void write_field_csv(const std::string& path, const FileHeader& hdr, const Mesh& mesh,
                     const Vec& field) {
    if (field.size() != mesh.node_count())
        throw ValidationError("write_field_csv: field size mismatch");
    auto out = open_out(path);
    FileHeader h = hdr;
    h.kind = "field";
    write_header(out, h);
    out << "# columns=x,y,value\n";
    for (int n = 0; n < mesh.node_count(); ++n)
        out << format_double(mesh.nodes[n].x()) << ',' << format_double(mesh.nodes[n].y()) << ','
            << format_double(field[n]) << '\n';
}

void write_field_vtk(const std::string& path, const FileHeader& hdr, const Mesh& mesh,
                     const Vec& field, const std::string& name) {
    if (field.size() != mesh.node_count())
        throw ValidationError("write_field_vtk: field size mismatch");
    auto out = open_out(path);
    out << "# vtk DataFile Version 3.0\n";
    out << hdr.tool << " " << name << " config_hash=" << std::hex << hdr.config_hash << std::dec
        << " seed=" << hdr.seed << "\n";
    out << "ASCII\n";
    out << "DATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << mesh.nx << " " << mesh.ny << " 1\n";
    out << "ORIGIN " << format_double(mesh.domain.x0) << " " << format_double(mesh.domain.y0)
        << " 0\n";
    out << "SPACING " << format_double(mesh.dx()) << " " << format_double(mesh.dy()) << " 0\n";
    out << "POINT_DATA " << mesh.node_count() << "\n";
    out << "SCALARS " << name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (int n = 0; n < mesh.node_count(); ++n)
        out << format_double(field[n]) << '\n';
}

void write_control_csv(const std::string& path, const FileHeader& hdr, const ControlSpace& cs,
                       const Vec& u) {
    if (u.size() != cs.dof_count())
        throw ValidationError("write_control_csv: control size mismatch");
    auto out = open_out(path);
    FileHeader h = hdr;
    h.kind = "control";
    write_header(out, h);
    out << "# columns=x,y,value\n";
    for (int k = 0; k < cs.dof_count(); ++k) {
        const auto& p = cs.mesh().nodes[cs.node_ids()[k]];
        out << format_double(p.x()) << ',' << format_double(p.y()) << ','
            << format_double(u[k]) << '\n';
    }
}

void write_history_csv(const std::string& path, const FileHeader& hdr,
                       const std::vector<HistoryRow>& rows) {
    auto out = open_out(path);
    FileHeader h = hdr;
    h.kind = "history";
    write_header(out, h);
    out << "# columns=iteration,objective,primal_res,obs_res,dual_res,residual_sum\n";
    for (const auto& r : rows)
        out << r.iteration << ',' << format_double(r.objective) << ',' << format_double(r.primal)
            << ',' << format_double(r.obs) << ',' << format_double(r.dual) << ','
            << format_double(r.sum) << '\n';
}

void write_summary(const std::string& path, const FileHeader& hdr,
                   const std::vector<std::pair<std::string, std::string>>& fields) {
    auto out = open_out(path);
    FileHeader h = hdr;
    h.kind = "summary";
    write_header(out, h);
    for (const auto& [k, v] : fields)
        out << k << " = " << v << "\n";
}

} // namespace waveinv
