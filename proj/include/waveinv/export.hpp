#pragma once

#include "waveinv/pdps.hpp"
#include "waveinv/scenario.hpp"

#include <string>
#include <vector>

namespace waveinv {

/// '#'-prefixed header carried by every output file, making artifacts
/// self-describing.
struct FileHeader {
    std::string tool = "waveinv";
    std::uint64_t config_hash = 0;
    std::uint64_t data_hash = 0;
    std::uint64_t seed = 0;
    std::string kind; // observation | field | history | summary
};

std::string format_double(double v); // shortest round-trip decimal

void write_observation_csv(const std::string& path, const FileHeader& hdr, const TimeGrid& grid,
                           const Observation& o);
/// Reads the payload back; the expected kind/shape are validated by callers.
Observation read_observation_csv(const std::string& path, ObsKind kind, FileHeader* hdr = nullptr);

/// Nodal field over the whole mesh as x,y,value rows.
void write_field_csv(const std::string& path, const FileHeader& hdr, const Mesh& mesh,
                     const Vec& field);
/// Same field as legacy-VTK ASCII structured points.
void write_field_vtk(const std::string& path, const FileHeader& hdr, const Mesh& mesh,
                     const Vec& field, const std::string& name);

/// Control values as x,y,value rows over the control nodes.
void write_control_csv(const std::string& path, const FileHeader& hdr, const ControlSpace& cs,
                       const Vec& u);

void write_history_csv(const std::string& path, const FileHeader& hdr,
                       const std::vector<HistoryRow>& rows);

void write_summary(const std::string& path, const FileHeader& hdr,
                   const std::vector<std::pair<std::string, std::string>>& fields);

} // namespace waveinv
