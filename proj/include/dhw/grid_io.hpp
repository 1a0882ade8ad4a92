// grid_io.hpp - on-disk forms of a DistributionGrid.
//
//   <base>.csv   header p_par,p_perp,c2_re,c2_im,f,phase; one row per node,
//                p_par outer; %.17g floats, undefined phase written as nan.
//                This is the interface of record.
//   <base>.json  {e0_ratio, omega, n_cycles, rtol, atol, grid:{...}, version, created}
//   <base>.bin   same content as the CSV, little-endian doubles, for fast reload.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "dhw/sweep.hpp"

namespace dhw {

class GridFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kGridCsvHeader = "p_par,p_perp,c2_re,c2_im,f,phase";

/// Formats a double with 17 significant digits ("nan" for NaN).
std::string format_double(double x);

void write_grid_csv(const DistributionGrid& grid, std::ostream& out);
void write_grid_csv(const DistributionGrid& grid, const std::filesystem::path& path);

/// Parses the CSV and reconstructs the GridSpec from the node coordinates.
/// Metadata is left default; see load_grid.
DistributionGrid read_grid_csv(std::istream& in);
DistributionGrid read_grid_csv(const std::filesystem::path& path);

std::string grid_metadata_json(const DistributionGrid& grid);
void apply_grid_metadata_json(const std::string& json, DistributionGrid& grid);

void write_grid_binary(const DistributionGrid& grid, const std::filesystem::path& path);
DistributionGrid read_grid_binary(const std::filesystem::path& path);

/// Writes <base>.csv, <base>.json and <base>.bin.
void save_grid(const DistributionGrid& grid, const std::filesystem::path& base);

/// Reads a grid CSV and, when a sibling .json exists, its metadata.
DistributionGrid load_grid(const std::filesystem::path& csv_path);

}  // namespace dhw
