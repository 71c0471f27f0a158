#ifndef PCSIM_CLOUD_IO_HPP
#define PCSIM_CLOUD_IO_HPP

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

#include "pcsim/point_cloud.hpp"

namespace pcsim {

// Supported formats, chosen by extension:
//   .xyz  one point per line, three whitespace-separated reals, '#' comments
//   .ply  ASCII PLY; x, y, z are read from the vertex element, other
//         properties and elements are skipped
// Errors are ParseError with the offending line number.

PointCloud read_cloud(const std::filesystem::path &path);
void write_cloud(const PointCloud &cloud, const std::filesystem::path &path);

PointCloud parse_xyz(std::istream &in, const std::string &source = "<xyz>");
PointCloud parse_ply(std::istream &in, const std::string &source = "<ply>");

/// Coordinates are written with %.17g, so a read gives back the same doubles.
void write_xyz(const PointCloud &cloud, std::ostream &out);
void write_ply(const PointCloud &cloud, std::ostream &out);

} // namespace pcsim

#endif // PCSIM_CLOUD_IO_HPP
