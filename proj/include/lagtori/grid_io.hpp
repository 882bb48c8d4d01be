// Grid function containers.
//
// Binary layout (all little-endian):
//   uint64 d, uint64 M, then M^d IEEE-754 float64 values in row-major order
//   (last axis fastest).
// CSV layout: header "x1,...,xd,value", then one line per node.

#ifndef LAGTORI_GRID_IO_HPP
#define LAGTORI_GRID_IO_HPP

#include <filesystem>
#include <iosfwd>

#include "lagtori/grid.hpp"

namespace lagtori {

void write_binary(std::ostream& out, const GridFunction& f);
GridFunction read_binary(std::istream& in);

void write_csv(std::ostream& out, const GridFunction& f);

void save_binary(const std::filesystem::path& path, const GridFunction& f);
GridFunction load_binary(const std::filesystem::path& path);
void save_csv(const std::filesystem::path& path, const GridFunction& f);

}  // namespace lagtori

#endif  // LAGTORI_GRID_IO_HPP
