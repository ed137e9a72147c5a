#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "nodal/grid.hpp"

namespace nodal {

// Plain-text field dumps: `# key=value` header lines describing the grid, then one
// row per node, `i j r theta value` on polar grids and `i r value` otherwise.
// Values are printed with 17 significant digits so a dump reloads bit-exactly.
void write_field(std::ostream& out, const ScalarField& f,
                 const std::map<std::string, std::string>& extra_header = {});
void write_field(const std::string& path, const ScalarField& f,
                 const std::map<std::string, std::string>& extra_header = {});

struct LoadedField {
    ScalarField field;
    std::map<std::string, std::string> header;
};

// Rebuilds the grid from the header. Pass `grid` to load onto an existing grid
// instead; its description must match the header.
LoadedField read_field(std::istream& in, const GridPtr& grid = nullptr);
LoadedField read_field(const std::string& path, const GridPtr& grid = nullptr);

}  // namespace nodal
