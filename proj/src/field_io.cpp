#include "nodal/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nodal {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::map<std::string, std::string> grid_header(const Grid& g) {
    return {
        {"domain", to_string(g.domain().kind)},
        {"inner_radius", fmt17(g.domain().inner_radius)},
        {"outer_radius", fmt17(g.domain().outer_radius)},
        {"n_r", std::to_string(g.n_r())},
        {"n_theta", std::to_string(g.n_theta())},
        {"radial", g.is_radial() ? "1" : "0"},
    };
}

const std::string& need(const std::map<std::string, std::string>& h, const std::string& key) {
    auto it = h.find(key);
    if (it == h.end()) throw std::runtime_error("field dump is missing header key '" + key + "'");
    return it->second;
}

}  // namespace

void write_field(std::ostream& out, const ScalarField& f, const std::map<std::string, std::string>& extra_header) {
    const Grid& g = f.grid();
    for (const auto& [k, v] : grid_header(g)) out << "# " << k << '=' << v << '\n';
    for (const auto& [k, v] : extra_header) out << "# " << k << '=' << v << '\n';
    char line[160];
    for (int i = 0; i < g.n_r(); ++i) {
        for (int j = 0; j < g.n_theta(); ++j) {
            const double value = f[g.index(i, j)];
            if (g.is_polar())
                std::snprintf(line, sizeof line, "%d %d %.17g %.17g %.17g\n", i, j, g.r(i), g.theta(j), value);
            else
                std::snprintf(line, sizeof line, "%d %.17g %.17g\n", i, g.r(i), value);
            out << line;
        }
    }
}

void write_field(const std::string& path, const ScalarField& f, const std::map<std::string, std::string>& extra_header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_field(out, f, extra_header);
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

LoadedField read_field(std::istream& in, const GridPtr& grid) {
    std::map<std::string, std::string> header;
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(' '));
            header[key] = line.substr(eq + 1);
        } else {
            rows.push_back(line);
        }
    }

    Domain domain{domain_kind_from_string(need(header, "domain")), std::stod(need(header, "inner_radius")),
                  std::stod(need(header, "outer_radius"))};
    const int n_r = std::stoi(need(header, "n_r"));
    const int n_theta = std::stoi(need(header, "n_theta"));
    const bool radial = header.count("radial") && header.at("radial") == "1";

    GridPtr g = grid;
    if (!g) {
        g = radial ? build_radial_grid(domain, n_r) : build_grid(domain, n_r, n_theta);
    } else if (g->n_r() != n_r || g->n_theta() != n_theta || g->domain().kind != domain.kind ||
               g->is_radial() != radial) {
        throw std::runtime_error("field dump does not match the supplied grid");
    }
    if (rows.size() != g->size())
        throw std::runtime_error("field dump has " + std::to_string(rows.size()) + " rows, expected " +
                                 std::to_string(g->size()));

    ScalarField f(g);
    for (const auto& row : rows) {
        std::istringstream ss(row);
        int i = 0, j = 0;
        double r = 0.0, theta = 0.0, value = 0.0;
        if (g->is_polar())
            ss >> i >> j >> r >> theta;
        else
            ss >> i >> r;
        // operator>> rounds correctly, so 17 digits reproduce the stored double.
        ss >> value;
        if (!ss || i < 0 || i >= g->n_r() || j < 0 || j >= g->n_theta())
            throw std::runtime_error("malformed field dump row: " + row);
        f[g->index(i, j)] = value;
    }
    return {std::move(f), std::move(header)};
}

LoadedField read_field(const std::string& path, const GridPtr& grid) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open field dump '" + path + "'");
    return read_field(in, grid);
}

}  // namespace nodal
