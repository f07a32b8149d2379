#pragma once

#include <map>
#include <string>

#include "crsegre/manifold.hpp"
#include "crsegre/parse.hpp"

namespace crsegre {

/// Parsed input registry. File grammar: a sequence of sections started by a
/// [manifold], [map] or [system] header line, followed by key=value lines.
///
///   [manifold] name=<id> m=<int> d=<int> order=<int>
///   theta_bar_<j>=<poly in zeta*, w*, xi*>           (j = 1..d)
///
///   [map] name=<id> source=<id> target=<id>
///   h_<j>=<poly in w*, z*>                           (j = 1..m'+d')
///
///   [system] name=<id> nw=<int> ny=<int> order=<int>
///   r_<j>=<poly in w*, t*>   g_<k>=<poly in w*>      (t* are the unknowns)
///
/// Header key=value pairs may also appear on their own lines. Blank lines
/// and lines starting with # are ignored.
struct InputSystem {
    int nw = 0, ny = 0, order = 0;
    SeriesVector R;
    SeriesVector g_hat;
    std::vector<std::string> y_vars;
};

struct InputSet {
    std::map<std::string, GenericManifold> manifolds;
    std::map<std::string, FormalMap> maps;
    std::map<std::string, InputSystem> systems;
};

InputSet parse_input(const std::string& text);
InputSet parse_input_file(const std::string& path);

/// Serialise back to the input grammar (round-trips through parse_input).
std::string serialize_manifold(const std::string& name, const GenericManifold& M);
std::string serialize_map(const std::string& name, const std::string& source,
                          const std::string& target, const FormalMap& h);

}  // namespace crsegre
