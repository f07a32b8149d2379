#pragma once

#include <map>
#include <string>

#include "crsegre/linalg.hpp"
#include "crsegre/manifold.hpp"
#include "crsegre/rng.hpp"

namespace crsegre {

/// Golden example corpus used by the test suites and shipped as an input
/// file for the CLI.
struct Corpus {
    std::map<std::string, GenericManifold> manifolds;
    std::map<std::string, FormalMap> maps;
};

/// hq            hyperquadric in C^2, ThetaBar = w1 zeta1
/// target_a1/a2  quadric in C^3 with a degenerate higher-order pair
/// embed_a1/a2   (w, z) -> (w, 0, z) into the targets
/// quartic       ThetaBar = w1^2 zeta1^2 in C^2
/// quartic3      its C^3 companion with mixed cubic pair terms
/// embed_quartic (w, z) -> (w, 0, z)
/// twisted       ThetaBar = w1 zeta1 (1 + w2 zeta2) in C^3
/// ratgraph      rational-graph hypersurface in C^3 (derived from graph data)
/// flat          Levi-flat ThetaBar = 0
/// halfflat      codimension-2 example with a flat direction (not minimal)
Corpus build_corpus(int order);

/// Random real graph manifold for the reality suite: sparse h(w, wbar, x)
/// with reality-paired coefficients of height <= 8.
GenericManifold random_graph_manifold(int m, int d, int order, Rng& rng);

/// Linear coordinate change preserving the graph normal form: w = A wt,
/// z = C zt with A invertible Gaussian-rational and C invertible rational.
GenericManifold transform_manifold(const GenericManifold& M, const RatMatrix& A, const RatMatrix& C);

/// Conjugate a map by block-linear changes on both sides.
FormalMap transform_map(const FormalMap& h, const RatMatrix& A, const RatMatrix& C,
                        const RatMatrix& Ap, const RatMatrix& Cp);

}  // namespace crsegre
