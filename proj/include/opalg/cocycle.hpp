#pragma once

#include <optional>
#include <utility>

#include "opalg/groupoid.hpp"

namespace opalg {

/// Normalized 2-cocycle with values in the N-th roots of unity, stored
/// additively as integers mod N on the composable pairs of the groupoid.
struct TCocycle {
    GroupoidPtr g;
    int n_roots = 1;
    std::vector<std::pair<int, int>> pairs; // all composable pairs, canonical order
    std::vector<int> vals;                  // aligned with pairs, in [0, N)
    std::vector<std::vector<int>> pair_pos; // [g][h] -> index into pairs, -1 otherwise

    int val(int a, int b) const { return vals[pair_at(a, b)]; }
    int pair_at(int a, int b) const;
};

/// All-zero cocycle.
TCocycle trivial_cocycle(const GroupoidPtr& g, int n_roots);

/// Cocycle with given values; missing pairs default to 0. Throws invalid_input
/// for values on non-composable pairs or out-of-range N.
TCocycle make_cocycle(const GroupoidPtr& g, int n_roots,
                      const std::vector<std::pair<std::pair<int, int>, int>>& entries);

/// delta b for b vanishing on unit arrows: (g,h) -> b(g) + b(h) - b(gh) mod N.
TCocycle coboundary(const GroupoidPtr& g, int n_roots, const std::vector<int>& b);

/// Normalization and the cocycle identity on every composable triple.
ValidationReport validate_cocycle(const TCocycle& s);

/// vals -> -vals mod N; inverts the cohomology class.
TCocycle conjugate_cocycle(const TCocycle& s);

/// sigma^oo(g,h) = sigma(h^-1, g^-1); the cocycle of the opposite line bundle.
TCocycle oo_cocycle(const TCocycle& s);

struct CohomologyResult {
    bool cohomologous = false;
    std::vector<int> witness; // b per arrow, vanishing on units; valid when cohomologous
};

/// Decides whether s1 - s2 is a coboundary, by Smith normal form of the
/// integer coboundary matrix followed by diagonal congruences mod N. The
/// witness satisfies the coboundary equation exactly when returned.
CohomologyResult cohomologous(const TCocycle& s1, const TCocycle& s2);

/// Trivial extension of a cocycle on A to a product groupoid A x B built by
/// product_groupoid: value on ((g,r),(h,r')) is the value on (g,h).
/// `right_arrows` is the arrow count of B.
TCocycle extend_cocycle_to_product(const TCocycle& s, const GroupoidPtr& product,
                                   int right_arrows);

} // namespace opalg
