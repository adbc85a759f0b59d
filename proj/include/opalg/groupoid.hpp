#pragma once

#include <memory>
#include <string>
#include <vector>

#include "opalg/policy.hpp"

namespace opalg {

struct Arrow {
    std::string id;
    int src = -1; // unit index
    int rng = -1; // unit index
};

/// A finite groupoid in table form: arrows with source/range, a total inverse
/// map, and composition defined exactly on composable pairs. Units are both a
/// set and designated identity arrows.
struct FiniteGroupoid {
    std::vector<std::string> units;
    std::vector<Arrow> arrows;
    std::vector<int> inv;                // arrow -> arrow
    std::vector<std::vector<int>> comp;  // comp[g][h], -1 when not composable
    std::vector<int> unit_arrow;         // unit -> arrow

    // derived, rebuilt by finalize()
    std::vector<std::vector<int>> range_fiber;  // G^x = r^-1(x)
    std::vector<std::vector<int>> source_fiber; // G_x = s^-1(x)

    int num_arrows() const { return static_cast<int>(arrows.size()); }
    int num_units() const { return static_cast<int>(units.size()); }
    bool composable(int g, int h) const { return arrows[g].src == arrows[h].rng; }
    int arrow_index(const std::string& id) const;
    int unit_index(const std::string& id) const;

    /// rebuild fibers; throws invalid_input on structural defects
    /// (bad indices, comp keys not matching composability, duplicate ids)
    void finalize();
};

using GroupoidPtr = std::shared_ptr<const FiniteGroupoid>;

inline GroupoidPtr share(FiniteGroupoid g) {
    return std::make_shared<const FiniteGroupoid>(std::move(g));
}

/// Strictly positive left-invariant arrow weights.
struct HaarSystem {
    std::vector<double> weights; // per arrow
};

struct Violation {
    std::string law;     // which axiom
    std::string witness; // offending arrows / units
    double deviation = 1.0;
};

using ValidationReport = std::vector<Violation>;

/// Checks every groupoid axiom exhaustively; empty report iff G is a groupoid.
ValidationReport validate_groupoid(const FiniteGroupoid& g);

FiniteGroupoid pair_groupoid(int n);

/// One-unit groupoid from a Cayley table; table[i][j] is the index of
/// elements[i] * elements[j]. Throws invalid_input with a witness when the
/// table is not a group.
FiniteGroupoid group_groupoid(const std::vector<std::string>& elements,
                              const std::vector<std::vector<int>>& table);

FiniteGroupoid cyclic_group(int n);
FiniteGroupoid klein_four_group();

/// Transformation groupoid of a group action: arrows (gamma, x) with src x and
/// rng act[gamma][x]. `group` must have one unit; act[arrow][point] gives the
/// action of each group arrow on each point. Throws invalid_input when act is
/// not an action.
FiniteGroupoid action_groupoid(const FiniteGroupoid& group,
                               const std::vector<std::string>& points,
                               const std::vector<std::vector<int>>& act);

FiniteGroupoid product_groupoid(const FiniteGroupoid& a, const FiniteGroupoid& b);

/// Same arrows and units, reversed composition, swapped range/source.
FiniteGroupoid opposite_groupoid(const FiniteGroupoid& g);

ValidationReport validate_haar(const FiniteGroupoid& g, const HaarSystem& h);
HaarSystem counting_haar(const FiniteGroupoid& g);

/// weights(g) = unit_weights[src(g)]; every left-invariant system has this form.
HaarSystem unit_weight_haar(const FiniteGroupoid& g, const std::vector<double>& unit_weights);

/// Image of the weights under inversion; left invariant on the opposite groupoid.
HaarSystem opposite_haar(const FiniteGroupoid& g, const HaarSystem& h);

HaarSystem product_haar(const FiniteGroupoid& a, const HaarSystem& ha,
                        const FiniteGroupoid& b, const HaarSystem& hb);

} // namespace opalg
