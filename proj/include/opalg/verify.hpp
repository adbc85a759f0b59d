#pragma once

#include "opalg/io.hpp"
#include "opalg/structure.hpp"

namespace opalg {

struct Check {
    std::string name;
    std::string statement; // the identity being certified
    double deviation = 0.0;
    double threshold = 0.0;
    bool pass = true;
    std::string witness;
};

struct Report {
    std::string suite;
    std::vector<std::pair<std::string, std::string>> input_digests;
    std::uint64_t seed = 0;
    int samples = 0;
    NumericPolicy policy;
    std::vector<Check> checks;
    bool overall = false;
    std::vector<std::string> notes;

    void finish(); // sets overall; throws inconsistency when no checks ran
};

ojson report_to_json(const Report& r);

GroupoidFunction random_function(const GroupoidPtr& g, Rng& rng);
Section random_section(const FellBundlePtr& b, Rng& rng);

/// The inversion-map suite: g -> g^-1 is an isomorphism onto the opposite
/// groupoid, f -> f^op reverses convolution, preserves the involution, and is
/// isometric for the I-norm (exactly) and the reduced norm; plus the
/// anti-multiplicative identity map and conjugation checks.
Report suite_opposite_algebra(const GroupoidPtr& g, const HaarSystem& haar,
                              const NumericPolicy& pol = {});

/// The opposite-bundle suite: the reindexed bundle validates, xi -> xi^oo
/// reverses section products, preserves involutions and is isometric; the
/// conjugate-bundle route agrees fiberwise and on sections.
Report suite_opposite_bundle(const FellBundlePtr& b, const HaarSystem& haar,
                             const NumericPolicy& pol = {});

/// Twist suite: the opposite cocycle is cohomologous to the conjugate one,
/// conjugation preserves the twisted block dimensions, and the full
/// opposite-bundle suite passes on the line bundle.
Report suite_twist(const TCocycle& sigma, const HaarSystem& haar, const NumericPolicy& pol = {});

/// Stabilization suite: block dims of C*(G x R_n) are n times those of C*(G)
/// (optionally twisted), plus the opposite-algebra suite on the product.
Report suite_stabilization(const GroupoidPtr& g, const HaarSystem& haar, int n,
                           const TCocycle* twist = nullptr, const NumericPolicy& pol = {});

} // namespace opalg
