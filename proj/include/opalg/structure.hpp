#pragma once

#include "opalg/conv_algebra.hpp"
#include "opalg/section_algebra.hpp"

namespace opalg {

/// A finite-dimensional *-algebra given by a faithful matrix image of its
/// basis: the direct sum over units of the (localized, whitened) regular
/// representations.
struct MatrixAlgebraModel {
    std::vector<CMatrix> generators; // images of the delta / fiber basis
    int dimension = 0;               // algebra dimension = generator count
};

MatrixAlgebraModel algebra_model(const GroupoidPtr& g, const HaarSystem& haar,
                                 const NumericPolicy& pol = {});
MatrixAlgebraModel algebra_model_bundle(const FellBundlePtr& b, const HaarSystem& haar,
                                        const NumericPolicy& pol = {});

/// Wedderburn block dimensions {n_i}, sorted ascending; sum of n_i^2 equals
/// the algebra dimension. Randomized central splitting, deterministic under
/// pol.seed. Throws inconsistency if the generator span is not closed.
std::vector<int> block_dims(const MatrixAlgebraModel& model, const NumericPolicy& pol = {});

struct StabilizationReport {
    int n = 0;
    std::vector<int> base_blocks;
    std::vector<int> product_blocks;
    std::vector<int> expected; // {n * m : m in base_blocks}
    bool pass = false;
};

/// Checks block_dims(C*(G x R_n)) == {n*m : m in block_dims(C*(G))}; with a
/// twist, both algebras are twisted by sigma extended trivially to the product.
StabilizationReport stabilization_check(const GroupoidPtr& g, const HaarSystem& haar, int n,
                                        const TCocycle* twist = nullptr,
                                        const NumericPolicy& pol = {});

} // namespace opalg
