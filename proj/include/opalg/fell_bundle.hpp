#pragma once

#include "opalg/cocycle.hpp"
#include "opalg/groupoid.hpp"
#include "opalg/linalg.hpp"

namespace opalg {

/// Bilinear structure tensor of one composable pair, shape
/// d_out x d_left x d_right; entry (o,i,j) is the o-th output coordinate of
/// (left basis i) * (right basis j).
struct Tensor3 {
    int d_out = 0, d_left = 0, d_right = 0;
    std::vector<cplx> a;

    Tensor3() = default;
    Tensor3(int o, int l, int r)
        : d_out(o), d_left(l), d_right(r), a(static_cast<size_t>(o) * l * r) {}

    cplx& at(int o, int i, int j) { return a[(static_cast<size_t>(o) * d_left + i) * d_right + j]; }
    const cplx& at(int o, int i, int j) const {
        return a[(static_cast<size_t>(o) * d_left + i) * d_right + j];
    }

    std::vector<cplx> apply(const std::vector<cplx>& left, const std::vector<cplx>& right) const;
};

/// Finite-dimensional Fell bundle in structure-constant form: a fiber
/// dimension per arrow, a multiplication tensor per composable pair, and an
/// antilinear involution matrix per arrow acting by a -> J_g conj(a).
struct FellBundle {
    GroupoidPtr g;
    std::vector<int> dims;                  // per arrow
    std::vector<std::pair<int, int>> pairs; // composable pairs, canonical order
    std::vector<std::vector<int>> pair_pos; // [g][h] -> index into pairs
    std::vector<Tensor3> mult;              // aligned with pairs
    std::vector<CMatrix> invol;             // per arrow, shape d_{g^-1} x d_g

    int dim(int arrow) const { return dims[arrow]; }
    const Tensor3& mult_tensor(int a, int b) const;
    std::vector<cplx> multiply(int a, int b, const std::vector<cplx>& va,
                               const std::vector<cplx>& vb) const;
    std::vector<cplx> star(int arrow, const std::vector<cplx>& v) const; // J_g conj(v)

    /// shape coherence; throws invalid_input on structural defects
    void finalize();
};

using FellBundlePtr = std::shared_ptr<const FellBundle>;

inline FellBundlePtr share(FellBundle b) {
    return std::make_shared<const FellBundle>(std::move(b));
}

/// Bundle skeleton with all-zero tensors (callers fill mult/invol).
FellBundle bundle_skeleton(const GroupoidPtr& g, std::vector<int> dims);

/// exp(2 pi i k / n), with conj(root(k)) == root(n - k) bit-for-bit.
cplx root_of_unity(int k, int n);

struct AxiomCheck {
    std::string axiom;
    double deviation = 0.0;
    double threshold = 0.0;
    std::string witness;
    bool pass = true;
};

struct BundleValidation {
    std::vector<AxiomCheck> axioms;
    bool ok() const;
    double worst() const;
    std::string first_failure() const;
};

/// Exhaustive check of associativity, involution axioms and C*-ability of the
/// unit fibers; reports the worst deviation per axiom with a witness.
BundleValidation validate_bundle(const FellBundle& b, const NumericPolicy& pol = {});

/// Fell line bundle of a 2-cocycle: one-dimensional fibers, multiplication by
/// sigma(g,h), involution J_g = conj(sigma(g, g^-1)). Throws invalid_input if
/// sigma does not validate.
FellBundle line_bundle(const TCocycle& sigma);

/// Unit-fiber C*-algebra data for action bundles.
struct UnitFiberAlgebra {
    int dim = 0;
    Tensor3 mult;  // d x d x d
    CMatrix invol; // d x d
};

/// Fell bundle of a group action: every fiber a copy of A,
/// a *_(gamma,delta) b = a alpha_gamma(b), a*_gamma = alpha_{gamma^-1}(a*).
/// alpha[arrow] must be *-automorphisms forming an action; otherwise throws
/// invalid_input naming the failed identity.
FellBundle action_bundle(const GroupoidPtr& group, const UnitFiberAlgebra& fiber,
                         const std::vector<CMatrix>& alpha, const NumericPolicy& pol = {});

/// Input fails the unit-fiber positivity requirements.
class bundle_not_cstar : public invalid_input {
public:
    explicit bundle_not_cstar(const std::string& what) : invalid_input(what) {}
};

/// Left-regular GNS data of one unit fiber: matrices of left multiplication by
/// each basis element in an orthonormal basis of the trace form.
struct GnsRep {
    CMatrix gram;            // trace-form Gram on A_x
    std::vector<CMatrix> rho; // per basis element, *-representation
    CMatrix to_ortho;        // orthonormalizing basis B, B^* gram B = I
    CMatrix from_ortho;      // B^{-1}
    std::vector<cplx> trace; // tau(e_k) = tr(L_{e_k})
};

GnsRep gns_unit_rep(const FellBundle& b, int unit, const NumericPolicy& pol = {});

/// Per-unit GNS data, computed once per bundle.
struct GnsTable {
    std::vector<GnsRep> units;
};

GnsTable make_gns_table(const FellBundle& b, const NumericPolicy& pol = {});

/// ||a|| = sqrt(||rho_{s(g)}(a* a)||)
double fiber_norm(const FellBundle& b, const GnsTable& t, int arrow, const std::vector<cplx>& a);
double fiber_norm(const FellBundle& b, int arrow, const std::vector<cplx>& a,
                  const NumericPolicy& pol = {});

/// Same fibers and involution over the opposite groupoid, reversed products.
FellBundle opposite_bundle_over_op(const FellBundle& b);

/// The opposite bundle pulled back to G: fibers A_{g^-1},
/// mult^oo(g,h)(a,b) = mult(h^-1,g^-1)(b,a), invol^oo(g) = invol(g^-1).
FellBundle oo_bundle(const FellBundle& b);

/// Entrywise-conjugated tensors, same dims.
FellBundle conjugate_bundle(const FellBundle& b);

/// Certifies that a -> conj(a*) is a fiberwise linear bijective,
/// multiplicative, involution-preserving isometry from oo_bundle(b) onto
/// conjugate_bundle(b).
BundleValidation oo_conj_iso_check(const FellBundle& b, const NumericPolicy& pol = {});

} // namespace opalg
