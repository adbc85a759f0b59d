#pragma once

#include "opalg/fell_bundle.hpp"

namespace opalg {

/// Element of the section *-algebra of a Fell bundle: one fiber vector per arrow.
struct Section {
    FellBundlePtr bundle;
    std::vector<std::vector<cplx>> values; // values[arrow] has length dims[arrow]

    Section() = default;
    explicit Section(FellBundlePtr b);
};

Section delta_section(const FellBundlePtr& b, int arrow, const std::vector<cplx>& value);

/// (xi * eta)(g) = sum over h in G^{r(g)} of xi(h) . eta(h^-1 g) w(h)
Section s_convolve(const Section& xi, const Section& eta, const HaarSystem& haar);

/// xi*(g) = invol(g^-1) conj(xi(g^-1))
Section s_involution(const Section& xi);

/// Localization data of the regular representations: per unit x, the space
/// (direct sum of A_h over h in G_x) tensor A_x with the GNS-trace semi-inner
/// product, its Gram matrix and whitening transforms.
struct SectionSpace {
    FellBundlePtr bundle;
    HaarSystem haar;
    GnsTable gns;
    struct Unit {
        std::vector<int> fiber;  // arrows of G_x, canonical order
        std::vector<int> offset; // running offsets into the fiber-sum index
        int fiber_total = 0;     // sum of fiber dimensions over G_x
        int dx = 0;              // dim A_x
        CMatrix gram;            // (fiber_total*dx)^2 positive semidefinite
        CMatrix white;           // r x D, maps to orthonormal coordinates
        CMatrix unwhite;         // D x r
        CMatrix kernel;          // D x k basis of ker(gram)
    };
    std::vector<Unit> units;
};

SectionSpace make_section_space(const FellBundlePtr& b, const HaarSystem& haar,
                                const NumericPolicy& pol = {});

struct LocalizedRep {
    CMatrix action;
    CMatrix gram;
};

/// Matrix of pi_x(xi) tensor id on the localized space, with its Gram.
LocalizedRep s_regular_rep(const Section& xi, const SectionSpace& space, int unit);
LocalizedRep s_regular_rep(const Section& xi, const HaarSystem& haar, int unit,
                           const NumericPolicy& pol = {});

/// sup over units of the fiberwise integrals of ||xi|| and ||xi*||
double s_i_norm(const Section& xi, const SectionSpace& space);
double s_i_norm(const Section& xi, const HaarSystem& haar, const NumericPolicy& pol = {});

/// max over units of the localized operator norm of pi_x(xi). Throws
/// inconsistency if a Gram kernel fails to be invariant.
double s_reduced_norm(const Section& xi, const SectionSpace& space, const NumericPolicy& pol = {});
double s_reduced_norm(const Section& xi, const HaarSystem& haar, const NumericPolicy& pol = {});

/// xi^oo(g) = xi(g^-1), a section of oo_bundle(.); `target` must be that bundle.
Section oo_map(const Section& xi, const FellBundlePtr& target);

/// conj(xi*), a section of conjugate_bundle(.); `target` must be that bundle.
Section conj_section_map(const Section& xi, const FellBundlePtr& target);

} // namespace opalg
