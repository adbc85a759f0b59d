#pragma once

#include "opalg/groupoid.hpp"
#include "opalg/linalg.hpp"

namespace opalg {

/// Element of the convolution *-algebra of (G, lambda): one complex value per arrow.
struct GroupoidFunction {
    GroupoidPtr g;
    std::vector<cplx> values;

    GroupoidFunction() = default;
    explicit GroupoidFunction(GroupoidPtr gp)
        : g(std::move(gp)), values(g->num_arrows(), cplx{}) {}
};

GroupoidFunction delta(const GroupoidPtr& g, int arrow, cplx coefficient = 1.0);

/// (f1 * f2)(g) = sum over h in G^{r(g)} of f1(h) f2(h^-1 g) w(h)
GroupoidFunction convolve(const GroupoidFunction& f1, const GroupoidFunction& f2,
                          const HaarSystem& haar);

/// f*(g) = conj(f(g^-1))
GroupoidFunction involution(const GroupoidFunction& f);

/// lambda(f)(x) = sum over g in G^x of f(g) w(g), one value per unit
std::vector<cplx> lambda_map(const GroupoidFunction& f, const HaarSystem& haar);

/// max of ||lambda(|f|)||_inf and ||lambda(|f*|)||_inf
double i_norm(const GroupoidFunction& f, const HaarSystem& haar);

/// Matrix of pi_x(f) on l^2(G_x, lambda_x) in the orthonormal basis
/// e_g / sqrt(w(g^-1)), g in G_x (ordered as source_fiber[x]).
CMatrix regular_rep(const GroupoidFunction& f, const HaarSystem& haar, int unit);

/// sup over units of ||pi_x(f)||
double reduced_norm(const GroupoidFunction& f, const HaarSystem& haar);

struct TaggedNorm {
    double value;
    std::string note;
};

/// Universal norm. Equal to the reduced norm here: the algebra is finite
/// dimensional and the direct sum of the regular representations is faithful,
/// hence isometric for every C*-norm bounded by the I-norm. The returned note
/// records that identification.
TaggedNorm full_norm(const GroupoidFunction& f, const HaarSystem& haar);

/// f^op(g) = f(g^-1); linear, reverses convolution products
GroupoidFunction op_map(const GroupoidFunction& f);

/// pointwise conjugate; multiplicative into the conjugate algebra
GroupoidFunction conj_map(const GroupoidFunction& f);

} // namespace opalg
