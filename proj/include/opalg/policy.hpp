#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace opalg {

using cplx = std::complex<double>;

/// Input that violates a structural precondition (malformed file, mismatched
/// objects, non-group table, ...). CLI maps this to exit code 2.
class invalid_input : public std::runtime_error {
public:
    explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

/// Internal state that should be unreachable for validated inputs (Gram kernel
/// not invariant, non-closed generator span, ...). CLI maps this to exit code 3.
class inconsistency : public std::runtime_error {
public:
    explicit inconsistency(const std::string& what) : std::runtime_error(what) {}
};

/// One record holding every tolerance, the sample count and the master seed.
/// All equality checks in the library take their thresholds from here.
struct NumericPolicy {
    double exact_tol = 1e-12;        // exact scalar identities (finite sums of products)
    double exact_tol_bundle = 1e-11; // exact identities on bundle sections
    double norm_tol = 1e-9;          // norm equalities, relative
    double gap_tol = 1e-8;           // spectral gap threshold for block splitting
    double herm_tol = 1e-10;         // Hermiticity tolerance
    double kernel_tol = 1e-9;        // Gram-kernel invariance tolerance
    std::uint64_t seed = 0;
    int samples = 30;
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Self-contained deterministic generator; identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// uniform in [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t next_below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

    /// standard normal via Box-Muller
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    cplx cnormal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

    /// independent child stream, decorrelated from this one
    Rng fork(std::uint64_t tag) {
        std::uint64_t s = next_u64() ^ (tag * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
        return Rng(s);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Worker cap for parallel helpers: OPALG_NUM_THREADS, 0 or unset = hardware.
int worker_count();

/// Runs fn(i) for i in [0,n). Results must be written to per-index slots; the
/// caller reduces in index order, so output is independent of scheduling.
void parallel_for(int n, const std::function<void(int)>& fn);

} // namespace opalg
